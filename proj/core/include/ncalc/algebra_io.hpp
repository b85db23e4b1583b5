#pragma once

#include "ncalc/algebra.hpp"

#include <string>

namespace ncalc {

/// Load an algebra from its JSON spec document.
///
/// Schema: {"dim": int, "basis": [string], "flags": {"unital": bool,
/// "associative": bool, "division": bool, "multiplicative_norm": bool},
/// "constants": [{"k": int, "l": int, "p": int, "v": "num/den"}]}.
/// Entries absent from "constants" are zero. Values are parsed bit-exactly
/// ("3/2", "-1"). Optional keys: "name", "generators" (list of
/// {"name": string, "matrix": [["num/den", ...], ...]}).
AlgebraPtr<Rational> load_algebra_json(const std::string& text);

AlgebraPtr<Rational> load_algebra_file(const std::string& path);

/// Emit the spec document for an algebra; feeding the result back into
/// load_algebra_json reproduces an identical algebra, generators included.
std::string algebra_spec_json(const Algebra<Rational>& alg, int indent = 2);

/// Resolve "-a"/"--spec" style algebra sources: a builtin name, or a path
/// to a JSON spec document when `path` is nonempty.
AlgebraPtr<Rational> resolve_algebra(const std::string& builtin_name, const std::string& path);

} // namespace ncalc
