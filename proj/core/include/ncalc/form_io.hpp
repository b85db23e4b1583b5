#pragma once

#include "ncalc/form.hpp"
#include "ncalc/ode.hpp"

#include <string>

namespace ncalc {

/// Deterministic JSON for a form: {"order": m, "words": [{"prefactor":
/// "num/den", "slots": ["H1","X",...], "constants": [[coords],...]}]}.
/// Words whose segments are not plain constants carry "segments" with
/// expression strings instead of "constants".
std::string form_to_json(const MultilinearForm<Rational>& form, int indent = 2);

/// Differential spec document:
/// {"algebra": name-or-spec-object, "x0": [..], "y0": [..],
///  "words": [{"prefactor": "1", "slots": "HXX", "constants": [[..],..]}]}.
/// "x0"/"y0" default to zero, word "constants" default to units, and a
/// slot string "H" is read as the first direction.
DifferentialSpec load_differential_spec_json(const std::string& text);
DifferentialSpec load_differential_spec_file(const std::string& path);

std::string differential_spec_json(const DifferentialSpec& spec, int indent = 2);

} // namespace ncalc
