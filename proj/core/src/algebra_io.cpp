#include "ncalc/algebra_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ncalc {

using nlohmann::json;

namespace {

Rational parse_value(const json& v) {
    try {
        if (v.is_string()) return Rational::parse(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long long>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("algebra spec: ") + e.what());
    }
    throw ParseError("algebra spec: constant values must be rational strings or integers");
}

} // namespace

AlgebraPtr<Rational> load_algebra_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("algebra spec: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("algebra spec: top level must be an object");

    static const char* known[] = {"dim", "basis", "flags", "constants", "name", "generators"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw ParseError("algebra spec: unknown key '" + it.key() + "'");
    }
    if (!doc.contains("dim") || !doc["dim"].is_number_integer())
        throw ParseError("algebra spec: missing integer 'dim'");
    int dim = doc["dim"].get<int>();
    if (dim <= 0) throw ParseError("algebra spec: 'dim' must be positive");

    std::vector<std::string> basis;
    if (doc.contains("basis")) {
        for (const auto& b : doc["basis"]) basis.push_back(b.get<std::string>());
        if (static_cast<int>(basis.size()) != dim)
            throw ParseError("algebra spec: 'basis' length differs from 'dim'");
    } else {
        for (int i = 0; i < dim; ++i) basis.push_back("e" + std::to_string(i));
    }

    Algebra<Rational>::Flags flags;
    if (doc.contains("flags")) {
        const json& f = doc["flags"];
        flags.unital = f.value("unital", false);
        flags.associative = f.value("associative", false);
        flags.division = f.value("division", false);
        flags.multiplicative_norm = f.value("multiplicative_norm", false);
    }

    std::vector<Rational> cst(static_cast<std::size_t>(dim) * dim * dim, Rational(0));
    if (doc.contains("constants")) {
        for (const auto& e : doc["constants"]) {
            if (!e.is_object() || !e.contains("k") || !e.contains("l") || !e.contains("p") ||
                !e.contains("v"))
                throw ParseError("algebra spec: constants entries need k, l, p, v");
            int k = e["k"].get<int>(), l = e["l"].get<int>(), p = e["p"].get<int>();
            if (k < 0 || k >= dim || l < 0 || l >= dim || p < 0 || p >= dim)
                throw ParseError("algebra spec: constant index out of range");
            cst[(static_cast<std::size_t>(k) * dim + l) * dim + p] = parse_value(e["v"]);
        }
    }

    std::vector<Algebra<Rational>::Generator> gens;
    if (doc.contains("generators")) {
        for (const auto& g : doc["generators"]) {
            Algebra<Rational>::Generator gen;
            gen.name = g.at("name").get<std::string>();
            const json& m = g.at("matrix");
            if (static_cast<int>(m.size()) != dim)
                throw ParseError("algebra spec: generator matrix must be dim x dim");
            for (const auto& row : m) {
                if (static_cast<int>(row.size()) != dim)
                    throw ParseError("algebra spec: generator matrix must be dim x dim");
                for (const auto& v : row) gen.matrix.push_back(parse_value(v));
            }
            gens.push_back(std::move(gen));
        }
    }

    std::string name = doc.value("name", std::string("custom"));
    return Algebra<Rational>::create(std::move(name), std::move(basis), std::move(cst), flags,
                                     std::move(gens));
}

AlgebraPtr<Rational> load_algebra_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open algebra spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_algebra_json(ss.str());
}

std::string algebra_spec_json(const Algebra<Rational>& alg, int indent) {
    json doc;
    doc["name"] = alg.name();
    doc["dim"] = alg.dim();
    doc["basis"] = alg.basis();
    doc["flags"] = {{"unital", alg.flags().unital},
                    {"associative", alg.flags().associative},
                    {"division", alg.flags().division},
                    {"multiplicative_norm", alg.flags().multiplicative_norm}};
    json cst = json::array();
    for (const auto& t : alg.nonzero_constants())
        cst.push_back({{"k", t.k}, {"l", t.l}, {"p", t.p}, {"v", t.v.to_string()}});
    doc["constants"] = std::move(cst);
    if (!alg.generators().empty()) {
        json gens = json::array();
        for (const auto& g : alg.generators()) {
            json m = json::array();
            for (int k = 0; k < alg.dim(); ++k) {
                json row = json::array();
                for (int mm = 0; mm < alg.dim(); ++mm)
                    row.push_back(g.matrix[k * alg.dim() + mm].to_string());
                m.push_back(std::move(row));
            }
            gens.push_back({{"name", g.name}, {"matrix", std::move(m)}});
        }
        doc["generators"] = std::move(gens);
    }
    return doc.dump(indent);
}

AlgebraPtr<Rational> resolve_algebra(const std::string& builtin_name, const std::string& path) {
    if (!path.empty()) return load_algebra_file(path);
    if (builtin_name.empty()) throw ParseError("no algebra given (use a builtin name or a spec file)");
    return builtin_algebra<Rational>(builtin_name);
}

} // namespace ncalc
