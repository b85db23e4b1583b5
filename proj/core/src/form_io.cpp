#include "ncalc/form_io.hpp"

#include "ncalc/algebra_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ncalc {

using nlohmann::json;

namespace {

json element_coords_json(const Element<Rational>& e) {
    json out = json::array();
    for (int i = 0; i < e.dim(); ++i) out.push_back(e[i].to_string());
    return out;
}

Element<Rational> element_from_json(const AlgebraPtr<Rational>& alg, const json& coords) {
    if (!coords.is_array() || static_cast<int>(coords.size()) != alg->dim())
        throw ParseError("spec: coordinate vector must have one entry per basis vector");
    std::vector<Rational> c;
    for (const auto& v : coords) {
        if (v.is_string())
            c.push_back(Rational::parse(v.get<std::string>()));
        else if (v.is_number_integer())
            c.push_back(Rational(v.get<long long>()));
        else
            throw ParseError("spec: coordinates must be rational strings or integers");
    }
    return Element<Rational>(alg, std::move(c));
}

std::vector<Slot> parse_slots(const json& slots) {
    std::vector<Slot> out;
    auto parse_one = [&](const std::string& s, std::size_t& i) {
        char c = s[i++];
        if (c == 'X' || c == 'x') {
            out.push_back(Slot{0});
            return;
        }
        if (c != 'H' && c != 'h') throw ParseError("spec: slot entries are 'X' or 'H<k>'");
        int label = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') label = label * 10 + (s[i++] - '0');
        out.push_back(Slot{label == 0 ? 1 : label});
    };
    if (slots.is_string()) {
        std::string s = slots.get<std::string>();
        for (std::size_t i = 0; i < s.size();) parse_one(s, i);
    } else if (slots.is_array()) {
        for (const auto& item : slots) {
            std::string s = item.get<std::string>();
            std::size_t i = 0;
            parse_one(s, i);
            if (i != s.size()) throw ParseError("spec: malformed slot entry '" + s + "'");
        }
    } else {
        throw ParseError("spec: 'slots' must be a pattern string or a list");
    }
    return out;
}

} // namespace

std::string form_to_json(const MultilinearForm<Rational>& form, int indent) {
    json words = json::array();
    for (const auto& w : form.words) {
        json jw;
        jw["prefactor"] = w.prefactor.to_string();
        json slots = json::array();
        for (const auto& z : w.slots)
            slots.push_back(z.dir == 0 ? std::string("X") : "H" + std::to_string(z.dir));
        jw["slots"] = std::move(slots);
        bool all_const = true;
        for (const auto& seg : w.segs)
            all_const = all_const && seg->kind == Expr<Rational>::Kind::Const;
        if (all_const) {
            json consts = json::array();
            for (const auto& seg : w.segs) consts.push_back(element_coords_json(*seg->value));
            jw["constants"] = std::move(consts);
        } else {
            json segs = json::array();
            for (const auto& seg : w.segs) segs.push_back(expr_to_string(seg));
            jw["segments"] = std::move(segs);
        }
        words.push_back(std::move(jw));
    }
    json doc;
    doc["order"] = form.order;
    doc["words"] = std::move(words);
    return doc.dump(indent);
}

DifferentialSpec load_differential_spec_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("differential spec: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("algebra") || !doc.contains("words"))
        throw ParseError("differential spec: need 'algebra' and 'words'");

    AlgebraPtr<Rational> alg;
    if (doc["algebra"].is_string())
        alg = builtin_algebra<Rational>(doc["algebra"].get<std::string>());
    else
        alg = load_algebra_json(doc["algebra"].dump());

    DifferentialSpec spec;
    spec.alg = alg;
    spec.rhs.alg = alg;
    spec.rhs.order = 1;
    for (const auto& jw : doc["words"]) {
        FormWord<Rational> w;
        w.prefactor = jw.contains("prefactor")
                          ? (jw["prefactor"].is_string()
                                 ? Rational::parse(jw["prefactor"].get<std::string>())
                                 : Rational(jw["prefactor"].get<long long>()))
                          : Rational(1);
        w.slots = parse_slots(jw.at("slots"));
        if (jw.contains("constants")) {
            for (const auto& coords : jw["constants"])
                w.segs.push_back(expr_const(element_from_json(alg, coords)));
        } else {
            for (std::size_t i = 0; i <= w.slots.size(); ++i)
                w.segs.push_back(expr_const(Element<Rational>::unit(alg)));
        }
        if (w.segs.size() != w.slots.size() + 1)
            throw ParseError("differential spec: a word with n slots needs n+1 constants");
        spec.rhs.words.push_back(std::move(w));
    }
    spec.x0 = doc.contains("x0") ? element_from_json(alg, doc["x0"]) : Element<Rational>::zero(alg);
    spec.y0 = doc.contains("y0") ? element_from_json(alg, doc["y0"]) : Element<Rational>::zero(alg);
    return spec;
}

DifferentialSpec load_differential_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open differential spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_differential_spec_json(ss.str());
}

std::string differential_spec_json(const DifferentialSpec& spec, int indent) {
    json doc;
    doc["algebra"] = json::parse(algebra_spec_json(*spec.alg, 0));
    doc["x0"] = element_coords_json(spec.x0);
    doc["y0"] = element_coords_json(spec.y0);
    json words = json::parse(form_to_json(spec.rhs, 0));
    doc["words"] = words["words"];
    return doc.dump(indent);
}

} // namespace ncalc
