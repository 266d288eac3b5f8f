#include "rogers/spec.hpp"

#include "rogers/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rogers {

namespace {

size_t cell_index(const std::vector<double>& bp, double s) {
    // index k with bp[k] <= s < bp[k+1], clamped to valid cells
    auto it = std::upper_bound(bp.begin(), bp.end(), s);
    size_t k = it == bp.begin() ? 0 : static_cast<size_t>(it - bp.begin()) - 1;
    return std::min(k, bp.size() - 2);
}

}  // namespace

double PhiTable::operator()(double s) const {
    const auto& bp = breakpoints;
    if (interpolation == Interpolation::piecewise_constant) {
        if (s <= bp.front()) return values.front();
        if (s >= bp.back()) return values.back();
        return values[cell_index(bp, s)];
    }
    if (s <= bp.front()) return values.front();
    if (s >= bp.back()) return values.back();
    size_t k = cell_index(bp, s);
    double t = (s - bp[k]) / (bp[k + 1] - bp[k]);
    return values[k] + t * (values[k + 1] - values[k]);
}

double PhiTable::left(double s) const {
    if (interpolation == Interpolation::piecewise_linear) return (*this)(s);
    const auto& bp = breakpoints;
    if (s <= bp.front()) return values.front();
    if (s > bp.back()) return values.back();
    auto it = std::lower_bound(bp.begin(), bp.end(), s);
    size_t k = static_cast<size_t>(it - bp.begin()) - 1;
    return values[std::min(k, values.size() - 1)];
}

double PhiTable::right(double s) const { return (*this)(s); }

std::string type_name(const RogersSpec& spec) {
    switch (spec.index()) {
        case 0: return "levy_atomic";
        case 1: return "stable_sum";
        case 2: return "rational_product";
        default: return "phi_table";
    }
}

namespace {

using nlohmann::json;

double num(const json& j, const char* key, const std::string& path, bool required = true,
           double dflt = 0) {
    std::string field = path.empty() ? key : path + "." + key;
    if (!j.contains(key)) {
        if (required) throw ValidationError("missing field", field);
        return dflt;
    }
    const json& v = j.at(key);
    if (!v.is_number()) throw ValidationError("expected a number", field);
    double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError("non-finite number", field);
    return x;
}

Orientation orient(const json& j, const std::string& path) {
    std::string field = path + ".orientation";
    if (!j.contains("orientation") || !j.at("orientation").is_string())
        throw ValidationError("missing orientation", field);
    std::string o = j.at("orientation").get<std::string>();
    if (o == "minus-i") return Orientation::minus_i;
    if (o == "plus-i") return Orientation::plus_i;
    throw ValidationError("orientation must be minus-i or plus-i", field);
}

const json& array_field(const json& j, const char* key, const std::string& path) {
    std::string field = path.empty() ? key : path + "." + key;
    if (!j.contains(key) || !j.at(key).is_array()) throw ValidationError("expected an array", field);
    return j.at(key);
}

std::string orient_str(Orientation o) { return o == Orientation::minus_i ? "minus-i" : "plus-i"; }

}  // namespace

RogersSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("spec must be a JSON object", "");
    if (!j.contains("type") || !j.at("type").is_string())
        throw ValidationError("missing spec type", "type");
    std::string t = j.at("type").get<std::string>();
    if (t == "levy_atomic") {
        LevyAtomic s;
        s.a = num(j, "a", "", false);
        s.b = num(j, "b", "", false);
        s.c = num(j, "c", "", false);
        if (j.contains("atoms")) {
            const json& arr = array_field(j, "atoms", "");
            for (size_t i = 0; i < arr.size(); ++i) {
                std::string p = "atoms[" + std::to_string(i) + "]";
                s.atoms.push_back({num(arr[i], "s", p), num(arr[i], "w", p)});
            }
        }
        return s;
    }
    if (t == "stable_sum") {
        StableSum s;
        const json& arr = array_field(j, "terms", "");
        for (size_t i = 0; i < arr.size(); ++i) {
            std::string p = "terms[" + std::to_string(i) + "]";
            s.terms.push_back({num(arr[i], "w", p), num(arr[i], "m", p, false),
                               num(arr[i], "alpha", p), orient(arr[i], p)});
        }
        return s;
    }
    if (t == "rational_product") {
        RationalProduct s;
        s.prefactor = num(j, "prefactor", "", false, 1.0);
        const json& arr = array_field(j, "factors", "");
        for (size_t i = 0; i < arr.size(); ++i) {
            std::string p = "factors[" + std::to_string(i) + "]";
            double e = num(arr[i], "exponent", p);
            if (e != 1.0 && e != -1.0)
                throw ValidationError("exponent must be +1 or -1", p + ".exponent");
            s.factors.push_back({orient(arr[i], p), num(arr[i], "m", p, false),
                                 static_cast<int>(e)});
        }
        return s;
    }
    if (t == "phi_table") {
        PhiRep s;
        s.c = num(j, "c", "");
        if (!j.contains("phi") || !j.at("phi").is_object())
            throw ValidationError("missing phi table", "phi");
        const json& ph = j.at("phi");
        for (const char* key : {"breakpoints", "values"}) {
            const json& arr = array_field(ph, key, "phi");
            auto& dst = std::string(key) == "breakpoints" ? s.phi.breakpoints : s.phi.values;
            for (size_t i = 0; i < arr.size(); ++i) {
                std::string f = std::string("phi.") + key + "[" + std::to_string(i) + "]";
                if (!arr[i].is_number()) throw ValidationError("expected a number", f);
                dst.push_back(arr[i].get<double>());
            }
        }
        std::string interp = ph.value("interpolation", std::string("piecewise-linear"));
        if (interp == "piecewise-linear")
            s.phi.interpolation = Interpolation::piecewise_linear;
        else if (interp == "piecewise-constant")
            s.phi.interpolation = Interpolation::piecewise_constant;
        else
            throw ValidationError("unknown interpolation", "phi.interpolation");
        return s;
    }
    throw ValidationError("unknown spec type '" + t + "'", "type");
}

json spec_to_json(const RogersSpec& spec) {
    json j;
    j["type"] = type_name(spec);
    if (auto* s = std::get_if<LevyAtomic>(&spec)) {
        j["a"] = s->a;
        j["b"] = s->b;
        j["c"] = s->c;
        j["atoms"] = json::array();
        for (const auto& at : s->atoms) j["atoms"].push_back({{"s", at.s}, {"w", at.w}});
    } else if (auto* s = std::get_if<StableSum>(&spec)) {
        j["terms"] = json::array();
        for (const auto& t : s->terms)
            j["terms"].push_back({{"w", t.w},
                                  {"m", t.m},
                                  {"alpha", t.alpha},
                                  {"orientation", orient_str(t.orientation)}});
    } else if (auto* s = std::get_if<RationalProduct>(&spec)) {
        j["prefactor"] = s->prefactor;
        j["factors"] = json::array();
        for (const auto& f : s->factors)
            j["factors"].push_back({{"orientation", orient_str(f.orientation)},
                                    {"m", f.m},
                                    {"exponent", f.exponent}});
    } else {
        const auto& p = std::get<PhiRep>(spec);
        j["c"] = p.c;
        j["phi"] = {{"breakpoints", p.phi.breakpoints},
                    {"values", p.phi.values},
                    {"interpolation", p.phi.interpolation == Interpolation::piecewise_linear
                                          ? "piecewise-linear"
                                          : "piecewise-constant"}};
    }
    return j;
}

RogersSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot read spec file '" + path + "'", "spec_path");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what(), "");
    }
    return spec_from_json(j);
}

}  // namespace rogers
