#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace rogers {

enum class Orientation { minus_i, plus_i };

struct Atom {
    double s = 0;
    double w = 0;
};

// a xi^2 - i b xi + c + Stieltjes part of the atomic measure sum_j w_j delta_{s_j}
struct LevyAtomic {
    double a = 0;
    double b = 0;
    double c = 0;
    std::vector<Atom> atoms;
};

// w (-+ i xi + m)^alpha; minus_i means (-i xi + m)
struct StableTerm {
    double w = 0;
    double m = 0;
    double alpha = 1;
    Orientation orientation = Orientation::minus_i;
};

struct StableSum {
    std::vector<StableTerm> terms;
};

struct RationalFactor {
    Orientation orientation = Orientation::minus_i;
    double m = 0;
    int exponent = 1;
};

struct RationalProduct {
    double prefactor = 1;
    std::vector<RationalFactor> factors;
};

enum class Interpolation { piecewise_constant, piecewise_linear };

// piecewise_constant: values.size() == breakpoints.size() - 1, one per cell.
// piecewise_linear: values.size() == breakpoints.size(), one per node.
// Outside [breakpoints.front(), breakpoints.back()] the boundary value holds.
struct PhiTable {
    std::vector<double> breakpoints;
    std::vector<double> values;
    Interpolation interpolation = Interpolation::piecewise_linear;

    double operator()(double s) const;
    // one-sided limits at s
    double left(double s) const;
    double right(double s) const;
};

struct PhiRep {
    double c = 1;
    PhiTable phi;
};

using RogersSpec = std::variant<LevyAtomic, StableSum, RationalProduct, PhiRep>;

std::string type_name(const RogersSpec& spec);

// Structural parsing; field paths such as "atoms[0].w" are reported on error.
RogersSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const RogersSpec& spec);
RogersSpec load_spec(const std::string& path);

}  // namespace rogers
