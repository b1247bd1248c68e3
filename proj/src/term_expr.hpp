#pragma once

#include <array>
#include <initializer_list>
#include <map>
#include <tuple>
#include <vector>

#include "hmhd/fields.hpp"

namespace hmhd::detail {

// Derivative slots: 1..3 are fixed axes, kSum and lSum are the summed indices k and l.
inline constexpr int kSum = -1;
inline constexpr int lSum = -2;

enum class Src { b, j };

struct Factor {
    Src src = Src::b;
    int comp = 1;
    std::vector<int> d;
};

struct Monomial {
    double coef = 1.0;
    std::array<Factor, 3> f;
};

using Expr = std::vector<Monomial>;

inline Factor B(int comp, std::initializer_list<int> d = {}) { return {Src::b, comp, d}; }
inline Factor J(int comp, std::initializer_list<int> d = {}) { return {Src::j, comp, d}; }

// Linear combination of factors, e.g. -d1 b1 - d2 b2.
using Lin = std::vector<std::pair<double, Factor>>;

inline Lin lin(const Factor& f) { return {{1.0, f}}; }
Lin d(const Lin& x, std::initializer_list<int> axes);
// -d1 b1 - d2 b2, the solenoidal substitute for d3 b3.
Lin d3b3_solenoidal();
Expr expand(double coef, const Lin& a, const Lin& b, const Lin& c);
// coef * d_axis(a b) * c, expanded by the product rule.
Expr expand_d_product(double coef, int axis, const Lin& a, const Lin& b, const Lin& c);
Expr operator+(Expr a, const Expr& b);

struct Evaluation {
    double value = 0.0;
    double scale = 0.0;
};

// Exact trilinear quadrature of derivative monomials of b and j = curl b.
class Evaluator {
public:
    explicit Evaluator(const VectorField& b);

    Evaluation eval(const Expr& e);
    // 2 sum_{k,l} int (d_k j x d_k b) . d_l^2 j, assembled with pointwise cross products.
    Evaluation cross_form_first();
    // sum_{k,l} int (j x d_k^2 b) . d_l^2 j.
    Evaluation cross_form_second();

    const Grid& grid() const { return b_.grid(); }

private:
    // nullptr when the factor vanishes identically.
    const std::vector<double>* samples(Src src, int comp, const Mode& orders);
    const std::vector<double>* samples(const Factor& f, int k, int l);
    double integrate(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c) const;
    Evaluation cross_form(double coef, bool first);

    VectorField b_;
    VectorField j_;
    Quadrature q_;
    std::map<std::tuple<int, int, int, int, int>, std::vector<double>> cache_;
};

}
