#include "term_expr.hpp"

#include <algorithm>
#include <cmath>

namespace hmhd::detail {

Lin d(const Lin& x, std::initializer_list<int> axes)
{
    Lin r = x;
    for (auto& [c, f] : r) f.d.insert(f.d.end(), axes.begin(), axes.end());
    return r;
}

Lin d3b3_solenoidal() { return {{-1.0, B(1, {1})}, {-1.0, B(2, {2})}}; }

Expr expand(double coef, const Lin& a, const Lin& b, const Lin& c)
{
    Expr e;
    for (const auto& [ca, fa] : a)
        for (const auto& [cb, fb] : b)
            for (const auto& [cc, fc] : c) e.push_back({coef * ca * cb * cc, {fa, fb, fc}});
    return e;
}

Expr expand_d_product(double coef, int axis, const Lin& a, const Lin& b, const Lin& c)
{
    return expand(coef, d(a, {axis}), b, c) + expand(coef, a, d(b, {axis}), c);
}

Expr operator+(Expr a, const Expr& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Evaluator::Evaluator(const VectorField& b) : b_(b), j_(current_density(b))
{
    const int band = b.effective_band();
    q_ = quadrature_for(b.grid(), product_points(3 * band, 0, band));
}

const std::vector<double>* Evaluator::samples(Src src, int comp, const Mode& orders)
{
    const Grid& g = grid();
    for (int a = g.dim; a < 3; ++a)
        if (orders[a] > 0) return nullptr;
    const SpectralScalar& base = src == Src::b ? b_[comp - 1] : j_[comp - 1];
    if (base.is_zero()) return nullptr;
    auto key = std::make_tuple(int(src), comp, orders[0], orders[1], orders[2]);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, to_physical(derivative(base, orders), q_)).first;
    return &it->second;
}

const std::vector<double>* Evaluator::samples(const Factor& f, int k, int l)
{
    Mode orders{0, 0, 0};
    for (int s : f.d) {
        int axis = s == kSum ? k : (s == lSum ? l : s);
        ++orders[axis - 1];
    }
    return samples(f.src, f.comp, orders);
}

double Evaluator::integrate(const std::vector<double>& a, const std::vector<double>& b,
                            const std::vector<double>& c) const
{
    double s = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) s += a[p] * b[p] * c[p];
    return grid().volume() * s / double(q_.size());
}

Evaluation Evaluator::eval(const Expr& e)
{
    Evaluation r;
    for (const auto& m : e) {
        bool uses_k = false, uses_l = false;
        for (const auto& f : m.f)
            for (int s : f.d) {
                uses_k = uses_k || s == kSum;
                uses_l = uses_l || s == lSum;
            }
        // Sums run over k, l = 1..3; on a 2-D grid the terms with d3 vanish.
        const int kmax = uses_k ? 3 : 1, lmax = uses_l ? 3 : 1;
        for (int k = 1; k <= kmax; ++k)
            for (int l = 1; l <= lmax; ++l) {
                const auto* a = samples(m.f[0], k, l);
                const auto* b = samples(m.f[1], k, l);
                const auto* c = samples(m.f[2], k, l);
                if (!a || !b || !c) continue;
                double v = m.coef * integrate(*a, *b, *c);
                r.value += v;
                r.scale = std::max(r.scale, std::abs(v));
            }
    }
    return r;
}

Evaluation Evaluator::cross_form(double coef, bool first)
{
    Evaluation r;
    std::vector<double> cross(q_.size());
    for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 3; ++l) {
            const Mode zero{0, 0, 0};
            Mode dk = zero, dkk = zero, dll = zero;
            dk[k - 1] = 1;
            dkk[k - 1] = 2;
            dll[l - 1] = 2;
            // first: (d_k j) x (d_k b); second: j x (d_k^2 b)
            std::array<const std::vector<double>*, 3> x{}, y{}, z{};
            for (int c = 1; c <= 3; ++c) {
                x[c - 1] = samples(Src::j, c, first ? dk : zero);
                y[c - 1] = samples(Src::b, c, first ? dk : dkk);
                z[c - 1] = samples(Src::j, c, dll);
            }
            auto at = [](const std::vector<double>* v, std::size_t p) { return v ? (*v)[p] : 0.0; };
            double s = 0.0;
            for (std::size_t p = 0; p < q_.size(); ++p) {
                double c1 = at(x[1], p) * at(y[2], p) - at(x[2], p) * at(y[1], p);
                double c2 = at(x[2], p) * at(y[0], p) - at(x[0], p) * at(y[2], p);
                double c3 = at(x[0], p) * at(y[1], p) - at(x[1], p) * at(y[0], p);
                s += c1 * at(z[0], p) + c2 * at(z[1], p) + c3 * at(z[2], p);
            }
            double v = coef * grid().volume() * s / double(q_.size());
            r.value += v;
            r.scale = std::max(r.scale, std::abs(v));
        }
    return r;
}

Evaluation Evaluator::cross_form_first() { return cross_form(2.0, true); }
Evaluation Evaluator::cross_form_second() { return cross_form(1.0, false); }

}
