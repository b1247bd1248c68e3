#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hmhd/ledger.hpp"
#include "hmhd/nonlinear.hpp"

namespace hmhd {

namespace {

// Pointwise |grad^order f| over the listed components (0-based), summed over ordered multi-indices.
std::vector<double> magnitude(const VectorField& f, std::initializer_list<int> comps, int order, const Quadrature& q)
{
    std::vector<double> acc(q.size(), 0.0);
    const int dim = f.grid().dim;
    auto factorial = [](int n) { return n < 2 ? 1.0 : n == 2 ? 2.0 : 6.0; };
    for (int a0 = 0; a0 <= order; ++a0)
        for (int a1 = 0; a0 + a1 <= order; ++a1) {
            const int a2 = order - a0 - a1;
            if (dim == 2 && a2 > 0) continue;
            const double mult = factorial(order) / (factorial(a0) * factorial(a1) * factorial(a2));
            for (int c : comps) {
                if (f[c].is_zero()) continue;
                auto v = to_physical(derivative(f[c], Mode{a0, a1, a2}), q);
                for (std::size_t i = 0; i < v.size(); ++i) acc[i] += mult * v[i] * v[i];
            }
        }
    for (auto& x : acc) x = std::sqrt(x);
    return acc;
}

Quadrature bound_quadrature(const VectorField& b)
{
    return quadrature_for(b.grid(), 4 * std::max(b.effective_band(), 1) + 1);
}

double mean_times_volume(const std::vector<double>& v, const Quadrature& q, const Grid& g)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s * g.volume() / double(q.size());
}

}

double bound_functional_25d(const VectorField& b)
{
    if (b.grid().dim != 2) throw std::invalid_argument("bound_functional_25d: requires a 2-D grid");
    const Quadrature q = bound_quadrature(b);
    auto g1h = magnitude(b, {0, 1}, 1, q);
    auto g2h = magnitude(b, {0, 1}, 2, q);
    auto g3h = magnitude(b, {0, 1}, 3, q);
    auto g2v = magnitude(b, {2}, 2, q);
    std::vector<double> w(q.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = (g1h[i] * g3h[i] + g2h[i] * g2h[i]) * g2v[i];
    return mean_times_volume(w, q, b.grid());
}

double bound_functional_3d(const VectorField& b, Bound3d variant)
{
    if (b.grid().dim != 3) throw std::invalid_argument("bound_functional_3d: requires a 3-D grid");
    const Quadrature q = bound_quadrature(b);
    auto g1 = magnitude(b, {0, 1, 2}, 1, q);
    auto g2h = magnitude(b, {0, 1}, 2, q);
    auto g2v = magnitude(b, {2}, 2, q);
    std::vector<double> w(q.size());
    if (variant == Bound3d::general) {
        auto g2 = magnitude(b, {0, 1, 2}, 2, q);
        auto g3 = magnitude(b, {0, 1, 2}, 3, q);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = g2h[i] * (g1[i] * g3[i] + g2v[i] * g2[i]);
    } else {
        auto g1h = magnitude(b, {0, 1}, 1, q);
        auto g3h = magnitude(b, {0, 1}, 3, q);
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = g1[i] * g2h[i] * g3h[i] + g2v[i] * (g2h[i] * g2h[i] + g1h[i] * g3h[i]);
    }
    return mean_times_volume(w, q, b.grid());
}

H1Pairing pairing_h1(const VectorField& b)
{
    const int band = b.effective_band();
    Grid lg = lifted_grid(b.grid(), 2 * band);
    VectorField bl = resample(b, lg);
    VectorField j = current_density(bl);
    VectorField jxb = cross_product_truncated(j, bl);
    H1Pairing r;
    r.pairing = inner_product(curl(jxb), laplacian(bl));
    r.scale = l2_norm(jxb) * l2_norm(laplacian(j));
    const Quadrature q = bound_quadrature(b);
    auto g1 = magnitude(b, {0, 1, 2}, 1, q);
    auto g1h = magnitude(b, {0, 1}, 1, q);
    auto g2h = magnitude(b, {0, 1}, 2, q);
    std::vector<double> w(q.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = g1[i] * g1h[i] * g2h[i];
    r.bound = mean_times_volume(w, q, b.grid());
    return r;
}

const char* ratio_setting_name(RatioSetting s)
{
    switch (s) {
    case RatioSetting::h2_25d: return "h2_25d";
    case RatioSetting::h2_3d_general: return "h2_3d_general";
    case RatioSetting::h2_3d_solenoidal: return "h2_3d_solenoidal";
    case RatioSetting::h1_25d: return "h1_25d";
    case RatioSetting::h1_3d: return "h1_3d";
    }
    return "?";
}

RatioStudy ratio_study(RatioSetting s, const Grid& g, int band, int samples, std::uint64_t first_seed)
{
    const bool wants_3d = s == RatioSetting::h2_3d_general || s == RatioSetting::h2_3d_solenoidal ||
                          s == RatioSetting::h1_3d;
    if ((g.dim == 3) != wants_3d) throw std::invalid_argument("ratio_study: grid dimension does not match setting");
    RatioStudy r;
    r.name = ratio_setting_name(s);
    r.samples = samples;
    std::vector<double> ratios;
    for (int i = 0; i < samples; ++i) {
        VectorField b = random_divfree(g, first_seed + std::uint64_t(i), band);
        double num = 0.0, den = 0.0;
        switch (s) {
        case RatioSetting::h2_25d:
            num = pairing_h2(b);
            den = bound_functional_25d(b);
            break;
        case RatioSetting::h2_3d_general:
            num = pairing_h2(b);
            den = bound_functional_3d(b, Bound3d::general);
            break;
        case RatioSetting::h2_3d_solenoidal:
            num = pairing_h2(b);
            den = bound_functional_3d(b, Bound3d::solenoidal);
            break;
        case RatioSetting::h1_25d:
        case RatioSetting::h1_3d: {
            H1Pairing p = pairing_h1(b);
            num = p.pairing;
            den = p.bound;
            break;
        }
        }
        const double ratio = std::abs(num) / den;
        if (!std::isfinite(ratio)) r.finite = false;
        ratios.push_back(ratio);
    }
    if (!ratios.empty()) {
        r.max = *std::max_element(ratios.begin(), ratios.end());
        std::sort(ratios.begin(), ratios.end());
        const std::size_t n = ratios.size();
        r.median = n % 2 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
    }
    return r;
}

}
