#include "hmhd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace hmhd {

namespace {

void require_same_grid(const SpectralScalar& a, const SpectralScalar& b, const char* what)
{
    if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

// Position of a mode with non-negative last-axis frequency in the r2c half spectrum.
std::size_t half_index(const Quadrature& q, const Mode& m)
{
    if (q.dim == 2) return std::size_t(lattice_index(m[0], q.m[0])) * (q.m[1] / 2 + 1) + m[1];
    return (std::size_t(lattice_index(m[0], q.m[0])) * q.m[1] + lattice_index(m[1], q.m[1])) *
               (q.m[2] / 2 + 1) +
           m[2];
}

// +1 if the first nonzero frequency scanning from the last axis is positive, -1 if negative, 0 for 0.
int orientation(const Mode& m, int dim)
{
    for (int a = dim - 1; a >= 0; --a) {
        if (m[a] > 0) return 1;
        if (m[a] < 0) return -1;
    }
    return 0;
}

}

SpectralScalar::SpectralScalar(const Grid& g) : grid_(g), c_(g.size(), cplx(0.0, 0.0))
{
    g.validate();
}

SpectralScalar::SpectralScalar(const Grid& g, std::vector<cplx> coeffs) : grid_(g), c_(std::move(coeffs))
{
    g.validate();
    if (c_.size() != g.size()) throw std::invalid_argument("SpectralScalar: coefficient count mismatch");
    for (int i0 = 0; i0 < g.n[0]; ++i0)
        for (int i1 = 0; i1 < g.n[1]; ++i1)
            for (int i2 = 0; i2 < g.n[2]; ++i2) {
                Mode m{signed_frequency(i0, g.n[0]), signed_frequency(i1, g.n[1]),
                       g.dim == 3 ? signed_frequency(i2, g.n[2]) : 0};
                cplx v = c_[g.index(i0, i1, i2)];
                bool inside = std::abs(m[0]) <= g.band_limit && std::abs(m[1]) <= g.band_limit &&
                              std::abs(m[2]) <= g.band_limit;
                if (!inside) {
                    if (v != cplx(0.0, 0.0))
                        throw std::invalid_argument("SpectralScalar: nonzero coefficient above band limit");
                    continue;
                }
                if (coeff({-m[0], -m[1], -m[2]}) != std::conj(v))
                    throw std::invalid_argument("SpectralScalar: coefficients are not Hermitian");
            }
}

cplx SpectralScalar::coeff(const Mode& m) const
{
    for (int a = 0; a < 3; ++a)
        if (std::abs(m[a]) > (a < grid_.dim ? grid_.band_limit : 0)) return {0.0, 0.0};
    return c_[grid_.index(lattice_index(m[0], grid_.n[0]), lattice_index(m[1], grid_.n[1]),
                          lattice_index(m[2], grid_.n[2]))];
}

void SpectralScalar::set_mode(const Mode& m, cplx value)
{
    for (int a = 0; a < 3; ++a)
        if (std::abs(m[a]) > (a < grid_.dim ? grid_.band_limit : 0))
            throw std::out_of_range("SpectralScalar::set_mode: mode outside band");
    auto at = [&](const Mode& k) -> cplx& {
        return c_[grid_.index(lattice_index(k[0], grid_.n[0]), lattice_index(k[1], grid_.n[1]),
                              lattice_index(k[2], grid_.n[2]))];
    };
    if (orientation(m, grid_.dim) == 0) {
        at(m) = {value.real(), 0.0};
        return;
    }
    at(m) = value;
    at({-m[0], -m[1], -m[2]}) = std::conj(value);
}

int SpectralScalar::effective_band() const
{
    // Scan shells max|m_axis| = K from the band limit inward; evolved fields usually fill the band.
    const cplx zero(0.0, 0.0);
    const Grid& g = grid_;
    auto nonzero = [&](int m0, int m1, int m2) {
        return c_[g.index(lattice_index(m0, g.n[0]), lattice_index(m1, g.n[1]), lattice_index(m2, g.n[2]))] != zero;
    };
    for (int K = g.band_limit; K > 0; --K) {
        for (int m0 = -K; m0 <= K; ++m0)
            for (int m1 = -K; m1 <= K; ++m1) {
                const bool edge = std::abs(m0) == K || std::abs(m1) == K;
                if (g.dim == 2) {
                    if (edge && nonzero(m0, m1, 0)) return K;
                } else if (edge) {
                    for (int m2 = -K; m2 <= K; ++m2)
                        if (nonzero(m0, m1, m2)) return K;
                } else if (nonzero(m0, m1, K) || nonzero(m0, m1, -K)) {
                    return K;
                }
            }
    }
    return 0;
}

bool SpectralScalar::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](cplx v) { return v == cplx(0.0, 0.0); });
}

SpectralScalar& SpectralScalar::operator+=(const SpectralScalar& o)
{
    require_same_grid(*this, o, "operator+=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

SpectralScalar& SpectralScalar::operator-=(const SpectralScalar& o)
{
    require_same_grid(*this, o, "operator-=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

SpectralScalar& SpectralScalar::operator*=(double s)
{
    for (auto& v : c_) v *= s;
    return *this;
}

SpectralScalar operator+(SpectralScalar a, const SpectralScalar& b) { return a += b; }
SpectralScalar operator-(SpectralScalar a, const SpectralScalar& b) { return a -= b; }
SpectralScalar operator-(SpectralScalar a) { return a *= -1.0; }
SpectralScalar operator*(double s, SpectralScalar a) { return a *= s; }
SpectralScalar operator*(SpectralScalar a, double s) { return a *= s; }

double wavenumber_norm2(const Grid& g, const Mode& m)
{
    double s = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        double k = g.wavenumber(a, m[a]);
        s += k * k;
    }
    return s;
}

Quadrature quadrature_for(const Grid& g, int points)
{
    Quadrature q;
    q.dim = g.dim;
    for (int a = 0; a < g.dim; ++a) q.m[a] = fft_size(std::max(points, 4));
    return q;
}

Quadrature native_quadrature(const Grid& g)
{
    Quadrature q;
    q.dim = g.dim;
    q.m = g.n;
    return q;
}

std::vector<double> to_physical(const SpectralScalar& f, const Quadrature& q)
{
    const Grid& g = f.grid();
    if (q.dim != g.dim) throw std::invalid_argument("to_physical: dimension mismatch");
    const int band = f.effective_band();
    for (int a = 0; a < g.dim; ++a)
        if (q.m[a] < 2 * band + 1) throw std::logic_error("to_physical: lattice too coarse for field band");
    const int last = g.dim - 1;
    auto half = detail::alloc_complex(detail::half_size(q));
    std::fill(half.get(), half.get() + detail::half_size(q), cplx(0.0, 0.0));
    const auto& c = f.coeffs();
    for_each_mode(g, band, [&](const Mode& m, std::size_t idx) {
        if (m[last] >= 0) half[half_index(q, m)] = c[idx];
    });
    auto out = detail::alloc_real(q.size());
    detail::inverse(q, half.get(), out.get());
    return std::vector<double>(out.get(), out.get() + q.size());
}

SpectralScalar from_physical(std::span<const double> values, const Quadrature& q, const Grid& target,
                             int out_band)
{
    if (values.size() != q.size() || q.dim != target.dim)
        throw std::invalid_argument("from_physical: lattice mismatch");
    out_band = std::min(out_band, target.band_limit);
    for (int a = 0; a < q.dim; ++a)
        if (q.m[a] < 2 * out_band + 1) throw std::logic_error("from_physical: lattice too coarse for band");
    auto in = detail::alloc_real(q.size());
    std::copy(values.begin(), values.end(), in.get());
    auto half = detail::alloc_complex(detail::half_size(q));
    detail::forward(q, in.get(), half.get());
    const double scale = 1.0 / double(q.size());
    SpectralScalar f(target);
    auto& c = f.data();
    for_each_mode(target, out_band, [&](const Mode& m, std::size_t idx) {
        switch (orientation(m, q.dim)) {
        case 1: c[idx] = half[half_index(q, m)] * scale; break;
        case -1: c[idx] = std::conj(half[half_index(q, {-m[0], -m[1], -m[2]})]) * scale; break;
        default: c[idx] = {half[0].real() * scale, 0.0};
        }
    });
    return f;
}

std::vector<double> sample(const SpectralScalar& f) { return to_physical(f, native_quadrature(f.grid())); }

SpectralScalar from_samples(const Grid& g, std::span<const double> values)
{
    return from_physical(values, native_quadrature(g), g, g.band_limit);
}

SpectralScalar partial_derivative(const SpectralScalar& f, int axis)
{
    if (axis < 1 || axis > 3) throw std::invalid_argument("partial_derivative: axis must be 1, 2 or 3");
    Mode orders{0, 0, 0};
    orders[axis - 1] = 1;
    return derivative(f, orders);
}

SpectralScalar derivative(const SpectralScalar& f, const Mode& orders)
{
    const Grid& g = f.grid();
    for (int a = g.dim; a < 3; ++a)
        if (orders[a] > 0) return SpectralScalar(g);
    // prod (i xi_a)^{o_a} = i^{sum o} prod xi_a^{o_a}; the real factors are tabulated per axis.
    std::array<std::vector<double>, 3> w;
    for (int a = 0; a < 3; ++a) {
        w[a].assign(g.n[a], 0.0);
        for (int i = 0; i < g.n[a]; ++i) {
            const int m = signed_frequency(i, g.n[a]);
            if (a < g.dim && std::abs(m) > g.band_limit) continue;
            w[a][i] = std::pow(a < g.dim ? g.wavenumber(a, m) : 0.0, orders[a]);
        }
    }
    const int turns = (orders[0] + orders[1] + orders[2]) % 4;
    SpectralScalar r(g);
    auto& out = r.data();
    const auto& in = f.coeffs();
    for (int i0 = 0; i0 < g.n[0]; ++i0) {
        if (w[0][i0] == 0.0) continue;
        for (int i1 = 0; i1 < g.n[1]; ++i1) {
            const double w01 = w[0][i0] * w[1][i1];
            if (w01 == 0.0) continue;
            for (int i2 = 0; i2 < g.n[2]; ++i2) {
                const std::size_t idx = g.index(i0, i1, i2);
                const double s = w01 * w[2][i2];
                const double re = in[idx].real() * s, im = in[idx].imag() * s;
                switch (turns) {
                case 0: out[idx] = cplx(re, im); break;
                case 1: out[idx] = cplx(-im, re); break;
                case 2: out[idx] = cplx(-re, -im); break;
                default: out[idx] = cplx(im, -re); break;
                }
            }
        }
    }
    return r;
}

SpectralScalar fractional_laplacian(const SpectralScalar& f, double alpha)
{
    if (!(alpha >= 0.0)) throw std::domain_error("fractional_laplacian: alpha must be >= 0");
    const Grid& g = f.grid();
    SpectralScalar r(g);
    auto& out = r.data();
    const auto& in = f.coeffs();
    for_each_mode(g, g.band_limit, [&](const Mode& m, std::size_t idx) {
        double k2 = wavenumber_norm2(g, m);
        out[idx] = k2 == 0.0 ? cplx(0.0, 0.0) : in[idx] * std::pow(k2, 0.5 * alpha);
    });
    return r;
}

SpectralScalar laplacian(const SpectralScalar& f)
{
    const Grid& g = f.grid();
    SpectralScalar r(g);
    auto& out = r.data();
    const auto& in = f.coeffs();
    for_each_mode(g, g.band_limit,
                  [&](const Mode& m, std::size_t idx) { out[idx] = -wavenumber_norm2(g, m) * in[idx]; });
    return r;
}

double integral(const SpectralScalar& f) { return f.grid().volume() * f.coeffs()[0].real(); }

double inner_product(const SpectralScalar& f, const SpectralScalar& h)
{
    require_same_grid(f, h, "inner_product");
    const auto& a = f.coeffs();
    const auto& b = h.coeffs();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return f.grid().volume() * s;
}

int product_points(int total_band, int out_band, int max_factor_band)
{
    return std::max(total_band + out_band + 1, 2 * max_factor_band + 1);
}

Grid lifted_grid(const Grid& g, int band)
{
    std::array<int, 3> n = g.n;
    for (int a = 0; a < g.dim; ++a) n[a] = std::max(n[a], next_power_of_two(2 * band + 2));
    return Grid::make(g.dim, n, band, g.length);
}

SpectralScalar product(std::span<const SpectralScalar> fs, const ProductOptions& opt)
{
    if (fs.empty()) throw std::invalid_argument("product: no factors");
    const Grid& g = fs[0].grid();
    int total = 0, widest = 0;
    bool zero = false;
    for (const auto& f : fs) {
        require_same_grid(fs[0], f, "product");
        int b = f.effective_band();
        zero = zero || f.is_zero();
        total += b;
        widest = std::max(widest, b);
    }
    Grid target = g;
    int out_band = total;
    if (opt.truncate) {
        out_band = std::min(total, g.band_limit);
        if (opt.out_band >= 0) out_band = std::min(out_band, opt.out_band);
    } else if (total > g.band_limit) {
        if (!opt.allow_padding)
            throw std::domain_error("product: exact result exceeds the grid band and padding is disabled");
        target = lifted_grid(g, total);
    }
    if (zero) return SpectralScalar(target);
    const int points = product_points(total, out_band, widest);
    Quadrature q;
    if (opt.allow_padding) {
        q = quadrature_for(g, points);
    } else {
        q = native_quadrature(g);
        for (int a = 0; a < g.dim; ++a)
            if (q.m[a] < points)
                throw std::domain_error("product: grid too coarse for exact evaluation and padding is disabled");
    }
    std::vector<double> acc = to_physical(fs[0], q);
    for (std::size_t i = 1; i < fs.size(); ++i) {
        auto v = to_physical(fs[i], q);
        for (std::size_t p = 0; p < acc.size(); ++p) acc[p] *= v[p];
    }
    return from_physical(acc, q, target, out_band);
}

SpectralScalar product(const SpectralScalar& a, const SpectralScalar& b, const ProductOptions& opt)
{
    const SpectralScalar fs[] = {a, b};
    return product(fs, opt);
}

double integral_of_product(std::span<const SpectralScalar* const> fs)
{
    if (fs.empty()) throw std::invalid_argument("integral_of_product: no factors");
    const Grid& g = fs[0]->grid();
    int total = 0, widest = 0;
    for (const auto* f : fs) {
        require_same_grid(*fs[0], *f, "integral_of_product");
        if (f->is_zero()) return 0.0;
        int b = f->effective_band();
        total += b;
        widest = std::max(widest, b);
    }
    Quadrature q = quadrature_for(g, product_points(total, 0, widest));
    std::vector<double> acc = to_physical(*fs[0], q);
    for (std::size_t i = 1; i < fs.size(); ++i) {
        auto v = to_physical(*fs[i], q);
        for (std::size_t p = 0; p < acc.size(); ++p) acc[p] *= v[p];
    }
    double s = 0.0;
    for (double v : acc) s += v;
    return g.volume() * s / double(q.size());
}

double integral_of_product(const SpectralScalar& a, const SpectralScalar& b, const SpectralScalar& c)
{
    const SpectralScalar* fs[] = {&a, &b, &c};
    return integral_of_product(fs);
}

double sobolev_seminorm(const SpectralScalar& f, double s)
{
    if (!(s >= 0.0)) throw std::domain_error("sobolev_seminorm: s must be >= 0");
    const Grid& g = f.grid();
    const auto& c = f.coeffs();
    double acc = 0.0;
    for_each_mode(g, g.band_limit, [&](const Mode& m, std::size_t idx) {
        double k2 = wavenumber_norm2(g, m);
        double w = s == 0.0 ? 1.0 : (k2 == 0.0 ? 0.0 : std::pow(k2, s));
        acc += w * std::norm(c[idx]);
    });
    return std::sqrt(g.volume() * acc);
}

double sobolev_norm(const SpectralScalar& f, double s)
{
    const Grid& g = f.grid();
    const auto& c = f.coeffs();
    double acc = 0.0;
    for_each_mode(g, g.band_limit, [&](const Mode& m, std::size_t idx) {
        acc += std::pow(1.0 + wavenumber_norm2(g, m), s) * std::norm(c[idx]);
    });
    return std::sqrt(g.volume() * acc);
}

double l2_norm(const SpectralScalar& f) { return sobolev_seminorm(f, 0.0); }

Quadrature lp_quadrature(const Grid& g, int band, double p)
{
    int mult = std::isinf(p) ? 4 : std::min(8, int(std::ceil(p)));
    Quadrature q;
    q.dim = g.dim;
    for (int a = 0; a < g.dim; ++a) q.m[a] = std::max(g.n[a], next_power_of_two(mult * band + 1));
    return q;
}

double lp_norm_of_samples(std::span<const double> values, const Quadrature& q, const Grid& g, double p)
{
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (double v : values) s += std::pow(std::abs(v), p);
    return std::pow(g.volume() * s / double(q.size()), 1.0 / p);
}

double lp_norm(const SpectralScalar& f, double p)
{
    Quadrature q = lp_quadrature(f.grid(), f.effective_band(), p);
    return lp_norm_of_samples(to_physical(f, q), q, f.grid(), p);
}

SpectralScalar resample(const SpectralScalar& f, const Grid& target)
{
    const Grid& g = f.grid();
    if (g.dim != target.dim || g.length != target.length)
        throw std::invalid_argument("resample: grids differ in dimension or period");
    SpectralScalar r(target);
    auto& out = r.data();
    for_each_mode(target, std::min(target.band_limit, g.band_limit),
                  [&](const Mode& m, std::size_t idx) { out[idx] = f.coeff(m); });
    return r;
}

SpectralScalar rescale(const SpectralScalar& f, int lambda)
{
    if (lambda < 1) throw std::invalid_argument("rescale: lambda must be a positive integer");
    const Grid& g = f.grid();
    const int band = f.effective_band();
    if (lambda * band > g.band_limit)
        throw std::invalid_argument("rescale: lambda * band exceeds the grid band limit");
    SpectralScalar r(g);
    auto& out = r.data();
    const auto& in = f.coeffs();
    for_each_mode(g, band, [&](const Mode& m, std::size_t idx) {
        Mode s{lambda * m[0], lambda * m[1], lambda * m[2]};
        out[g.index(lattice_index(s[0], g.n[0]), lattice_index(s[1], g.n[1]), lattice_index(s[2], g.n[2]))] =
            in[idx];
    });
    return r;
}

}
