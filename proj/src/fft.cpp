#include "fft.hpp"

#include <map>
#include <mutex>
#include <new>
#include <tuple>

namespace hmhd::detail {

namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int, int, bool>, fftw_plan> plans;

    ~PlanCache()
    {
        for (auto& [k, p] : plans) fftw_destroy_plan(p);
    }

    fftw_plan get(const Quadrature& q, bool fwd)
    {
        std::lock_guard lock(mu);
        auto key = std::make_tuple(q.dim, q.m[0], q.m[1], q.m[2], fwd);
        if (auto it = plans.find(key); it != plans.end()) return it->second;
        auto r = alloc_real(q.size());
        auto c = alloc_complex(half_size(q));
        auto* cc = reinterpret_cast<fftw_complex*>(c.get());
        // FFTW_ESTIMATE keeps plan selection, and therefore results, deterministic.
        fftw_plan p = fwd ? fftw_plan_dft_r2c(q.dim, q.m.data(), r.get(), cc, FFTW_ESTIMATE)
                          : fftw_plan_dft_c2r(q.dim, q.m.data(), cc, r.get(), FFTW_ESTIMATE);
        if (!p) throw std::bad_alloc();
        plans.emplace(key, p);
        return p;
    }
};

PlanCache& cache()
{
    static PlanCache c;
    return c;
}

}

fftw_ptr<double> alloc_real(std::size_t n)
{
    auto* p = static_cast<double*>(fftw_malloc(sizeof(double) * (n ? n : 1)));
    if (!p) throw std::bad_alloc();
    return fftw_ptr<double>(p);
}

fftw_ptr<cplx> alloc_complex(std::size_t n)
{
    auto* p = static_cast<cplx*>(fftw_malloc(sizeof(cplx) * (n ? n : 1)));
    if (!p) throw std::bad_alloc();
    return fftw_ptr<cplx>(p);
}

std::size_t half_size(const Quadrature& q)
{
    std::size_t s = 1;
    for (int a = 0; a + 1 < q.dim; ++a) s *= q.m[a];
    return s * (q.m[q.dim - 1] / 2 + 1);
}

void inverse(const Quadrature& q, cplx* half, double* out)
{
    fftw_execute_dft_c2r(cache().get(q, false), reinterpret_cast<fftw_complex*>(half), out);
}

void forward(const Quadrature& q, double* in, cplx* half)
{
    fftw_execute_dft_r2c(cache().get(q, true), in, reinterpret_cast<fftw_complex*>(half));
}

}
