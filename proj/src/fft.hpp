#pragma once

#include <complex>
#include <cstddef>
#include <memory>

#include <fftw3.h>

#include "hmhd/spectral.hpp"

namespace hmhd::detail {

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using fftw_ptr = std::unique_ptr<T[], FftwFree>;

fftw_ptr<double> alloc_real(std::size_t n);
fftw_ptr<cplx> alloc_complex(std::size_t n);

// Half-spectrum length of an r2c transform on lattice q.
std::size_t half_size(const Quadrature& q);

// Unnormalized c2r (destroys `half`) and r2c.
void inverse(const Quadrature& q, cplx* half, double* out);
void forward(const Quadrature& q, double* in, cplx* half);

}
