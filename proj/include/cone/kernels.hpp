#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cone/specfun.hpp"

// Dense Bessel kernels. Every routine has a serial reference and an OpenMP
// version; both sum in the same order, so results are bit-identical.
namespace cone::kernels {

using cplx = std::complex<double>;

enum class Exec { Serial, Parallel };

// Caps the number of OpenMP threads (no-op without OpenMP). n <= 0 restores the default.
void set_thread_cap(int n);
int thread_count();

// out[a * cols.size() + i] = J(rows[a] * cols[i])
void bessel_matrix(const BesselJ& j, std::span<const double> rows, std::span<const double> cols, std::span<double> out,
                   Exec exec = Exec::Parallel);

// y[a] = sum_i m[a, i] x[i]
void matvec(std::span<const double> m, std::size_t n_rows, std::span<const cplx> x, std::span<cplx> y,
            Exec exec = Exec::Parallel);

// y[i] = sum_a m[a, i] x[a]
void matvec_transposed(std::span<const double> m, std::size_t n_rows, std::span<const cplx> x, std::span<cplx> y,
                       Exec exec = Exec::Parallel);

// y[a] = sum_i J(rows[a] * cols[i]) x[i] without storing the matrix.
void bessel_apply(const BesselJ& j, std::span<const double> rows, std::span<const double> cols,
                  std::span<const cplx> x, std::span<cplx> y, Exec exec = Exec::Parallel);

// out[a * n + b] = sum_q at[a * nq + q] d[q] at[b * nq + q] for an n x nq matrix at; symmetric in (a, b).
void weighted_gram(std::span<const double> at, std::size_t n, std::span<const cplx> d, std::span<cplx> out,
                   Exec exec = Exec::Parallel);

}  // namespace cone::kernels
