#include "cone/kernels.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef CONE_DIRAC_HAVE_OPENMP
#include <omp.h>
#endif

namespace cone::kernels {

namespace {

int g_default_threads = 0;

void check(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

constexpr std::size_t kBlock = 256;

}  // namespace

void set_thread_cap(int n) {
#ifdef CONE_DIRAC_HAVE_OPENMP
  if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? std::min(n, g_default_threads) : g_default_threads);
#else
  (void)n;
  (void)g_default_threads;
#endif
}

int thread_count() {
#ifdef CONE_DIRAC_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void bessel_matrix(const BesselJ& j, std::span<const double> rows, std::span<const double> cols, std::span<double> out,
                   Exec exec) {
  const std::size_t nr = rows.size(), nc = cols.size();
  check(out.size() == nr * nc, "bessel_matrix: output size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(nr);
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t a = 0; a < n; ++a)
      for (std::size_t i = 0; i < nc; ++i) out[a * nc + i] = j(rows[a] * cols[i]);
    return;
  }
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t a = 0; a < n; ++a)
    for (std::size_t i = 0; i < nc; ++i) out[a * nc + i] = j(rows[a] * cols[i]);
}

void matvec(std::span<const double> m, std::size_t n_rows, std::span<const cplx> x, std::span<cplx> y, Exec exec) {
  const std::size_t nc = x.size();
  check(m.size() == n_rows * nc && y.size() == n_rows, "matvec: size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(n_rows);
  auto row = [&](std::ptrdiff_t a) {
    const double* p = m.data() + a * nc;
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
      re += p[i] * x[i].real();
      im += p[i] * x[i].imag();
    }
    y[a] = cplx(re, im);
  };
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t a = 0; a < n; ++a) row(a);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t a = 0; a < n; ++a) row(a);
}

void matvec_transposed(std::span<const double> m, std::size_t n_rows, std::span<const cplx> x, std::span<cplx> y,
                       Exec exec) {
  const std::size_t nc = y.size();
  check(m.size() == n_rows * nc && x.size() == n_rows, "matvec_transposed: size mismatch");
  // Column blocks: each output accumulates over rows in ascending order.
  const auto n_blocks = static_cast<std::ptrdiff_t>((nc + kBlock - 1) / kBlock);
  auto block = [&](std::ptrdiff_t b) {
    const std::size_t i0 = b * kBlock, i1 = std::min(nc, i0 + kBlock);
    double re[kBlock] = {}, im[kBlock] = {};
    for (std::size_t a = 0; a < n_rows; ++a) {
      const double* p = m.data() + a * nc;
      const double xr = x[a].real(), xi = x[a].imag();
      for (std::size_t i = i0; i < i1; ++i) {
        re[i - i0] += p[i] * xr;
        im[i - i0] += p[i] * xi;
      }
    }
    for (std::size_t i = i0; i < i1; ++i) y[i] = cplx(re[i - i0], im[i - i0]);
  };
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t b = 0; b < n_blocks; ++b) block(b);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < n_blocks; ++b) block(b);
}

void bessel_apply(const BesselJ& j, std::span<const double> rows, std::span<const double> cols,
                  std::span<const cplx> x, std::span<cplx> y, Exec exec) {
  const std::size_t nc = cols.size();
  check(x.size() == nc && y.size() == rows.size(), "bessel_apply: size mismatch");
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
  auto row = [&](std::ptrdiff_t a) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
      if (x[i] == cplx{}) continue;
      const double v = j(rows[a] * cols[i]);
      re += v * x[i].real();
      im += v * x[i].imag();
    }
    y[a] = cplx(re, im);
  };
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t a = 0; a < n; ++a) row(a);
    return;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t a = 0; a < n; ++a) row(a);
}

void weighted_gram(std::span<const double> at, std::size_t n, std::span<const cplx> d, std::span<cplx> out,
                   Exec exec) {
  const std::size_t nq = d.size();
  check(at.size() == n * nq && out.size() == n * n, "weighted_gram: size mismatch");
  auto row = [&](std::ptrdiff_t a) {
    const double* pa = at.data() + a * nq;
    for (std::size_t b = a; b < n; ++b) {
      const double* pb = at.data() + b * nq;
      double re = 0.0, im = 0.0;
      for (std::size_t q = 0; q < nq; ++q) {
        const double c = pa[q] * pb[q];
        re += c * d[q].real();
        im += c * d[q].imag();
      }
      out[a * n + b] = cplx(re, im);
      out[b * n + a] = cplx(re, im);
    }
  };
  const auto na = static_cast<std::ptrdiff_t>(n);
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t a = 0; a < na; ++a) row(a);
    return;
  }
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t a = 0; a < na; ++a) row(a);
}

}  // namespace cone::kernels
