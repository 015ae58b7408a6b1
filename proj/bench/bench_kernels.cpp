#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "cone/kernels.hpp"

using namespace cone;
using kernels::cplx;
using kernels::Exec;

namespace {

std::vector<double> log_points(std::size_t n, double lo, double hi) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo * std::pow(hi / lo, double(i) / double(n - 1));
  return x;
}

std::vector<cplx> data(std::size_t n) {
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = {std::sin(0.37 * double(i)), std::cos(0.11 * double(i))};
  return x;
}

Exec exec_of(const benchmark::State& s) { return s.range(1) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(1) ? "parallel" : "serial"); }

void BM_bessel_matrix(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  const BesselJ j(Order(1.5));
  const auto r = log_points(n, 1e-3, 40.0), rho = log_points(n, 1e-3, 64.0);
  std::vector<double> m(n * n);
  for (auto _ : s) {
    kernels::bessel_matrix(j, r, rho, m, exec_of(s));
    benchmark::DoNotOptimize(m.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(n * n));
  label(s);
}

void BM_matvec(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  const BesselJ j(Order(0.5));
  const auto r = log_points(n, 1e-3, 40.0);
  std::vector<double> m(n * n);
  kernels::bessel_matrix(j, r, r, m);
  const auto x = data(n);
  std::vector<cplx> y(n);
  for (auto _ : s) {
    kernels::matvec(m, n, x, y, exec_of(s));
    benchmark::DoNotOptimize(y.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(n * n));
  label(s);
}

void BM_bessel_apply(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  const BesselJ j(Order(2.5));
  const auto r = log_points(n, 1e-2, 40.0), rho = log_points(n, 1e-2, 16.0);
  const auto x = data(n);
  std::vector<cplx> y(n);
  for (auto _ : s) {
    kernels::bessel_apply(j, r, rho, x, y, exec_of(s));
    benchmark::DoNotOptimize(y.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(n * n));
  label(s);
}

void BM_weighted_gram(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0)), nq = 4 * n;
  const BesselJ j(Order(0.5));
  const auto r = log_points(n, 1e-2, 20.0), rho = log_points(nq, 0.5, 2.0);
  std::vector<double> at(n * nq);
  kernels::bessel_matrix(j, r, rho, at);
  const auto d = data(nq);
  std::vector<cplx> out(n * n);
  for (auto _ : s) {
    kernels::weighted_gram(at, n, d, out, exec_of(s));
    benchmark::DoNotOptimize(out.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(n * n * nq / 2));
  label(s);
}

}  // namespace

BENCHMARK(BM_bessel_matrix)->ArgsProduct({{256, 1024}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_matvec)->ArgsProduct({{1024, 4096}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bessel_apply)->ArgsProduct({{256, 1024}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weighted_gram)->ArgsProduct({{64, 256}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
