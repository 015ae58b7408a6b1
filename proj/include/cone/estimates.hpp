#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cone/propagator.hpp"

namespace cone {

// Diagonal matrix weights for the singular component. Wj(j): (1 + 2^j r^{-1/2})^{-1} on the upper entry when
// sin gamma = 0, on the lower entry when cos gamma = 0. Wfixed(eps, theta): (1 + r^{-1/2-eps})^{-theta} likewise.
class Weight {
public:
  enum class Kind { Wj, Wfixed };

  static Weight wj(int j, const ExtensionParam& gamma);
  static Weight fixed(double epsilon, double theta, const ExtensionParam& gamma);

  Kind kind() const { return kind_; }
  int j() const { return j_; }
  double epsilon() const { return epsilon_; }
  double theta() const { return theta_; }
  const ExtensionParam& gamma() const { return gamma_; }

  std::array<double, 2> at(double r) const;
  // Wfixed needs theta > 1 - 4/q.
  void require_exponent(double q) const;

private:
  Weight(Kind kind, int j, double epsilon, double theta, const ExtensionParam& gamma);
  Kind kind_;
  int j_;
  double epsilon_, theta_;
  ExtensionParam gamma_;
  bool upper_;
};

// Labels of (p, q) in the (1/p, 1/q) picture. p, q in [2, inf]; pass infinity() for inf.
struct AdmissiblePair {
  double p, q;
  bool perp = false;      // 2/p + 1/q <= 1/2 on (2, inf]^2, or (inf, 2)
  bool p0 = false;        // 1/p + 1/q < 1/2 on (2, inf]^2, or (inf, 2); and q < 4
  bool full = false;      // perp and p0
  bool weighted = false;  // 1/p + 1/q < 1/2 on (2, inf]^2 with 4 <= q < inf
  std::optional<double> theta_min;  // weighted only: the weight exponent must exceed this
  double sobolev_s = 0.0;           // 1 - 1/p - 2/q
  bool exact = false;               // decided in rational arithmetic

  std::string label() const;
};

AdmissiblePair classify(double p, double q);

struct DecayFitReport {
  int band_j = 0;
  std::vector<double> times, norms;
  std::string model;
  double fitted_exponent = 0.0;
  double intercept = 0.0;  // log prefactor of the fit
  double residual = 0.0;   // rms of the log residuals
  std::optional<double> expected_exponent;

  double model_norm(double t) const;
};

// Least-squares slope of log norm against log(1 + 2^j t) over the samples with 2^j t >= 10.
DecayFitReport fit_decay(std::span<const double> times, std::span<const double> norms, int band_j);

// Uniformly spaced samples u(t0 + i dt).
struct TimeSeries {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<SpinorField> samples;
};

// L^q(X) norm of the pointwise spinor modulus; q = inf gives the grid sup.
double lq_norm(const SpinorField& u, double q, const Weight* weight = nullptr);

// Trapezoid rule in t of ||u(t)||_q^p, to the power 1/p; p = inf gives the max over samples.
double mixed_norm(const TimeSeries& u, double p, double q, const std::optional<Weight>& weight = std::nullopt);

// phi(2^-j |D|) applied through the relativistic transform.
ModeSpectrum dyadic_localize(const ModeSpectrum& spec, const DyadicBand& band, const ConeParams& cone,
                             const ExtensionParam& gamma, const SpectralGridPtr& rho = default_spectral_grid());
EnergyDensity localize_density(const EnergyDensity& v, const DyadicBand& band);

// Homogeneous: (sum_k int |rho|^{2s} |P_k f_k|^2 |rho| drho)^{1/2}; otherwise with (1 + |rho|^s)^2.
double hs_norm(const ModeSpectrum& spec, const ConeParams& cone, const ExtensionParam& gamma, double s,
               bool homogeneous, const SpectralGridPtr& rho = default_spectral_grid());

enum class DispersiveKind { Perp, P0Weighted, P0Lq };

struct TimeWindow {
  double t_min, t_max;
  int samples = 32;

  // [10 2^-j, 10^3 2^-j], 32 log-spaced samples
  static TimeWindow standard(int j);
  std::vector<double> times() const;
};

// Evolves phi(2^-j |D|) applied to the selected component of data and fits the decay of the sup norm (Perp),
// the W_j-weighted sup norm (P0Weighted) or the L^q norm (P0Lq, 2 <= q < 4).
DecayFitReport verify_dispersive(DispersiveKind kind, const ConeParams& cone, const ExtensionParam& gamma,
                                 const DyadicBand& band, const ModeSpectrum& data, const TimeWindow& window,
                                 double q = 2.0, Diagnostics* diag = nullptr);

// Data (H_{-1/2} chi, 0) with chi a smooth bump on [1, 2], max 1.
double counterexample_chi(double rho);
// int e^{i t rho} J_{-1/2}(r rho) chi(rho) rho drho
cplx counterexample_profile(double t, double r);

struct CounterexampleRow {
  double epsilon;
  double t;
  double norm;       // (int_eps^R |u|^q r dr)^{1/q}
  double amplitude;  // A with u ~ A r^{-1/2} as r -> 0
};

struct CounterexampleTable {
  double q;
  double r_max;
  std::vector<CounterexampleRow> rows;
  double fitted_power;  // slope of log norm against log(1/eps) at the first time
};

CounterexampleTable counterexample_run(double q, std::span<const double> inner_cutoffs,
                                       std::span<const double> times = std::span<const double>());

}  // namespace cone
