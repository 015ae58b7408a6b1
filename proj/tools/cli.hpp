#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cone/estimates.hpp"

namespace cone::cli {

inline constexpr int kSchemaVersion = 1;

enum class Exit : int { Ok = 0, Failure = 1, Validation = 2, Tolerance = 3 };

struct GridSpec {
  double min, max;
  std::size_t n;
};

struct KernelSpec {
  std::string family = "wave";  // wave | schrodinger | heat
  int k = 0;
  double t = 1.0;
  Sign sign = Sign::Plus;
  GridSpec points{0.25, 8.0, 32};
  double theta = 0.0;  // angle of the second point (heat)
};

struct CounterexampleSpec {
  double q = 4.0;
  std::vector<double> cutoffs{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<double> times{0.0};
};

struct EvolveSpec {
  std::string input = "synthetic";  // path (CSV), "synthetic" or "zero"
  std::vector<double> times{0.0, 1.0, 2.0, 5.0, 10.0};
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  double sigma = 0.7;
  std::string gamma = "sin0";
  int k_max = 2;
  GridSpec radial{1e-3, 40.0, 4096};
  GridSpec spectral{1e-3, 64.0, 2048};
  int band_j = 0;
  std::optional<TimeWindow> window;  // standard(band_j) when absent
  double q = 3.0;
  std::vector<std::pair<double, double>> pq;
  std::optional<double> tolerance;
  unsigned seed = 1;
  KernelSpec kernel;
  CounterexampleSpec counterexample;
  EvolveSpec evolve;
  std::filesystem::path base_dir = ".";  // relative input paths resolve here

  ConeParams cone() const { return ConeParams(sigma); }
  ExtensionParam extension() const { return ExtensionParam::parse(gamma); }
  TimeWindow time_window() const { return window ? *window : TimeWindow::standard(band_j); }
  RadialGridPtr radial_grid() const;
  SpectralGridPtr spectral_grid() const;
};

// Throws ValidationError naming the offending field path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
// Range and admissibility checks for a command, before any computation.
void validate(const RunConfig& c, const std::string& cmd, const std::string& kind);

// 17 significant digits, '.' decimal, independent of the locale.
std::string format_double(double x);

// Seeded smooth data: r^nu g(r^2) bumps with random centers and phases, rescaled to band j.
ModeSpectrum synthetic_data(const RunConfig& c);

// Region summary such as "Full-admissible, s=0".
std::string describe(const AdmissiblePair& a);

Exit cmd_kernel(const RunConfig& c, const std::filesystem::path& out);
Exit cmd_verify(const RunConfig& c, const std::string& kind, const std::filesystem::path& out, bool quiet);
Exit cmd_classify(const RunConfig& c, const std::filesystem::path& out, bool quiet);
Exit cmd_evolve(const RunConfig& c, const std::filesystem::path& out, bool quiet);

int run(int argc, char** argv);

}  // namespace cone::cli
