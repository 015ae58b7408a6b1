#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "cli.hpp"

namespace cone::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class CsvWriter {
public:
  CsvWriter(const fs::path& path, std::initializer_list<const char*> header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (const char* h : header) cell(h);
    end();
  }
  CsvWriter& operator<<(double x) { return cell(format_double(x)); }
  CsvWriter& operator<<(int x) { return cell(std::to_string(x)); }
  CsvWriter& operator<<(const std::string& s) { return cell(s); }
  void end() {
    out_ << '\n';
    first_ = true;
  }

private:
  CsvWriter& cell(const std::string& s) {
    out_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  std::ofstream out_;
  bool first_ = true;
};

json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json config_echo(const RunConfig& c) {
  return {{"schema_version", kSchemaVersion},
          {"sigma", c.sigma},
          {"gamma", c.gamma},
          {"k_max", c.k_max},
          {"band_j", c.band_j},
          {"seed", c.seed},
          {"radial_grid", {{"r_min", c.radial.min}, {"r_max", c.radial.max}, {"n", c.radial.n}}},
          {"spectral_grid", {{"rho_min", c.spectral.min}, {"rho_max", c.spectral.max}, {"n", c.spectral.n}}}};
}

const char* sign_name(Sign s) { return s == Sign::Plus ? "plus" : "minus"; }

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

double parse_cell(std::string_view s, const std::string& where) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec == std::errc::result_out_of_range && r.ptr == s.data() + s.size()) {
    const std::string copy(s);
    x = std::strtod(copy.c_str(), nullptr);
    if (std::isfinite(x)) return x;
  }
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ValidationError("evolve.input", where + ": cannot parse \"" + std::string(s) + "\"");
  return x;
}

// CSV with header k,r,re_upper,im_upper,re_lower,im_lower: for each mode, one row per radial node in grid order.
ModeSpectrum read_field(const RunConfig& c, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("evolve.input", "cannot open " + path.string());
  const auto g = c.radial_grid();
  std::string line;
  std::getline(in, line);
  if (line.rfind("k,r,re_upper,im_upper,re_lower,im_lower", 0) != 0)
    throw ValidationError("evolve.input", "expected header k,r,re_upper,im_upper,re_lower,im_lower");
  std::map<int, SpinorProfile> modes;
  std::map<int, std::size_t> filled;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::string where = "row " + std::to_string(row);
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(parse_cell(cell, where));
    if (v.size() != 6) throw ValidationError("evolve.input", where + ": expected 6 columns");
    const int k = static_cast<int>(v[0]);
    if (v[0] != k || std::abs(k) > c.k_max) throw ValidationError("evolve.input", where + ": mode index outside [-k_max, k_max]");
    auto it = modes.try_emplace(k, k, g).first;
    std::size_t& i = filled[k];
    if (i >= g->size()) throw ValidationError("evolve.input", where + ": more rows than radial nodes for mode " + std::to_string(k));
    if (std::abs(v[1] - (*g)[i]) > 1e-9 * (*g)[i])
      throw ValidationError("evolve.input", where + ": r does not match radial node " + std::to_string(i));
    it->second.upper[i] = {v[2], v[3]};
    it->second.lower[i] = {v[4], v[5]};
    ++i;
  }
  ModeSpectrum spec(c.cone(), g, c.k_max);
  for (auto& [k, p] : modes) {
    if (filled[k] != g->size()) throw ValidationError("evolve.input", "mode " + std::to_string(k) + " is incomplete");
    spec.set(std::move(p));
  }
  return spec;
}

ModeSpectrum field_input(const RunConfig& c) {
  if (c.evolve.input == "synthetic") return synthetic_data(c);
  if (c.evolve.input == "zero") {
    ModeSpectrum spec(c.cone(), c.radial_grid(), c.k_max);
    for (int k = -c.k_max; k <= c.k_max; ++k) spec.set(SpinorProfile(k, spec.grid));
    return spec;
  }
  fs::path p(c.evolve.input);
  if (p.is_relative()) p = c.base_dir / p;
  return read_field(c, p);
}

Exit verify_dispersive_kind(const RunConfig& c, const std::string& kind, const fs::path& out, bool quiet) {
  const DispersiveKind dk = kind == "dispersive-perp"           ? DispersiveKind::Perp
                            : kind == "dispersive-p0-weighted" ? DispersiveKind::P0Weighted
                                                               : DispersiveKind::P0Lq;
  const double tol = c.tolerance.value_or(dk == DispersiveKind::P0Lq ? 0.03 : 0.05);
  Diagnostics diag;
  const auto rep = verify_dispersive(dk, c.cone(), c.extension(), DyadicBand(c.band_j), synthetic_data(c),
                                     c.time_window(), c.q, &diag);
  const bool pass = std::abs(rep.fitted_exponent - *rep.expected_exponent) <= tol;

  CsvWriter csv(out / ("verify_" + kind + ".csv"), {"t", "norm", "model_norm"});
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    csv << rep.times[i] << rep.norms[i] << rep.model_norm(rep.times[i]);
    csv.end();
  }
  json j = {{"kind", kind},
            {"band_j", rep.band_j},
            {"model", rep.model},
            {"fitted_exponent", rep.fitted_exponent},
            {"expected_exponent", *rep.expected_exponent},
            {"intercept", rep.intercept},
            {"residual", rep.residual},
            {"tolerance", tol},
            {"pass", pass},
            {"times", rep.times},
            {"norms", rep.norms},
            {"warnings", diag.warnings},
            {"config", config_echo(c)}};
  if (dk == DispersiveKind::P0Lq) j["q"] = c.q;
  write_json(out / ("verify_" + kind + ".json"), j);
  if (!quiet)
    std::cout << kind << ": exponent " << format_double(rep.fitted_exponent) << " expected "
              << format_double(*rep.expected_exponent) << " tolerance " << format_double(tol)
              << (pass ? " PASS" : " FAIL") << '\n';
  return pass ? Exit::Ok : Exit::Tolerance;
}

Exit verify_counterexample(const RunConfig& c, const fs::path& out, bool quiet) {
  const auto& ce = c.counterexample;
  const auto tab = counterexample_run(ce.q, ce.cutoffs, ce.times);
  const double t0 = tab.rows.front().t;
  std::vector<const CounterexampleRow*> first;
  for (const auto& r : tab.rows)
    if (r.t == t0) first.push_back(&r);

  bool pass = true;
  json checks = json::array();
  if (ce.q == 4.0) {
    // Each decade of inner cutoff adds A^4 ln 10 to the fourth power of the norm.
    const double tol = c.tolerance.value_or(0.1);
    const double a4 = std::pow(first.front()->amplitude, 4) * std::log(10.0);
    for (std::size_t i = 1; i < first.size(); ++i) {
      const double decades = std::log10(first[i - 1]->epsilon / first[i]->epsilon);
      const double inc = (std::pow(first[i]->norm, 4) - std::pow(first[i - 1]->norm, 4)) / decades;
      const bool ok = std::abs(inc / a4 - 1.0) <= tol;
      pass = pass && ok;
      checks.push_back({{"epsilon", first[i]->epsilon}, {"increment_per_decade", inc}, {"expected", a4}, {"pass", ok}});
    }
  } else {
    const double tol = c.tolerance.value_or(0.02);
    const double expected = (ce.q - 4.0) / (2.0 * ce.q);
    pass = std::abs(tab.fitted_power - expected) <= tol;
    checks.push_back({{"fitted_power", tab.fitted_power}, {"expected", expected}, {"tolerance", tol}, {"pass", pass}});
  }

  CsvWriter csv(out / "verify_counterexample.csv", {"epsilon", "t", "norm", "amplitude"});
  json rows = json::array();
  for (const auto& r : tab.rows) {
    csv << r.epsilon << r.t << r.norm << r.amplitude;
    csv.end();
    rows.push_back({{"epsilon", r.epsilon}, {"t", r.t}, {"norm", r.norm}, {"amplitude", r.amplitude}});
  }
  write_json(out / "verify_counterexample.json", {{"kind", "counterexample"},
                                                  {"q", tab.q},
                                                  {"r_max", tab.r_max},
                                                  {"fitted_power", tab.fitted_power},
                                                  {"rows", rows},
                                                  {"checks", checks},
                                                  {"pass", pass}});
  if (!quiet) {
    std::cout << "counterexample q=" << format_double(ce.q) << '\n';
    for (const auto& r : tab.rows)
      std::cout << "  eps " << format_double(r.epsilon) << " t " << format_double(r.t) << " norm "
                << format_double(r.norm) << '\n';
    std::cout << (pass ? "PASS" : "FAIL") << '\n';
  }
  return pass ? Exit::Ok : Exit::Tolerance;
}

}  // namespace

Exit cmd_kernel(const RunConfig& c, const fs::path& out) {
  const auto& ks = c.kernel;
  const ConeParams cone = c.cone();
  const ExtensionParam gamma = c.extension();
  const LogGrid pts(ks.points.min, ks.points.max, ks.points.n);
  const auto& r = pts.points();
  json side = {{"family", ks.family}, {"k", ks.k}, {"t", ks.t}, {"points", r.size()}, {"config", config_echo(c)}};

  if (ks.family == "wave") {
    const auto m = mode_kernel(ks.k, cone, gamma, DyadicBand(c.band_j), ks.t, r);
    CsvWriter csv(out / "kernel.csv", {"r", "s", "re_upper", "im_upper", "re_lower", "im_lower"});
    for (std::size_t a = 0; a < r.size(); ++a)
      for (std::size_t b = 0; b < r.size(); ++b) {
        const cplx u = m.upper_at(a, b), l = m.lower_at(a, b);
        csv << r[a] << r[b] << u.real() << u.imag() << l.real() << l.imag();
        csv.end();
      }
    side["band_j"] = c.band_j;
    side["orders"] = {{"upper", m.orders.upper}, {"lower", m.orders.lower}};
  } else if (ks.family == "schrodinger") {
    CsvWriter csv(out / "kernel.csv", {"r", "s", "re", "im"});
    for (double x : r)
      for (double y : r) {
        const cplx v = schrodinger_mode_kernel(ks.k, cone, ks.sign, ks.t, x, y);
        csv << x << y << v.real() << v.imag();
        csv.end();
      }
    side["sign"] = sign_name(ks.sign);
  } else {
    Diagnostics diag;
    CsvWriter csv(out / "kernel.csv", {"r", "s", "re_series", "im_series", "re_closed", "im_closed", "k_trunc"});
    for (double x : r)
      for (double y : r) {
        const PolarPoint px{x, 0.0}, py{y, ks.theta};
        const auto s = heat_kernel_series(cone, ks.sign, ks.t, px, py, std::nullopt, &diag);
        const cplx v = heat_kernel_closed(cone, ks.sign, ks.t, px, py, &diag);
        csv << x << y << s.value.real() << s.value.imag() << v.real() << v.imag() << s.k_trunc;
        csv.end();
      }
    side["sign"] = sign_name(ks.sign);
    side["theta"] = ks.theta;
    side["warnings"] = diag.warnings;
  }
  write_json(out / "kernel.json", side);
  return Exit::Ok;
}

Exit cmd_classify(const RunConfig& c, const fs::path& out, bool quiet) {
  std::vector<std::pair<double, double>> pq = c.pq;
  if (pq.empty()) {
    const double lattice[] = {2, 2.5, 3, 4, 6, 8, 12, kInf};
    for (double p : lattice)
      for (double q : lattice) pq.emplace_back(p, q);
  }
  CsvWriter csv(out / "classify.csv",
                {"p", "q", "perp", "p0", "full", "weighted", "theta_min", "sobolev_s", "exact", "summary"});
  json rows = json::array();
  for (const auto& [p, q] : pq) {
    const auto a = classify(p, q);
    const std::string summary = describe(a);
    csv << p << q << int(a.perp) << int(a.p0) << int(a.full) << int(a.weighted)
        << (a.theta_min ? format_double(*a.theta_min) : std::string()) << a.sobolev_s << int(a.exact) << quoted(summary);
    csv.end();
    rows.push_back({{"p", number_json(p)},
                    {"q", number_json(q)},
                    {"perp", a.perp},
                    {"p0", a.p0},
                    {"full", a.full},
                    {"weighted", a.weighted},
                    {"theta_min", a.theta_min ? json(*a.theta_min) : json(nullptr)},
                    {"sobolev_s", a.sobolev_s},
                    {"exact", a.exact},
                    {"summary", summary}});
    if (!quiet) std::cout << "(" << format_double(p) << ", " << format_double(q) << "): " << summary << '\n';
  }
  write_json(out / "classify.json", {{"rows", rows}});
  return Exit::Ok;
}

Exit cmd_verify(const RunConfig& c, const std::string& kind, const fs::path& out, bool quiet) {
  if (kind == "classify") return cmd_classify(c, out, quiet);
  if (kind == "counterexample") return verify_counterexample(c, out, quiet);
  return verify_dispersive_kind(c, kind, out, quiet);
}

Exit cmd_evolve(const RunConfig& c, const fs::path& out, bool quiet) {
  const ConeParams cone = c.cone();
  const ExtensionParam gamma = c.extension();
  const auto rho = c.spectral_grid();
  const ModeSpectrum f = field_input(c);
  const double n0 = f.norm();

  CsvWriter snap(out / "evolve.csv", {"t", "k", "r", "re_upper", "im_upper", "re_lower", "im_lower"});
  CsvWriter norms(out / "evolve_norms.csv", {"t", "norm"});
  std::vector<double> ns;
  double drift = 0.0;
  for (double t : c.evolve.times) {
    const ModeSpectrum u = evolve(f, cone, gamma, t, rho);
    for (const auto& [k, p] : u.modes)
      for (std::size_t i = 0; i < p.size(); ++i) {
        snap << t << k << (*p.grid)[i] << p.upper[i].real() << p.upper[i].imag() << p.lower[i].real()
             << p.lower[i].imag();
        snap.end();
      }
    const double n = u.norm();
    ns.push_back(n);
    norms << t << n;
    norms.end();
    drift = std::max(drift, std::abs(n - n0));
  }
  const double rel = n0 > 0.0 ? drift / n0 : drift;
  write_json(out / "evolve.json", {{"times", c.evolve.times},
                                   {"norms", ns},
                                   {"initial_norm", n0},
                                   {"max_relative_norm_drift", rel},
                                   {"config", config_echo(c)}});
  if (!quiet) std::cout << "evolve: " << ns.size() << " snapshots, relative norm drift " << format_double(rel) << '\n';
  return Exit::Ok;
}

}  // namespace cone::cli
