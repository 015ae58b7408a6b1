#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "cli.hpp"

namespace cone::cli {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError(path.empty() ? "config" : path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items())
    if (!ok.count(key)) throw ValidationError(path.empty() ? key : path + "." + key, "unknown field");
}

std::string shortest(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

double number(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  }
  throw ValidationError(path, "expected a number");
}

long long integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 1e15) return static_cast<long long>(d);
  }
  throw ValidationError(path, "expected an integer");
}

template <class F>
void opt(const json& j, const std::string& path, const char* key, F&& f) {
  if (j.contains(key)) f(j.at(key), join(path, key));
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

GridSpec grid(const json& j, const std::string& path, GridSpec g, const char* lo, const char* hi) {
  check_keys(j, path, {lo, hi, "n"});
  opt(j, path, lo, [&](const json& v, const std::string& p) { g.min = number(v, p); });
  opt(j, path, hi, [&](const json& v, const std::string& p) { g.max = number(v, p); });
  opt(j, path, "n", [&](const json& v, const std::string& p) {
    const auto n = integer(v, p);
    if (n < 16 || n > (1 << 20)) throw ValidationError(p, "must lie in [16, 2^20]");
    g.n = static_cast<std::size_t>(n);
  });
  if (!(g.min > 0.0) || !std::isfinite(g.max) || !(g.max > g.min))
    throw ValidationError(path, "need 0 < min < max < inf");
  return g;
}

Sign parse_sign(const json& v, const std::string& path) {
  if (v == "plus") return Sign::Plus;
  if (v == "minus") return Sign::Minus;
  throw ValidationError(path, "expected \"plus\" or \"minus\"");
}

}  // namespace

RadialGridPtr RunConfig::radial_grid() const { return std::make_shared<const RadialGrid>(radial.min, radial.max, radial.n); }

SpectralGridPtr RunConfig::spectral_grid() const {
  return std::make_shared<const SpectralGrid>(spectral.min, spectral.max, spectral.n);
}

RunConfig parse_config(const json& j) {
  check_keys(j, "", {"schema_version", "sigma", "gamma", "k_max", "radial_grid", "spectral_grid", "band_j",
                     "time_window", "q", "pq", "tolerance", "seed", "kernel", "counterexample", "evolve"});
  RunConfig c;
  if (!j.contains("schema_version")) throw ValidationError("schema_version", "missing");
  if (integer(j.at("schema_version"), "schema_version") != kSchemaVersion)
    throw ValidationError("schema_version", "unsupported version, expected " + std::to_string(kSchemaVersion));

  opt(j, "", "sigma", [&](const json& v, const std::string& p) { c.sigma = number(v, p); });
  (void)ConeParams(c.sigma);
  opt(j, "", "gamma", [&](const json& v, const std::string& p) {
    if (v.is_string())
      c.gamma = v.get<std::string>();
    else if (v.is_number())
      c.gamma = shortest(v.get<double>());
    else
      throw ValidationError(p, "expected \"sin0\", \"cos0\" or radians");
    try {
      (void)ExtensionParam::parse(c.gamma);
    } catch (const std::exception& e) {
      throw ValidationError(p, e.what());
    }
  });
  opt(j, "", "k_max", [&](const json& v, const std::string& p) {
    const auto k = integer(v, p);
    if (k < 0 || k > 64) throw ValidationError(p, "must lie in [0, 64]");
    c.k_max = static_cast<int>(k);
  });
  opt(j, "", "radial_grid", [&](const json& v, const std::string& p) { c.radial = grid(v, p, c.radial, "r_min", "r_max"); });
  opt(j, "", "spectral_grid",
      [&](const json& v, const std::string& p) { c.spectral = grid(v, p, c.spectral, "rho_min", "rho_max"); });
  opt(j, "", "band_j", [&](const json& v, const std::string& p) {
    const auto b = integer(v, p);
    if (b < -10 || b > 10) throw ValidationError(p, "must lie in [-10, 10]");
    c.band_j = static_cast<int>(b);
  });
  opt(j, "", "time_window", [&](const json& v, const std::string& p) {
    check_keys(v, p, {"t_min", "t_max", "samples"});
    TimeWindow w = TimeWindow::standard(c.band_j);
    opt(v, p, "t_min", [&](const json& x, const std::string& q) { w.t_min = number(x, q); });
    opt(v, p, "t_max", [&](const json& x, const std::string& q) { w.t_max = number(x, q); });
    opt(v, p, "samples", [&](const json& x, const std::string& q) {
      const auto n = integer(x, q);
      if (n < 2 || n > 4096) throw ValidationError(q, "must lie in [2, 4096]");
      w.samples = static_cast<int>(n);
    });
    if (!(w.t_min > 0.0) || !(w.t_max > w.t_min) || !std::isfinite(w.t_max))
      throw ValidationError(p, "need 0 < t_min < t_max < inf");
    c.window = w;
  });
  opt(j, "", "q", [&](const json& v, const std::string& p) { c.q = number(v, p); });
  opt(j, "", "pq", [&](const json& v, const std::string& p) {
    if (!v.is_array()) throw ValidationError(p, "expected an array of [p, q] pairs");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto pi = p + "[" + std::to_string(i) + "]";
      if (!v[i].is_array() || v[i].size() != 2) throw ValidationError(pi, "expected [p, q]");
      const double a = number(v[i][0], pi + "[0]"), b = number(v[i][1], pi + "[1]");
      if (!(a >= 2.0) || !(b >= 2.0)) throw ValidationError(pi, "p and q must lie in [2, inf]");
      c.pq.emplace_back(a, b);
    }
  });
  opt(j, "", "tolerance", [&](const json& v, const std::string& p) {
    c.tolerance = number(v, p);
    if (!(*c.tolerance > 0.0)) throw ValidationError(p, "must be positive");
  });
  opt(j, "", "seed", [&](const json& v, const std::string& p) {
    const auto s = integer(v, p);
    if (s < 0 || s > 0xffffffffLL) throw ValidationError(p, "must be a 32-bit unsigned integer");
    c.seed = static_cast<unsigned>(s);
  });
  opt(j, "", "kernel", [&](const json& v, const std::string& p) {
    check_keys(v, p, {"family", "k", "t", "sign", "points", "theta"});
    auto& k = c.kernel;
    opt(v, p, "family", [&](const json& x, const std::string& q) {
      if (!x.is_string()) throw ValidationError(q, "expected a string");
      k.family = x.get<std::string>();
      if (k.family != "wave" && k.family != "schrodinger" && k.family != "heat")
        throw ValidationError(q, "expected wave, schrodinger or heat");
    });
    opt(v, p, "k", [&](const json& x, const std::string& q) { k.k = static_cast<int>(integer(x, q)); });
    opt(v, p, "t", [&](const json& x, const std::string& q) { k.t = number(x, q); });
    opt(v, p, "sign", [&](const json& x, const std::string& q) { k.sign = parse_sign(x, q); });
    opt(v, p, "points", [&](const json& x, const std::string& q) { k.points = grid(x, q, k.points, "r_min", "r_max"); });
    opt(v, p, "theta", [&](const json& x, const std::string& q) { k.theta = number(x, q); });
  });
  opt(j, "", "counterexample", [&](const json& v, const std::string& p) {
    check_keys(v, p, {"q", "cutoffs", "times"});
    opt(v, p, "q", [&](const json& x, const std::string& q) { c.counterexample.q = number(x, q); });
    opt(v, p, "cutoffs", [&](const json& x, const std::string& q) { c.counterexample.cutoffs = number_list(x, q); });
    opt(v, p, "times", [&](const json& x, const std::string& q) { c.counterexample.times = number_list(x, q); });
  });
  opt(j, "", "evolve", [&](const json& v, const std::string& p) {
    check_keys(v, p, {"input", "times"});
    opt(v, p, "input", [&](const json& x, const std::string& q) {
      if (!x.is_string()) throw ValidationError(q, "expected a path, \"synthetic\" or \"zero\"");
      c.evolve.input = x.get<std::string>();
    });
    opt(v, p, "times", [&](const json& x, const std::string& q) { c.evolve.times = number_list(x, q); });
  });
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", std::string("invalid JSON: ") + e.what());
  }
  RunConfig c = parse_config(j);
  c.base_dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  return c;
}

void validate(const RunConfig& c, const std::string& cmd, const std::string& kind) {
  (void)ConeParams(c.sigma);
  const ExtensionParam gamma = c.extension();
  auto need_admissible = [&](const char* field) {
    if (!gamma.dispersive_admissible())
      throw ValidationError(field, "gamma = " + c.gamma + " is not admissible (need sin(gamma) cos(gamma) = 0)");
  };
  if (cmd == "kernel") {
    const auto& k = c.kernel;
    if (!std::isfinite(k.t)) throw ValidationError("kernel.t", "must be finite");
    if (std::abs(k.k) > c.k_max) throw ValidationError("kernel.k", "exceeds k_max");
    if (k.family == "wave" && k.k == 0) need_admissible("gamma");
    if (k.family == "schrodinger" && k.t == 0.0) throw ValidationError("kernel.t", "must be nonzero");
    if (k.family == "heat" && !(k.t > 0.0)) throw ValidationError("kernel.t", "must be positive");
  } else if (cmd == "verify") {
    if (kind == "dispersive-perp") {
      if (c.k_max < 1) throw ValidationError("k_max", "the P_perp component needs k_max >= 1");
    } else if (kind == "dispersive-p0-weighted") {
      need_admissible("gamma");
    } else if (kind == "dispersive-p0-lq") {
      need_admissible("gamma");
      if (!(c.q >= 2.0 && c.q < 4.0)) throw ValidationError("q", "the weightless L^q decay needs 2 <= q < 4");
    } else if (kind == "counterexample") {
      const auto& ce = c.counterexample;
      if (!(ce.q >= 4.0)) throw ValidationError("counterexample.q", "must be at least 4");
      if (ce.cutoffs.empty()) throw ValidationError("counterexample.cutoffs", "must not be empty");
      for (std::size_t i = 0; i < ce.cutoffs.size(); ++i)
        if (!(ce.cutoffs[i] > 0.0 && ce.cutoffs[i] < 1.0) || (i > 0 && !(ce.cutoffs[i] < ce.cutoffs[i - 1])))
          throw ValidationError("counterexample.cutoffs", "must be decreasing and lie in (0, 1)");
      for (double t : ce.times)
        if (!std::isfinite(t)) throw ValidationError("counterexample.times", "must be finite");
    } else if (kind != "classify") {
      throw ValidationError("kind", "unknown verify kind \"" + kind + "\"");
    }
  } else if (cmd == "evolve") {
    if (c.evolve.times.empty()) throw ValidationError("evolve.times", "must not be empty");
    for (double t : c.evolve.times)
      if (!std::isfinite(t)) throw ValidationError("evolve.times", "must be finite");
    need_admissible("gamma");
  } else if (cmd != "classify") {
    throw ValidationError("cmd", "unknown command \"" + cmd + "\"");
  }
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

ModeSpectrum synthetic_data(const RunConfig& c) {
  const ConeParams cone = c.cone();
  const ExtensionParam gamma = c.extension();
  const auto g = c.radial_grid();
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> center(1.5, 3.0), phase(0.0, 2.0 * std::numbers::pi);
  ModeSpectrum spec(cone, g, c.k_max);
  for (int k = -c.k_max; k <= c.k_max; ++k) {
    const double cu = center(rng), cl = center(rng);
    const cplx au = std::polar(1.0, phase(rng)), al = std::polar(0.8, phase(rng));
    if (k == 0 && !gamma.dispersive_admissible()) continue;
    const ModeOrders o = mode_orders(k, cone, gamma);
    SpinorProfile p(k, g);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double x = std::ldexp((*g)[i], c.band_j);
      auto bump = [x](double nu, double cc) {
        const double d = x * x - cc * cc;
        return std::pow(x, nu) * std::exp(-d * d / (8.0 * cc * cc));
      };
      p.upper[i] = au * bump(o.upper, cu);
      p.lower[i] = al * bump(o.lower, cl);
    }
    spec.set(std::move(p));
  }
  return spec;
}

std::string describe(const AdmissiblePair& a) {
  std::string s;
  auto add = [&](const std::string& part) { s += (s.empty() ? "" : ", ") + part; };
  if (a.full) {
    add("Full-admissible");
  } else {
    if (a.perp) add("Perp-admissible");
    if (a.p0) add("P0-admissible");
  }
  if (a.weighted) add("Weighted-admissible (theta > " + shortest(*a.theta_min) + ")");
  if (s.empty()) add("not admissible");
  add("s=" + shortest(a.sobolev_s));
  return s;
}

}  // namespace cone::cli
