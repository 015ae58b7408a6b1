#include "cone/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cone/errors.hpp"

namespace cone {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAdmissibleTol = 1e-14;
}  // namespace

ConeParams::ConeParams(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    std::ostringstream os;
    os << "sigma must lie in (0, 1], got " << sigma;
    throw ValidationError("sigma", os.str());
  }
}

ExtensionParam::ExtensionParam(double gamma) : gamma_(gamma) {
  if (!(gamma >= 0.0 && gamma < kTwoPi)) {
    std::ostringstream os;
    os << "gamma must lie in [0, 2pi), got " << gamma;
    throw ValidationError("gamma", os.str());
  }
  sin_ = std::sin(gamma);
  cos_ = std::cos(gamma);
  admissible_ = std::abs(sin_ * cos_) <= kAdmissibleTol;
  if (admissible_) {
    if (std::abs(sin_) < std::abs(cos_)) {
      sin_ = 0.0;
      cos_ = cos_ > 0.0 ? 1.0 : -1.0;
    } else {
      cos_ = 0.0;
      sin_ = sin_ > 0.0 ? 1.0 : -1.0;
    }
  }
}

ExtensionParam ExtensionParam::cos0() { return ExtensionParam(std::numbers::pi / 2.0); }
ExtensionParam ExtensionParam::sin0_flipped() { return ExtensionParam(std::numbers::pi); }
ExtensionParam ExtensionParam::cos0_flipped() { return ExtensionParam(1.5 * std::numbers::pi); }

ExtensionParam ExtensionParam::parse(const std::string& token) {
  if (token == "sin0") return sin0();
  if (token == "cos0") return cos0();
  std::string body = token;
  bool degrees = false;
  if (body.size() > 3 && body.compare(body.size() - 3, 3, "deg") == 0) {
    degrees = true;
    body.resize(body.size() - 3);
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(body, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != body.size())
    throw ValidationError("gamma", "expected \"sin0\", \"cos0\", radians or degrees, got \"" + token + "\"");
  if (degrees) value *= std::numbers::pi / 180.0;
  return ExtensionParam(value);
}

std::string ExtensionParam::label() const {
  if (sin_is_zero()) return cos_ > 0 ? "sin0" : "sin0(gamma=pi)";
  if (cos_is_zero()) return sin_ > 0 ? "cos0" : "cos0(gamma=3pi/2)";
  std::ostringstream os;
  os.precision(17);
  os << gamma_;
  return os.str();
}

void require_admissible(int k, const ExtensionParam& gamma, const char* where) {
  if (k == 0 && !gamma.dispersive_admissible()) {
    std::ostringstream os;
    os.precision(17);
    os << where << ": mode k = 0 requires sin(gamma)cos(gamma) = 0, got gamma = " << gamma.gamma();
    throw AdmissibilityError(os.str());
  }
}

}  // namespace cone
