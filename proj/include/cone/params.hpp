#pragma once

#include <string>

namespace cone {

// Cone deficit: the angular variable ranges over [-pi sigma, pi sigma).
class ConeParams {
public:
  explicit ConeParams(double sigma);
  double sigma() const { return sigma_; }

private:
  double sigma_;
};

// Self-adjoint extension angle gamma in [0, 2pi).
class ExtensionParam {
public:
  explicit ExtensionParam(double gamma);

  static ExtensionParam sin0() { return ExtensionParam(0.0); }             // gamma = 0
  static ExtensionParam cos0();                                            // gamma = pi/2
  static ExtensionParam sin0_flipped();                                    // gamma = pi
  static ExtensionParam cos0_flipped();                                    // gamma = 3pi/2
  // "sin0", "cos0", a number in radians, or a number followed by "deg".
  static ExtensionParam parse(const std::string& token);

  double gamma() const { return gamma_; }
  bool dispersive_admissible() const { return admissible_; }
  // sin/cos of gamma, snapped to {0, +-1} for the four admissible angles.
  double sin_gamma() const { return sin_; }
  double cos_gamma() const { return cos_; }
  bool sin_is_zero() const { return admissible_ && sin_ == 0.0; }
  bool cos_is_zero() const { return admissible_ && cos_ == 0.0; }
  std::string label() const;

private:
  double gamma_;
  double sin_, cos_;
  bool admissible_;
};

void require_admissible(int k, const ExtensionParam& gamma, const char* where);

}  // namespace cone
