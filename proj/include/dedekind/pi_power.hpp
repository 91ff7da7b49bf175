#pragma once

#include <stdexcept>
#include <string>

#include "dedekind/rational.hpp"

namespace dedekind {

// Exact value coeff * pi^exponent. Exponent 0 means a plain rational.
// Values at different exponents are only comparable after numeric conversion.
struct PiPower {
  Rational coeff;
  int exponent = 0;

  PiPower() = default;
  PiPower(Rational c, int e) : coeff(std::move(c)), exponent(e) {
    if (e < 0) throw std::invalid_argument("PiPower: negative pi exponent");
  }

  friend bool operator==(const PiPower& a, const PiPower& b) {
    if (a.coeff.is_zero() && b.coeff.is_zero()) return true;
    return a.exponent == b.exponent && a.coeff == b.coeff;
  }

  std::string str() const { return coeff.str() + "*pi^" + std::to_string(exponent); }

  // Report serialization: {"coeff": "num/den", "pi_pow": k}
  std::string json_str() const {
    return "{\"coeff\":\"" + coeff.str() + "\",\"pi_pow\":" + std::to_string(exponent) + "}";
  }
};

}  // namespace dedekind
