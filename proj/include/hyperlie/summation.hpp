#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace hyperlie {

/// Neumaier's compensated summation, for real or complex terms.
template <typename T>
class CompensatedSum {
 public:
  void add(T term) {
    if constexpr (std::is_floating_point_v<T>) {
      add_real(sum_, carry_, term);
    } else {
      double re = sum_.real(), re_carry = carry_.real();
      double im = sum_.imag(), im_carry = carry_.imag();
      add_real(re, re_carry, term.real());
      add_real(im, im_carry, term.imag());
      sum_ = T(re, im);
      carry_ = T(re_carry, im_carry);
    }
  }

  CompensatedSum& operator+=(T term) {
    add(term);
    return *this;
  }

  T value() const { return sum_ + carry_; }

 private:
  static void add_real(double& sum, double& carry, double term) {
    const double next = sum + term;
    if (std::abs(sum) >= std::abs(term))
      carry += (sum - next) + term;
    else
      carry += (term - next) + sum;
    sum = next;
  }

  T sum_{};
  T carry_{};
};

}  // namespace hyperlie
