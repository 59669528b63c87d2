#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

namespace permlab {

/// Exact arbitrary-precision rational; the scalar of the exact domain.
using Rational = mpq_class;

/// Complex double; the scalar of the floating-point domain.
using Complex = std::complex<double>;

/// Runtime tag for the two shipped scalar domains.
enum class ScalarKind { rational, complex_f64 };

/// num/den as a canonical rational (den must be nonzero; sign normalized).
inline Rational make_ratio(const mpz_class& num, const mpz_class& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_ratio(long num, long den) {
  return make_ratio(mpz_class(num), mpz_class(den));
}

template <class Scalar>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  static constexpr ScalarKind kind = ScalarKind::rational;
  /// |x|^2 stays in the same field, so statistics remain exact.
  using real_type = Rational;

  static Rational norm_sq(const Rational& x) { return Rational(x * x); }
  static Rational abs(const Rational& x) { return Rational(::abs(x)); }
  static Rational from_ratio(const mpz_class& num, const mpz_class& den) {
    return make_ratio(num, den);
  }
  static double to_double(const Rational& r) { return r.get_d(); }
  static double abs_double(const Rational& x) { return std::fabs(x.get_d()); }
};

template <>
struct scalar_traits<Complex> {
  static constexpr bool is_exact = false;
  static constexpr ScalarKind kind = ScalarKind::complex_f64;
  using real_type = double;

  static double norm_sq(const Complex& z) { return std::norm(z); }
  static double abs(const Complex& z) { return std::abs(z); }
  static Complex from_ratio(const mpz_class& num, const mpz_class& den) {
    Rational q = make_ratio(num, den);
    return Complex(q.get_d(), 0.0);
  }
  static double to_double(double r) { return r; }
  static double abs_double(const Complex& z) { return std::abs(z); }
};

template <class S>
using real_of_t = typename scalar_traits<S>::real_type;

/// x * (num/den), exact in the rational domain.
template <class S>
S scale_ratio(const S& x, const mpz_class& num, const mpz_class& den) {
  return S(x * scalar_traits<S>::from_ratio(num, den));
}

}  // namespace permlab
