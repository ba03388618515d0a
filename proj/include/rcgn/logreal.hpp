#ifndef RCGN_LOGREAL_HPP
#define RCGN_LOGREAL_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rcgn {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! Signed logarithmic scalar: value = sgn * exp(lg).
//!
//! The deep end of the sample grid produces magnitudes like rho_eps^q at
//! eps = 2^-40, q = 20, which underflow as plain doubles but stay perfectly
//! representable as log-magnitudes. All asymptotic comparisons go through
//! this type; plain doubles are only used inside summation loops.
struct LogReal {
  int sgn = 0;  // -1, 0, +1
  double lg = -std::numeric_limits<double>::infinity();  // log(|value|)

  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static LogReal zero() { return LogReal{0, -kInf}; }
  static LogReal one() { return LogReal{1, 0.0}; }

  static LogReal from_double(double v) {
    if (v == 0.0) return zero();
    if (std::isnan(v)) throw DomainError("LogReal: NaN");
    return LogReal{v > 0 ? 1 : -1, std::log(std::fabs(v))};
  }

  //! sgn * exp(lg), saturating to 0 / +-inf outside double range.
  double to_double() const {
    if (sgn == 0) return 0.0;
    return sgn * std::exp(lg);
  }

  bool is_zero() const { return sgn == 0; }
  bool finite_mag() const { return sgn == 0 || std::isfinite(lg); }

  LogReal operator-() const { return LogReal{-sgn, lg}; }
  LogReal abs() const { return LogReal{sgn == 0 ? 0 : 1, lg}; }
};

inline LogReal operator*(const LogReal& a, const LogReal& b) {
  if (a.sgn == 0 || b.sgn == 0) return LogReal::zero();
  return LogReal{a.sgn * b.sgn, a.lg + b.lg};
}

inline LogReal operator/(const LogReal& a, const LogReal& b) {
  if (b.sgn == 0) throw DomainError("LogReal: division by zero");
  if (a.sgn == 0) return LogReal::zero();
  return LogReal{a.sgn * b.sgn, a.lg - b.lg};
}

inline LogReal operator+(const LogReal& a, const LogReal& b) {
  if (a.sgn == 0) return b;
  if (b.sgn == 0) return a;
  const LogReal& hi = (a.lg >= b.lg) ? a : b;
  const LogReal& lo = (a.lg >= b.lg) ? b : a;
  if (std::isinf(hi.lg) && hi.lg > 0) {
    if (std::isinf(lo.lg) && lo.lg > 0 && lo.sgn != hi.sgn)
      throw DomainError("LogReal: inf - inf");
    return hi;
  }
  double d = lo.lg - hi.lg;  // <= 0
  if (a.sgn == b.sgn)
    return LogReal{hi.sgn, hi.lg + std::log1p(std::exp(d))};
  double t = std::exp(d);
  if (t >= 1.0) return LogReal::zero();  // equal magnitudes cancel
  return LogReal{hi.sgn, hi.lg + std::log1p(-t)};
}

inline LogReal operator-(const LogReal& a, const LogReal& b) { return a + (-b); }

//! a^e for real exponent e. Negative bases require an integral exponent.
inline LogReal pow(const LogReal& a, double e) {
  if (a.sgn == 0) {
    if (e > 0) return LogReal::zero();
    if (e == 0) return LogReal::one();
    throw DomainError("LogReal: 0 raised to a negative power");
  }
  int s = 1;
  if (a.sgn < 0) {
    double r = std::nearbyint(e);
    if (r != e) throw DomainError("LogReal: negative base, fractional exponent");
    s = (std::fmod(std::fabs(r), 2.0) < 0.5) ? 1 : -1;
  }
  return LogReal{s, a.lg * e};
}

//! exp(x). The result's log-magnitude is the *value* of x.
inline LogReal exp(const LogReal& x) {
  if (x.sgn == 0) return LogReal::one();
  double v = x.to_double();  // saturates; exp(+-huge) -> {+1, +-inf}
  return LogReal{1, v};
}

//! log(x) for x > 0.
inline LogReal log(const LogReal& x) {
  if (x.sgn <= 0) throw DomainError("LogReal: log of non-positive value");
  return LogReal::from_double(x.lg);
}

//! three-way compare of the represented values
inline int cmp(const LogReal& a, const LogReal& b) {
  if (a.sgn != b.sgn) return a.sgn < b.sgn ? -1 : 1;
  if (a.sgn == 0) return 0;
  if (a.lg == b.lg) return 0;
  bool mag_less = a.lg < b.lg;
  if (a.sgn > 0) return mag_less ? -1 : 1;
  return mag_less ? 1 : -1;
}

inline bool operator<(const LogReal& a, const LogReal& b) { return cmp(a, b) < 0; }
inline bool operator<=(const LogReal& a, const LogReal& b) { return cmp(a, b) <= 0; }
inline bool operator>(const LogReal& a, const LogReal& b) { return cmp(a, b) > 0; }
inline bool operator>=(const LogReal& a, const LogReal& b) { return cmp(a, b) >= 0; }
inline bool operator==(const LogReal& a, const LogReal& b) { return cmp(a, b) == 0; }

inline LogReal min(const LogReal& a, const LogReal& b) { return cmp(a, b) <= 0 ? a : b; }
inline LogReal max(const LogReal& a, const LogReal& b) { return cmp(a, b) >= 0 ? a : b; }

}  // namespace rcgn

#endif  // RCGN_LOGREAL_HPP
