#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modelab {

using Rat = mpq_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : Error {
  using Error::Error;
};
struct UnsupportedError : Error {
  using Error::Error;
};

Rat rat_pow(const Rat& base, long e);
bool rat_is_square(const Rat& v, Rat* root = nullptr);
Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& v);

// Element of the real quadratic field Q(sqrt(base)): rat + surd * sqrt(base).
// base is a rational > 1; a base whose square root is rational is folded into
// the rational part on construction, so surd != 0 implies sqrt(base) is
// irrational and the representation is unique.  Scalars with different bases
// mix only when at least one has surd == 0.
class Surd {
 public:
  Surd() : rat_(0), surd_(0), base_(0) {}
  Surd(const Rat& r) : rat_(r), surd_(0), base_(0) {}  // NOLINT(runtime/explicit)
  Surd(long n) : rat_(n), surd_(0), base_(0) {}        // NOLINT(runtime/explicit)
  Surd(const Rat& rat, const Rat& surd, const Rat& base);

  const Rat& rat() const { return rat_; }
  const Rat& surd_part() const { return surd_; }
  const Rat& base() const { return base_; }
  bool is_rational() const { return surd_ == 0; }

  int sign() const;
  Surd operator-() const;
  Surd& operator+=(const Surd& o);
  Surd& operator-=(const Surd& o);
  Surd& operator*=(const Surd& o);
  Surd& operator/=(const Surd& o);

  // sqrt(v) for rational v >= 0; exact when v is a square or v = s^2 * base.
  static Surd sqrt_rational(const Rat& v);
  // base^(num/2) for integer num (base > 1 rational); exact in Q(sqrt(base)).
  static Surd half_power(const Rat& base, long num);

  Surd pow(long e) const;
  double to_double() const;
  std::string to_decimal(int digits = 30) const;
  std::string to_string() const;  // "p/q" or "p/q+r/s*sqrt(b)"

  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator*(Surd a, const Surd& b) { return a *= b; }
  friend Surd operator/(Surd a, const Surd& b) { return a /= b; }
  friend bool operator==(const Surd& a, const Surd& b) { return (a - b).sign() == 0; }
  friend bool operator!=(const Surd& a, const Surd& b) { return !(a == b); }
  friend bool operator<(const Surd& a, const Surd& b) { return (a - b).sign() < 0; }
  friend bool operator<=(const Surd& a, const Surd& b) { return (a - b).sign() <= 0; }
  friend bool operator>(const Surd& a, const Surd& b) { return (a - b).sign() > 0; }
  friend bool operator>=(const Surd& a, const Surd& b) { return (a - b).sign() >= 0; }

 private:
  void merge_base(const Surd& o);
  Rat rat_, surd_, base_;
};

Surd parse_scalar(const std::string& text);
Surd min(const Surd& a, const Surd& b);
Surd max(const Surd& a, const Surd& b);
Surd abs(const Surd& a);

// Certified enclosure [lo, hi]; endpoints are exact field elements, so
// arithmetic never loses containment.  Zero width means the value is exact.
struct Interval {
  Surd lo, hi;

  Interval() = default;
  Interval(const Surd& v) : lo(v), hi(v) {}  // NOLINT(runtime/explicit)
  Interval(const Surd& l, const Surd& h);

  bool exact() const { return lo == hi; }
  Surd width() const { return hi - lo; }
  bool contains(const Surd& v) const { return lo <= v && v <= hi; }

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);  // throws if divisor straddles 0

  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
  friend Interval operator/(Interval a, const Interval& b) { return a /= b; }
};

// Ball masses: exact scalars are intervals of zero width.
using Mass = Interval;

// Polynomial in r with exact coefficients, coeff[i] * r^i.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Surd> coeff) : c_(std::move(coeff)) { trim(); }
  static Poly constant(const Surd& v) { return Poly({v}); }

  Surd eval(const Surd& r) const;
  bool zero() const { return c_.empty(); }
  size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  const std::vector<Surd>& coeff() const { return c_; }
  // lowest nonzero term (degree, coefficient); nullopt for the zero polynomial
  std::optional<std::pair<size_t, Surd>> lowest_term() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly scaled(const Surd& k) const;
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

 private:
  void trim();
  std::vector<Surd> c_;
};

// Value of a one-sided limit: a field element or +infinity.
struct LimitValue {
  bool infinite = false;
  Surd value;

  static LimitValue inf() { return {true, Surd()}; }
  static LimitValue of(const Surd& v) { return {false, v}; }
  friend bool operator==(const LimitValue& a, const LimitValue& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
  std::string to_string() const { return infinite ? "inf" : value.to_string(); }
};

}  // namespace modelab
