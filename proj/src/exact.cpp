#include "exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace modelab {

Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  Rat b = e > 0 ? base : Rat(1) / base;
  unsigned long n = e > 0 ? e : -e;
  Rat acc(1);
  while (n) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

bool rat_is_square(const Rat& v, Rat* root) {
  if (sgn(v) < 0) return false;
  if (!mpz_perfect_square_p(v.get_num_mpz_t()) ||
      !mpz_perfect_square_p(v.get_den_mpz_t()))
    return false;
  if (root) {
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), v.get_num_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), v.get_den_mpz_t());
    *root = Rat(rn, rd);
  }
  return true;
}

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw UsageError("empty rational literal");
  Rat v;
  if (v.set_str(s, 10) != 0) throw UsageError("bad rational literal: " + s);
  v.canonicalize();
  return v;
}

std::string rat_to_string(const Rat& v) { return v.get_str(); }

Surd::Surd(const Rat& rat, const Rat& surd, const Rat& base)
    : rat_(rat), surd_(surd), base_(base) {
  if (surd_ == 0) {
    base_ = 0;
    return;
  }
  if (base_ <= 1) throw UsageError("surd base must be > 1");
  Rat root;
  if (rat_is_square(base_, &root)) {
    rat_ += surd_ * root;
    surd_ = 0;
    base_ = 0;
  }
}

void Surd::merge_base(const Surd& o) {
  if (surd_ == 0) {
    base_ = o.base_;
  } else if (o.surd_ != 0 && base_ != o.base_) {
    throw UnsupportedError("mixing surds over different bases: sqrt(" +
                           base_.get_str() + ") vs sqrt(" + o.base_.get_str() + ")");
  }
}

int Surd::sign() const {
  if (surd_ == 0) return sgn(rat_);
  if (rat_ == 0) return sgn(surd_);
  int sr = sgn(rat_), ss = sgn(surd_);
  if (sr == ss) return sr;
  // rat and surd*sqrt(base) have opposite signs; compare magnitudes squared.
  int c = cmp(rat_ * rat_, surd_ * surd_ * base_);
  if (c == 0) return 0;  // impossible for irrational sqrt(base), kept for safety
  return c > 0 ? sr : ss;
}

Surd Surd::operator-() const {
  Surd out = *this;
  out.rat_ = -out.rat_;
  out.surd_ = -out.surd_;
  return out;
}

Surd& Surd::operator+=(const Surd& o) {
  merge_base(o);
  rat_ += o.rat_;
  surd_ += o.surd_;
  if (surd_ == 0) base_ = 0;
  return *this;
}

Surd& Surd::operator-=(const Surd& o) { return *this += -o; }

Surd& Surd::operator*=(const Surd& o) {
  merge_base(o);
  const Rat b = surd_ != 0 ? base_ : o.base_;
  Rat r = rat_ * o.rat_ + surd_ * o.surd_ * b;
  Rat s = rat_ * o.surd_ + surd_ * o.rat_;
  rat_ = r;
  surd_ = s;
  base_ = surd_ != 0 ? b : Rat(0);
  return *this;
}

Surd& Surd::operator/=(const Surd& o) {
  if (o.sign() == 0) throw UsageError("division by zero");
  if (o.surd_ == 0) {
    rat_ /= o.rat_;
    surd_ /= o.rat_;
    return *this;
  }
  // 1/(p + q*sqrt(b)) = (p - q*sqrt(b)) / (p^2 - q^2 b)
  Surd conj(o.rat_, -o.surd_, o.base_);
  Rat denom = o.rat_ * o.rat_ - o.surd_ * o.surd_ * o.base_;
  *this *= conj;
  rat_ /= denom;
  surd_ /= denom;
  if (surd_ == 0) base_ = 0;
  return *this;
}

Surd Surd::sqrt_rational(const Rat& v) {
  if (sgn(v) < 0) throw UsageError("sqrt of negative rational");
  if (v == 0) return Surd(Rat(0));
  Rat root;
  if (rat_is_square(v, &root)) return Surd(root);
  if (v > 1) return Surd(Rat(0), Rat(1), v);
  // sqrt(v) = v * sqrt(1/v) keeps the stored base > 1
  return Surd(Rat(0), v, Rat(1) / v);
}

Surd Surd::half_power(const Rat& base, long num) {
  if (base <= 1) throw UsageError("half_power base must be > 1");
  if (num % 2 == 0) return Surd(rat_pow(base, num / 2));
  // base^(num/2) = base^((num-1)/2) * sqrt(base)
  return Surd(rat_pow(base, (num - 1) / 2)) * sqrt_rational(base);
}

Surd Surd::pow(long e) const {
  if (e < 0) return Surd(Rat(1)) / pow(-e);
  Surd acc(Rat(1)), b = *this;
  unsigned long n = e;
  while (n) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

double Surd::to_double() const {
  double out = mpq_get_d(rat_.get_mpq_t());
  if (surd_ != 0)
    out += mpq_get_d(surd_.get_mpq_t()) *
           std::sqrt(mpq_get_d(base_.get_mpq_t()));
  return out;
}

std::string Surd::to_decimal(int digits) const {
  const int prec = 64 + digits * 4;
  mpf_class acc(0, prec);
  acc = mpf_class(rat_, prec);
  if (surd_ != 0) {
    mpf_class root(base_, prec);
    mpf_sqrt(root.get_mpf_t(), root.get_mpf_t());
    acc += mpf_class(surd_, prec) * root;
  }
  mp_exp_t exp10 = 0;
  std::string mant = acc.get_str(exp10, 10, digits);
  if (mant.empty() || mant == "-") return "0";
  bool neg = mant[0] == '-';
  if (neg) mant = mant.substr(1);
  std::string out = neg ? "-" : "";
  if (exp10 <= 0) {
    out += "0." + std::string(-exp10, '0') + mant;
  } else if (static_cast<size_t>(exp10) >= mant.size()) {
    out += mant + std::string(exp10 - mant.size(), '0');
  } else {
    out += mant.substr(0, exp10) + "." + mant.substr(exp10);
  }
  return out;
}

std::string Surd::to_string() const {
  if (surd_ == 0) return rat_.get_str();
  std::ostringstream os;
  if (rat_ != 0) os << rat_.get_str() << (sgn(surd_) > 0 ? "+" : "");
  os << surd_.get_str() << "*sqrt(" << base_.get_str() << ")";
  return os.str();
}

Surd parse_scalar(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw UsageError("empty scalar");
  auto pos = s.find("*sqrt(");
  if (pos == std::string::npos) {
    // also accept decimal literals with a power-of-ten denominator
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      long frac = static_cast<long>(s.size() - dot - 1);
      Rat v = rat_from_string(digits.empty() ? "0" : digits);
      return Surd(v / rat_pow(Rat(10), frac));
    }
    return Surd(rat_from_string(s));
  }
  if (s.back() != ')') throw UsageError("bad scalar literal: " + text);
  std::string base = s.substr(pos + 6, s.size() - pos - 7);
  std::string head = s.substr(0, pos);
  // head is "q" or "p+q" / "p-q" with the sign splitting outside position 0
  size_t split = std::string::npos;
  for (size_t i = 1; i < head.size(); ++i) {
    if ((head[i] == '+' || head[i] == '-') && head[i - 1] != '/' &&
        isdigit(static_cast<unsigned char>(head[i - 1])))
      split = i;
  }
  Rat p(0), q;
  if (split == std::string::npos) {
    q = rat_from_string(head);
  } else {
    p = rat_from_string(head.substr(0, split));
    std::string qs = head.substr(split);
    q = rat_from_string(qs[0] == '+' ? qs.substr(1) : qs);
  }
  return Surd(p, q, rat_from_string(base));
}

Surd min(const Surd& a, const Surd& b) { return a <= b ? a : b; }
Surd max(const Surd& a, const Surd& b) { return a >= b ? a : b; }
Surd abs(const Surd& a) { return a.sign() < 0 ? -a : a; }

Interval::Interval(const Surd& l, const Surd& h) : lo(l), hi(h) {
  if (lo > hi) throw UsageError("interval with lo > hi");
}

Interval& Interval::operator+=(const Interval& o) {
  lo += o.lo;
  hi += o.hi;
  return *this;
}

Interval& Interval::operator-=(const Interval& o) {
  Surd nlo = lo - o.hi, nhi = hi - o.lo;
  lo = nlo;
  hi = nhi;
  return *this;
}

Interval& Interval::operator*=(const Interval& o) {
  Surd cands[4] = {lo * o.lo, lo * o.hi, hi * o.lo, hi * o.hi};
  Surd nlo = cands[0], nhi = cands[0];
  for (int i = 1; i < 4; ++i) {
    nlo = min(nlo, cands[i]);
    nhi = max(nhi, cands[i]);
  }
  lo = nlo;
  hi = nhi;
  return *this;
}

Interval& Interval::operator/=(const Interval& o) {
  if (o.lo.sign() <= 0 && o.hi.sign() >= 0)
    throw UsageError("interval division by an enclosure of zero");
  Interval inv(Surd(Rat(1)) / o.hi, Surd(Rat(1)) / o.lo);
  return *this *= inv;
}

Surd Poly::eval(const Surd& r) const {
  Surd acc(Rat(0));
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + *it;
  return acc;
}

std::optional<std::pair<size_t, Surd>> Poly::lowest_term() const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i].sign() != 0) return std::make_pair(i, c_[i]);
  return std::nullopt;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Surd(Rat(0)));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Surd(Rat(0)));
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly Poly::scaled(const Surd& k) const {
  std::vector<Surd> out = c_;
  for (auto& v : out) v *= k;
  return Poly(std::move(out));
}

void Poly::trim() {
  while (!c_.empty() && c_.back().sign() == 0) c_.pop_back();
}

}  // namespace modelab
