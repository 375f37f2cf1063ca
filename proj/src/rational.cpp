#include "dctopo/rational.hpp"

#include <cmath>
#include <limits>

namespace dctopo {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rat Rat::make(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
  constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
  if (n < lo || n > hi || d > hi) throw std::overflow_error("rational: overflow");
  Rat r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rat::Rat(std::int64_t n, std::int64_t d) { *this = make(n, d); }

Rat Rat::operator+(const Rat& o) const {
  return make(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
              static_cast<__int128>(den_) * o.den_);
}

Rat Rat::operator-(const Rat& o) const {
  return make(static_cast<__int128>(num_) * o.den_ - static_cast<__int128>(o.num_) * den_,
              static_cast<__int128>(den_) * o.den_);
}

Rat Rat::operator*(const Rat& o) const {
  return make(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

Rat Rat::operator/(const Rat& o) const {
  if (o.num_ == 0) throw std::domain_error("rational: division by zero");
  return make(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

Rat Rat::operator-() const { return make(-static_cast<__int128>(num_), den_); }

bool Rat::operator<(const Rat& o) const {
  return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
}

std::string Rat::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

Rat Rat::parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(std::stoll(s));
  return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

Rat Rat::approx(double v, std::int64_t max_den) {
  if (max_den < 1) throw std::invalid_argument("rational: max_den < 1");
  if (!std::isfinite(v)) throw std::domain_error("rational: non-finite value");
  bool neg = v < 0;
  double x = neg ? -v : v;
  // Stern-Brocot walk keeping the closest fraction with bounded denominator.
  std::int64_t pa = 0, qa = 1, pb = 1, qb = 0;  // 0/1 and 1/0
  double rem = x;
  std::int64_t p = static_cast<std::int64_t>(rem), q = 1;
  for (int it = 0; it < 64; ++it) {
    std::int64_t a = static_cast<std::int64_t>(std::floor(rem));
    std::int64_t pn, qn;
    // Guard against overflow of the convergent recurrence.
    if (qa > 0 && a > (std::numeric_limits<std::int64_t>::max() - qb) / std::max<std::int64_t>(qa, 1)) break;
    pn = a * pb + pa;
    qn = a * qb + qa;
    if (qn > max_den) {
      // Best semiconvergent under the bound.
      std::int64_t k = (max_den - qa) / std::max<std::int64_t>(qb, 1);
      std::int64_t ps = k * pb + pa, qs = k * qb + qa;
      if (qs >= 1) {
        double cand = static_cast<double>(ps) / qs;
        double best = static_cast<double>(p) / q;
        if (std::fabs(cand - x) < std::fabs(best - x)) {
          p = ps;
          q = qs;
        }
      }
      break;
    }
    pa = pb;
    qa = qb;
    pb = pn;
    qb = qn;
    p = pn;
    q = qn;
    double frac = rem - static_cast<double>(a);
    if (frac < 1e-15) break;
    rem = 1.0 / frac;
  }
  return neg ? Rat(-p, q) : Rat(p, q);
}

Rat Rat::from_pow(std::int64_t base, int exp) {
  __int128 v = 1;
  constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
  for (int i = 0; i < exp; ++i) {
    v *= base;
    if (v > hi) throw std::overflow_error("rational: power overflow");
  }
  return Rat(static_cast<std::int64_t>(v));
}

}  // namespace dctopo
