#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dctopo {

/// Exact rational on int64 with checked narrowing. Values stay normalized
/// (den > 0, gcd(num, den) = 1, zero is 0/1). Intermediate products run in
/// 128-bit; anything that cannot be reduced back into int64 throws.
class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  Rat(std::int64_t n) : num_(n), den_(1) {}
  Rat(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rat operator+(const Rat& o) const;
  Rat operator-(const Rat& o) const;
  Rat operator*(const Rat& o) const;
  Rat operator/(const Rat& o) const;
  Rat operator-() const;
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const;
  bool operator<=(const Rat& o) const { return !(o < *this); }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return !(*this < o); }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "p/q" with q always present, e.g. "3/4", "0/1", "5/1".
  std::string str() const;
  /// Accepts "p/q" or a bare integer "p".
  static Rat parse(const std::string& s);

  /// Best rational approximation of v with denominator <= max_den
  /// (continued-fraction convergents/semiconvergents).
  static Rat approx(double v, std::int64_t max_den);

  static Rat from_pow(std::int64_t base, int exp);  // base^exp as exact integer

 private:
  static Rat make(__int128 n, __int128 d);
  std::int64_t num_;
  std::int64_t den_;
};

inline Rat operator+(std::int64_t a, const Rat& b) { return Rat(a) + b; }
inline Rat operator-(std::int64_t a, const Rat& b) { return Rat(a) - b; }
inline Rat operator*(std::int64_t a, const Rat& b) { return Rat(a) * b; }

}  // namespace dctopo
