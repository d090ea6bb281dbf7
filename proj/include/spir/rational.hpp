#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spir {

/// Exact rational on int64, always normalized (gcd 1, positive denominator).
/// Every rate, bound and randomness ratio in this project is a small rational;
/// equality tests must be exact, so no floating point anywhere.
struct Rat {
  long long num = 0;
  long long den = 1;

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Rat checked(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lim = 0x7fffffffffffffffLL;
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
    Rat r;
    r.num = static_cast<long long>(n);
    r.den = static_cast<long long>(d);
    return r;
  }

  Rat operator+(const Rat& o) const {
    return checked(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                   static_cast<__int128>(den) * o.den);
  }
  Rat operator-(const Rat& o) const {
    return checked(static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den,
                   static_cast<__int128>(den) * o.den);
  }
  Rat operator*(const Rat& o) const {
    return checked(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
  }
  Rat operator/(const Rat& o) const {
    if (o.num == 0) throw std::domain_error("rational division by zero");
    return checked(static_cast<__int128>(num) * o.den, static_cast<__int128>(den) * o.num);
  }
  Rat operator-() const {
    Rat r = *this;
    r.num = -r.num;
    return r;
  }

  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const {
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
  }
  bool operator<=(const Rat& o) const { return *this < o || *this == o; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  Rat inv() const { return Rat(1) / *this; }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

inline long long binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  if (r > 0x7fffffffffffffffLL) throw std::overflow_error("binomial overflow");
  return static_cast<long long>(r);
}

}  // namespace spir
