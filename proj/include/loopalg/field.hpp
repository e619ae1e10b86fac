#pragma once

#include <cstdint>
#include <string>

#include "loopalg/errors.hpp"

namespace loopalg {

using Scalar = std::uint32_t;

inline bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Integer power with overflow guard; throws InvalidInput past 2^62.
inline long long ipow(long long base, int exp) {
  long long out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > (1LL << 62) / (base > 0 ? base : 1)) throw InvalidInput("integer power overflow");
    out *= base;
  }
  return out;
}

/// The pair (p, r) of the Moore space P^m(p^r).
class Coefficients {
 public:
  Coefficients(int p, int r) : p_(p), r_(r) {
    if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
    if (r < 1) throw InvalidInput("r must be >= 1");
  }
  int p() const { return p_; }
  int r() const { return r_; }
  bool odd() const { return p_ != 2; }

 private:
  int p_;
  int r_;
};

/// Arithmetic in the prime field Z/p on canonical representatives 0..p-1.
class Zp {
 public:
  explicit Zp(Scalar p) : p_(p) {}
  Scalar prime() const { return p_; }

  Scalar reduce(long long x) const {
    long long m = x % static_cast<long long>(p_);
    return static_cast<Scalar>(m < 0 ? m + p_ : m);
  }
  Scalar add(Scalar a, Scalar b) const { return static_cast<Scalar>((a + b) % p_); }
  Scalar sub(Scalar a, Scalar b) const { return static_cast<Scalar>((a + p_ - b) % p_); }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
  Scalar mul(Scalar a, Scalar b) const {
    return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Scalar pow(Scalar a, std::uint64_t e) const {
    Scalar out = 1 % p_;
    while (e) {
      if (e & 1) out = mul(out, a);
      a = mul(a, a);
      e >>= 1;
    }
    return out;
  }
  Scalar inv(Scalar a) const {
    if (a % p_ == 0) throw InvariantViolation("division by zero in Z/p");
    return pow(a, p_ - 2);
  }
  /// (-1)^e as a field element.
  Scalar sign(long long e) const { return (e % 2 == 0) ? 1 % p_ : neg(1 % p_); }

 private:
  Scalar p_;
};

}  // namespace loopalg
