#pragma once

// Exact integer and rational primitives. Integers are int64_t; every product
// goes through a 128-bit intermediate and throws ErrorCode::overflow rather
// than wrapping.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace remrec {

using i64 = std::int64_t;
using i128 = __int128;

struct GcdLcm {
  i64 gcd;
  i64 lcm;
};

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
GcdLcm gcd_lcm(i64 a, i64 b);

// Bezout coefficients: a*x + b*y == g == gcd(a, b) (g >= 0).
struct Bezout {
  i64 g;
  i64 x;
  i64 y;
};
Bezout extended_gcd(i64 a, i64 b);

// Inverse of a modulo m; requires gcd(a, m) == 1.
i64 mod_inverse(i64 a, i64 m);

// Euclidean remainder in [0, m).
i64 floor_mod(i64 a, i64 m);

i64 checked_mul(i64 a, i64 b);
i64 checked_add(i64 a, i64 b);
i64 product(std::span<const i64> values);
i64 lcm_of(std::span<const i64> values);

struct Congruence {
  i64 residue;
  i64 modulus;
};
using CongruenceSystem = std::vector<Congruence>;

bool pairwise_coprime(std::span<const i64> moduli);

// Unique x in [0, prod moduli) satisfying every congruence.
i64 solve_crt(std::span<const Congruence> system);

// <a>_b = a - floor(a/b) b, canonicalized to [0, b). Results within 1e-9 b of
// b snap to 0.
double real_mod(double a, double b);

// Circular distance between a and b on a ring of circumference c.
double circular_distance(double a, double b, double c);

class Rational {
 public:
  Rational() = default;
  Rational(i64 num) : num_(num), den_(1) {}  // NOLINT(implicit)
  Rational(i64 num, i64 den);

  i64 num() const noexcept { return num_; }
  i64 den() const noexcept { return den_; }

  bool is_integer() const noexcept { return den_ == 1; }
  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  // "p/q", or "p" for integers.
  std::string str() const;

  // Accepts "p/q", integers and finite decimals ("0.125", "-3.5").
  static Rational parse(std::string_view text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

 private:
  i64 num_ = 0;
  i64 den_ = 1;
};

// Smallest positive C that is an integer multiple of every value.
Rational rational_lcm(std::span<const Rational> values);

}  // namespace remrec
