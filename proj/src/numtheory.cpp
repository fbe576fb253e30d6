#include "remrec/numtheory.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "remrec/error.hpp"

namespace remrec {

namespace {

i64 narrow(i128 v) {
  if (v > std::numeric_limits<i64>::max() ||
      v < std::numeric_limits<i64>::min()) {
    fail(ErrorCode::overflow, "integer overflow in exact arithmetic");
  }
  return static_cast<i64>(v);
}

i64 abs64(i64 v) {
  require(v != std::numeric_limits<i64>::min(), ErrorCode::overflow,
          "integer overflow in exact arithmetic");
  return v < 0 ? -v : v;
}

i64 parse_int(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  i64 value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorCode::invalid_argument,
         "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

i64 gcd(i64 a, i64 b) {
  a = abs64(a);
  b = abs64(b);
  while (b != 0) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 lcm(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(abs64(a) / gcd(a, b), abs64(b));
}

GcdLcm gcd_lcm(i64 a, i64 b) {
  require(a >= 1 && b >= 1, ErrorCode::invalid_argument,
          "gcd_lcm expects positive integers");
  return {gcd(a, b), lcm(a, b)};
}

Bezout extended_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b;
  i64 old_s = 1, s = 0;
  i64 old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    i64 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

i64 floor_mod(i64 a, i64 m) {
  require(m > 0, ErrorCode::non_positive_modulus, "modulus must be positive");
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 mod_inverse(i64 a, i64 m) {
  Bezout e = extended_gcd(floor_mod(a, m), m);
  require(e.g == 1, ErrorCode::non_coprime_moduli,
          "value has no inverse modulo " + std::to_string(m));
  return floor_mod(e.x, m);
}

i64 checked_mul(i64 a, i64 b) { return narrow(static_cast<i128>(a) * b); }
i64 checked_add(i64 a, i64 b) { return narrow(static_cast<i128>(a) + b); }

i64 product(std::span<const i64> values) {
  i64 p = 1;
  for (i64 v : values) p = checked_mul(p, v);
  return p;
}

i64 lcm_of(std::span<const i64> values) {
  i64 l = 1;
  for (i64 v : values) l = lcm(l, v);
  return l;
}

bool pairwise_coprime(std::span<const i64> moduli) {
  for (std::size_t i = 0; i < moduli.size(); ++i)
    for (std::size_t j = i + 1; j < moduli.size(); ++j)
      if (gcd(moduli[i], moduli[j]) != 1) return false;
  return true;
}

i64 solve_crt(std::span<const Congruence> system) {
  require(!system.empty(), ErrorCode::empty_input, "empty congruence system");
  for (const auto& c : system) {
    require(c.modulus >= 1, ErrorCode::non_positive_modulus,
            "congruence modulus must be positive");
    require(c.residue >= 0 && c.residue < c.modulus,
            ErrorCode::invalid_argument, "residue outside [0, modulus)");
  }
  for (std::size_t i = 0; i < system.size(); ++i) {
    for (std::size_t j = i + 1; j < system.size(); ++j) {
      if (gcd(system[i].modulus, system[j].modulus) != 1) {
        fail(ErrorCode::non_coprime_moduli,
             "moduli " + std::to_string(system[i].modulus) + " and " +
                 std::to_string(system[j].modulus) + " share a factor");
      }
    }
  }
  i64 x = 0;
  i64 m = 1;
  for (const auto& c : system) {
    // x + m*t == c.residue (mod c.modulus)
    i64 diff = floor_mod(c.residue - floor_mod(x, c.modulus), c.modulus);
    i64 inv = mod_inverse(floor_mod(m, c.modulus), c.modulus);
    i64 t = narrow(static_cast<i128>(diff) * inv % c.modulus);
    x = narrow(static_cast<i128>(x) + static_cast<i128>(m) * t);
    m = checked_mul(m, c.modulus);
  }
  return x;
}

double real_mod(double a, double b) {
  require(b > 0.0 && std::isfinite(b), ErrorCode::non_positive_modulus,
          "modulus must be positive");
  double r = a - std::floor(a / b) * b;
  if (r < 0.0) r += b;
  if (r >= b - 1e-9 * b) r = 0.0;
  return r;
}

double circular_distance(double a, double b, double c) {
  double d = real_mod(a - b, c);
  return std::min(d, c - d);
}

Rational::Rational(i64 num, i64 den) {
  require(den != 0, ErrorCode::invalid_argument, "zero denominator");
  if (den < 0) {
    num = narrow(-static_cast<i128>(num));
    den = narrow(-static_cast<i128>(den));
  }
  i64 g = gcd(num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  require(!text.empty(), ErrorCode::invalid_argument, "empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash)),
                    parse_int(text.substr(slash + 1)));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string_view frac = text.substr(dot + 1);
    require(frac.size() <= 15, ErrorCode::invalid_argument,
            "too many decimal places: '" + std::string(text) + "'");
    digits += frac;
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    i64 den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return Rational(parse_int(digits), den);
  }
  return Rational(parse_int(text));
}

Rational operator+(const Rational& a, const Rational& b) {
  i64 g = gcd(a.den_, b.den_);
  i128 num = static_cast<i128>(a.num_) * (b.den_ / g) +
             static_cast<i128>(b.num_) * (a.den_ / g);
  i128 den = static_cast<i128>(a.den_ / g) * b.den_;
  return Rational(narrow(num), narrow(den));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  i64 g1 = gcd(a.num_, b.den_);
  i64 g2 = gcd(b.num_, a.den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  return Rational(checked_mul(a.num_ / g1, b.num_ / g2),
                  checked_mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
  require(b.num_ != 0, ErrorCode::invalid_argument, "division by zero");
  return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ <=>
         static_cast<i128>(b.num_) * a.den_;
}

Rational rational_lcm(std::span<const Rational> values) {
  require(!values.empty(), ErrorCode::empty_input, "rational_lcm of nothing");
  i64 num = 1;
  i64 den = 0;
  for (const auto& v : values) {
    require(v.num() > 0, ErrorCode::invalid_argument,
            "rational_lcm expects positive values");
    num = lcm(num, v.num());
    den = gcd(den, v.den());
  }
  return Rational(num, den);
}

}  // namespace remrec
