#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace qbiject {

std::size_t bit_length(const mpz_class& v);
mpz_class pow_ui(const mpz_class& base, unsigned long exp);
mpz_class parse_integer(std::string_view text);

/// Exact rational in lowest terms: den >= 1, gcd(|num|, den) = 1, zero is 0/1.
class Rat {
 public:
  Rat() = default;
  Rat(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Rat(const mpz_class& v) : q_(v) {}
  Rat(const mpz_class& num, const mpz_class& den);
  explicit Rat(mpq_class q);

  /// Skips the gcd; the caller guarantees gcd(num, den) = 1 and den > 0.
  static Rat from_coprime(const mpz_class& num, const mpz_class& den);

  /// Accepts "num/den" (any sign placement, any common factor) or a bare integer.
  static Rat parse(std::string_view text);

  const mpz_class& num() const { return q_.get_num(); }
  const mpz_class& den() const { return q_.get_den(); }
  const mpq_class& value() const { return q_; }

  /// H(x) = max(|N(x)|, D(x)).
  mpz_class height() const;
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool in_unit() const;
  Rat abs() const;

  /// Lowest-terms "num/den"; integers keep the "/1".
  std::string str() const;

  Rat& operator+=(const Rat& o);
  Rat& operator-=(const Rat& o);
  Rat& operator*=(const Rat& o);
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a);

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

Rat pow(const Rat& base, unsigned long exp);
Rat pow4_inv(unsigned long exp);  // 4^-exp

/// Unreduced fraction for intermediate results whose gcd would be expensive.
/// den > 0 always; no other invariant.
struct Frac {
  mpz_class num{0};
  mpz_class den{1};

  Frac() = default;
  Frac(mpz_class n, mpz_class d);
  static Frac of(const Rat& r) { return Frac(r.num(), r.den()); }

  int sign() const { return sgn(num); }
  Rat reduce() const { return Rat(num, den); }
  bool is_zero() const { return sgn(num) == 0; }
};

int cmp(const Frac& a, const Rat& b);
int cmp(const Frac& a, const Frac& b);
inline bool operator==(const Frac& a, const Rat& b) { return cmp(a, b) == 0; }
Frac operator+(const Frac& a, const Frac& b);
Frac operator-(const Frac& a, const Frac& b);
Frac operator*(const Frac& a, const Frac& b);
Frac operator/(const Frac& a, const Frac& b);

}  // namespace qbiject

template <>
struct std::hash<qbiject::Rat> {
  std::size_t operator()(const qbiject::Rat& r) const noexcept {
    const std::size_t a = mpz_get_ui(r.num().get_mpz_t());
    const std::size_t b = mpz_get_ui(r.den().get_mpz_t());
    return a * 0x9e3779b97f4a7c15ULL ^ (b + (a << 6) + (a >> 2)) ^ (r.sign() < 0 ? 1 : 0);
  }
};
