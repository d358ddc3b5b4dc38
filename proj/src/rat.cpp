#include "qbiject/rat.hpp"

#include <algorithm>

#include "qbiject/error.hpp"

namespace qbiject {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::bracket_too_wide: return "BracketTooWide";
    case Errc::duplicate_node: return "DuplicateNode";
    case Errc::not_bracketed: return "NotBracketed";
    case Errc::not_monotone: return "NotMonotone";
    case Errc::bad_enumeration: return "BadEnumeration";
    case Errc::avoidance_exhausted: return "AvoidanceExhausted";
    case Errc::schedule_overflow: return "ScheduleOverflow";
    case Errc::stage_overflow: return "StageOverflow";
    case Errc::stage_too_shallow: return "StageTooShallow";
    case Errc::empty_tilde_q: return "EmptyTildeQ";
    case Errc::pole_in_unit: return "PoleInUnit";
    case Errc::not_unit_safe: return "NotUnitSafe";
    case Errc::parse_error: return "ParseError";
    case Errc::replay_divergence: return "ReplayDivergence";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::invariant_violation: return "InvariantViolation";
  }
  return "Unknown";
}

std::size_t bit_length(const mpz_class& v) {
  if (sgn(v) == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

mpz_class pow_ui(const mpz_class& base, unsigned long exp) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

mpz_class parse_integer(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  const bool neg = !s.empty() && s.front() == '-';
  const std::size_t start = neg ? 1 : 0;
  if (s.size() == start ||
      !std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(Errc::parse_error, "not an integer: '" + s + "'");
  }
  mpz_class v;
  if (mpz_set_str(v.get_mpz_t(), s.c_str(), 10) != 0) {
    throw Error(Errc::parse_error, "not an integer: '" + s + "'");
  }
  return v;
}

Rat::Rat(const mpz_class& num, const mpz_class& den) {
  if (sgn(den) == 0) throw Error(Errc::invalid_argument, "zero denominator");
  q_.get_num() = num;
  q_.get_den() = den;
  q_.canonicalize();
}

Rat::Rat(mpq_class q) : q_(std::move(q)) {
  if (sgn(q_.get_den()) == 0) throw Error(Errc::invalid_argument, "zero denominator");
  q_.canonicalize();
}

Rat Rat::from_coprime(const mpz_class& num, const mpz_class& den) {
  Rat r;
  r.q_.get_num() = num;
  r.q_.get_den() = den;
  return r;
}

Rat Rat::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rat(parse_integer(text));
  return Rat(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

mpz_class Rat::height() const {
  mpz_class a = ::abs(num());
  return a > den() ? a : den();
}

bool Rat::in_unit() const { return sgn(q_) >= 0 && q_ <= 1; }

Rat Rat::abs() const {
  Rat r = *this;
  mpq_abs(r.q_.get_mpq_t(), r.q_.get_mpq_t());
  return r;
}

std::string Rat::str() const { return num().get_str() + "/" + den().get_str(); }

Rat& Rat::operator+=(const Rat& o) {
  mpq_add(q_.get_mpq_t(), q_.get_mpq_t(), o.q_.get_mpq_t());
  return *this;
}

Rat& Rat::operator-=(const Rat& o) {
  mpq_sub(q_.get_mpq_t(), q_.get_mpq_t(), o.q_.get_mpq_t());
  return *this;
}

Rat& Rat::operator*=(const Rat& o) {
  mpq_mul(q_.get_mpq_t(), q_.get_mpq_t(), o.q_.get_mpq_t());
  return *this;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw Error(Errc::invalid_argument, "division by zero");
  mpq_div(q_.get_mpq_t(), q_.get_mpq_t(), o.q_.get_mpq_t());
  return *this;
}

Rat operator-(const Rat& a) {
  Rat r = a;
  mpq_neg(r.q_.get_mpq_t(), r.q_.get_mpq_t());
  return r;
}

Rat pow(const Rat& base, unsigned long exp) {
  return Rat(pow_ui(base.num(), exp), pow_ui(base.den(), exp));
}

Rat pow4_inv(unsigned long exp) { return Rat(mpz_class(1), mpz_class(1) << (2 * exp)); }

Frac::Frac(mpz_class n, mpz_class d) : num(std::move(n)), den(std::move(d)) {
  if (sgn(den) == 0) throw Error(Errc::invalid_argument, "zero denominator");
  if (sgn(den) < 0) {
    num = -num;
    den = -den;
  }
}

int cmp(const Frac& a, const Rat& b) {
  const int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  mpz_class l = a.num * b.den();
  mpz_class r = b.num() * a.den;
  return cmp(l, r);
}

int cmp(const Frac& a, const Frac& b) {
  const int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  mpz_class l = a.num * b.den;
  mpz_class r = b.num * a.den;
  return cmp(l, r);
}

Frac operator+(const Frac& a, const Frac& b) {
  if (a.den == b.den) return Frac(a.num + b.num, a.den);
  return Frac(a.num * b.den + b.num * a.den, a.den * b.den);
}

Frac operator-(const Frac& a, const Frac& b) {
  if (a.den == b.den) return Frac(a.num - b.num, a.den);
  return Frac(a.num * b.den - b.num * a.den, a.den * b.den);
}

Frac operator*(const Frac& a, const Frac& b) { return Frac(a.num * b.num, a.den * b.den); }

Frac operator/(const Frac& a, const Frac& b) {
  if (b.is_zero()) throw Error(Errc::invalid_argument, "division by zero");
  return Frac(a.num * b.den, a.den * b.num);
}

}  // namespace qbiject
