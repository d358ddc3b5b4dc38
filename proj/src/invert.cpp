#include "qbiject/invert.hpp"

#include <vector>

#include "qbiject/error.hpp"

namespace qbiject {

namespace {
constexpr unsigned long kNewtonGap = 256;
}

IncreasingCertificate IncreasingCertificate::from_lower_bound(const Rat& lb) {
  if (lb.sign() <= 0) throw Error(Errc::not_monotone, "derivative lower bound " + lb.str() + " is not positive");
  return {Kind::derivative_lower_bound, lb};
}

std::optional<IncreasingCertificate> IncreasingCertificate::by_sturm(const Poly& p) {
  const Poly d = derivative(p);
  if (d.is_zero()) return std::nullopt;
  // Roots of p' on the closed interval minus those at the endpoints.
  int interior = count_roots_closed(d, Rat(0), Rat(1));
  if (d.eval(Rat(0)).is_zero()) --interior;
  if (d.eval(Rat(1)).is_zero()) --interior;
  if (interior > 0) return std::nullopt;
  if (d.eval(Rat(1, 2)).sign() <= 0) {
    return std::nullopt;
  }
  return IncreasingCertificate{Kind::sturm, Rat(0)};
}

unsigned long level_for_width(const mpz_class& width_den) {
  if (width_den < 2) throw Error(Errc::invalid_argument, "width_den must be at least 2");
  return static_cast<unsigned long>(bit_length(width_den - 1));
}

MonotoneInverter::MonotoneInverter(IntPoly f, const Rat& y)
    : f_(std::move(f)), yn_(y.num()), yd_(y.den()) {
  const int lo = cmp_at(0, 0);
  const int hi = cmp_at(1, 0);
  if (lo > 0 || hi < 0) {
    throw Error(Errc::not_bracketed, "target " + y.str() + " outside [p(0), p(1)]");
  }
  if (lo == 0) exact_ = Rat(0);
  else if (hi == 0) exact_ = Rat(1);
}

int MonotoneInverter::cmp_at(const mpz_class& X, unsigned long k) const {
  const mpz_class N = f_.eval_dyadic_num(X, k);
  const unsigned long d = f_.a.empty() ? 0 : static_cast<unsigned long>(f_.degree());
  mpz_class lhs = yd_ * N;
  mpz_class rhs = (yn_ * f_.L) << (k * d);
  return cmp(lhs, rhs) < 0 ? -1 : (lhs == rhs ? 0 : 1);
}

std::pair<Rat, Rat> MonotoneInverter::bracket_at(unsigned long K) {
  if (exact_) return {*exact_, *exact_};
  if (K < k_) {
    mpz_class X = X_ >> (k_ - K);
    return {Rat(X, mpz_class(1) << K), Rat(X + 1, mpz_class(1) << K)};
  }
  if (K > k_) {
    if (K - k_ > kNewtonGap && f_.degree() >= 1) {
      newton_to(K);
    } else {
      bisect_to(K);
    }
  }
  if (exact_) return {*exact_, *exact_};
  return {Rat(X_, mpz_class(1) << k_), Rat(X_ + 1, mpz_class(1) << k_)};
}

void MonotoneInverter::bisect_to(unsigned long K) {
  while (k_ < K && !exact_) {
    mpz_class mid = (X_ << 1) + 1;
    const int s = cmp_at(mid, k_ + 1);
    ++k_;
    if (s == 0) {
      exact_ = Rat(mid, mpz_class(1) << k_);
      X_ = mid;
    } else if (s < 0) {
      X_ = mid;
    } else {
      X_ <<= 1;
    }
  }
}

void MonotoneInverter::newton_to(unsigned long K) {
  // Warm up by bisection so the Newton basin is reached.
  bisect_to(std::min<unsigned long>(K, k_ + 48));
  if (exact_) return;
  std::vector<unsigned long> levels;
  for (unsigned long t = K; t > k_ + 32; t = t / 2 + 16) levels.push_back(t);
  const unsigned long d = static_cast<unsigned long>(f_.degree());
  for (auto it = levels.rbegin(); it != levels.rend() && !exact_; ++it) {
    const unsigned long L = *it;
    mpz_class X = (X_ << (L - k_)) + (mpz_class(1) << (L - k_ - 1));
    const mpz_class N = f_.eval_dyadic_num(X, L);
    const mpz_class Nd = f_.eval_dyadic_deriv_num(X, L);
    if (sgn(Nd) > 0) {
      const mpz_class num = yd_ * N - ((yn_ * f_.L) << (L * d));
      const mpz_class den = yd_ * Nd;
      mpz_class step;
      mpz_fdiv_q(step.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      X -= step;
    }
    const mpz_class top = (mpz_class(1) << L) - 1;
    if (sgn(X) < 0) X = 0;
    if (X > top) X = top;
    if (settle(X, L)) return;
    X_ = X;
    k_ = L;
  }
  bisect_to(K);
}

// Moves X to floor(xbar 2^k); records an exact hit. Returns true on exact hit.
bool MonotoneInverter::settle(mpz_class& X, unsigned long k) {
  auto exact_at = [&](const mpz_class& Z) {
    exact_ = Rat(Z, mpz_class(1) << k);
    X_ = Z;
    k_ = k;
    return true;
  };
  int s = cmp_at(X, k);
  if (s == 0) return exact_at(X);
  if (s > 0) {
    // Gallop down to some G with f(G) < y, then binary search in (G, X].
    mpz_class step = 1, hi = X, lo;
    for (;;) {
      lo = hi - step;
      if (sgn(lo) < 0) lo = 0;
      const int t = cmp_at(lo, k);
      if (t == 0) return exact_at(lo);
      if (t < 0) break;
      hi = lo;
      step <<= 1;
    }
    while (hi - lo > 1) {
      mpz_class mid = (lo + hi) >> 1;
      const int t = cmp_at(mid, k);
      if (t == 0) return exact_at(mid);
      (t < 0 ? lo : hi) = mid;
    }
    X = lo;
    return false;
  }
  // s < 0: gallop up to some G with f(G) > y.
  mpz_class step = 1, lo = X, hi;
  const mpz_class limit = mpz_class(1) << k;
  for (;;) {
    hi = lo + step;
    if (hi > limit) hi = limit;
    const int t = cmp_at(hi, k);
    if (t == 0) return exact_at(hi);
    if (t > 0) break;
    lo = hi;
    step <<= 1;
  }
  while (hi - lo > 1) {
    mpz_class mid = (lo + hi) >> 1;
    const int t = cmp_at(mid, k);
    if (t == 0) return exact_at(mid);
    (t < 0 ? lo : hi) = mid;
  }
  X = lo;
  return false;
}

std::pair<Rat, Rat> monotone_invert(const Poly& p, const Rat& y, const mpz_class& width_den,
                                    const IncreasingCertificate* cert) {
  if (cert == nullptr) throw Error(Errc::not_monotone, "no monotonicity certificate supplied");
  const unsigned long K = level_for_width(width_den);
  MonotoneInverter inv(IntPoly::from(p), y);
  return inv.bracket_at(K);
}

}  // namespace qbiject
