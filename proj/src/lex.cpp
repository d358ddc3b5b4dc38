#include "qbiject/lex.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <vector>

#include "qbiject/error.hpp"

namespace qbiject {

namespace {

// Prefix sums F[K] = farey_count(K), grown geometrically on demand.
class TotientTable {
 public:
  std::uint64_t farey(std::uint64_t K) {
    ensure(K);
    std::lock_guard lock(mu_);
    return prefix_[K];
  }

  // Least K with farey(K) > n.
  std::uint64_t height_for_index(std::uint64_t n) {
    for (;;) {
      {
        std::lock_guard lock(mu_);
        if (!prefix_.empty() && prefix_.back() > n) {
          auto it = std::upper_bound(prefix_.begin(), prefix_.end(), n);
          return static_cast<std::uint64_t>(it - prefix_.begin());
        }
      }
      std::uint64_t size;
      {
        std::lock_guard lock(mu_);
        size = prefix_.size();
      }
      if (size > kLexDenominatorCap) {
        throw Error(Errc::invalid_argument, "enumeration index beyond the denominator cap");
      }
      ensure(std::min(kLexDenominatorCap, std::max<std::uint64_t>(64, 2 * size)));
    }
  }

 private:
  void ensure(std::uint64_t K) {
    if (K > kLexDenominatorCap) {
      throw Error(Errc::invalid_argument, "denominator beyond the totient table cap");
    }
    std::lock_guard lock(mu_);
    if (K < prefix_.size()) return;
    const std::uint64_t n = std::min(kLexDenominatorCap, std::max<std::uint64_t>(K, 2 * prefix_.size()));
    std::vector<std::uint32_t> phi(n + 1);
    std::iota(phi.begin(), phi.end(), 0u);
    for (std::uint64_t p = 2; p <= n; ++p) {
      if (phi[p] != p) continue;
      for (std::uint64_t m = p; m <= n; m += p) phi[m] -= phi[m] / static_cast<std::uint32_t>(p);
    }
    prefix_.assign(n + 1, 0);
    prefix_[0] = 1;  // the rational 0
    for (std::uint64_t k = 1; k <= n; ++k) prefix_[k] = prefix_[k - 1] + phi[k];
  }

  std::mutex mu_;
  std::vector<std::uint64_t> prefix_;
};

TotientTable& table() {
  static TotientTable t;
  return t;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

int lex_cmp(const Rat& a, const Rat& b) {
  const int c = cmp(a.height(), b.height());
  if (c != 0) return c < 0 ? -1 : 1;
  return a < b ? -1 : (b < a ? 1 : 0);
}

std::uint64_t euler_phi(std::uint64_t k) {
  std::uint64_t r = k;
  for (auto p : prime_factors(k)) r -= r / p;
  return r;
}

std::uint64_t farey_count(std::uint64_t K) {
  if (K == 0) throw Error(Errc::invalid_argument, "farey_count needs K >= 1");
  return table().farey(K);
}

std::uint64_t coprime_count(std::uint64_t n, std::uint64_t x) {
  const auto ps = prime_factors(n);
  const std::size_t r = ps.size();
  std::int64_t total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    std::uint64_t d = 1;
    int bits = 0;
    for (std::size_t i = 0; i < r; ++i) {
      if (mask >> i & 1) {
        d *= ps[i];
        ++bits;
      }
    }
    const auto term = static_cast<std::int64_t>(x / d);
    total += (bits % 2 == 0) ? term : -term;
  }
  return static_cast<std::uint64_t>(total);
}

Rat lex_enumerate(std::uint64_t n) {
  if (n == 0) return Rat(0);
  if (n == 1) return Rat(1);
  const std::uint64_t K = table().height_for_index(n);
  const std::uint64_t rank = n - table().farey(K - 1) + 1;  // 1-based among numerators of K
  // Least p with coprime_count(K, p) >= rank.
  std::uint64_t lo = 1, hi = K - 1;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (coprime_count(K, mid) >= rank) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return Rat(mpz_class(static_cast<unsigned long>(lo)), mpz_class(static_cast<unsigned long>(K)));
}

std::optional<std::uint64_t> lex_index(const Rat& q) {
  if (!q.in_unit()) throw Error(Errc::invalid_argument, "lex_index needs q in [0,1]");
  if (q.is_zero()) return 0;
  if (q == Rat(1)) return 1;
  if (q.den() > kLexDenominatorCap) return std::nullopt;
  const std::uint64_t K = q.den().get_ui();
  const std::uint64_t p = q.num().get_ui();
  return table().farey(K - 1) + coprime_count(K, p) - 1;
}

LexCursor::LexCursor(std::uint64_t start) : index_(start) {
  if (start <= 1) {
    num_ = start;
    den_ = 1;
    return;
  }
  const Rat x = lex_enumerate(start);
  num_ = x.num().get_ui();
  den_ = x.den().get_ui();
}

Rat LexCursor::next() {
  Rat out(mpz_class(static_cast<unsigned long>(num_)), mpz_class(static_cast<unsigned long>(den_)));
  ++index_;
  advance_numerator();
  return out;
}

void LexCursor::advance_numerator() {
  if (den_ == 1) {
    if (num_ == 0) {
      num_ = 1;
      return;
    }
    den_ = 2;
    num_ = 1;
    return;
  }
  for (;;) {
    ++num_;
    if (num_ >= den_) {
      ++den_;
      num_ = 1;
    }
    if (std::gcd(num_, den_) == 1) return;
  }
}

}  // namespace qbiject
