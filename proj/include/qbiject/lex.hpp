#pragma once

#include <cstdint>
#include <optional>

#include "qbiject/rat.hpp"

namespace qbiject {

/// Largest denominator the totient table will grow to (about 32 MB of prefix sums).
inline constexpr std::uint64_t kLexDenominatorCap = std::uint64_t{1} << 22;

/// Order by height, ties by value. Arguments must lie in [0, 1].
int lex_cmp(const Rat& a, const Rat& b);

std::uint64_t euler_phi(std::uint64_t k);

/// #{q in [0,1] : H(q) <= K} = 1 + sum_{k<=K} phi(k). Exact for any K up to the cap.
std::uint64_t farey_count(std::uint64_t K);

/// x_n of the lexicographic enumeration.
Rat lex_enumerate(std::uint64_t n);

/// Inverse of lex_enumerate; empty when the denominator exceeds the table cap.
std::optional<std::uint64_t> lex_index(const Rat& q);

/// Streams x_0, x_1, ... in order without random access cost.
class LexCursor {
 public:
  LexCursor() = default;
  /// Starts so that the next call to next() yields x_start.
  explicit LexCursor(std::uint64_t start);

  Rat next();
  std::uint64_t next_index() const { return index_; }
  std::uint64_t current_height() const { return den_; }

 private:
  void advance_numerator();

  std::uint64_t index_ = 0;
  std::uint64_t den_ = 1;
  std::uint64_t num_ = 0;
};

/// #{1 <= p <= x : gcd(p, n) = 1}.
std::uint64_t coprime_count(std::uint64_t n, std::uint64_t x);

}  // namespace qbiject
