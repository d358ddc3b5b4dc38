#include "qbiject/enumeration.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "qbiject/error.hpp"

namespace qbiject {

std::string enum_kind_name(EnumKind k) { return k == EnumKind::lex ? "lex" : "lex_desc"; }

EnumKind enum_kind_from_name(const std::string& s) {
  if (s == "lex") return EnumKind::lex;
  if (s == "lex_desc") return EnumKind::lex_desc;
  throw Error(Errc::parse_error, "unknown enumeration kind '" + s + "'");
}

YEnumeration::YEnumeration(EnumKind kind, std::vector<Rat> prefix)
    : kind_(kind), prefix_(std::move(prefix)) {
  std::set<Rat> seen;
  for (const auto& r : prefix_) {
    if (!r.in_unit()) throw Error(Errc::bad_enumeration, "prefix entry " + r.str() + " outside [0,1]");
    if (!seen.insert(r).second) throw Error(Errc::bad_enumeration, "prefix repeats " + r.str());
  }
  cache_ = prefix_;
}

Rat YEnumeration::base_next() {
  while (pending_.empty()) {
    ++den_;
    if (den_ == 1) {
      pending_ = {Rat(1), Rat(0)};
      continue;
    }
    for (std::uint64_t p = 1; p < den_; ++p) {
      if (std::gcd(p, den_) == 1) {
        pending_.emplace_back(mpz_class(static_cast<unsigned long>(p)),
                              mpz_class(static_cast<unsigned long>(den_)));
      }
    }
    // pending_ is consumed from the back.
    if (kind_ == EnumKind::lex) std::reverse(pending_.begin(), pending_.end());
  }
  Rat r = pending_.back();
  pending_.pop_back();
  return r;
}

const Rat& YEnumeration::at(std::size_t n) {
  while (cache_.size() <= n) {
    Rat r = base_next();
    if (std::find(prefix_.begin(), prefix_.end(), r) != prefix_.end()) continue;
    cache_.push_back(std::move(r));
  }
  return cache_[n];
}

}  // namespace qbiject
