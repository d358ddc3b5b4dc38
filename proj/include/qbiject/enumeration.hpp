#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbiject/rat.hpp"

namespace qbiject {

enum class EnumKind { lex, lex_desc };

std::string enum_kind_name(EnumKind k);
EnumKind enum_kind_from_name(const std::string& s);

/// A target enumeration y_0, y_1, ... of Q in [0,1]: an optional explicit prefix
/// followed by a base order with the prefix entries removed.
class YEnumeration {
 public:
  explicit YEnumeration(EnumKind kind = EnumKind::lex, std::vector<Rat> prefix = {});

  const Rat& at(std::size_t n);
  EnumKind kind() const { return kind_; }
  const std::vector<Rat>& prefix() const { return prefix_; }

 private:
  Rat base_next();

  EnumKind kind_;
  std::vector<Rat> prefix_;
  std::vector<Rat> cache_;
  std::uint64_t den_ = 0;
  std::vector<Rat> pending_;  // current height, in emission order, reversed
};

}  // namespace qbiject
