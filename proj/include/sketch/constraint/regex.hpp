#pragma once

#include <bitset>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sketch::constraint {

using ByteSet = std::bitset<256>;

struct RegexNode;

/// Nodes are immutable and may be shared; the AST is a DAG. The compiler
/// exploits the sharing, so reuse a node instead of rebuilding it.
using Regex = std::shared_ptr<const RegexNode>;

struct RegexNode {
  enum class Type { Empty, Literal, Class, Concat, Alternation, Repeat };

  Type type = Type::Empty;
  std::string literal;          // Literal
  ByteSet bytes;                // Class
  std::vector<Regex> children;  // Concat, Alternation; Repeat has exactly one
  std::uint32_t min = 0;        // Repeat
  std::optional<std::uint32_t> max;
};

namespace re {

Regex empty();
Regex literal(std::string bytes);
Regex byte_class(const ByteSet& bytes);
Regex byte_range(unsigned char lo, unsigned char hi);
Regex concat(std::vector<Regex> parts);
Regex alt(std::vector<Regex> options);
/// `child{min,max}`; no max means unbounded. Throws std::invalid_argument when min > max.
Regex repeat(Regex child, std::uint32_t min, std::optional<std::uint32_t> max);
inline Regex optional(Regex child) { return repeat(std::move(child), 0, 1); }
inline Regex star(Regex child) { return repeat(std::move(child), 0, std::nullopt); }
inline Regex plus(Regex child) { return repeat(std::move(child), 1, std::nullopt); }

}  // namespace re

/// Human-readable pattern text (PCRE-like, bytes outside printable ASCII as \xHH).
std::string to_pattern(const Regex& regex);

}  // namespace sketch::constraint
