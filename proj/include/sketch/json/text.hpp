#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "sketch/json/value.hpp"

namespace sketch::json {

/// Parses a single JSON document. Leading and trailing whitespace is tolerated,
/// member order is preserved. Throws ParseError / DuplicateKeyError.
Value parse(std::string_view text);

struct PrefixParse {
  Value value;
  std::size_t end = 0;  // offset one past the value
};

/// Parses one JSON value starting at `offset` and ignores what follows it.
PrefixParse parse_prefix(std::string_view text, std::size_t offset = 0);

/// Compact form: no whitespace, order preserved, minimal string escaping.
std::string serialize(const Value& value);

/// Indented form for humans. Re-parses to the same value as serialize().
std::string serialize_pretty(const Value& value, int indent = 2);

/// Appends the canonical JSON string literal for `s` (quotes included).
void append_quoted(std::string& out, std::string_view s);

}  // namespace sketch::json
