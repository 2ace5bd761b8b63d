#pragma once

#include <string>
#include <vector>

#include "sketch/json/schema.hpp"
#include "sketch/json/value.hpp"

namespace sketch::json {

struct Violation {
  std::string path;     // e.g. "$.items[2].name"
  std::string keyword;  // type, required, enum, minItems, maxItems
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
};

struct ValidateOptions {
  /// Ignore keywords the validator does not model instead of throwing UnsupportedSchemaError.
  bool lenient = false;
};

/// Checks `value` against `schema`. Object members not listed in `properties` are allowed.
ValidationReport validate(const Value& value, const SchemaDoc& schema, ValidateOptions options = {});

/// Renders violations one per line ("$.tag: enum: ...").
std::string format_report(const ValidationReport& report);

}  // namespace sketch::json
