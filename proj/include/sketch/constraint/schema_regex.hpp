#pragma once

#include "sketch/constraint/regex.hpp"
#include "sketch/json/schema.hpp"

namespace sketch::constraint {

/// `"` (unescaped char | UTF-8 sequence | escape)* `"`, byte level.
Regex json_string_regex();
/// -?(0|[1-9][0-9]*)(\.[0-9]+)?([eE][+-]?[0-9]+)?
Regex json_number_regex();
/// -?(0|[1-9][0-9]*)
Regex json_integer_regex();

/// Lowers a schema to a regex over the compact serialization of its valid values.
/// Object members follow declaration order; optional members are optional groups;
/// undeclared members are never produced. Throws UnsupportedSchemaError for
/// unmodeled keywords and for sub-schemas that do not constrain their values
/// (no type, or arrays without items).
Regex schema_to_regex(const json::SchemaDoc& schema);

}  // namespace sketch::constraint
