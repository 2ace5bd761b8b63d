#include "sketch/constraint/schema_regex.hpp"

#include "sketch/errors.hpp"
#include "sketch/json/text.hpp"
#include "sketch/json/validate.hpp"

namespace sketch::constraint {

namespace {

Regex utf8_multibyte() {
  const Regex cont = re::byte_range(0x80, 0xBF);
  return re::alt({
      re::concat({re::byte_range(0xC2, 0xDF), cont}),
      re::concat({re::literal("\xE0"), re::byte_range(0xA0, 0xBF), cont}),
      re::concat({re::byte_range(0xE1, 0xEC), cont, cont}),
      re::concat({re::literal("\xED"), re::byte_range(0x80, 0x9F), cont}),
      re::concat({re::byte_range(0xEE, 0xEF), cont, cont}),
      re::concat({re::literal("\xF0"), re::byte_range(0x90, 0xBF), cont, cont}),
      re::concat({re::byte_range(0xF1, 0xF3), cont, cont, cont}),
      re::concat({re::literal("\xF4"), re::byte_range(0x80, 0x8F), cont, cont}),
  });
}

Regex build_string() {
  ByteSet plain;
  for (unsigned b = 0x20; b <= 0x7F; ++b) plain.set(b);
  plain.reset('"');
  plain.reset('\\');
  ByteSet simple_escape;
  for (unsigned char c : std::string("\"\\/bfnrt")) simple_escape.set(c);
  ByteSet hex;
  for (unsigned char c : std::string("0123456789abcdefABCDEF")) hex.set(c);
  const Regex escape = re::concat(
      {re::literal("\\"),
       re::alt({re::byte_class(simple_escape),
                re::concat({re::literal("u"), re::repeat(re::byte_class(hex), 4, 4)})})});
  const Regex ch = re::alt({re::byte_class(plain), utf8_multibyte(), escape});
  return re::concat({re::literal("\""), re::star(ch), re::literal("\"")});
}

Regex integer_part() {
  return re::concat({re::optional(re::literal("-")),
                     re::alt({re::literal("0"),
                              re::concat({re::byte_range('1', '9'), re::star(re::byte_range('0', '9'))})})});
}

Regex build_number() {
  const Regex digits = re::plus(re::byte_range('0', '9'));
  ByteSet e;
  e.set('e');
  e.set('E');
  ByteSet sign;
  sign.set('+');
  sign.set('-');
  return re::concat({integer_part(), re::optional(re::concat({re::literal("."), digits})),
                     re::optional(re::concat({re::byte_class(e), re::optional(re::byte_class(sign)), digits}))});
}

[[noreturn]] void unsupported(const std::string& path, const std::string& what) {
  throw UnsupportedSchemaError({path + ":" + what});
}

Regex lower(const json::SchemaDoc& s, const std::string& path);

Regex lower_enum(const json::SchemaDoc& s, const std::string& path) {
  json::SchemaDoc without_enum = s;
  without_enum.enum_values.reset();
  std::vector<Regex> options;
  for (const auto& member : *s.enum_values) {
    if (json::validate(member, without_enum, {.lenient = true}).valid()) {
      options.push_back(re::literal(json::serialize(member)));
    }
  }
  if (options.empty()) unsupported(path, "enum (no member satisfies the schema)");
  return re::alt(std::move(options));
}

Regex lower_array(const json::SchemaDoc& s, const std::string& path) {
  const std::uint64_t min = s.min_items.value_or(0);
  const std::optional<std::uint64_t> max = s.max_items;
  if (max && *max == 0) return re::literal("[]");
  if (!s.items) unsupported(path, "items (array elements are unconstrained)");
  const Regex item = lower(*s.items, path + ".items");
  const Regex sep_item = re::concat({re::literal(","), item});
  auto tail = [&](std::uint64_t lo) {
    std::optional<std::uint32_t> hi;
    if (max) hi = static_cast<std::uint32_t>(*max - 1);
    return re::repeat(sep_item, static_cast<std::uint32_t>(lo), hi);
  };
  Regex body = min == 0 ? re::optional(re::concat({item, tail(0)})) : re::concat({item, tail(min - 1)});
  return re::concat({re::literal("["), body, re::literal("]")});
}

Regex lower_object(const json::SchemaDoc& s, const std::string& path) {
  const std::size_t n = s.properties.size();
  // after_first[i]: members i.. when some member was already written (each needs a comma).
  // leading[i]:     members i.. when nothing was written yet.
  std::vector<Regex> after_first(n + 1, re::empty());
  std::vector<Regex> leading(n + 1, re::empty());
  for (std::size_t k = n; k-- > 0;) {
    const auto& p = s.properties[k];
    std::string key;
    json::append_quoted(key, p.name);
    key.push_back(':');
    const Regex member = re::concat({re::literal(key), lower(*p.schema, path + "." + p.name)});
    const Regex comma_member = re::concat({re::literal(","), member});
    if (s.is_required(p.name)) {
      after_first[k] = re::concat({comma_member, after_first[k + 1]});
      leading[k] = re::concat({member, after_first[k + 1]});
    } else {
      after_first[k] = re::concat({re::optional(comma_member), after_first[k + 1]});
      leading[k] = re::alt({re::concat({member, after_first[k + 1]}), leading[k + 1]});
    }
  }
  return re::concat({re::literal("{"), leading[0], re::literal("}")});
}

Regex lower(const json::SchemaDoc& s, const std::string& path) {
  if (s.enum_values) return lower_enum(s, path);
  switch (s.kind) {
    case json::SchemaKind::Null: return re::literal("null");
    case json::SchemaKind::Boolean: return re::alt({re::literal("true"), re::literal("false")});
    case json::SchemaKind::String: return json_string_regex();
    case json::SchemaKind::Number: return json_number_regex();
    case json::SchemaKind::Integer: return json_integer_regex();
    case json::SchemaKind::Array: return lower_array(s, path);
    case json::SchemaKind::Object: return lower_object(s, path);
    case json::SchemaKind::Any:
    case json::SchemaKind::EnumOnly: break;
  }
  unsupported(path, "type (value is unconstrained)");
}

}  // namespace

Regex json_string_regex() {
  static const Regex r = build_string();
  return r;
}

Regex json_number_regex() {
  static const Regex r = build_number();
  return r;
}

Regex json_integer_regex() {
  static const Regex r = integer_part();
  return r;
}

Regex schema_to_regex(const json::SchemaDoc& schema) {
  auto keywords = json::collect_unsupported(schema);
  if (!keywords.empty()) throw UnsupportedSchemaError(std::move(keywords));
  return lower(schema, "$");
}

}  // namespace sketch::constraint
