#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sketch::json {

/// Decimal number with arbitrary precision: value = (-1)^negative * digits * 10^exponent.
/// Stored normalized (no leading or trailing zeros in `digits`, zero has empty digits),
/// so equality is numeric equality and 1, 1.0 and 1e0 compare equal.
class Number {
 public:
  Number() = default;

  static Number from_int(std::int64_t v);
  /// Parses a JSON number lexeme. Returns nullopt if it does not follow the JSON grammar.
  static std::optional<Number> from_lexeme(std::string_view text);

  bool is_zero() const { return digits_.empty(); }
  bool is_negative() const { return negative_; }
  bool is_integer() const { return exponent_ >= 0; }
  std::optional<std::int64_t> as_int64() const;
  double as_double() const;

  /// Canonical spelling; integers print as plain digits.
  std::string to_string() const;

  friend bool operator==(const Number&, const Number&) = default;

 private:
  bool negative_ = false;
  std::string digits_;
  std::int64_t exponent_ = 0;
};

class Value;

using Array = std::vector<Value>;

/// Object with insertion order preserved and unique member names.
class Object {
 public:
  using Member = std::pair<std::string, Value>;

  Object() = default;

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  const Value* find(std::string_view key) const;
  Value* find(std::string_view key);
  bool contains(std::string_view key) const { return find(key) != nullptr; }

  /// Appends or replaces.
  void set(std::string key, Value value);
  /// Appends; returns false (and leaves the object untouched) if the key exists.
  bool insert(std::string key, Value value);
  bool erase(std::string_view key);

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  auto begin() { return members_.begin(); }
  auto end() { return members_.end(); }

  friend bool operator==(const Object& a, const Object& b);

 private:
  std::vector<Member> members_;
};

enum class Kind { Null, Boolean, Number, String, Array, Object };

const char* kind_name(Kind kind);

class Value {
 public:
  Value() = default;
  Value(std::nullptr_t) {}
  Value(bool b) : data_(b) {}
  Value(Number n) : data_(std::move(n)) {}
  Value(int v) : data_(Number::from_int(v)) {}
  Value(std::int64_t v) : data_(Number::from_int(v)) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(std::string_view s) : data_(std::string(s)) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(Array a) : data_(std::move(a)) {}
  Value(Object o) : data_(std::move(o)) {}

  Kind kind() const { return static_cast<Kind>(data_.index()); }

  bool is_null() const { return kind() == Kind::Null; }
  bool is_bool() const { return kind() == Kind::Boolean; }
  bool is_number() const { return kind() == Kind::Number; }
  bool is_string() const { return kind() == Kind::String; }
  bool is_array() const { return kind() == Kind::Array; }
  bool is_object() const { return kind() == Kind::Object; }

  bool as_bool() const { return std::get<bool>(data_); }
  const Number& as_number() const { return std::get<Number>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }
  const Array& as_array() const { return std::get<Array>(data_); }
  Array& as_array() { return std::get<Array>(data_); }
  const Object& as_object() const { return std::get<Object>(data_); }
  Object& as_object() { return std::get<Object>(data_); }

  /// Member lookup; null when this is not an object or the member is absent.
  const Value* get(std::string_view key) const;

  /// Structural equality: member order matters, numbers compare numerically.
  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::variant<std::nullptr_t, bool, Number, std::string, Array, Object> data_;
};

/// JSON-Schema instance equality: like operator== but object member order is ignored.
bool semantically_equal(const Value& a, const Value& b);

}  // namespace sketch::json
