#include "sketch/json/value.hpp"

#include <cstdlib>
#include <limits>

namespace sketch::json {

namespace {

constexpr std::int64_t kExponentCap = std::int64_t{1} << 60;

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

Number Number::from_int(std::int64_t v) {
  Number n;
  if (v == 0) return n;
  n.negative_ = v < 0;
  // Work in unsigned space so INT64_MIN survives negation.
  std::uint64_t mag = n.negative_ ? std::uint64_t(0) - static_cast<std::uint64_t>(v)
                                  : static_cast<std::uint64_t>(v);
  n.digits_ = std::to_string(mag);
  while (!n.digits_.empty() && n.digits_.back() == '0') {
    n.digits_.pop_back();
    ++n.exponent_;
  }
  return n;
}

std::optional<Number> Number::from_lexeme(std::string_view text) {
  std::size_t i = 0;
  Number n;
  bool negative = false;
  if (i < text.size() && text[i] == '-') {
    negative = true;
    ++i;
  }
  if (i >= text.size() || !is_digit(text[i])) return std::nullopt;
  std::string mantissa;
  if (text[i] == '0') {
    ++i;
  } else {
    while (i < text.size() && is_digit(text[i])) mantissa.push_back(text[i++]);
  }
  std::int64_t frac_len = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    if (i >= text.size() || !is_digit(text[i])) return std::nullopt;
    while (i < text.size() && is_digit(text[i])) {
      mantissa.push_back(text[i++]);
      ++frac_len;
    }
  }
  std::int64_t exp = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) exp_negative = text[i++] == '-';
    if (i >= text.size() || !is_digit(text[i])) return std::nullopt;
    while (i < text.size() && is_digit(text[i])) {
      if (exp < kExponentCap) exp = exp * 10 + (text[i] - '0');
      ++i;
    }
    if (exp_negative) exp = -exp;
  }
  if (i != text.size()) return std::nullopt;

  std::size_t lead = 0;
  while (lead < mantissa.size() && mantissa[lead] == '0') ++lead;
  mantissa.erase(0, lead);
  std::int64_t exponent = exp - frac_len;
  while (!mantissa.empty() && mantissa.back() == '0') {
    mantissa.pop_back();
    ++exponent;
  }
  if (mantissa.empty()) return n;
  n.negative_ = negative;
  n.digits_ = std::move(mantissa);
  n.exponent_ = exponent;
  return n;
}

std::optional<std::int64_t> Number::as_int64() const {
  if (!is_integer()) return std::nullopt;
  if (is_zero()) return 0;
  if (static_cast<std::int64_t>(digits_.size()) + exponent_ > 19) return std::nullopt;
  unsigned __int128 acc = 0;
  for (char c : digits_) acc = acc * 10 + static_cast<unsigned>(c - '0');
  for (std::int64_t k = 0; k < exponent_; ++k) acc *= 10;
  const unsigned __int128 limit =
      negative_ ? static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max()) + 1
                : static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max());
  if (acc > limit) return std::nullopt;
  if (negative_) return static_cast<std::int64_t>(-static_cast<__int128>(acc));
  return static_cast<std::int64_t>(acc);
}

double Number::as_double() const { return std::strtod(to_string().c_str(), nullptr); }

std::string Number::to_string() const {
  if (is_zero()) return "0";
  std::string out = negative_ ? "-" : "";
  const auto n = static_cast<std::int64_t>(digits_.size());
  const std::int64_t point = n + exponent_;  // digits before the decimal point
  if (exponent_ >= 0 && point <= 100) {
    out += digits_;
    out.append(static_cast<std::size_t>(exponent_), '0');
  } else if (exponent_ < 0 && point > 0) {
    out += digits_.substr(0, static_cast<std::size_t>(point));
    out += '.';
    out += digits_.substr(static_cast<std::size_t>(point));
  } else if (exponent_ < 0 && point > -6) {
    out += "0.";
    out.append(static_cast<std::size_t>(-point), '0');
    out += digits_;
  } else {
    out += digits_[0];
    if (n > 1) {
      out += '.';
      out += digits_.substr(1);
    }
    out += 'e';
    out += std::to_string(point - 1);
  }
  return out;
}

const Value* Object::find(std::string_view key) const {
  for (const auto& m : members_) {
    if (m.first == key) return &m.second;
  }
  return nullptr;
}

Value* Object::find(std::string_view key) {
  for (auto& m : members_) {
    if (m.first == key) return &m.second;
  }
  return nullptr;
}

void Object::set(std::string key, Value value) {
  if (Value* v = find(key)) {
    *v = std::move(value);
    return;
  }
  members_.emplace_back(std::move(key), std::move(value));
}

bool Object::insert(std::string key, Value value) {
  if (contains(key)) return false;
  members_.emplace_back(std::move(key), std::move(value));
  return true;
}

bool Object::erase(std::string_view key) {
  for (auto it = members_.begin(); it != members_.end(); ++it) {
    if (it->first == key) {
      members_.erase(it);
      return true;
    }
  }
  return false;
}

bool operator==(const Object& a, const Object& b) { return a.members_ == b.members_; }

const char* kind_name(Kind kind) {
  switch (kind) {
    case Kind::Null: return "null";
    case Kind::Boolean: return "boolean";
    case Kind::Number: return "number";
    case Kind::String: return "string";
    case Kind::Array: return "array";
    case Kind::Object: return "object";
  }
  return "?";
}

const Value* Value::get(std::string_view key) const {
  if (!is_object()) return nullptr;
  return as_object().find(key);
}

bool semantically_equal(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Array: {
      const auto& x = a.as_array();
      const auto& y = b.as_array();
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!semantically_equal(x[i], y[i])) return false;
      }
      return true;
    }
    case Kind::Object: {
      const auto& x = a.as_object();
      const auto& y = b.as_object();
      if (x.size() != y.size()) return false;
      for (const auto& [k, v] : x) {
        const Value* other = y.find(k);
        if (other == nullptr || !semantically_equal(v, *other)) return false;
      }
      return true;
    }
    default:
      return a == b;
  }
}

}  // namespace sketch::json
