#include "sketch/constraint/regex.hpp"

#include <cstdio>
#include <stdexcept>

namespace sketch::constraint {

namespace re {

Regex empty() {
  static const Regex node = std::make_shared<const RegexNode>();
  return node;
}

Regex literal(std::string bytes) {
  if (bytes.empty()) return empty();
  auto n = std::make_shared<RegexNode>();
  n->type = RegexNode::Type::Literal;
  n->literal = std::move(bytes);
  return n;
}

Regex byte_class(const ByteSet& bytes) {
  auto n = std::make_shared<RegexNode>();
  n->type = RegexNode::Type::Class;
  n->bytes = bytes;
  return n;
}

Regex byte_range(unsigned char lo, unsigned char hi) {
  ByteSet s;
  for (unsigned b = lo; b <= hi; ++b) s.set(b);
  return byte_class(s);
}

Regex concat(std::vector<Regex> parts) {
  std::vector<Regex> kept;
  for (auto& p : parts) {
    if (p->type != RegexNode::Type::Empty) kept.push_back(std::move(p));
  }
  if (kept.empty()) return empty();
  if (kept.size() == 1) return kept.front();
  auto n = std::make_shared<RegexNode>();
  n->type = RegexNode::Type::Concat;
  n->children = std::move(kept);
  return n;
}

Regex alt(std::vector<Regex> options) {
  if (options.empty()) throw std::invalid_argument("alternation needs at least one option");
  if (options.size() == 1) return options.front();
  auto n = std::make_shared<RegexNode>();
  n->type = RegexNode::Type::Alternation;
  n->children = std::move(options);
  return n;
}

Regex repeat(Regex child, std::uint32_t min, std::optional<std::uint32_t> max) {
  if (max && min > *max) throw std::invalid_argument("repetition min exceeds max");
  if (max && *max == 0) return empty();
  if (max && min == 1 && *max == 1) return child;
  auto n = std::make_shared<RegexNode>();
  n->type = RegexNode::Type::Repeat;
  n->children.push_back(std::move(child));
  n->min = min;
  n->max = max;
  return n;
}

}  // namespace re

namespace {

bool is_meta(unsigned char c) {
  switch (c) {
    case '\\': case '(': case ')': case '[': case ']': case '{': case '}':
    case '|': case '*': case '+': case '?': case '.': case '^': case '$': case '-':
      return true;
    default:
      return false;
  }
}

void append_byte(std::string& out, unsigned char c) {
  if (c >= 0x20 && c < 0x7F) {
    if (is_meta(c)) out.push_back('\\');
    out.push_back(static_cast<char>(c));
  } else {
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02X", c);
    out += buf;
  }
}

void write(std::string& out, const RegexNode& n, bool group) {
  switch (n.type) {
    case RegexNode::Type::Empty:
      out += "()";
      break;
    case RegexNode::Type::Literal:
      if (group && n.literal.size() > 1) out.push_back('(');
      for (char c : n.literal) append_byte(out, static_cast<unsigned char>(c));
      if (group && n.literal.size() > 1) out.push_back(')');
      break;
    case RegexNode::Type::Class: {
      out.push_back('[');
      for (unsigned b = 0; b < 256;) {
        if (!n.bytes.test(b)) {
          ++b;
          continue;
        }
        unsigned e = b;
        while (e + 1 < 256 && n.bytes.test(e + 1)) ++e;
        append_byte(out, static_cast<unsigned char>(b));
        if (e > b) {
          out.push_back('-');
          append_byte(out, static_cast<unsigned char>(e));
        }
        b = e + 1;
      }
      out.push_back(']');
      break;
    }
    case RegexNode::Type::Concat:
      if (group) out.push_back('(');
      for (const auto& c : n.children) write(out, *c, c->type == RegexNode::Type::Alternation);
      if (group) out.push_back(')');
      break;
    case RegexNode::Type::Alternation:
      out.push_back('(');
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i > 0) out.push_back('|');
        write(out, *n.children[i], false);
      }
      out.push_back(')');
      break;
    case RegexNode::Type::Repeat:
      write(out, *n.children.front(), true);
      if (n.min == 0 && !n.max) {
        out.push_back('*');
      } else if (n.min == 1 && !n.max) {
        out.push_back('+');
      } else if (n.min == 0 && n.max == 1u) {
        out.push_back('?');
      } else {
        out += "{" + std::to_string(n.min) + "," + (n.max ? std::to_string(*n.max) : "") + "}";
      }
      break;
  }
}

}  // namespace

std::string to_pattern(const Regex& regex) {
  std::string out;
  write(out, *regex, false);
  return out;
}

}  // namespace sketch::constraint
