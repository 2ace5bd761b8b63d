#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls the validator or the DFA compiler under test.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sketch/constraint/dfa.hpp"
#include "sketch/constraint/regex.hpp"
#include "sketch/json/text.hpp"
#include "sketch/json/value.hpp"
#include "sketch/util/rng.hpp"

namespace oracle {

using nj = nlohmann::json;

inline nj to_nj(const sketch::json::Value& v) { return nj::parse(sketch::json::serialize(v)); }

inline bool nj_is_integer(const nj& v) {
  if (v.is_number_integer()) return true;
  if (!v.is_number_float()) return false;
  const double d = v.get<double>();
  return std::isfinite(d) && std::floor(d) == d;
}

// Brute-force semantic check of the supported keyword subset, read straight off
// the schema JSON.
inline bool semantic_valid(const nj& v, const nj& s) {
  if (s.contains("enum")) {
    bool hit = false;
    for (const auto& m : s["enum"]) hit = hit || m == v;
    if (!hit) return false;
  }
  if (!s.contains("type")) return true;
  const std::string t = s["type"];
  if (t == "null") return v.is_null();
  if (t == "boolean") return v.is_boolean();
  if (t == "string") return v.is_string();
  if (t == "number") return v.is_number();
  if (t == "integer") return nj_is_integer(v);
  if (t == "array") {
    if (!v.is_array()) return false;
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) return false;
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) return false;
    if (s.contains("items")) {
      for (const auto& e : v) {
        if (!semantic_valid(e, s["items"])) return false;
      }
    }
    return true;
  }
  if (t == "object") {
    if (!v.is_object()) return false;
    if (s.contains("required")) {
      for (const auto& r : s["required"]) {
        if (!v.contains(r.get<std::string>())) return false;
      }
    }
    if (s.contains("properties")) {
      for (const auto& [k, sub] : s["properties"].items()) {
        if (v.contains(k) && !semantic_valid(v[k], sub)) return false;
      }
    }
    return true;
  }
  return false;
}

// Values assembled from a scalar pool: the scalars, arrays of length 0..2 over
// the pool, and objects over keys {a, b} with pool values (depth <= 2).
inline std::vector<nj> pool_values(const std::vector<nj>& pool) {
  std::vector<nj> out(pool.begin(), pool.end());
  out.push_back(nj::array());
  for (const auto& x : pool) {
    out.push_back(nj::array({x}));
    for (const auto& y : pool) out.push_back(nj::array({x, y}));
  }
  std::vector<std::optional<nj>> slot = {std::nullopt};
  for (const auto& x : pool) slot.push_back(x);
  for (const auto& a : slot) {
    for (const auto& b : slot) {
      nj o = nj::object();
      if (a) o["a"] = *a;
      if (b) o["b"] = *b;
      out.push_back(o);
    }
  }
  return out;
}

// Schemas of depth <= 2 over the supported keywords; enums are drawn from the pool.
inline std::vector<nj> pool_schemas(const std::vector<nj>& pool) {
  std::vector<nj> leaves;
  for (const char* t : {"string", "number", "integer", "boolean", "null"}) leaves.push_back({{"type", t}});
  for (unsigned mask = 1; mask < (1u << pool.size()); ++mask) {
    nj e = nj::array();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask & (1u << i)) e.push_back(pool[i]);
    }
    leaves.push_back({{"enum", e}});
  }
  std::vector<nj> out = leaves;
  for (const auto& item : leaves) {
    for (int lo = -1; lo <= 1; ++lo) {
      for (int hi = -1; hi <= 2; ++hi) {
        if (lo >= 0 && hi >= 0 && lo > hi) continue;
        nj s = {{"type", "array"}, {"items", item}};
        if (lo >= 0) s["minItems"] = lo;
        if (hi >= 0) s["maxItems"] = hi;
        out.push_back(s);
      }
    }
  }
  for (const auto& pa : leaves) {
    for (const auto& pb : leaves) {
      for (int req = 0; req < 4; ++req) {
        nj s = {{"type", "object"}, {"properties", {{"a", pa}, {"b", pb}}}};
        nj r = nj::array();
        if (req & 1) r.push_back("a");
        if (req & 2) r.push_back("b");
        s["required"] = r;
        out.push_back(s);
      }
    }
  }
  return out;
}

inline const std::vector<std::vector<nj>>& scalar_pools() {
  static const std::vector<std::vector<nj>> pools = {
      {nj(1), nj("a"), nj(true)},
      {nj(2.5), nj(nullptr), nj("person")},
      {nj(0), nj(-3), nj(false)},
  };
  return pools;
}

// Backtracking matcher over the regex AST: the set of end offsets reachable
// from `pos`, memoized per (node, pos).
class Matcher {
 public:
  explicit Matcher(std::string text) : text_(std::move(text)) {}

  bool full_match(const sketch::constraint::Regex& r) {
    const auto ends = match(r.get(), 0);
    return ends.count(text_.size()) != 0;
  }

 private:
  using Node = sketch::constraint::RegexNode;

  const std::set<std::size_t>& match(const Node* n, std::size_t pos) {
    const auto key = std::make_pair(n, pos);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::set<std::size_t> out;
    switch (n->type) {
      case Node::Type::Empty:
        out.insert(pos);
        break;
      case Node::Type::Literal:
        if (text_.compare(pos, n->literal.size(), n->literal) == 0 && pos + n->literal.size() <= text_.size()) {
          out.insert(pos + n->literal.size());
        }
        break;
      case Node::Type::Class:
        if (pos < text_.size() && n->bytes.test(static_cast<unsigned char>(text_[pos]))) out.insert(pos + 1);
        break;
      case Node::Type::Concat: {
        std::set<std::size_t> cur = {pos};
        for (const auto& c : n->children) {
          std::set<std::size_t> next;
          for (auto p : cur) {
            const auto& e = match(c.get(), p);
            next.insert(e.begin(), e.end());
          }
          cur = std::move(next);
          if (cur.empty()) break;
        }
        out = std::move(cur);
        break;
      }
      case Node::Type::Alternation:
        for (const auto& c : n->children) {
          const auto& e = match(c.get(), pos);
          out.insert(e.begin(), e.end());
        }
        break;
      case Node::Type::Repeat: {
        const Node* child = n->children.front().get();
        std::set<std::size_t> cur = {pos};
        std::set<std::size_t> seen;
        for (std::uint32_t k = 0;; ++k) {
          if (k >= n->min) out.insert(cur.begin(), cur.end());
          if ((n->max && k >= *n->max) || cur.empty()) break;
          std::set<std::size_t> next;
          for (auto p : cur) {
            for (auto e : match(child, p)) {
              // Past the minimum, revisiting an offset adds nothing new.
              if (k + 1 >= n->min && !seen.insert(e).second) continue;
              next.insert(e);
            }
          }
          cur = std::move(next);
        }
        break;
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

  std::string text_;
  std::map<std::pair<const Node*, std::size_t>, std::set<std::size_t>> memo_;
};

inline bool regex_matches(const sketch::constraint::Regex& r, const std::string& text) {
  return Matcher(text).full_match(r);
}

// Random walks through a trimmed DFA. Past `soft_cap` bytes the walk only takes
// bytes that move closer to an accepting state, so it always ends.
class DfaWalker {
 public:
  explicit DfaWalker(const sketch::constraint::Dfa& dfa) : dfa_(dfa), dist_(dfa.num_states(), kFar) {
    std::vector<std::vector<sketch::constraint::StateId>> preds(dfa.num_states());
    for (sketch::constraint::StateId s = 0; s < dfa.num_states(); ++s) {
      for (unsigned char b : dfa.live_bytes(s)) preds[dfa.next(s, b)].push_back(s);
    }
    std::deque<sketch::constraint::StateId> queue;
    for (sketch::constraint::StateId s = 0; s < dfa.num_states(); ++s) {
      if (dfa.is_accepting(s)) {
        dist_[s] = 0;
        queue.push_back(s);
      }
    }
    while (!queue.empty()) {
      const auto s = queue.front();
      queue.pop_front();
      for (auto p : preds[s]) {
        if (dist_[p] == kFar) {
          dist_[p] = dist_[s] + 1;
          queue.push_back(p);
        }
      }
    }
  }

  std::string walk(sketch::util::Rng& rng, std::size_t soft_cap = 64, double stop = 0.25) const {
    std::string out;
    auto s = dfa_.start();
    for (;;) {
      if (dfa_.is_accepting(s) && (out.size() >= soft_cap || rng.chance(stop))) return out;
      auto live = dfa_.live_bytes(s);
      if (live.empty()) return out;
      if (out.size() >= soft_cap) {
        std::vector<unsigned char> closer;
        for (auto b : live) {
          if (dist_[dfa_.next(s, b)] < dist_[s]) closer.push_back(b);
        }
        live = std::move(closer);
      }
      const unsigned char b = live[rng.below(live.size())];
      out.push_back(static_cast<char>(b));
      s = dfa_.next(s, b);
    }
  }

  std::size_t distance(sketch::constraint::StateId s) const { return dist_[s]; }

 private:
  static constexpr std::size_t kFar = static_cast<std::size_t>(-1);
  const sketch::constraint::Dfa& dfa_;
  std::vector<std::size_t> dist_;
};

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs a shell command, capturing stdout.
inline RunResult run(const std::string& command) {
  RunResult r;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return r;
  char buf[65536];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace oracle
