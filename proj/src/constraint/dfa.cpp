#include "sketch/constraint/dfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>
#include <utility>

namespace sketch::constraint {

Dfa::Dfa(StateId start, std::size_t num_classes, std::array<std::uint16_t, 256> byte_class,
         std::vector<StateId> transitions, std::vector<std::uint8_t> accepting)
    : start_(start),
      num_classes_(num_classes),
      byte_class_(byte_class),
      transitions_(std::move(transitions)),
      accepting_(std::move(accepting)) {}

std::optional<StateId> Dfa::walk(StateId s, std::string_view bytes) const {
  for (char c : bytes) {
    s = next(s, static_cast<unsigned char>(c));
    if (s == kNoState) return std::nullopt;
  }
  return s;
}

bool Dfa::accepts(std::string_view bytes) const {
  auto end = walk(start_, bytes);
  return end && is_accepting(*end);
}

std::vector<unsigned char> Dfa::live_bytes(StateId s) const {
  std::vector<unsigned char> out;
  for (unsigned b = 0; b < 256; ++b) {
    if (next(s, static_cast<unsigned char>(b)) != kNoState) out.push_back(static_cast<unsigned char>(b));
  }
  return out;
}

namespace {

struct NodeKeyHash {
  std::size_t operator()(const std::pair<const RegexNode*, std::uint32_t>& k) const {
    return std::hash<const void*>()(k.first) ^ (static_cast<std::size_t>(k.second) * 0x9E3779B97F4A7C15ULL);
  }
};

struct StateSetHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto x : v) h = (h ^ x) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

struct Nfa {
  std::vector<std::vector<std::uint32_t>> eps;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges;  // (byte set, target)
  std::vector<ByteSet> sets;
  std::unordered_map<ByteSet, std::uint32_t> set_index;
  std::uint32_t final_state = 0;
  std::size_t cap = 0;

  std::uint32_t add_state() {
    if (eps.size() >= cap) throw StateBlowupError(cap);
    eps.emplace_back();
    edges.emplace_back();
    return static_cast<std::uint32_t>(eps.size() - 1);
  }

  std::uint32_t intern(const ByteSet& s) {
    auto [it, inserted] = set_index.emplace(s, static_cast<std::uint32_t>(sets.size()));
    if (inserted) sets.push_back(s);
    return it->second;
  }
};

// Builds right to left: build(node, next) returns the entry state of a fragment
// that matches `node` and then continues at `next`. Memoizing on (node, next)
// turns shared AST nodes with a shared continuation into shared NFA fragments.
class NfaBuilder {
 public:
  explicit NfaBuilder(Nfa& nfa) : nfa_(nfa) {}

  std::uint32_t build(const RegexNode& n, std::uint32_t next) {
    const auto key = std::make_pair(&n, next);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const std::uint32_t entry = build_uncached(n, next);
    memo_.emplace(key, entry);
    return entry;
  }

 private:
  std::uint32_t build_uncached(const RegexNode& n, std::uint32_t next) {
    switch (n.type) {
      case RegexNode::Type::Empty:
        return next;
      case RegexNode::Type::Literal: {
        std::uint32_t s = next;
        for (std::size_t i = n.literal.size(); i-- > 0;) {
          ByteSet one;
          one.set(static_cast<unsigned char>(n.literal[i]));
          const std::uint32_t set = nfa_.intern(one);
          const std::uint32_t t = nfa_.add_state();
          nfa_.edges[t].emplace_back(set, s);
          s = t;
        }
        return s;
      }
      case RegexNode::Type::Class: {
        const std::uint32_t set = nfa_.intern(n.bytes);
        const std::uint32_t t = nfa_.add_state();
        nfa_.edges[t].emplace_back(set, next);
        return t;
      }
      case RegexNode::Type::Concat: {
        std::uint32_t s = next;
        for (std::size_t i = n.children.size(); i-- > 0;) s = build(*n.children[i], s);
        return s;
      }
      case RegexNode::Type::Alternation: {
        std::vector<std::uint32_t> entries;
        for (const auto& c : n.children) entries.push_back(build(*c, next));
        const std::uint32_t t = nfa_.add_state();
        nfa_.eps[t] = std::move(entries);
        return t;
      }
      case RegexNode::Type::Repeat: {
        const RegexNode& child = *n.children.front();
        std::uint32_t entry;
        if (!n.max) {
          const std::uint32_t loop = nfa_.add_state();
          const std::uint32_t body = build(child, loop);
          nfa_.eps[loop] = {body, next};
          entry = loop;
        } else {
          entry = next;
          for (std::uint32_t k = n.min; k < *n.max; ++k) {
            const std::uint32_t body = build(child, entry);
            const std::uint32_t t = nfa_.add_state();
            nfa_.eps[t] = {body, next};
            entry = t;
          }
        }
        for (std::uint32_t k = 0; k < n.min; ++k) entry = build(child, entry);
        return entry;
      }
    }
    return next;
  }

  Nfa& nfa_;
  std::unordered_map<std::pair<const RegexNode*, std::uint32_t>, std::uint32_t, NodeKeyHash> memo_;
};

struct ByteClasses {
  std::array<std::uint16_t, 256> of_byte{};
  std::size_t count = 1;
  std::vector<std::vector<std::uint16_t>> of_set;  // classes covered by each NFA byte set
};

ByteClasses partition_bytes(const std::vector<ByteSet>& sets) {
  ByteClasses bc;
  for (const auto& s : sets) {
    std::map<std::pair<std::uint16_t, bool>, std::uint16_t> remap;
    std::array<std::uint16_t, 256> next{};
    for (unsigned b = 0; b < 256; ++b) {
      auto key = std::make_pair(bc.of_byte[b], s.test(b));
      auto [it, inserted] = remap.emplace(key, static_cast<std::uint16_t>(remap.size()));
      next[b] = it->second;
    }
    bc.of_byte = next;
    bc.count = remap.size();
  }
  bc.of_set.resize(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<bool> seen(bc.count, false);
    for (unsigned b = 0; b < 256; ++b) {
      if (sets[i].test(b) && !seen[bc.of_byte[b]]) {
        seen[bc.of_byte[b]] = true;
        bc.of_set[i].push_back(bc.of_byte[b]);
      }
    }
  }
  return bc;
}

struct RawDfa {
  std::size_t num_classes = 0;
  std::vector<StateId> trans;
  std::vector<std::uint8_t> accepting;
  StateId start = 0;

  std::size_t size() const { return accepting.size(); }
};

RawDfa determinize(const Nfa& nfa, std::uint32_t entry, const ByteClasses& bc, std::size_t cap) {
  const std::size_t k = bc.count;
  std::vector<std::uint32_t> stamp(nfa.eps.size(), 0);
  std::uint32_t epoch = 0;
  std::vector<std::uint32_t> stack;

  auto closure = [&](const std::vector<std::uint32_t>& seeds) {
    ++epoch;
    std::vector<std::uint32_t> out;
    stack.assign(seeds.begin(), seeds.end());
    while (!stack.empty()) {
      const std::uint32_t s = stack.back();
      stack.pop_back();
      if (stamp[s] == epoch) continue;
      stamp[s] = epoch;
      if (!nfa.edges[s].empty() || s == nfa.final_state) out.push_back(s);
      for (auto t : nfa.eps[s]) {
        if (stamp[t] != epoch) stack.push_back(t);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  RawDfa d;
  d.num_classes = k;
  std::unordered_map<std::vector<std::uint32_t>, StateId, StateSetHash> ids;
  std::vector<std::vector<std::uint32_t>> sets;

  auto intern = [&](std::vector<std::uint32_t> set) {
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    if (sets.size() >= cap) throw StateBlowupError(cap);
    const auto id = static_cast<StateId>(sets.size());
    d.accepting.push_back(std::binary_search(set.begin(), set.end(), nfa.final_state) ? 1 : 0);
    d.trans.resize(d.trans.size() + k, kNoState);
    ids.emplace(set, id);
    sets.push_back(std::move(set));
    return id;
  };

  d.start = intern(closure({entry}));
  std::vector<std::vector<std::uint32_t>> buckets(k);
  std::vector<std::uint16_t> touched;
  for (std::size_t cur = 0; cur < sets.size(); ++cur) {
    touched.clear();
    for (auto s : sets[cur]) {
      for (const auto& [set, target] : nfa.edges[s]) {
        for (auto c : bc.of_set[set]) {
          if (buckets[c].empty()) touched.push_back(c);
          buckets[c].push_back(target);
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto c : touched) {
      const StateId t = intern(closure(buckets[c]));
      d.trans[cur * k + c] = t;
      buckets[c].clear();
    }
  }
  return d;
}

// Drops states that cannot reach an accepting state.
RawDfa trim(const RawDfa& d) {
  const std::size_t n = d.size();
  const std::size_t k = d.num_classes;
  std::vector<std::vector<StateId>> rev(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t c = 0; c < k; ++c) {
      const StateId t = d.trans[s * k + c];
      if (t != kNoState) rev[t].push_back(static_cast<StateId>(s));
    }
  }
  std::vector<std::uint8_t> live(n, 0);
  std::vector<StateId> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (d.accepting[s]) {
      live[s] = 1;
      stack.push_back(static_cast<StateId>(s));
    }
  }
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (auto p : rev[s]) {
      if (!live[p]) {
        live[p] = 1;
        stack.push_back(p);
      }
    }
  }
  RawDfa out;
  out.num_classes = k;
  if (!live[d.start]) {
    out.accepting = {0};
    out.trans.assign(k, kNoState);
    out.start = 0;
    return out;
  }
  std::vector<StateId> remap(n, kNoState);
  for (std::size_t s = 0; s < n; ++s) {
    if (live[s]) {
      remap[s] = static_cast<StateId>(out.accepting.size());
      out.accepting.push_back(d.accepting[s]);
    }
  }
  out.trans.assign(out.accepting.size() * k, kNoState);
  for (std::size_t s = 0; s < n; ++s) {
    if (!live[s]) continue;
    for (std::size_t c = 0; c < k; ++c) {
      const StateId t = d.trans[s * k + c];
      if (t != kNoState && live[t]) out.trans[remap[s] * k + c] = remap[t];
    }
  }
  out.start = remap[d.start];
  return out;
}

// Hopcroft partition refinement. Returns the block id of every state.
std::vector<std::uint32_t> hopcroft_blocks(const RawDfa& d) {
  const std::size_t n = d.size();
  const std::size_t k = d.num_classes;
  const auto dead = static_cast<StateId>(n);
  const std::size_t total = n + 1;
  auto delta = [&](std::size_t s, std::size_t c) -> StateId {
    if (s == dead) return dead;
    const StateId t = d.trans[s * k + c];
    return t == kNoState ? dead : t;
  };

  // Predecessors grouped by target: (pred, class) pairs in CSR layout.
  std::vector<std::uint32_t> offset(total + 1, 0);
  for (std::size_t s = 0; s < total; ++s) {
    for (std::size_t c = 0; c < k; ++c) ++offset[delta(s, c) + 1];
  }
  for (std::size_t i = 0; i < total; ++i) offset[i + 1] += offset[i];
  std::vector<std::pair<std::uint32_t, std::uint16_t>> preds(offset[total]);
  {
    std::vector<std::uint32_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t s = 0; s < total; ++s) {
      for (std::size_t c = 0; c < k; ++c) {
        preds[fill[delta(s, c)]++] = {static_cast<std::uint32_t>(s), static_cast<std::uint16_t>(c)};
      }
    }
  }

  std::vector<std::uint32_t> elems;
  elems.reserve(total);
  for (std::size_t s = 0; s < n; ++s) {
    if (d.accepting[s]) elems.push_back(static_cast<std::uint32_t>(s));
  }
  const std::size_t n_accepting = elems.size();
  for (std::size_t s = 0; s < total; ++s) {
    if (s == dead || !d.accepting[s]) elems.push_back(static_cast<std::uint32_t>(s));
  }
  std::vector<std::uint32_t> loc(total), block_of(total);
  for (std::size_t i = 0; i < total; ++i) loc[elems[i]] = static_cast<std::uint32_t>(i);

  std::vector<std::uint32_t> first, end, marked;
  std::vector<std::uint8_t> in_work;
  std::vector<std::uint32_t> work;
  auto new_block = [&](std::uint32_t f, std::uint32_t e) {
    const auto id = static_cast<std::uint32_t>(first.size());
    first.push_back(f);
    end.push_back(e);
    marked.push_back(0);
    in_work.push_back(0);
    for (std::uint32_t i = f; i < e; ++i) block_of[elems[i]] = id;
    return id;
  };
  auto push = [&](std::uint32_t b) {
    if (!in_work[b]) {
      in_work[b] = 1;
      work.push_back(b);
    }
  };
  if (n_accepting > 0) push(new_block(0, static_cast<std::uint32_t>(n_accepting)));
  push(new_block(static_cast<std::uint32_t>(n_accepting), static_cast<std::uint32_t>(total)));

  std::vector<std::vector<std::uint32_t>> buckets(k);
  std::vector<std::uint16_t> classes_hit;
  std::vector<std::uint32_t> touched;
  std::vector<std::uint32_t> splitter;
  while (!work.empty()) {
    const std::uint32_t a = work.back();
    work.pop_back();
    in_work[a] = 0;
    splitter.assign(elems.begin() + first[a], elems.begin() + end[a]);
    classes_hit.clear();
    for (auto s : splitter) {
      for (std::uint32_t i = offset[s]; i < offset[s + 1]; ++i) {
        const auto [p, c] = preds[i];
        if (buckets[c].empty()) classes_hit.push_back(c);
        buckets[c].push_back(p);
      }
    }
    std::sort(classes_hit.begin(), classes_hit.end());
    for (auto c : classes_hit) {
      touched.clear();
      for (auto p : buckets[c]) {
        const std::uint32_t y = block_of[p];
        const std::uint32_t boundary = first[y] + marked[y];
        if (loc[p] < boundary) continue;
        if (marked[y] == 0) touched.push_back(y);
        const std::uint32_t other = elems[boundary];
        std::swap(elems[loc[p]], elems[boundary]);
        loc[other] = loc[p];
        loc[p] = boundary;
        ++marked[y];
      }
      buckets[c].clear();
      for (auto y : touched) {
        const std::uint32_t size = end[y] - first[y];
        if (marked[y] == size) {
          marked[y] = 0;
          continue;
        }
        const std::uint32_t split_end = first[y] + marked[y];
        const std::uint32_t z = new_block(first[y], split_end);
        first[y] = split_end;
        marked[y] = 0;
        if (in_work[y]) {
          push(z);
        } else if (end[z] - first[z] <= end[y] - first[y]) {
          push(z);
        } else {
          push(y);
        }
      }
    }
  }
  block_of.pop_back();  // dead state
  return block_of;
}

// Renumbers in BFS order from the start state, merging states of the same block.
Dfa finalize(const RawDfa& d, const std::vector<std::uint32_t>& block_of, const ByteClasses& bc) {
  const std::size_t k = d.num_classes;
  std::unordered_map<std::uint32_t, StateId> new_id;
  std::vector<StateId> representative;
  std::deque<StateId> queue;
  auto visit = [&](StateId s) {
    auto [it, inserted] = new_id.emplace(block_of[s], static_cast<StateId>(representative.size()));
    if (inserted) {
      representative.push_back(s);
      queue.push_back(s);
    }
    return it->second;
  };
  visit(d.start);
  std::vector<StateId> trans;
  std::vector<std::uint8_t> accepting;
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    accepting.push_back(d.accepting[s]);
    const std::size_t row = trans.size();
    trans.resize(row + k, kNoState);
    for (std::size_t c = 0; c < k; ++c) {
      const StateId t = d.trans[s * k + c];
      if (t != kNoState) trans[row + c] = visit(t);
    }
  }
  return Dfa(0, k, bc.of_byte, std::move(trans), std::move(accepting));
}

}  // namespace

Dfa compile_regex(const Regex& regex, const CompileOptions& options) {
  Nfa nfa;
  nfa.cap = options.max_states * 4;
  nfa.final_state = nfa.add_state();
  NfaBuilder builder(nfa);
  const std::uint32_t entry = builder.build(*regex, nfa.final_state);

  const ByteClasses bc = partition_bytes(nfa.sets);
  const RawDfa trimmed = trim(determinize(nfa, entry, bc, options.max_states));
  std::vector<std::uint32_t> blocks;
  if (options.minimize) {
    blocks = hopcroft_blocks(trimmed);
  } else {
    blocks.resize(trimmed.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] = static_cast<std::uint32_t>(i);
  }
  return finalize(trimmed, blocks, bc);
}

}  // namespace sketch::constraint
