#include "sketch/constraint/token_mask.hpp"

#include <algorithm>

#include "sketch/util/parallel.hpp"

namespace sketch::constraint {

StateId TokenMaskIndex::advance(StateId s, TokenId t) const {
  if (s >= num_states() || t >= vocab_size_) throw IllegalTokenError(s, t);
  if (t == eos_) {
    if (!is_accepting(s)) throw IllegalTokenError(s, t);
    return kTerminal;
  }
  const auto edges = transitions(s);
  auto it = std::lower_bound(edges.begin(), edges.end(), t,
                             [](const Transition& e, TokenId key) { return e.token < key; });
  if (it == edges.end() || it->token != t) throw IllegalTokenError(s, t);
  return it->dest;
}

TokenMaskIndex index_vocabulary(const Dfa& dfa, const Vocabulary& vocab, unsigned workers) {
  const std::size_t n = dfa.num_states();
  const auto& trie = vocab.trie();

  std::vector<std::vector<TokenMaskIndex::Transition>> per_state(n);
  util::parallel_for(n, workers, [&](std::size_t s) {
    auto& out = per_state[s];
    std::vector<std::pair<std::uint32_t, StateId>> stack{{0, static_cast<StateId>(s)}};
    while (!stack.empty()) {
      const auto [node, state] = stack.back();
      stack.pop_back();
      for (const auto& [byte, child] : trie[node].children) {
        const StateId next = dfa.next(state, byte);
        if (next == kNoState) continue;
        for (auto t : trie[child].tokens) out.push_back({t, next});
        if (!trie[child].children.empty()) stack.emplace_back(child, next);
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.token < b.token; });
  });

  TokenMaskIndex index;
  index.start_ = dfa.start();
  index.eos_ = vocab.eos();
  index.vocab_size_ = vocab.size();
  index.words_ = (vocab.size() + 63) / 64;
  index.accepting_.resize(n);
  index.masks_.assign(n * index.words_, 0);
  index.offsets_.assign(n + 1, 0);
  for (std::size_t s = 0; s < n; ++s) index.offsets_[s + 1] = index.offsets_[s] + per_state[s].size();
  index.edges_.reserve(index.offsets_[n]);
  for (std::size_t s = 0; s < n; ++s) {
    const auto state = static_cast<StateId>(s);
    index.accepting_[s] = dfa.is_accepting(state) ? 1 : 0;
    auto* words = index.masks_.data() + s * index.words_;
    for (const auto& e : per_state[s]) {
      words[e.token / 64] |= std::uint64_t{1} << (e.token % 64);
      index.edges_.push_back(e);
    }
    if (index.accepting_[s]) words[index.eos_ / 64] |= std::uint64_t{1} << (index.eos_ % 64);
  }
  return index;
}

}  // namespace sketch::constraint
