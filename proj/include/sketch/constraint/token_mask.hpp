#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "sketch/constraint/dfa.hpp"
#include "sketch/constraint/vocabulary.hpp"
#include "sketch/errors.hpp"

namespace sketch::constraint {

/// Returned by advance() after EOS at an accepting state.
inline constexpr StateId kTerminal = kNoState - 1;

class IllegalTokenError : public Error {
 public:
  IllegalTokenError(StateId state, TokenId token)
      : Error("token " + std::to_string(token) + " is not allowed in state " + std::to_string(state)),
        state_(state),
        token_(token) {}
  StateId state() const { return state_; }
  TokenId token() const { return token_; }

 private:
  StateId state_;
  TokenId token_;
};

/// A DFA joined with a vocabulary: for every state, the tokens whose whole byte
/// expansion the DFA accepts from there, and where each one leads.
class TokenMaskIndex {
 public:
  struct Transition {
    TokenId token;
    StateId dest;
  };

  std::size_t num_states() const { return accepting_.size(); }
  std::size_t vocab_size() const { return vocab_size_; }
  StateId start() const { return start_; }
  TokenId eos() const { return eos_; }
  bool is_accepting(StateId s) const { return accepting_[s] != 0; }

  bool allowed(StateId s, TokenId t) const {
    return (masks_[static_cast<std::size_t>(s) * words_ + t / 64] >> (t % 64)) & 1U;
  }
  bool eos_allowed(StateId s) const { return is_accepting(s); }
  /// Bitset over token ids, EOS included.
  std::span<const std::uint64_t> mask(StateId s) const {
    return {masks_.data() + static_cast<std::size_t>(s) * words_, words_};
  }
  /// Allowed non-EOS tokens with their destination, ascending by token id.
  std::span<const Transition> transitions(StateId s) const {
    return {edges_.data() + offsets_[s], edges_.data() + offsets_[s + 1]};
  }

  /// Destination after `t`; kTerminal for EOS at an accepting state.
  /// Throws IllegalTokenError when `t` is not allowed at `s`.
  StateId advance(StateId s, TokenId t) const;

 private:
  friend TokenMaskIndex index_vocabulary(const Dfa&, const Vocabulary&, unsigned);

  StateId start_ = 0;
  TokenId eos_ = 0;
  std::size_t vocab_size_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint8_t> accepting_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Transition> edges_;
};

/// Walks the vocabulary trie from every DFA state. States are processed in
/// parallel; the result does not depend on `workers`.
TokenMaskIndex index_vocabulary(const Dfa& dfa, const Vocabulary& vocab,
                                unsigned workers = std::thread::hardware_concurrency());

}  // namespace sketch::constraint
