#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "sketch/constraint/regex.hpp"
#include "sketch/errors.hpp"

namespace sketch::constraint {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

class StateBlowupError : public Error {
 public:
  explicit StateBlowupError(std::size_t cap)
      : Error("automaton exceeds the state cap of " + std::to_string(cap) + " states") {}
};

struct CompileOptions {
  std::size_t max_states = std::size_t{1} << 20;
  bool minimize = true;
};

/// Deterministic, trimmed automaton over bytes. Bytes are grouped into classes
/// that no transition distinguishes; a missing transition means reject.
class Dfa {
 public:
  std::size_t num_states() const { return accepting_.size(); }
  StateId start() const { return start_; }
  bool is_accepting(StateId s) const { return accepting_[s] != 0; }

  std::size_t num_classes() const { return num_classes_; }
  std::uint16_t byte_class(unsigned char b) const { return byte_class_[b]; }

  StateId next(StateId s, unsigned char b) const {
    return transitions_[static_cast<std::size_t>(s) * num_classes_ + byte_class_[b]];
  }
  StateId next_by_class(StateId s, std::size_t cls) const {
    return transitions_[static_cast<std::size_t>(s) * num_classes_ + cls];
  }

  /// Runs the automaton from `s`; nullopt as soon as a byte is rejected.
  std::optional<StateId> walk(StateId s, std::string_view bytes) const;
  bool accepts(std::string_view bytes) const;

  /// Bytes with an outgoing transition from `s`, ascending.
  std::vector<unsigned char> live_bytes(StateId s) const;

  /// Raw construction; used by the compiler.
  Dfa(StateId start, std::size_t num_classes, std::array<std::uint16_t, 256> byte_class,
      std::vector<StateId> transitions, std::vector<std::uint8_t> accepting);

 private:
  StateId start_;
  std::size_t num_classes_;
  std::array<std::uint16_t, 256> byte_class_;
  std::vector<StateId> transitions_;  // num_states * num_classes
  std::vector<std::uint8_t> accepting_;
};

/// Thompson-style construction (sharing AST nodes), subset construction,
/// trimming and Hopcroft minimization. States are numbered in BFS order from
/// the start state, so equal inputs give identical automata.
Dfa compile_regex(const Regex& regex, const CompileOptions& options = {});

}  // namespace sketch::constraint
