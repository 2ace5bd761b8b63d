#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sketch/constraint/dfa.hpp"
#include "sketch/constraint/token_mask.hpp"
#include "sketch/constraint/vocabulary.hpp"
#include "sketch/errors.hpp"
#include "sketch/generation/backend.hpp"
#include "sketch/json/schema.hpp"
#include "sketch/json/validate.hpp"
#include "sketch/json/value.hpp"
#include "sketch/prompt/packager.hpp"
#include "sketch/task/instance.hpp"
#include "sketch/util/rng.hpp"

namespace sketch::gen {

enum class Mode { Strict, Free };
const char* mode_name(Mode mode);

struct GenerationConfig {
  Mode mode = Mode::Strict;
  std::size_t max_tokens = 4096;
  unsigned attempts = 3;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  bool lenient_parse = false;
  prompt::PackageOptions package;
};

struct GenerationOutcome {
  std::string raw_text;
  std::optional<json::Value> value;  // present iff raw_text parsed
  json::ValidationReport report;     // valid only if value is present and conforms
  unsigned attempts_used = 0;
  Mode mode_used = Mode::Free;

  bool valid() const { return report.valid(); }
};

class LengthExceededError : public Error {
 public:
  explicit LengthExceededError(std::size_t max_tokens)
      : Error("no accepting end of sequence within " + std::to_string(max_tokens) + " tokens") {}
};

class FormatFailureError : public Error {
 public:
  explicit FormatFailureError(GenerationOutcome last)
      : Error("no valid output after " + std::to_string(last.attempts_used) + " attempt(s)"),
        last_(std::move(last)) {}
  const GenerationOutcome& last_outcome() const { return last_; }

 private:
  GenerationOutcome last_;
};

struct DecodeConfig {
  std::size_t max_tokens = 4096;
  double temperature = 1.0;
  std::uint64_t seed = 0;
};

/// Draws a token from `candidates` by softmax over their scores at `temperature`.
/// Temperature 0 picks the highest score, lowest id on ties. Scores of tokens
/// outside `candidates` play no part.
TokenId sample_token(std::span<const double> scores, std::span<const TokenId> candidates, double temperature,
                     util::Rng& rng);

/// Masked decoding: every emitted token is allowed by `index` at its state and the
/// sequence ends with EOS at an accepting state (EOS included in the result).
/// Throws LengthExceededError when that takes more than max_tokens steps.
std::vector<TokenId> constrained_decode(const ModelBackend& backend, const Vocabulary& vocab,
                                        const constraint::TokenMaskIndex& index,
                                        std::span<const TokenId> prompt_tokens, const DecodeConfig& config);

/// Unmasked sampling over the whole vocabulary until EOS or max_tokens.
std::vector<TokenId> free_decode(const ModelBackend& backend, const Vocabulary& vocab,
                                 std::span<const TokenId> prompt_tokens, const DecodeConfig& config);

/// The legality test: parse as JSON, then validate against the format.
/// lenient_parse also accepts the first complete JSON value embedded in text.
/// Keywords the validator does not model are ignored.
GenerationOutcome validate_outcome(std::string_view raw_text, const json::SchemaDoc& output_format,
                                   bool lenient_parse);

/// Runs generation with resampling. Compiled token masks are cached per
/// (schema hash, vocabulary hash) and shared between threads.
class GenerationEngine {
 public:
  explicit GenerationEngine(std::shared_ptr<const Vocabulary> vocab =
                                std::make_shared<const Vocabulary>(Vocabulary::byte_level()),
                            constraint::CompileOptions compile_options = {});

  const Vocabulary& vocabulary() const { return *vocab_; }

  /// Throws UnsupportedSchemaError or StateBlowupError.
  std::shared_ptr<const constraint::TokenMaskIndex> mask_index(const json::SchemaDoc& schema);

  GenerationOutcome generate(const ModelBackend& backend, const task::TaskInstance& instance,
                             std::string_view input, const GenerationConfig& config);
  /// Same policy for an already packaged prompt.
  GenerationOutcome generate_from_prompt(const ModelBackend& backend, const std::string& prompt,
                                         const json::SchemaDoc& output_format, const GenerationConfig& config);

  std::size_t cache_size() const;

 private:
  GenerationOutcome attempt(const ModelBackend& backend, const std::string& prompt,
                            const json::SchemaDoc& output_format, const GenerationConfig& config, unsigned index);

  std::shared_ptr<const Vocabulary> vocab_;
  constraint::CompileOptions compile_options_;
  mutable std::mutex cache_mutex_;
  std::map<std::string, std::shared_ptr<const constraint::TokenMaskIndex>> cache_;
  std::mutex backend_mutex_;  // held for a whole attempt when the backend is not concurrent_safe
};

}  // namespace sketch::gen
