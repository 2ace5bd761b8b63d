#include "sketch/generation/engine.hpp"

#include <algorithm>
#include <cmath>

#include "sketch/constraint/schema_regex.hpp"
#include "sketch/json/text.hpp"

namespace sketch::gen {

const char* mode_name(Mode mode) { return mode == Mode::Strict ? "strict" : "free"; }

TokenId sample_token(std::span<const double> scores, std::span<const TokenId> candidates, double temperature,
                     util::Rng& rng) {
  TokenId best = candidates.front();
  for (auto t : candidates) {
    if (scores[t] > scores[best] || (scores[t] == scores[best] && t < best)) best = t;
  }
  if (temperature <= 0.0) return best;
  const double top = scores[best];
  std::vector<double> weights(candidates.size());
  double total = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    weights[i] = std::exp((scores[candidates[i]] - top) / temperature);
    total += weights[i];
  }
  double u = rng.uniform01() * total;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (u < weights[i]) return candidates[i];
    u -= weights[i];
  }
  return candidates.back();  // rounding
}

std::vector<TokenId> constrained_decode(const ModelBackend& backend, const Vocabulary& vocab,
                                        const constraint::TokenMaskIndex& index,
                                        std::span<const TokenId> prompt_tokens, const DecodeConfig& config) {
  util::Rng rng(config.seed);
  std::vector<TokenId> out;
  std::vector<TokenId> candidates;
  constraint::StateId state = index.start();
  while (out.size() < config.max_tokens) {
    candidates.clear();
    for (const auto& e : index.transitions(state)) candidates.push_back(e.token);
    if (index.eos_allowed(state)) {
      candidates.insert(std::lower_bound(candidates.begin(), candidates.end(), index.eos()), index.eos());
    }
    const std::vector<double> scores = backend.scored(vocab, prompt_tokens, out);
    if (scores.size() != vocab.size()) {
      throw BackendError("backend returned " + std::to_string(scores.size()) + " scores for a vocabulary of " +
                         std::to_string(vocab.size()));
    }
    const TokenId t = sample_token(scores, candidates, config.temperature, rng);
    out.push_back(t);
    state = index.advance(state, t);
    if (state == constraint::kTerminal) return out;
  }
  throw LengthExceededError(config.max_tokens);
}

std::vector<TokenId> free_decode(const ModelBackend& backend, const Vocabulary& vocab,
                                 std::span<const TokenId> prompt_tokens, const DecodeConfig& config) {
  util::Rng rng(config.seed);
  std::vector<TokenId> all(vocab.size());
  for (TokenId t = 0; t < vocab.size(); ++t) all[t] = t;
  std::vector<TokenId> out;
  while (out.size() < config.max_tokens) {
    const std::vector<double> scores = backend.scored(vocab, prompt_tokens, out);
    if (scores.size() != vocab.size()) {
      throw BackendError("backend returned " + std::to_string(scores.size()) + " scores for a vocabulary of " +
                         std::to_string(vocab.size()));
    }
    const TokenId t = sample_token(scores, all, config.temperature, rng);
    out.push_back(t);
    if (t == vocab.eos()) break;
  }
  return out;
}

GenerationOutcome validate_outcome(std::string_view raw_text, const json::SchemaDoc& output_format,
                                   bool lenient_parse) {
  GenerationOutcome outcome;
  outcome.raw_text = std::string(raw_text);
  std::string parse_message;
  try {
    outcome.value = json::parse(raw_text);
  } catch (const ParseError& e) {
    parse_message = e.what();
  }
  if (!outcome.value && lenient_parse) {
    for (std::size_t i = 0; i < raw_text.size() && !outcome.value; ++i) {
      if (raw_text[i] != '{' && raw_text[i] != '[') continue;
      try {
        outcome.value = json::parse_prefix(raw_text, i).value;
      } catch (const ParseError&) {
      }
    }
  }
  if (!outcome.value) {
    outcome.report.violations.push_back({"$", "json", "output is not JSON: " + parse_message});
    return outcome;
  }
  outcome.report = json::validate(*outcome.value, output_format, {.lenient = true});
  return outcome;
}

GenerationEngine::GenerationEngine(std::shared_ptr<const Vocabulary> vocab, constraint::CompileOptions compile_options)
    : vocab_(std::move(vocab)), compile_options_(compile_options) {}

std::shared_ptr<const constraint::TokenMaskIndex> GenerationEngine::mask_index(const json::SchemaDoc& schema) {
  const std::string key = json::schema_hash(schema) + "/" + vocab_->hash();
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  // Built outside the lock; a concurrent duplicate build yields an identical index.
  const constraint::Dfa dfa = constraint::compile_regex(constraint::schema_to_regex(schema), compile_options_);
  auto index = std::make_shared<const constraint::TokenMaskIndex>(constraint::index_vocabulary(dfa, *vocab_));
  std::lock_guard lock(cache_mutex_);
  return cache_.emplace(key, std::move(index)).first->second;
}

std::size_t GenerationEngine::cache_size() const {
  std::lock_guard lock(cache_mutex_);
  return cache_.size();
}

GenerationOutcome GenerationEngine::generate(const ModelBackend& backend, const task::TaskInstance& instance,
                                             std::string_view input, const GenerationConfig& config) {
  const prompt::PackagedPrompt packaged = prompt::package(instance, input, config.package);
  return generate_from_prompt(backend, packaged.text, instance.output_format(), config);
}

GenerationOutcome GenerationEngine::attempt(const ModelBackend& backend, const std::string& prompt,
                                            const json::SchemaDoc& output_format, const GenerationConfig& config,
                                            unsigned index) {
  const DecodeConfig decode{config.max_tokens, config.temperature, util::derive_seed(config.seed, index)};
  const Capabilities caps = backend.capabilities();
  std::unique_lock<std::mutex> serial(backend_mutex_, std::defer_lock);
  if (!caps.concurrent_safe) serial.lock();

  if (config.mode == Mode::Strict) {
    const auto mask = mask_index(output_format);
    const std::vector<TokenId> prompt_tokens = vocab_->tokenize(prompt);
    try {
      const std::vector<TokenId> tokens = constrained_decode(backend, *vocab_, *mask, prompt_tokens, decode);
      GenerationOutcome outcome = validate_outcome(vocab_->detokenize(tokens), output_format, false);
      outcome.mode_used = Mode::Strict;
      return outcome;
    } catch (const LengthExceededError& e) {
      GenerationOutcome outcome;
      outcome.mode_used = Mode::Strict;
      outcome.report.violations.push_back({"$", "maxTokens", e.what()});
      return outcome;
    }
  }

  std::string text;
  if (caps.complete) {
    text = backend.complete({prompt, config.temperature, decode.seed, config.max_tokens});
  } else {
    const std::vector<TokenId> prompt_tokens = vocab_->tokenize(prompt);
    text = vocab_->detokenize(free_decode(backend, *vocab_, prompt_tokens, decode));
  }
  GenerationOutcome outcome = validate_outcome(text, output_format, config.lenient_parse);
  outcome.mode_used = Mode::Free;
  return outcome;
}

GenerationOutcome GenerationEngine::generate_from_prompt(const ModelBackend& backend, const std::string& prompt,
                                                         const json::SchemaDoc& output_format,
                                                         const GenerationConfig& config) {
  if (config.attempts == 0) throw Error("attempts must be positive");
  if (config.max_tokens == 0) throw Error("max tokens must be positive");
  if (config.mode == Mode::Strict) {
    if (!backend.capabilities().scored) {
      throw BackendError("strict mode needs token scores; backend \"" + backend.name() + "\" has none");
    }
    mask_index(output_format);  // surfaces UnsupportedSchemaError before any sampling
  }
  GenerationOutcome outcome;
  for (unsigned i = 0; i < config.attempts; ++i) {
    outcome = attempt(backend, prompt, output_format, config, i);
    outcome.attempts_used = i + 1;
    if (outcome.valid()) return outcome;
  }
  throw FormatFailureError(std::move(outcome));
}

}  // namespace sketch::gen
