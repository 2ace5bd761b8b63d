#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sketch/constraint/vocabulary.hpp"
#include "sketch/errors.hpp"
#include "sketch/json/value.hpp"

namespace sketch::gen {

using constraint::TokenId;
using constraint::Vocabulary;

class BackendError : public Error {
 public:
  using Error::Error;
};

struct Capabilities {
  bool scored = false;    // next-token scores, required by strict mode
  bool complete = false;  // whole-text completion
  bool concurrent_safe = true;
};

struct CompletionRequest {
  std::string prompt;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  std::size_t max_tokens = 512;
};

class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual std::string name() const = 0;
  virtual Capabilities capabilities() const = 0;

  /// One score (logit) per token of `vocab` for the position after
  /// prompt + generated. Throws BackendError when unsupported.
  virtual std::vector<double> scored(const Vocabulary& vocab, std::span<const TokenId> prompt,
                                     std::span<const TokenId> generated) const;
  /// Throws BackendError when unsupported or on transport failure.
  virtual std::string complete(const CompletionRequest& request) const;
};

/// Every token gets the same score: masked sampling is uniform over allowed tokens.
class UniformBackend : public ModelBackend {
 public:
  std::string name() const override { return "mock_uniform"; }
  Capabilities capabilities() const override { return {.scored = true, .complete = false}; }
  std::vector<double> scored(const Vocabulary& vocab, std::span<const TokenId> prompt,
                             std::span<const TokenId> generated) const override;
};

/// Canned responses chosen by substring match on the prompt. The longest
/// matching `match` wins (first one on ties); `fallback` applies otherwise.
class ScriptedBackend : public ModelBackend {
 public:
  struct Rule {
    std::string match;
    std::string response;
  };

  ScriptedBackend(std::vector<Rule> rules, std::optional<std::string> fallback);
  /// `{"rules": [{"match": "...", "response": ...}], "default": ...}`; a response
  /// that is not a string is used as its compact JSON text.
  static ScriptedBackend from_json(const json::Value& doc);
  static ScriptedBackend load(const std::filesystem::path& path);

  std::string name() const override { return "scripted"; }
  Capabilities capabilities() const override { return {.scored = true, .complete = true}; }
  /// Tokens that continue the response score by their length (so greedy decoding
  /// follows the longest match); EOS scores once the response is complete. A
  /// response that parses as JSON is scored in its compact form, the only form
  /// strict decoding can emit.
  std::vector<double> scored(const Vocabulary& vocab, std::span<const TokenId> prompt,
                             std::span<const TokenId> generated) const override;
  std::string complete(const CompletionRequest& request) const override;

  /// Throws BackendError when nothing matches and there is no fallback.
  const std::string& response_for(std::string_view prompt) const;

 private:
  const std::string& scoring_target(std::string_view prompt) const;

  std::vector<Rule> rules_;
  std::optional<std::string> fallback_;
  std::map<std::string, std::string, std::less<>> compact_;  // response -> compact JSON text
};

struct HttpConfig {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string model = "default";
  std::string api_key;   // sent as a bearer token when non-empty
  std::chrono::seconds timeout{60};
  unsigned retries = 2;  // extra tries after a 5xx or transport error
};

/// OpenAI-compatible chat completions. Completion only, so free mode only.
class HttpBackend : public ModelBackend {
 public:
  explicit HttpBackend(HttpConfig config);
  std::string name() const override { return "http"; }
  Capabilities capabilities() const override { return {.scored = false, .complete = true}; }
  std::string complete(const CompletionRequest& request) const override;

 private:
  HttpConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace sketch::gen
