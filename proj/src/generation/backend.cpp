#include "sketch/generation/backend.hpp"

#include "sketch/json/text.hpp"
#include "sketch/util/file.hpp"

namespace sketch::gen {

std::vector<double> ModelBackend::scored(const Vocabulary&, std::span<const TokenId>, std::span<const TokenId>) const {
  throw BackendError("backend \"" + name() + "\" does not provide token scores");
}

std::string ModelBackend::complete(const CompletionRequest&) const {
  throw BackendError("backend \"" + name() + "\" does not provide text completion");
}

std::vector<double> UniformBackend::scored(const Vocabulary& vocab, std::span<const TokenId>,
                                           std::span<const TokenId>) const {
  return std::vector<double>(vocab.size(), 0.0);
}

namespace {

std::optional<std::string> compact_form(const std::string& text) {
  try {
    return json::serialize(json::parse(text));
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

std::string response_text(const json::Value& v) {
  return v.is_string() ? v.as_string() : json::serialize(v);
}

}  // namespace

ScriptedBackend::ScriptedBackend(std::vector<Rule> rules, std::optional<std::string> fallback)
    : rules_(std::move(rules)), fallback_(std::move(fallback)) {
  auto add = [this](const std::string& response) {
    if (auto c = compact_form(response)) compact_.emplace(response, std::move(*c));
  };
  for (const auto& r : rules_) add(r.response);
  if (fallback_) add(*fallback_);
}

ScriptedBackend ScriptedBackend::from_json(const json::Value& doc) {
  if (!doc.is_object()) throw BackendError("script must be a JSON object");
  std::vector<Rule> rules;
  if (const auto* list = doc.get("rules")) {
    if (!list->is_array()) throw BackendError("script \"rules\" must be an array");
    for (const auto& r : list->as_array()) {
      const auto* match = r.get("match");
      const auto* response = r.get("response");
      if (!match || !match->is_string() || !response) {
        throw BackendError("every script rule needs a string \"match\" and a \"response\"");
      }
      rules.push_back({match->as_string(), response_text(*response)});
    }
  }
  std::optional<std::string> fallback;
  if (const auto* d = doc.get("default")) fallback = response_text(*d);
  return ScriptedBackend(std::move(rules), std::move(fallback));
}

ScriptedBackend ScriptedBackend::load(const std::filesystem::path& path) {
  return from_json(json::parse(util::read_file(path)));
}

const std::string& ScriptedBackend::response_for(std::string_view prompt) const {
  const Rule* best = nullptr;
  for (const auto& r : rules_) {
    if (prompt.find(r.match) == std::string_view::npos) continue;
    if (!best || r.match.size() > best->match.size()) best = &r;
  }
  if (best) return best->response;
  if (fallback_) return *fallback_;
  throw BackendError("scripted backend has no response for this prompt");
}

const std::string& ScriptedBackend::scoring_target(std::string_view prompt) const {
  const std::string& response = response_for(prompt);
  const auto it = compact_.find(response);
  return it == compact_.end() ? response : it->second;
}

std::vector<double> ScriptedBackend::scored(const Vocabulary& vocab, std::span<const TokenId> prompt,
                                            std::span<const TokenId> generated) const {
  std::vector<double> scores(vocab.size(), 0.0);
  const std::string& response = scoring_target(vocab.detokenize(prompt));
  const std::string so_far = vocab.detokenize(generated);
  if (so_far.size() > response.size() || response.compare(0, so_far.size(), so_far) != 0) return scores;
  const std::string_view rest = std::string_view(response).substr(so_far.size());
  if (rest.empty()) {
    scores[vocab.eos()] = 1000.0;
    return scores;
  }
  for (TokenId t = 0; t < vocab.size(); ++t) {
    const std::string& bytes = vocab.bytes(t);
    if (!bytes.empty() && rest.substr(0, bytes.size()) == bytes) scores[t] = 1000.0 + static_cast<double>(bytes.size());
  }
  return scores;
}

std::string ScriptedBackend::complete(const CompletionRequest& request) const {
  return response_for(request.prompt);
}

}  // namespace sketch::gen
