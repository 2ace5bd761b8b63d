#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <thread>

#include "sketch/generation/backend.hpp"
#include "sketch/json/text.hpp"

namespace sketch::gen {

HttpBackend::HttpBackend(HttpConfig config) : config_(std::move(config)) {
  const std::string& url = config_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw BackendError("base URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string HttpBackend::complete(const CompletionRequest& request) const {
  json::Object message;
  message.set("role", "user");
  message.set("content", request.prompt);
  json::Object body;
  body.set("model", config_.model);
  body.set("messages", json::Array{json::Value(std::move(message))});
  body.set("temperature", *json::Number::from_lexeme(std::to_string(request.temperature)));
  body.set("max_tokens", static_cast<std::int64_t>(request.max_tokens));
  body.set("seed", static_cast<std::int64_t>(request.seed & 0x7FFFFFFFFFFFFFFFULL));
  const std::string payload = json::serialize(json::Value(std::move(body)));

  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  std::string last_error;
  for (unsigned attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(250 << std::min(attempt, 5u)));
    auto res = client.Post(path_prefix_ + "/chat/completions", headers, payload, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server returned HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError("server returned HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    try {
      const json::Value doc = json::parse(res->body);
      const json::Value* choices = doc.get("choices");
      if (!choices || !choices->is_array() || choices->as_array().empty()) throw BackendError("response has no choices");
      const json::Value* msg = choices->as_array().front().get("message");
      const json::Value* content = msg ? msg->get("content") : nullptr;
      if (!content || !content->is_string()) throw BackendError("first choice has no message content");
      return content->as_string();
    } catch (const ParseError& e) {
      throw BackendError(std::string("response body is not JSON: ") + e.what());
    }
  }
  throw BackendError(last_error + " (after " + std::to_string(config_.retries + 1) + " tries)");
}

}  // namespace sketch::gen
