#include "sketch/constraint/vocabulary.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "sketch/json/text.hpp"
#include "sketch/util/file.hpp"
#include "sketch/util/hash.hpp"

namespace sketch::constraint {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string hex_decode(std::string_view hex) {
  if (hex.size() % 2 != 0) throw VocabularyError("odd number of hex digits in \"" + std::string(hex) + "\"");
  std::string out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = hex_value(hex[i]);
    const int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) throw VocabularyError("bad hex digits in \"" + std::string(hex) + "\"");
    out.push_back(static_cast<char>(hi * 16 + lo));
  }
  return out;
}

}  // namespace

std::string decode_token_string(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out.push_back(text[i]);
      continue;
    }
    if (i + 1 < text.size() && text[i + 1] == '\\') {
      out.push_back('\\');
      ++i;
    } else if (i + 3 < text.size() && text[i + 1] == 'x') {
      out += hex_decode(text.substr(i + 2, 2));
      i += 3;
    } else {
      throw VocabularyError("bad escape in token \"" + std::string(text) + "\"");
    }
  }
  return out;
}

std::string encode_token_string(std::string_view bytes) {
  std::string out;
  for (char ch : bytes) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == '\\') {
      out += "\\\\";
    } else if (c < 0x20 || c >= 0x7F) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\x%02x", c);
      out += buf;
    } else {
      out.push_back(ch);
    }
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens, TokenId eos) : tokens_(std::move(tokens)), eos_(eos) {
  if (eos_ >= tokens_.size()) throw VocabularyError("EOS id is outside the vocabulary");
  tokens_[eos_].clear();

  std::string digest_input;
  for (TokenId id = 0; id < tokens_.size(); ++id) {
    digest_input += std::to_string(id) + ":" + std::to_string(tokens_[id].size()) + ":" + tokens_[id];
  }
  digest_input += "eos:" + std::to_string(eos_);
  hash_ = util::sha256_hex(digest_input);

  trie_.emplace_back();
  for (TokenId id = 0; id < tokens_.size(); ++id) {
    if (tokens_[id].empty()) continue;
    std::uint32_t node = 0;
    for (char ch : tokens_[id]) {
      const auto b = static_cast<unsigned char>(ch);
      auto& kids = trie_[node].children;
      auto it = std::lower_bound(kids.begin(), kids.end(), b,
                                 [](const auto& kid, unsigned char key) { return kid.first < key; });
      if (it != kids.end() && it->first == b) {
        node = it->second;
      } else {
        const auto child = static_cast<std::uint32_t>(trie_.size());
        kids.insert(it, {b, child});
        trie_.emplace_back();  // invalidates `kids`
        node = child;
      }
    }
    trie_[node].tokens.push_back(id);
  }
}

Vocabulary Vocabulary::byte_level() {
  std::vector<std::string> tokens;
  for (unsigned b = 0; b < 256; ++b) tokens.emplace_back(1, static_cast<char>(b));
  tokens.emplace_back();
  return Vocabulary(std::move(tokens), 256);
}

Vocabulary Vocabulary::from_json(const json::Value& doc) {
  if (!doc.is_object()) throw VocabularyError("vocabulary file must hold a JSON object");
  const json::Value* eos = doc.get("eos_token_id");
  if (!eos || !eos->is_number() || !eos->as_number().as_int64() || *eos->as_number().as_int64() < 0) {
    throw VocabularyError("vocabulary needs a non-negative integer \"eos_token_id\"");
  }
  const auto eos_id = static_cast<std::uint64_t>(*eos->as_number().as_int64());
  std::vector<std::pair<std::uint64_t, std::string>> entries;
  std::uint64_t max_id = eos_id;
  for (const auto& [key, id] : doc.as_object()) {
    if (key == "eos_token_id") continue;
    auto n = id.is_number() ? id.as_number().as_int64() : std::nullopt;
    if (!n || *n < 0) throw VocabularyError("token \"" + key + "\" has no valid id");
    entries.emplace_back(static_cast<std::uint64_t>(*n), decode_token_string(key));
    max_id = std::max<std::uint64_t>(max_id, *n);
  }
  if (max_id >= (std::uint64_t{1} << 31)) throw VocabularyError("token id too large");
  std::vector<std::string> tokens(max_id + 1);
  std::vector<bool> seen(max_id + 1, false);
  seen[eos_id] = true;
  for (auto& [id, bytes] : entries) {
    if (seen[id] && id != eos_id) throw VocabularyError("token id " + std::to_string(id) + " is used twice");
    seen[id] = true;
    tokens[id] = std::move(bytes);
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw VocabularyError("token ids are not dense: " + std::to_string(i) + " is missing");
  }
  return Vocabulary(std::move(tokens), static_cast<TokenId>(eos_id));
}

Vocabulary Vocabulary::from_tsv(std::string_view text) {
  std::vector<std::pair<std::uint64_t, std::string>> entries;
  std::optional<std::uint64_t> eos;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw VocabularyError("line " + std::to_string(line_no) + ": expected id<TAB>hex");
    std::uint64_t id = 0;
    try {
      std::size_t used = 0;
      id = std::stoull(line.substr(0, tab), &used);
      if (used != tab) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw VocabularyError("line " + std::to_string(line_no) + ": bad token id");
    }
    const std::string hex = line.substr(tab + 1);
    if (hex == "eos") {
      if (eos) throw VocabularyError("line " + std::to_string(line_no) + ": second EOS token");
      eos = id;
      entries.emplace_back(id, "");
    } else {
      entries.emplace_back(id, hex_decode(hex));
    }
  }
  if (!eos) throw VocabularyError("vocabulary has no EOS token");
  std::uint64_t max_id = 0;
  for (const auto& e : entries) max_id = std::max(max_id, e.first);
  if (max_id >= (std::uint64_t{1} << 31)) throw VocabularyError("token id too large");
  std::vector<std::string> tokens(max_id + 1);
  std::vector<bool> seen(max_id + 1, false);
  for (auto& [id, bytes] : entries) {
    if (seen[id]) throw VocabularyError("token id " + std::to_string(id) + " is used twice");
    seen[id] = true;
    tokens[id] = std::move(bytes);
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw VocabularyError("token ids are not dense: " + std::to_string(i) + " is missing");
  }
  return Vocabulary(std::move(tokens), static_cast<TokenId>(*eos));
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  const std::string text = util::read_file(path);
  if (path.extension() == ".tsv") return from_tsv(text);
  return from_json(json::parse(text));
}

std::vector<TokenId> Vocabulary::tokenize(std::string_view text) const {
  std::vector<TokenId> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::uint32_t node = 0;
    TokenId best = kNoToken;
    std::size_t best_len = 0;
    for (std::size_t i = pos; i < text.size(); ++i) {
      const auto b = static_cast<unsigned char>(text[i]);
      const auto& kids = trie_[node].children;
      auto it = std::lower_bound(kids.begin(), kids.end(), b,
                                 [](const auto& kid, unsigned char key) { return kid.first < key; });
      if (it == kids.end() || it->first != b) break;
      node = it->second;
      if (!trie_[node].tokens.empty()) {
        best = trie_[node].tokens.front();
        best_len = i + 1 - pos;
      }
    }
    if (best == kNoToken) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "0x%02x", static_cast<unsigned char>(text[pos]));
      throw VocabularyError(std::string("no token covers byte ") + buf + " at offset " + std::to_string(pos));
    }
    out.push_back(best);
    pos += best_len;
  }
  return out;
}

std::string Vocabulary::detokenize(std::span<const TokenId> ids) const {
  std::string out;
  for (auto id : ids) {
    if (id >= tokens_.size()) throw VocabularyError("token id " + std::to_string(id) + " is outside the vocabulary");
    out += tokens_[id];
  }
  return out;
}

}  // namespace sketch::constraint
