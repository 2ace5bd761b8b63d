#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sketch/errors.hpp"
#include "sketch/json/value.hpp"

namespace sketch::constraint {

using TokenId = std::uint32_t;
inline constexpr TokenId kNoToken = std::numeric_limits<TokenId>::max();

class VocabularyError : public Error {
 public:
  using Error::Error;
};

/// Token id -> byte sequence. Ids are dense in [0, size). The EOS token has no
/// bytes; any other token with no bytes is kept but never produced or allowed.
class Vocabulary {
 public:
  struct TrieNode {
    std::vector<std::pair<unsigned char, std::uint32_t>> children;  // sorted by byte
    std::vector<TokenId> tokens;                                    // ids spelling exactly this path
  };

  Vocabulary(std::vector<std::string> tokens, TokenId eos);

  /// Ids 0..255 are the single bytes, 256 is EOS.
  static Vocabulary byte_level();
  /// `{"<token>": id, ..., "eos_token_id": id}`. In token strings `\xHH` stands
  /// for one raw byte and `\\` for a backslash; other characters are their UTF-8 bytes.
  static Vocabulary from_json(const json::Value& doc);
  /// Lines of `id<TAB>hex bytes`; the hex column `eos` marks the EOS token.
  static Vocabulary from_tsv(std::string_view text);
  /// Picks the format by extension (.tsv, otherwise JSON).
  static Vocabulary load(const std::filesystem::path& path);

  std::size_t size() const { return tokens_.size(); }
  TokenId eos() const { return eos_; }
  const std::string& bytes(TokenId id) const { return tokens_[id]; }
  /// SHA-256 over ids, bytes and the EOS id.
  const std::string& hash() const { return hash_; }
  const std::vector<TrieNode>& trie() const { return trie_; }

  /// Greedy longest-match tokenization (lowest id among equal spellings).
  /// Throws VocabularyError when some byte cannot be covered.
  std::vector<TokenId> tokenize(std::string_view text) const;
  /// Concatenates token bytes; EOS contributes nothing.
  std::string detokenize(std::span<const TokenId> ids) const;

 private:
  std::vector<std::string> tokens_;
  TokenId eos_;
  std::string hash_;
  std::vector<TrieNode> trie_;
};

/// Decodes the `\xHH` / `\\` convention of JSON vocabulary files.
std::string decode_token_string(std::string_view text);
std::string encode_token_string(std::string_view bytes);

}  // namespace sketch::constraint
