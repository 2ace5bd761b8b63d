#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sketch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at byte " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class DuplicateKeyError : public ParseError {
 public:
  DuplicateKeyError(const std::string& key, std::size_t offset)
      : ParseError("duplicate object member \"" + key + "\"", offset), key_(key) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class UnsupportedSchemaError : public Error {
 public:
  explicit UnsupportedSchemaError(std::vector<std::string> keywords)
      : Error(describe(keywords)), keywords_(std::move(keywords)) {}

  const std::vector<std::string>& keywords() const { return keywords_; }

 private:
  static std::string describe(const std::vector<std::string>& keywords) {
    std::string out = "unsupported schema keywords:";
    for (const auto& k : keywords) out += " " + k;
    return out;
  }

  std::vector<std::string> keywords_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sketch
