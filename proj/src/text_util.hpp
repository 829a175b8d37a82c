#pragma once

// Whitespace tokenizer shared by the text-format loaders.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "qenv/error.hpp"

namespace qenv::detail {

class TokenReader {
 public:
  TokenReader(std::string_view text, std::string format) : text_(text), format_(std::move(format)) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  std::string_view next_token(const char* what) {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(format_ + ": unexpected end of input, expected " + what);
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::int64_t next_int(const char* what) {
    auto tok = next_token(what);
    std::int64_t v = 0;
    const char* b = tok.data();
    if (!tok.empty() && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
      throw ParseError(format_ + ": expected integer " + what + ", got '" + std::string(tok) + "'");
    return v;
  }

  std::size_t next_size(const char* what) {
    const auto v = next_int(what);
    if (v < 0) throw ParseError(format_ + ": negative " + what);
    return static_cast<std::size_t>(v);
  }

  void expect_end() {
    if (!at_end()) throw ParseError(format_ + ": trailing data after expected content");
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::string format_;
  std::size_t pos_ = 0;
};

}  // namespace qenv::detail
