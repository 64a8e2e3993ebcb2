#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace recam::text {

inline constexpr std::string_view kPlaceholder = "@placeholder";

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

// Length in code points.
std::size_t utf8_length(std::string_view s);
// Substring addressed in code points.
std::string utf8_substr(std::string_view s, std::size_t start, std::size_t count);

// ASCII lowercase; bytes >= 0x80 pass through.
std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);

struct RawToken {
  std::string surface;
  std::size_t offset = 0;  // code points
  std::size_t length = 0;  // code points
  bool is_word = false;
};

// Word runs (letters/digits, intraword hyphens, "'s"-style clitics split off,
// "@name" kept whole) and single-code-point punctuation tokens. Whitespace
// separates and is never part of a token.
std::vector<RawToken> tokenize(std::string_view s);

// Lowercased word tokens of `s`; punctuation dropped.
std::vector<std::string> words(std::string_view s);

bool is_stopword(std::string_view lower_word);
bool is_punctuation(std::string_view token);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ull);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);

}  // namespace recam::text
