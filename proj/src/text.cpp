#include "recam/text.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "recam/error.hpp"

namespace recam::text {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    char32_t cp = c;
    std::size_t extra = 0;
    if (c >= 0xF0) {
      cp = c & 0x07;
      extra = 3;
    } else if (c >= 0xE0) {
      cp = c & 0x0F;
      extra = 2;
    } else if (c >= 0xC0) {
      cp = c & 0x1F;
      extra = 1;
    }
    ++i;
    for (std::size_t k = 0; k < extra && i < s.size(); ++k, ++i) {
      cp = (cp << 6) | (static_cast<unsigned char>(s[i]) & 0x3F);
    }
    out.push_back(cp);
  }
  return out;
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::size_t utf8_length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string utf8_substr(std::string_view s, std::size_t start, std::size_t count) {
  auto cps = decode_utf8(s);
  if (start >= cps.size()) return {};
  count = std::min(count, cps.size() - start);
  return encode_utf8(std::u32string_view(cps).substr(start, count));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

namespace {

bool IsSpace(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
         c == 0xA0 || (c >= 0x2000 && c <= 0x200B) || c == 0x202F || c == 0x205F ||
         c == 0x3000 || c == 0xFEFF;
}

bool IsApostrophe(char32_t c) { return c == '\'' || c == 0x2019; }

bool IsWordChar(char32_t c) {
  if (c < 0x80) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_';
  }
  if (IsSpace(c)) return false;
  // Latin-1 punctuation and symbols, general punctuation, CJK punctuation,
  // fullwidth ASCII punctuation.
  if ((c >= 0xA1 && c <= 0xBF) || c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2010 && c <= 0x206F) return false;
  if (c >= 0x3000 && c <= 0x303F) return false;
  if ((c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20)) return false;
  return true;
}

}  // namespace

std::vector<RawToken> tokenize(std::string_view s) {
  const auto cps = decode_utf8(s);
  std::vector<RawToken> out;
  const std::size_t n = cps.size();
  std::size_t i = 0;
  auto emit = [&](std::size_t b, std::size_t e, bool word) {
    out.push_back({encode_utf8(std::u32string_view(cps).substr(b, e - b)), b, e - b, word});
  };
  while (i < n) {
    char32_t c = cps[i];
    if (IsSpace(c)) {
      ++i;
      continue;
    }
    if (c == '@' && i + 1 < n && IsWordChar(cps[i + 1])) {
      std::size_t j = i + 1;
      while (j < n && IsWordChar(cps[j])) ++j;
      emit(i, j, true);
      i = j;
      continue;
    }
    if (IsWordChar(c)) {
      std::size_t j = i;
      while (j < n) {
        if (IsWordChar(cps[j])) {
          ++j;
        } else if (cps[j] == '-' && j + 1 < n && IsWordChar(cps[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
      emit(i, j, true);
      // Clitic: 's, 't, 're ...
      if (j + 1 < n && IsApostrophe(cps[j]) && IsWordChar(cps[j + 1])) {
        std::size_t k = j + 1;
        while (k < n && IsWordChar(cps[k])) ++k;
        emit(j, k, true);
        j = k;
      }
      i = j;
      continue;
    }
    emit(i, i + 1, false);
    ++i;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  for (auto& t : tokenize(s)) {
    if (t.is_word) out.push_back(to_lower(t.surface));
  }
  return out;
}

bool is_stopword(std::string_view w) {
  static const std::unordered_set<std::string_view> kStop = {
      "a",       "about",   "above",  "after",  "again",  "against", "all",    "am",
      "an",      "and",     "any",    "are",    "as",     "at",      "be",     "because",
      "been",    "before",  "being",  "below",  "between", "both",   "but",    "by",
      "can",     "could",   "did",    "do",     "does",   "doing",   "down",   "during",
      "each",    "few",     "for",    "from",   "further", "had",    "has",    "have",
      "having",  "he",      "her",    "here",   "hers",   "herself", "him",    "himself",
      "his",     "how",     "i",      "if",     "in",     "into",    "is",     "it",
      "its",     "itself",  "just",   "me",     "more",   "most",    "my",     "myself",
      "no",      "nor",     "not",    "now",    "of",     "off",     "on",     "once",
      "only",    "or",      "other",  "our",    "ours",   "ourselves", "out",  "over",
      "own",     "same",    "she",    "should", "so",     "some",    "such",   "than",
      "that",    "the",     "their",  "theirs", "them",   "themselves", "then", "there",
      "these",   "they",    "this",   "those",  "through", "to",     "too",    "under",
      "until",   "up",      "very",   "was",    "we",     "were",    "what",   "when",
      "where",   "which",   "while",  "who",    "whom",   "why",     "will",   "with",
      "would",   "you",     "your",   "yours",  "yourself", "yourselves", "'s", "'t",
      "one",     "someone", "something", "e.g",  "etc",    "used",    "esp",    "usually",
  };
  return kStop.contains(w);
}

bool is_punctuation(std::string_view token) {
  if (token.empty()) return false;
  for (char32_t c : decode_utf8(token)) {
    if (IsWordChar(c) || IsSpace(c)) return false;
  }
  return true;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf.data(), 16);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace recam::text
