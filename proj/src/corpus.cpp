#include "recam/corpus.hpp"

#include <fstream>
#include <set>

#include "json.hpp"
#include "recam/error.hpp"
#include "recam/text.hpp"

namespace recam {

Pos LexiconTagger::tag_word(std::string_view surface) const {
  if (text::is_punctuation(surface)) return Pos::kPunct;
  const std::string w = text::to_lower(surface);
  if (w.empty() || w.front() == '@' || w.front() == '\'') return Pos::kOther;
  if (std::all_of(w.begin(), w.end(), [](char c) { return (c >= '0' && c <= '9') || c == '.' || c == ','; })) {
    return Pos::kOther;
  }
  if (text::is_stopword(w)) return Pos::kOther;

  std::array<std::size_t, 4> senses{};
  for (std::size_t i = 0; i < kLexicalPos.size(); ++i) {
    for (const auto& l : lemmatize(w, kLexicalPos[i], *lex_)) senses[i] += lex_->senses(l, kLexicalPos[i]).size();
  }
  const bool known = senses[0] + senses[1] + senses[2] + senses[3] > 0;
  if (w.size() > 3 && w.ends_with("ly") && (senses[3] > 0 || !known)) return Pos::kAdverb;
  if ((w.ends_with("ed") || w.ends_with("ing")) && senses[1] > 0) return Pos::kVerb;
  if (!known) return Pos::kNoun;
  std::size_t best = 0;
  for (std::size_t i = 1; i < senses.size(); ++i) {
    if (senses[i] > senses[best]) best = i;
  }
  return kLexicalPos[best];
}

std::vector<Pos> LexiconTagger::tag(std::span<const std::string> surfaces) const {
  std::vector<Pos> out;
  out.reserve(surfaces.size());
  for (const auto& s : surfaces) out.push_back(tag_word(s));
  return out;
}

namespace {

std::vector<PretaggedToken> ParseTagged(const nlohmann::json& arr, const std::string& name,
                                        std::size_t lineno) {
  if (!arr.is_array()) throw ParseError(name, lineno, "token list must be an array");
  std::vector<PretaggedToken> out;
  for (const auto& t : arr) {
    PretaggedToken tok;
    tok.surface = t.at("surface").get<std::string>();
    auto pos = parse_pos(t.at("pos").get<std::string>());
    tok.pos = pos.value_or(Pos::kOther);
    out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace

std::vector<DocumentPair> ingest(std::istream& in, const std::string& name) {
  std::vector<DocumentPair> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    DocumentPair pair;
    try {
      auto j = nlohmann::json::parse(line);
      pair.id = j.at("id").get<std::string>();
      pair.passage = j.at("passage").get<std::string>();
      pair.summary = j.at("summary").get<std::string>();
      if (j.contains("passage_tokens")) pair.passage_tokens = ParseTagged(j["passage_tokens"], name, lineno);
      if (j.contains("summary_tokens")) pair.summary_tokens = ParseTagged(j["summary_tokens"], name, lineno);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(name, lineno, e.what());
    }
    if (text::trim(pair.passage).empty() || text::trim(pair.summary).empty()) {
      throw ValidationError(name + ":" + std::to_string(lineno) + ": empty passage or summary", "empty_text");
    }
    if (!ids.insert(pair.id).second) {
      throw ValidationError(name + ":" + std::to_string(lineno) + ": duplicate id '" + pair.id + "'",
                            "duplicate_id");
    }
    out.push_back(std::move(pair));
  }
  return out;
}

std::vector<DocumentPair> ingest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ResourceError("cannot open corpus file: " + file.string());
  return ingest(in, file.string());
}

namespace {

std::string Lemma(const std::string& lower, Pos pos, const Lexicon& lex) {
  if (is_content(pos)) {
    auto l = lemmatize(lower, pos, lex);
    if (!l.empty()) return l.front();
  }
  if (pos == Pos::kPunct) return lower;
  auto any = lemmatize_any(lower, lex);
  return any.empty() ? lower : any.front().first;
}

std::vector<Token> Analyze(const std::string& txt, const std::optional<std::vector<PretaggedToken>>& tagged,
                           const Lexicon& lex, const Tagger& tagger, const std::string& what) {
  std::vector<Token> out;
  if (tagged) {
    // Align supplied surfaces with the text to recover offsets.
    const auto cps = text::decode_utf8(txt);
    std::size_t cursor = 0;
    for (const auto& t : *tagged) {
      const auto needle = text::decode_utf8(t.surface);
      auto pos = std::u32string_view(cps).find(needle, cursor);
      if (needle.empty() || pos == std::u32string_view::npos) {
        throw ValidationError(what + ": token '" + t.surface + "' not found in text", "token_alignment");
      }
      Token tok;
      tok.surface = t.surface;
      tok.lower = text::to_lower(t.surface);
      tok.pos = t.pos;
      tok.char_offset = pos;
      tok.lemma = Lemma(tok.lower, tok.pos, lex);
      cursor = pos + needle.size();
      out.push_back(std::move(tok));
    }
  } else {
    auto raw = text::tokenize(txt);
    std::vector<std::string> surfaces;
    surfaces.reserve(raw.size());
    for (const auto& r : raw) surfaces.push_back(r.surface);
    auto tags = tagger.tag(surfaces);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      Token tok;
      tok.surface = raw[i].surface;
      tok.lower = text::to_lower(raw[i].surface);
      tok.pos = tags[i];
      tok.char_offset = raw[i].offset;
      tok.lemma = Lemma(tok.lower, tok.pos, lex);
      out.push_back(std::move(tok));
    }
  }
  if (out.empty()) throw ValidationError(what + " has no tokens", "empty_text");
  return out;
}

}  // namespace

AnalyzedPair analyze(const DocumentPair& pair, const Lexicon& lex, const Tagger& tagger) {
  AnalyzedPair a;
  a.pair = pair;
  a.passage = Analyze(pair.passage, pair.passage_tokens, lex, tagger, "passage of " + pair.id);
  a.summary = Analyze(pair.summary, pair.summary_tokens, lex, tagger, "summary of " + pair.id);
  return a;
}

std::vector<std::string> lemmas_of(std::span<const Token> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.lemma);
  return out;
}

std::vector<std::string> lowers_of(std::span<const Token> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.lower);
  return out;
}

}  // namespace recam
