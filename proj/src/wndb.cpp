// Reader for the WordNet 3.0 plain-text database (WNdb format).

#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "recam/error.hpp"
#include "recam/lexicon.hpp"
#include "recam/text.hpp"

namespace recam {
namespace {

struct PosFiles {
  Pos pos;
  std::string_view suffix;  // data.<suffix>, index.<suffix>, <suffix>.exc
  char id_char;
};

constexpr std::array<PosFiles, 4> kFiles = {{{Pos::kNoun, "noun", 'n'},
                                             {Pos::kVerb, "verb", 'v'},
                                             {Pos::kAdjective, "adj", 'a'},
                                             {Pos::kAdverb, "adv", 'r'}}};

char IdChar(char ss_type) { return ss_type == 's' ? 'a' : ss_type; }

std::string MakeId(const std::string& offset, char ss_type) {
  return offset + "-" + IdChar(ss_type);
}

// Strips adjective position markers "(a)", "(p)", "(ip)".
std::string CleanLemma(std::string w) {
  auto paren = w.find('(');
  if (paren != std::string::npos && w.back() == ')') w.erase(paren);
  return text::to_lower(w);
}

std::ifstream Open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ResourceError("missing lexicon file: " + path.string());
  return in;
}

class FieldReader {
 public:
  FieldReader(const std::string& file, std::size_t line, std::string_view body)
      : file_(file), line_(line), fields_(text::split_ws(body)) {}

  const std::string& next(const char* what) {
    if (pos_ >= fields_.size()) {
      throw ParseError(file_, line_, std::string("truncated record: missing ") + what);
    }
    return fields_[pos_++];
  }

  long number(const char* what, int base = 10) {
    const std::string& f = next(what);
    char* end = nullptr;
    long v = std::strtol(f.c_str(), &end, base);
    if (end == f.c_str() || *end != '\0' || v < 0) {
      throw ParseError(file_, line_, std::string("bad ") + what + " '" + f + "'");
    }
    return v;
  }

 private:
  const std::string& file_;
  std::size_t line_;
  std::vector<std::string> fields_;
  std::size_t pos_ = 0;
};

struct PendingAntonym {
  std::string from_id;
  std::size_t source_word;  // 1-based
  std::string to_id;
  std::size_t target_word;  // 1-based
};

void SplitGloss(std::string_view raw, Synset& s) {
  std::string def;
  for (auto& part : text::split(raw, ';')) {
    auto t = text::trim(part);
    if (t.size() >= 2 && t.front() == '"') {
      auto close = t.find('"', 1);
      s.examples.push_back(t.substr(1, close == std::string::npos ? std::string::npos : close - 1));
    } else if (!t.empty()) {
      if (!def.empty()) def += "; ";
      def += t;
    }
  }
  s.gloss = def;
}

}  // namespace

Lexicon load_wndb(const std::filesystem::path& dir) {
  Lexicon::Builder builder;
  std::vector<Synset> synsets;
  std::vector<PendingAntonym> antonyms;

  for (const auto& pf : kFiles) {
    const auto path = dir / ("data." + std::string(pf.suffix));
    auto in = Open(path);
    const std::string file = path.string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == ' ') continue;  // license header
      auto bar = line.find('|');
      if (bar == std::string::npos) throw ParseError(file, lineno, "truncated record: missing gloss");
      FieldReader f(file, lineno, std::string_view(line).substr(0, bar));
      Synset s;
      const std::string offset = f.next("synset offset");
      f.next("lex_filenum");
      const std::string& ss_type = f.next("ss_type");
      if (ss_type.size() != 1 || std::string_view("nvasr").find(ss_type[0]) == std::string_view::npos) {
        throw ParseError(file, lineno, "bad ss_type '" + ss_type + "'");
      }
      s.id = MakeId(offset, ss_type[0]);
      s.pos = pf.pos;
      const long w_cnt = f.number("w_cnt", 16);
      for (long i = 0; i < w_cnt; ++i) {
        s.lemmas.push_back(CleanLemma(f.next("word")));
        f.next("lex_id");
      }
      const long p_cnt = f.number("p_cnt");
      for (long i = 0; i < p_cnt; ++i) {
        const std::string symbol = f.next("pointer symbol");
        const std::string target = f.next("pointer offset");
        const std::string& tpos = f.next("pointer pos");
        const std::string& st = f.next("source/target");
        if (tpos.size() != 1 || st.size() != 4) throw ParseError(file, lineno, "bad pointer");
        const std::string target_id = MakeId(target, tpos[0]);
        if (symbol == "@") {
          s.hypernyms.push_back(target_id);
        } else if (symbol == "!") {
          const auto src = std::strtoul(st.substr(0, 2).c_str(), nullptr, 16);
          const auto tgt = std::strtoul(st.substr(2, 2).c_str(), nullptr, 16);
          antonyms.push_back({s.id, src, target_id, tgt});
        }
      }
      SplitGloss(std::string_view(line).substr(bar + 1), s);
      synsets.push_back(std::move(s));
    }
  }

  // Antonyms are lexical pointers: resolve word numbers once every synset
  // is known.
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < synsets.size(); ++i) by_id.emplace(synsets[i].id, i);
  for (const auto& a : antonyms) {
    auto to = by_id.find(a.to_id);
    auto from = by_id.find(a.from_id);
    if (to == by_id.end() || from == by_id.end()) continue;
    const auto& target_lemmas = synsets[to->second].lemmas;
    auto& source = synsets[from->second];
    if (a.target_word == 0 || a.target_word > target_lemmas.size()) continue;
    const std::string mine =
        (a.source_word >= 1 && a.source_word <= source.lemmas.size()) ? source.lemmas[a.source_word - 1]
                                                                      : source.lemmas.front();
    source.antonym_pairs.emplace_back(mine, target_lemmas[a.target_word - 1]);
  }
  for (auto& s : synsets) builder.add(std::move(s));

  for (const auto& pf : kFiles) {
    const auto path = dir / ("index." + std::string(pf.suffix));
    auto in = Open(path);
    const std::string file = path.string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == ' ') continue;
      FieldReader f(file, lineno, line);
      const std::string lemma = text::to_lower(f.next("lemma"));
      f.next("pos");
      const long synset_cnt = f.number("synset_cnt");
      const long p_cnt = f.number("p_cnt");
      for (long i = 0; i < p_cnt; ++i) f.next("pointer symbol");
      f.number("sense_cnt");
      f.number("tagsense_cnt");
      std::vector<std::string> ids;
      for (long i = 0; i < synset_cnt; ++i) {
        ids.push_back(std::string(f.next("synset offset")) + "-" + pf.id_char);
      }
      builder.set_senses(lemma, pf.pos, std::move(ids));
    }
  }

  for (const auto& pf : kFiles) {
    const auto path = dir / (std::string(pf.suffix) + ".exc");
    auto in = Open(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto fields = text::split_ws(line);
      if (fields.empty()) continue;
      if (fields.size() < 2) throw ParseError(path.string(), lineno, "exception entry without lemma");
      for (std::size_t i = 1; i < fields.size(); ++i) builder.add_exception(pf.pos, fields[0], fields[i]);
    }
  }
  return std::move(builder).build();
}

}  // namespace recam
