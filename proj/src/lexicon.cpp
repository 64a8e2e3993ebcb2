#include "recam/lexicon.hpp"

#include <algorithm>
#include <fstream>

#include "recam/error.hpp"
#include "recam/text.hpp"

namespace recam {

std::string_view pos_name(Pos pos) {
  switch (pos) {
    case Pos::kNoun:
      return "noun";
    case Pos::kVerb:
      return "verb";
    case Pos::kAdjective:
      return "adj";
    case Pos::kAdverb:
      return "adv";
    case Pos::kPunct:
      return "punct";
    case Pos::kOther:
      break;
  }
  return "other";
}

std::optional<Pos> parse_pos(std::string_view s) {
  const std::string l = text::to_lower(s);
  if (l == "noun" || l == "n" || l == "propn") return Pos::kNoun;
  if (l == "verb" || l == "v") return Pos::kVerb;
  if (l == "adj" || l == "a" || l == "s" || l == "adjective") return Pos::kAdjective;
  if (l == "adv" || l == "r" || l == "adverb") return Pos::kAdverb;
  if (l == "punct") return Pos::kPunct;
  if (l == "other" || l == "det" || l == "adp" || l == "aux" || l == "cconj" || l == "sconj" ||
      l == "pron" || l == "num" || l == "part" || l == "intj" || l == "sym" || l == "x") {
    return Pos::kOther;
  }
  return std::nullopt;
}

bool is_content(Pos pos) {
  return pos == Pos::kNoun || pos == Pos::kVerb || pos == Pos::kAdjective || pos == Pos::kAdverb;
}

namespace {

std::size_t PosSlot(Pos pos) {
  switch (pos) {
    case Pos::kNoun:
      return 0;
    case Pos::kVerb:
      return 1;
    case Pos::kAdjective:
      return 2;
    case Pos::kAdverb:
      return 3;
    default:
      throw DomainError("non-lexical part of speech: " + std::string(pos_name(pos)));
  }
}

}  // namespace

Lexicon::Builder& Lexicon::Builder::add(Synset synset) {
  synsets_.push_back(std::move(synset));
  return *this;
}

Lexicon::Builder& Lexicon::Builder::add_exception(Pos pos, std::string form, std::string lemma) {
  auto& bases = exceptions_[PosSlot(pos)][text::to_lower(form)];
  lemma = text::to_lower(lemma);
  if (std::find(bases.begin(), bases.end(), lemma) == bases.end()) bases.push_back(lemma);
  return *this;
}

Lexicon::Builder& Lexicon::Builder::set_senses(std::string lemma, Pos pos,
                                               std::vector<std::string> ids) {
  explicit_senses_[{text::to_lower(lemma), pos}] = std::move(ids);
  return *this;
}

Lexicon Lexicon::Builder::build() && {
  Lexicon lex;

  // Insertion-order sense ranking, overridden per key by explicit orders.
  std::map<std::pair<std::string, Pos>, std::vector<std::string>> index;
  for (auto& s : synsets_) {
    if (!is_content(s.pos)) throw ValidationError("synset " + s.id + " has non-lexical POS");
    for (auto& l : s.lemmas) {
      l = text::to_lower(l);
      auto& ids = index[{l, s.pos}];
      if (std::find(ids.begin(), ids.end(), s.id) == ids.end()) ids.push_back(s.id);
    }
  }
  for (auto& [key, ids] : explicit_senses_) index[key] = std::move(ids);

  for (auto& s : synsets_) {
    std::string id = s.id;
    if (!lex.synsets_.emplace(id, std::move(s)).second) {
      throw ValidationError("duplicate synset id: " + id, "duplicate_id");
    }
  }
  for (const auto& [key, ids] : index) {
    for (const auto& id : ids) {
      if (!lex.synsets_.contains(id)) {
        throw ValidationError("sense index entry '" + key.first + "' references unknown synset " + id,
                              "unknown_synset");
      }
    }
  }
  std::erase_if(index, [](const auto& kv) { return kv.second.empty(); });
  lex.sense_index_ = std::move(index);

  // Hypernym edges must resolve and stay within one POS; hyponyms are the
  // reverse edges.
  for (auto& [id, s] : lex.synsets_) {
    for (const auto& h : s.hypernyms) {
      auto it = lex.synsets_.find(h);
      if (it == lex.synsets_.end()) {
        throw ValidationError("synset " + id + " has unknown hypernym " + h, "unknown_hypernym");
      }
      if (it->second.pos != s.pos) {
        throw ValidationError("hypernym edge " + id + " -> " + h + " crosses POS",
                              "cross_pos_hypernym");
      }
    }
  }
  for (auto& [id, s] : lex.synsets_) {
    for (const auto& h : s.hypernyms) {
      auto& hypo = lex.synsets_.find(h)->second.hyponyms;
      if (std::find(hypo.begin(), hypo.end(), id) == hypo.end()) hypo.push_back(id);
    }
  }
  for (auto& [id, s] : lex.synsets_) {
    std::erase_if(s.hyponyms, [&](const std::string& h) { return !lex.synsets_.contains(h); });
  }

  for (std::size_t slot = 0; slot < 4; ++slot) {
    for (auto& [form, bases] : exceptions_[slot]) lex.exceptions_[slot].emplace(form, bases);
  }

  // Longest path to a root, iterative DFS with three-colour cycle detection.
  enum class Mark { kNew, kActive, kDone };
  std::map<std::string_view, Mark> mark;
  for (const auto& [id, s] : lex.synsets_) {
    if (s.pos != Pos::kNoun && s.pos != Pos::kVerb) continue;
    if (mark[id] == Mark::kDone) continue;
    std::vector<std::pair<const Synset*, std::size_t>> stack{{&s, 0}};
    mark[id] = Mark::kActive;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < node->hypernyms.size()) {
        const auto& parent_id = node->hypernyms[next++];
        const Synset& parent = lex.synsets_.find(parent_id)->second;
        Mark& m = mark[parent.id];
        if (m == Mark::kActive) {
          throw ValidationError("hypernym cycle through synset " + parent.id, "hypernym_cycle");
        }
        if (m == Mark::kNew) {
          m = Mark::kActive;
          stack.emplace_back(&parent, 0);
        }
        continue;
      }
      int d = 0;
      for (const auto& p : node->hypernyms) d = std::max(d, lex.depth_.find(p)->second + 1);
      lex.depth_.emplace(node->id, d);
      auto& md = lex.max_depth_[node->pos == Pos::kNoun ? 0 : 1];
      md = std::max(md, d);
      mark[node->id] = Mark::kDone;
      stack.pop_back();
    }
  }
  return lex;
}

const Synset* Lexicon::find(std::string_view id) const {
  auto it = synsets_.find(id);
  return it == synsets_.end() ? nullptr : &it->second;
}

const Synset& Lexicon::synset(std::string_view id) const {
  const Synset* s = find(id);
  if (s == nullptr) throw LookupError("unknown synset id: " + std::string(id));
  return *s;
}

std::span<const std::string> Lexicon::senses(std::string_view lemma, Pos pos) const {
  auto it = sense_index_.find({std::string(lemma), pos});
  if (it == sense_index_.end()) return {};
  return it->second;
}

std::span<const std::string> Lexicon::exceptions(std::string_view form, Pos pos) const {
  if (!is_content(pos)) return {};
  const auto& table = exceptions_[PosSlot(pos)];
  auto it = table.find(form);
  if (it == table.end()) return {};
  return it->second;
}

std::optional<int> Lexicon::depth(std::string_view id) const {
  auto it = depth_.find(id);
  if (it == depth_.end()) return std::nullopt;
  return it->second;
}

int Lexicon::max_depth(Pos pos) const {
  if (pos == Pos::kNoun) return max_depth_[0];
  if (pos == Pos::kVerb) return max_depth_[1];
  throw DomainError("hypernym depth is defined for nouns and verbs only");
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) return load_wndb(path);
  if (std::filesystem::is_regular_file(path, ec)) return load_toy_lexicon(path);
  throw ResourceError("lexicon resource not found: " + path.string());
}

Lexicon load_toy_lexicon(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ResourceError("cannot open lexicon file: " + file.string());
  Lexicon::Builder builder;
  std::string line;
  std::size_t lineno = 0;
  auto list = [](const std::string& field, char sep) {
    std::vector<std::string> out;
    for (auto& item : text::split(field, sep)) {
      auto t = text::trim(item);
      if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto fields = text::split(trimmed, '|');
    if (fields[0] == "!exc") {
      if (fields.size() != 4) throw ParseError(file.string(), lineno, "exception entry needs 4 fields");
      auto pos = parse_pos(text::trim(fields[1]));
      if (!pos || !is_content(*pos)) throw ParseError(file.string(), lineno, "bad POS '" + fields[1] + "'");
      builder.add_exception(*pos, text::trim(fields[2]), text::trim(fields[3]));
      continue;
    }
    if (fields.size() < 6 || fields.size() > 7) {
      throw ParseError(file.string(), lineno,
                       "expected 6 or 7 '|' separated fields, got " + std::to_string(fields.size()));
    }
    Synset s;
    s.id = text::trim(fields[0]);
    auto pos = parse_pos(text::trim(fields[1]));
    if (s.id.empty()) throw ParseError(file.string(), lineno, "empty synset id");
    if (!pos || !is_content(*pos)) throw ParseError(file.string(), lineno, "bad POS '" + fields[1] + "'");
    s.pos = *pos;
    s.lemmas = list(fields[2], ',');
    if (s.lemmas.empty()) throw ParseError(file.string(), lineno, "synset without lemmas");
    s.gloss = text::trim(fields[3]);
    s.hypernyms = list(fields[4], ',');
    for (const auto& pair : list(fields[5], ',')) {
      auto parts = text::split(pair, ':');
      if (parts.size() != 2) throw ParseError(file.string(), lineno, "antonym must be lemma:other");
      s.antonym_pairs.emplace_back(text::to_lower(text::trim(parts[0])),
                                   text::to_lower(text::trim(parts[1])));
    }
    if (fields.size() == 7) s.examples = list(fields[6], ';');
    builder.add(std::move(s));
  }
  return std::move(builder).build();
}

namespace {

struct SuffixRule {
  std::string_view suffix;
  std::string_view ending;
};

std::span<const SuffixRule> SuffixRules(Pos pos) {
  static constexpr SuffixRule kNoun[] = {{"s", ""},     {"ses", "s"},   {"xes", "x"},
                                         {"zes", "z"},  {"ches", "ch"}, {"shes", "sh"},
                                         {"men", "man"}, {"ies", "y"}};
  static constexpr SuffixRule kVerb[] = {{"s", ""},   {"ies", "y"}, {"es", "e"}, {"es", ""},
                                         {"ed", "e"}, {"ed", ""},   {"ing", "e"}, {"ing", ""}};
  static constexpr SuffixRule kAdj[] = {{"er", ""}, {"est", ""}, {"er", "e"}, {"est", "e"}};
  switch (pos) {
    case Pos::kNoun:
      return kNoun;
    case Pos::kVerb:
      return kVerb;
    case Pos::kAdjective:
      return kAdj;
    default:
      return {};
  }
}

void PushUnique(std::vector<std::string>& v, std::string s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(std::move(s));
}

}  // namespace

std::vector<std::string> lemmatize(std::string_view word, Pos pos, const Lexicon& lex) {
  std::vector<std::string> out;
  if (!is_content(pos)) return out;
  std::string w = text::to_lower(text::trim(word));
  std::replace(w.begin(), w.end(), ' ', '_');
  if (w.empty()) return out;
  for (const auto& base : lex.exceptions(w, pos)) {
    if (lex.has_lemma(base, pos)) PushUnique(out, base);
  }
  if (lex.has_lemma(w, pos)) PushUnique(out, w);
  for (const auto& rule : SuffixRules(pos)) {
    if (w.size() <= rule.suffix.size() || !w.ends_with(rule.suffix)) continue;
    std::string base = w.substr(0, w.size() - rule.suffix.size()) + std::string(rule.ending);
    if (lex.has_lemma(base, pos)) PushUnique(out, std::move(base));
  }
  return out;
}

std::vector<std::pair<std::string, Pos>> lemmatize_any(std::string_view word, const Lexicon& lex) {
  std::vector<std::pair<std::string, Pos>> out;
  for (Pos pos : kLexicalPos) {
    for (auto& l : lemmatize(word, pos, lex)) out.emplace_back(std::move(l), pos);
  }
  return out;
}

namespace {

template <typename Visit>
void ForEachSense(std::string_view word, const Lexicon& lex, Visit&& visit) {
  for (const auto& [lemma, pos] : lemmatize_any(word, lex)) {
    for (const auto& id : lex.senses(lemma, pos)) visit(lex.synset(id));
  }
}

}  // namespace

std::set<std::string> synonym_antonym_pool(std::string_view word, const Lexicon& lex) {
  std::set<std::string> pool;
  ForEachSense(word, lex, [&](const Synset& s) {
    pool.insert(s.lemmas.begin(), s.lemmas.end());
    for (const auto& [mine, other] : s.antonym_pairs) pool.insert(other);
  });
  return pool;
}

std::set<std::string> synonyms(std::string_view word, const Lexicon& lex) {
  std::set<std::string> out;
  ForEachSense(word, lex, [&](const Synset& s) { out.insert(s.lemmas.begin(), s.lemmas.end()); });
  return out;
}

int hypernym_depth(std::string_view synset_id, const Lexicon& lex) {
  const Synset& s = lex.synset(synset_id);
  if (s.pos != Pos::kNoun && s.pos != Pos::kVerb) {
    throw DomainError("hypernym depth undefined for " + std::string(pos_name(s.pos)) + " synset " +
                      s.id);
  }
  return *lex.depth(synset_id);
}

std::string gloss_for_candidate(std::string_view word, const Lexicon& lex) {
  static constexpr std::array<std::string_view, 4> kTags = {"<NOUN>", "<VERB>", "<ADJ>", "<ADV>"};
  std::string out;
  for (std::size_t i = 0; i < kLexicalPos.size(); ++i) {
    auto lemmas = lemmatize(word, kLexicalPos[i], lex);
    if (lemmas.empty()) continue;
    auto ids = lex.senses(lemmas.front(), kLexicalPos[i]);
    if (ids.empty()) continue;
    if (!out.empty()) out += ' ';
    out += kTags[i];
    out += ' ';
    out += lex.synset(ids.front()).gloss;
  }
  return out;
}

}  // namespace recam
