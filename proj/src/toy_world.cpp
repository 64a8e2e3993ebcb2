#include "recam/toy_world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "recam/error.hpp"
#include "recam/lexicon.hpp"
#include "recam/nn.hpp"

namespace recam::toy {

namespace {

const std::vector<std::string> kFunction = {"the", "a", "of", "and", "to", "in", "was", "is", "with", "for", "on", "by"};

struct Word {
  std::string name;
  Pos pos = Pos::kNoun;
  std::vector<double> vec;
  int rating = 0;
  int twin = -1;  // index of a near-duplicate word
};

struct Sense {
  std::string id;
  Pos pos;
  std::vector<int> members;  // word indices
  std::string parent;
  std::string gloss;
  std::vector<std::string> antonyms;  // "lemma:other"
};

char pos_char(Pos p) {
  switch (p) {
    case Pos::kNoun:
      return 'n';
    case Pos::kVerb:
      return 'v';
    case Pos::kAdjective:
      return 'a';
    default:
      return 'r';
  }
}

std::string inflect(const Word& w, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  if (w.pos == Pos::kNoun) return coin(rng) ? w.name + "s" : w.name;
  if (w.pos == Pos::kVerb) return coin(rng) ? w.name + "ed" : w.name;
  return w.name;
}

}  // namespace

Paths write_world(const Config& cfg, const std::filesystem::path& dir) {
  if (cfg.words < 20 || cfg.dim < 2) throw ValidationError("toy world needs >= 20 words and dim >= 2");
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto rating_of = [](const std::vector<double>& v) {
    const double s = 1.0 / (1.0 + std::exp(-2.0 * v[0]));
    return static_cast<int>(std::lround(158 + 512 * s));
  };
  auto random_vec = [&] {
    std::vector<double> v(static_cast<std::size_t>(cfg.dim));
    for (auto& x : v) x = normal(rng);
    return v;
  };

  std::vector<Word> words(cfg.words);
  for (std::size_t i = 0; i < cfg.words; ++i) {
    Word& w = words[i];
    w.name = "w" + std::to_string(i);
    const double u = unit(rng);
    w.pos = u < 0.6 ? Pos::kNoun : u < 0.85 ? Pos::kVerb : u < 0.95 ? Pos::kAdjective : Pos::kAdverb;
    w.vec = random_vec();
  }
  // Near-duplicate vectors.
  for (std::size_t i = 1; i < cfg.words; i += 9) {
    const std::size_t j = i - 1;
    for (std::size_t k = 0; k < words[i].vec.size(); ++k) words[i].vec[k] = words[j].vec[k] + 0.1 * normal(rng);
    words[i].twin = static_cast<int>(j);
    words[j].twin = static_cast<int>(i);
  }
  for (auto& w : words) w.rating = rating_of(w.vec);

  // Senses: one per word, some shared as synonym sets, hierarchies for
  // nouns and verbs built as long chains so depths spread over 0..10.
  std::vector<Sense> senses;
  std::map<Pos, std::vector<std::size_t>> by_pos;
  for (std::size_t i = 0; i < cfg.words; ++i) by_pos[words[i].pos].push_back(i);
  auto gloss_text = [&] {
    std::uniform_int_distribution<std::size_t> fw(0, kFunction.size() - 1);
    std::uniform_int_distribution<std::size_t> cw(0, cfg.words - 1);
    std::ostringstream g;
    g << "a " << words[cw(rng)].name << ' ' << kFunction[fw(rng)] << ' ' << words[cw(rng)].name << ' '
      << words[cw(rng)].name;
    return g.str();
  };
  for (auto& [pos, idx] : by_pos) {
    std::vector<std::string> made;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      Sense s;
      s.id = std::string(1, pos_char(pos)) + std::to_string(senses.size());
      s.pos = pos;
      s.members = {static_cast<int>(idx[k])};
      // Every sixth sense also lists the next word as a synonym.
      if (k % 6 == 5 && k + 1 < idx.size()) s.members.push_back(static_cast<int>(idx[k + 1]));
      s.gloss = gloss_text();
      if ((pos == Pos::kNoun || pos == Pos::kVerb) && !made.empty()) {
        const std::size_t back = std::min<std::size_t>(made.size(), 3);
        std::uniform_int_distribution<std::size_t> pick(made.size() - back, made.size() - 1);
        // Restart a fresh chain now and then so several roots exist.
        if (k % 12 != 0) s.parent = made[pick(rng)];
      }
      made.push_back(s.id);
      senses.push_back(std::move(s));
    }
    if (pos == Pos::kAdjective) {
      // Antonym pairs between consecutive adjective senses.
      std::vector<std::size_t> adj_senses;
      for (std::size_t s = 0; s < senses.size(); ++s) {
        if (senses[s].pos == Pos::kAdjective) adj_senses.push_back(s);
      }
      for (std::size_t k = 0; k + 1 < adj_senses.size(); k += 2) {
        Sense& a = senses[adj_senses[k]];
        Sense& b = senses[adj_senses[k + 1]];
        const std::string la = words[static_cast<std::size_t>(a.members[0])].name;
        const std::string lb = words[static_cast<std::size_t>(b.members[0])].name;
        a.antonyms.push_back(la + ":" + lb);
        b.antonyms.push_back(lb + ":" + la);
      }
    }
  }

  Paths paths{dir / "lexicon.txt", dir / "embeddings.txt", dir / "ratings.tsv", dir / "corpus.jsonl"};
  {
    std::ofstream out(paths.lexicon);
    if (!out) throw ResourceError("cannot write " + paths.lexicon.string());
    out << "# synthetic lexicon: id|pos|lemmas|gloss|hypernyms|antonyms\n";
    for (const auto& s : senses) {
      out << s.id << '|' << pos_char(s.pos) << '|';
      for (std::size_t m = 0; m < s.members.size(); ++m) {
        out << (m ? "," : "") << words[static_cast<std::size_t>(s.members[m])].name;
      }
      out << '|' << s.gloss << '|' << s.parent << '|';
      for (std::size_t a = 0; a < s.antonyms.size(); ++a) out << (a ? "," : "") << s.antonyms[a];
      out << '\n';
    }
  }

  {
    std::ofstream out(paths.embeddings);
    if (!out) throw ResourceError("cannot write " + paths.embeddings.string());
    out << std::setprecision(6);
    auto write = [&](const std::string& name, const std::vector<double>& v) {
      out << name;
      for (double x : v) out << ' ' << x;
      out << '\n';
    };
    for (const auto& w : words) write(w.name, w.vec);
    // Inflected forms sit next to their base form.
    for (const auto& w : words) {
      if (w.pos != Pos::kNoun && w.pos != Pos::kVerb) continue;
      std::vector<double> v = w.vec;
      for (auto& x : v) x += 0.05 * normal(rng);
      write(w.name + (w.pos == Pos::kNoun ? "s" : "ed"), v);
    }
    for (const auto& f : kFunction) write(f, random_vec());
    std::ofstream ratings(paths.ratings);
    if (!ratings) throw ResourceError("cannot write " + paths.ratings.string());
    for (const auto& w : words) ratings << w.name << '\t' << w.rating << '\n';
    for (std::size_t i = 0; i < cfg.rating_words; ++i) {
      const auto v = random_vec();
      const std::string name = "r" + std::to_string(i);
      write(name, v);
      ratings << name << '\t' << rating_of(v) << '\n';
    }
  }

  // Corpus. Each summary holds three or four content words; passages mix
  // random content words with planted filter triggers.
  std::map<int, std::vector<int>> synonyms_of;
  for (const auto& s : senses) {
    for (int a : s.members) {
      for (int b : s.members) {
        if (a != b) synonyms_of[a].push_back(b);
      }
    }
  }
  std::ofstream out(paths.corpus);
  if (!out) throw ResourceError("cannot write " + paths.corpus.string());
  std::uniform_int_distribution<std::size_t> cw(0, cfg.words - 1);
  std::uniform_int_distribution<std::size_t> fw(0, kFunction.size() - 1);
  for (std::size_t p = 0; p < cfg.pairs; ++p) {
    std::vector<std::size_t> targets;
    const std::size_t n_targets = 3 + (p % 2);
    while (targets.size() < n_targets) {
      const std::size_t t = cw(rng);
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    std::ostringstream summary;
    summary << "The";
    for (std::size_t t = 0; t < targets.size(); ++t) {
      summary << ' ' << inflect(words[targets[t]], rng);
      if (t + 1 < targets.size()) summary << ' ' << kFunction[fw(rng)];
    }
    summary << '.';

    std::vector<std::string> passage;
    const std::size_t len = 24 + cw(rng) % 12;
    for (std::size_t i = 0; i < len; ++i) {
      if (unit(rng) < 0.45) {
        passage.push_back(kFunction[fw(rng)]);
      } else {
        std::size_t w = cw(rng);
        while (std::find(targets.begin(), targets.end(), w) != targets.end()) w = cw(rng);
        passage.push_back(inflect(words[w], rng));
      }
    }
    std::uniform_int_distribution<std::size_t> slot(0, passage.size() - 1);
    for (std::size_t t : targets) {
      const double u = unit(rng);
      const Word& w = words[t];
      if (u < 0.12) {
        passage[slot(rng)] = inflect(w, rng);
      } else if (u < 0.24 && synonyms_of.count(static_cast<int>(t))) {
        passage[slot(rng)] = words[static_cast<std::size_t>(synonyms_of[static_cast<int>(t)][0])].name;
      } else if (u < 0.36 && w.twin >= 0) {
        passage[slot(rng)] = words[static_cast<std::size_t>(w.twin)].name;
      }
    }
    std::ostringstream ptext;
    ptext << "In";
    for (std::size_t i = 0; i < passage.size(); ++i) {
      ptext << ' ' << passage[i];
      if (i % 11 == 10 && i + 1 < passage.size()) ptext << '.' << " The";
    }
    ptext << '.';

    nlohmann::ordered_json j;
    j["id"] = "toy-" + std::to_string(p);
    j["passage"] = ptext.str();
    j["summary"] = summary.str();
    out << j.dump() << '\n';
  }
  return paths;
}

}  // namespace recam::toy
