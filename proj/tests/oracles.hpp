// Independent reference implementations used by the unit and acceptance
// tests. Kept deliberately naive.
#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "recam/lexicon.hpp"
#include "recam/nn.hpp"

namespace oracle {

inline std::filesystem::path data_dir() { return RECAM_TEST_DATA; }

// Longest root path by enumerating every path.
inline int all_paths_depth(const std::map<std::string, std::vector<std::string>>& parents, const std::string& node) {
  int best = 0;
  std::function<void(const std::string&, int)> walk = [&](const std::string& n, int len) {
    auto it = parents.find(n);
    if (it == parents.end() || it->second.empty()) {
      best = std::max(best, len);
      return;
    }
    for (const auto& p : it->second) walk(p, len + 1);
  };
  walk(node, 0);
  return best;
}

// Random DAG over n nodes with shuffled labels; edges child -> parent.
struct RandomDag {
  std::vector<std::string> ids;
  std::map<std::string, std::vector<std::string>> parents;
};

inline RandomDag random_dag(std::mt19937_64& rng, int n, double edge_p) {
  RandomDag g;
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i;
  std::shuffle(labels.begin(), labels.end(), rng);
  std::bernoulli_distribution edge(edge_p);
  for (int i = 0; i < n; ++i) g.ids.push_back("s" + std::to_string(labels[static_cast<std::size_t>(i)]));
  for (int i = 0; i < n; ++i) {
    auto& ps = g.parents[g.ids[static_cast<std::size_t>(i)]];
    for (int j = 0; j < i; ++j) {
      if (edge(rng)) ps.push_back(g.ids[static_cast<std::size_t>(j)]);
    }
  }
  return g;
}

inline recam::Lexicon lexicon_of(const RandomDag& g) {
  recam::Lexicon::Builder b;
  for (const auto& id : g.ids) {
    recam::Synset s;
    s.id = id;
    s.pos = recam::Pos::kNoun;
    s.lemmas = {"l" + id};
    s.gloss = "gloss of " + id;
    s.hypernyms = g.parents.at(id);
    b.add(std::move(s));
  }
  return std::move(b).build();
}

// Ranking metrics by direct definition.
inline double mrr(const std::vector<std::vector<std::string>>& rankings, const std::vector<std::string>& gold) {
  double s = 0;
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    for (std::size_t r = 0; r < rankings[i].size(); ++r) {
      if (rankings[i][r] == gold[i]) {
        s += 1.0 / static_cast<double>(r + 1);
        break;
      }
    }
  }
  return s / static_cast<double>(rankings.size());
}

inline double recall(const std::vector<std::vector<std::string>>& rankings, const std::vector<std::string>& gold,
                     std::size_t k) {
  double hits = 0;
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    const auto end = rankings[i].begin() + static_cast<std::ptrdiff_t>(std::min(k, rankings[i].size()));
    if (std::find(rankings[i].begin(), end, gold[i]) != end) hits += 1;
  }
  return hits / static_cast<double>(rankings.size());
}

inline double accuracy(const std::vector<int>& a, const std::vector<int>& b) {
  double hits = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hits += a[i] == b[i];
  return hits / static_cast<double>(a.size());
}

// Distractor choice by exhaustive comparison: a type precedes another when
// it occurs more often, then when its best rank is lower, then
// lexicographically. Returns the first four.
struct PoolItem {
  std::string word;
  int rank;
};

inline std::vector<std::string> pick_four(const std::vector<PoolItem>& pool) {
  std::set<std::string> types;
  for (const auto& p : pool) types.insert(p.word);
  auto count = [&](const std::string& w) {
    int c = 0;
    for (const auto& p : pool) c += p.word == w;
    return c;
  };
  auto best = [&](const std::string& w) {
    int b = 1 << 30;
    for (const auto& p : pool) {
      if (p.word == w) b = std::min(b, p.rank);
    }
    return b;
  };
  auto before = [&](const std::string& a, const std::string& b) {
    if (count(a) != count(b)) return count(a) > count(b);
    if (best(a) != best(b)) return best(a) < best(b);
    return a < b;
  };
  std::vector<std::string> out;
  std::set<std::string> left = types;
  while (out.size() < 4 && !left.empty()) {
    std::string pick = *left.begin();
    for (const auto& t : left) {
      bool wins = true;
      for (const auto& u : left) {
        if (u != t && before(u, t)) wins = false;
      }
      if (wins) pick = t;
    }
    out.push_back(pick);
    left.erase(pick);
  }
  return out;
}

// Pearson by the textbook closed formula.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// Greedy longest-first shared phrase score computed by scanning every
// (start, start, length) triple. Empty strings never match.
inline double lesk_brute(std::vector<std::string> sig, const std::vector<std::string>& ctx) {
  const std::string used = "\x01used";
  double score = 0;
  for (;;) {
    std::size_t best = 0, at = 0;
    for (std::size_t i = 0; i < sig.size(); ++i) {
      for (std::size_t j = 0; j < ctx.size(); ++j) {
        std::size_t len = 0;
        while (i + len < sig.size() && j + len < ctx.size() && !sig[i + len].empty() && sig[i + len] != used &&
               sig[i + len] == ctx[j + len]) {
          ++len;
        }
        if (len > best) {
          best = len;
          at = i;
        }
      }
    }
    if (best == 0) return score;
    score += static_cast<double>(best * best);
    for (std::size_t k = at; k < at + best; ++k) sig[k] = used;
  }
}

// Central-difference check of analytic gradients. `loss` must be a pure
// function of the parameter values; `analytic` must leave d(loss)/d(param)
// in each Param::grad. Returns the largest relative error over `per_param`
// sampled coordinates of every parameter.
inline double gradient_check(const std::vector<recam::nn::Param*>& params, const std::function<double()>& loss,
                             const std::function<void()>& analytic, std::mt19937_64& rng, int per_param,
                             int* checked = nullptr) {
  for (auto* p : params) p->grad.setZero();
  analytic();
  double worst = 0;
  const double h = 1e-5;
  for (auto* p : params) {
    std::uniform_int_distribution<Eigen::Index> pick(0, p->value.size() - 1);
    for (int s = 0; s < per_param; ++s) {
      const Eigen::Index k = pick(rng);
      double& v = p->value.data()[k];
      const double saved = v;
      v = saved + h;
      const double up = loss();
      v = saved - h;
      const double down = loss();
      v = saved;
      const double numeric = (up - down) / (2 * h);
      const double a = p->grad.data()[k];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-5});
      worst = std::max(worst, std::abs(a - numeric) / denom);
      if (checked) ++*checked;
    }
  }
  return worst;
}

}  // namespace oracle
