#include "recam/readers/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "recam/error.hpp"
#include "recam/text.hpp"

namespace recam::readers {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kGa:
      return "ga";
    case Variant::kAtt:
      return "att";
    case Variant::kAmwg:
      return "amwg";
  }
  return "?";
}

Variant parse_variant(std::string_view s) {
  const std::string l = text::to_lower(s);
  if (l == "ga") return Variant::kGa;
  if (l == "att") return Variant::kAtt;
  if (l == "amwg") return Variant::kAmwg;
  throw UsageError("unknown reader variant '" + std::string(s) + "' (expected ga|att|amwg)");
}

std::size_t placeholder_index(const ReaderItem& item) {
  for (std::size_t i = 0; i < item.summary.size(); ++i) {
    if (item.summary[i] == text::kPlaceholder) return i;
  }
  throw ValidationError("item " + item.id + " has no @placeholder in its summary", "missing_placeholder");
}

std::vector<std::string> gloss_tokens(std::string_view gloss) {
  std::vector<std::string> out;
  for (const auto& piece : text::split_ws(gloss)) {
    if (piece.size() > 2 && piece.front() == '<' && piece.back() == '>') {
      out.push_back(piece);
      continue;
    }
    for (auto& w : text::words(piece)) out.push_back(std::move(w));
  }
  return out;
}

namespace {

Eigen::MatrixXd DropoutMask(Eigen::Index rows, Eigen::Index cols, double rate, nn::Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = 1.0 / (1.0 - rate);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = keep(rng) ? scale : 0.0;
  return m;
}

void InitEmbedding(Eigen::MatrixXd& emb, const std::vector<std::string>& words, const EmbeddingTable& table,
                   nn::Rng& rng) {
  std::normal_distribution<double> dist(0.0, 0.1);
  for (Eigen::Index c = 0; c < emb.cols(); ++c) {
    const Eigen::VectorXd* v = c < static_cast<Eigen::Index>(words.size())
                                   ? table.find(words[static_cast<std::size_t>(c)])
                                   : nullptr;
    if (v != nullptr) {
      emb.col(c) = *v;
    } else {
      for (Eigen::Index r = 0; r < emb.rows(); ++r) emb(r, c) = dist(rng);
    }
  }
}

}  // namespace

ReaderModel::ReaderModel(Variant variant, ModelShape shape, std::vector<std::string> vocab,
                         std::shared_ptr<const EmbeddingTable> text, GlossFn gloss, std::uint64_t seed)
    : variant_(variant), shape_(shape), vocab_(std::move(vocab)), text_(std::move(text)),
      gloss_fn_(std::move(gloss)) {
  if (!text_ || text_->dim() <= 0) throw ValidationError("reader needs a non-empty text embedding table");
  if (shape_.hidden <= 0 || shape_.hops <= 0) throw ValidationError("reader hidden size and hops must be positive");
  if (vocab_.empty()) throw ValidationError("reader candidate vocabulary is empty");
  for (auto& w : vocab_) w = text::to_lower(w);
  std::set<std::string> seen;
  for (const auto& w : vocab_) {
    if (!seen.insert(w).second) throw ValidationError("duplicate candidate '" + w + "'");
  }
  // Gloss vocabulary from the candidates' gloss texts.
  if (variant_ == Variant::kAmwg && gloss_fn_) {
    std::set<std::string> gv;
    for (const auto& w : vocab_) {
      for (auto& t : gloss_tokens(gloss_fn_(w))) gv.insert(std::move(t));
    }
    gloss_vocab_.assign(gv.begin(), gv.end());
  }
  build(seed);
}

void ReaderModel::build(std::uint64_t seed) {
  vocab_index_.clear();
  for (std::size_t i = 0; i < vocab_.size(); ++i) vocab_index_.emplace(vocab_[i], static_cast<Eigen::Index>(i));
  gloss_index_.clear();
  for (std::size_t i = 0; i < gloss_vocab_.size(); ++i) {
    gloss_index_.emplace(gloss_vocab_[i], static_cast<Eigen::Index>(i));
  }

  const Eigen::Index e = text_->dim();
  const Eigen::Index h = shape_.hidden;
  const Eigen::Index h2 = 2 * h;
  nn::Rng rng(seed);

  passage_enc_.clear();
  summary_enc_.clear();
  const int layers = variant_ == Variant::kGa ? shape_.hops : 1;
  for (int k = 0; k < layers; ++k) {
    passage_enc_.emplace_back("passage" + std::to_string(k), k == 0 ? e : h2, h);
    summary_enc_.emplace_back("summary" + std::to_string(k), e, h);
  }
  for (int k = 0; k < layers; ++k) {
    passage_enc_[static_cast<std::size_t>(k)].init(rng);
    summary_enc_[static_cast<std::size_t>(k)].init(rng);
  }
  w_att_ = nn::Param("w_att", h2, h2);
  nn::glorot(w_att_.value, rng);
  cand_emb_ = nn::Param("cand_emb", e, static_cast<Eigen::Index>(vocab_.size()) + 1);
  InitEmbedding(cand_emb_.value, vocab_, *text_, rng);
  if (variant_ == Variant::kAmwg) {
    gloss_enc_ = BiGru("gloss", e, h);
    gloss_enc_.init(rng);
    w_gloss_ = nn::Param("w_gloss", h2, 2 * h2);
    nn::glorot(w_gloss_.value, rng);
    b_gloss_ = nn::Param("b_gloss", h2, 1);
    gloss_emb_ = nn::Param("gloss_emb", e, static_cast<Eigen::Index>(gloss_vocab_.size()) + 1);
    InitEmbedding(gloss_emb_.value, gloss_vocab_, *text_, rng);
    w_out_ = nn::Param("w_out", 2 * h2, h2 + e);
  } else {
    w_out_ = nn::Param("w_out", 2 * h2, e);
  }
  nn::glorot(w_out_.value, rng);

  vocab_gloss_ids_.clear();
  if (variant_ == Variant::kAmwg) {
    for (const auto& w : vocab_) vocab_gloss_ids_.push_back(gloss_ids_for(w));
  }
}

std::string ReaderModel::vocab_hash() const {
  std::uint64_t hsh = text::fnv1a64("");
  for (const auto& w : vocab_) {
    hsh = text::fnv1a64(w, hsh);
    hsh = text::fnv1a64("\n", hsh);
  }
  return text::hex64(hsh);
}

std::vector<nn::Param*> ReaderModel::parameters() {
  std::vector<nn::Param*> out;
  for (auto& enc : passage_enc_) for (auto* p : enc.parameters()) out.push_back(p);
  for (auto& enc : summary_enc_) for (auto* p : enc.parameters()) out.push_back(p);
  out.push_back(&w_att_);
  out.push_back(&w_out_);
  out.push_back(&cand_emb_);
  if (variant_ == Variant::kAmwg) {
    for (auto* p : gloss_enc_.parameters()) out.push_back(p);
    out.push_back(&w_gloss_);
    out.push_back(&b_gloss_);
    out.push_back(&gloss_emb_);
  }
  return out;
}

std::vector<const nn::Param*> ReaderModel::parameters() const {
  auto mut = const_cast<ReaderModel*>(this)->parameters();
  return {mut.begin(), mut.end()};
}

void ReaderModel::zero_grad() {
  for (auto* p : parameters()) p->zero_grad();
}

Eigen::MatrixXd ReaderModel::embed_text(std::span<const std::string> words) const {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(text_->dim(), static_cast<Eigen::Index>(words.size()));
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i] == text::kPlaceholder) continue;
    if (const auto* v = text_->find(words[i])) x.col(static_cast<Eigen::Index>(i)) = *v;
  }
  return x;
}

std::vector<Eigen::Index> ReaderModel::gloss_ids_for(std::string_view word) const {
  std::vector<Eigen::Index> ids;
  if (!gloss_fn_) return ids;
  const Eigen::Index unk = static_cast<Eigen::Index>(gloss_vocab_.size());
  for (const auto& t : gloss_tokens(gloss_fn_(word))) {
    auto it = gloss_index_.find(t);
    ids.push_back(it == gloss_index_.end() ? unk : it->second);
  }
  return ids;
}

Eigen::Index ReaderModel::emb_column(std::string_view word) const {
  auto it = vocab_index_.find(text::to_lower(word));
  return it == vocab_index_.end() ? static_cast<Eigen::Index>(vocab_.size()) : it->second;
}

std::vector<std::string> ReaderModel::candidates_for(const ReaderItem& item) const {
  if (!item.options.empty()) {
    std::vector<std::string> out;
    for (const auto& o : item.options) out.push_back(text::to_lower(o));
    return out;
  }
  return vocab_;
}

CandidateSet ReaderModel::prepare(std::span<const std::string> candidates) const {
  CandidateSet set;
  for (const auto& c : candidates) {
    const std::string w = text::to_lower(c);
    const Eigen::Index col = emb_column(w);
    set.emb_columns.push_back(col);
    if (variant_ == Variant::kAmwg) {
      auto ids = col < static_cast<Eigen::Index>(vocab_.size()) ? vocab_gloss_ids_[static_cast<std::size_t>(col)]
                                                                : gloss_ids_for(w);
      Eigen::MatrixXd states;
      if (!ids.empty()) {
        Eigen::MatrixXd g(gloss_emb_.value.rows(), static_cast<Eigen::Index>(ids.size()));
        for (std::size_t j = 0; j < ids.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = gloss_emb_.value.col(ids[j]);
        states = gloss_enc_.forward(g, nullptr);
      }
      set.gloss_ids.push_back(std::move(ids));
      set.gloss_states.push_back(std::move(states));
    }
    set.words.push_back(w);
  }
  return set;
}

Eigen::VectorXd ReaderModel::probabilities(const ReaderItem& item, const CandidateSet& cands,
                                           AttentionTrace* trace) const {
  const Eigen::Index h2 = 2 * shape_.hidden;
  const std::size_t q = placeholder_index(item);
  if (item.passage.empty()) throw ValidationError("item " + item.id + " has an empty passage", "empty_passage");
  if (cands.words.empty()) throw ValidationError("no candidates to score", "no_candidates");

  const Eigen::MatrixXd s_emb = embed_text(item.summary);
  Eigen::MatrixXd x = embed_text(item.passage);
  const std::size_t layers = passage_enc_.size();
  Eigen::MatrixXd hp, hs;
  for (std::size_t k = 0; k < layers; ++k) {
    hp = passage_enc_[k].forward(x, nullptr);
    hs = summary_enc_[k].forward(s_emb, nullptr);
    if (k + 1 < layers) {
      Eigen::MatrixXd scores = hp.transpose() * hs;  // Tp x Ts
      Eigen::MatrixXd attn(scores.rows(), scores.cols());
      for (Eigen::Index i = 0; i < scores.rows(); ++i) attn.row(i) = nn::softmax(scores.row(i).transpose()).transpose();
      if (trace) trace->gate.push_back(attn);
      x = hp.cwiseProduct(hs * attn.transpose());
    }
  }
  const Eigen::VectorXd hq = hs.col(static_cast<Eigen::Index>(q));
  const Eigen::VectorXd u = w_att_.value.transpose() * hq;
  const Eigen::VectorXd alpha = nn::softmax(hp.transpose() * u);
  const Eigen::VectorXd p = hp * alpha;
  if (trace) trace->passage = alpha;
  Eigen::VectorXd z(2 * h2);
  if (variant_ == Variant::kGa) {
    z << hq, p;
  } else {
    z << p, hq;
  }
  const Eigen::VectorXd y = w_out_.value.transpose() * z;
  const Eigen::Index n = static_cast<Eigen::Index>(cands.words.size());
  Eigen::VectorXd logits(n);
  if (variant_ == Variant::kAmwg) {
    const Eigen::VectorXd c = (w_gloss_.value * z + b_gloss_.value.col(0)).array().tanh().matrix();
    for (Eigen::Index t = 0; t < n; ++t) {
      const auto& g = cands.gloss_states[static_cast<std::size_t>(t)];
      Eigen::VectorXd ag = Eigen::VectorXd::Zero(h2);
      if (g.cols() > 0) {
        const Eigen::VectorXd beta = nn::softmax(g.transpose() * c);
        ag = g * beta;
        if (trace) trace->gloss.push_back(beta);
      } else if (trace) {
        trace->gloss.emplace_back();
      }
      logits(t) = y.head(h2).dot(ag) + y.tail(text_->dim()).dot(cand_emb_.value.col(cands.emb_columns[static_cast<std::size_t>(t)]));
    }
  } else {
    for (Eigen::Index t = 0; t < n; ++t) {
      logits(t) = y.dot(cand_emb_.value.col(cands.emb_columns[static_cast<std::size_t>(t)]));
    }
  }
  return nn::softmax(logits);
}

Eigen::VectorXd ReaderModel::probabilities(const ReaderItem& item) const {
  auto words = candidates_for(item);
  return probabilities(item, prepare(words));
}

double ReaderModel::loss(std::span<const ReaderItem* const> batch) const {
  double total = 0;
  for (const ReaderItem* item : batch) {
    auto words = candidates_for(*item);
    auto it = std::find(words.begin(), words.end(), text::to_lower(item->gold));
    if (it == words.end()) throw ValidationError("gold '" + item->gold + "' not among candidates of " + item->id, "bad_gold");
    const Eigen::VectorXd probs = probabilities(*item, prepare(words));
    total -= std::log(probs(it - words.begin()));
  }
  return total;
}

double ReaderModel::accumulate_gradients(std::span<const ReaderItem* const> batch, nn::Rng* rng, double rate) {
  const bool drop = rng != nullptr && rate > 0.0;
  const Eigen::Index e = text_->dim();
  const Eigen::Index h2 = 2 * shape_.hidden;
  const std::size_t layers = passage_enc_.size();

  // Candidate gloss encodings are shared across the batch: one forward and
  // one backward per distinct candidate word.
  struct GlossEntry {
    std::vector<Eigen::Index> ids;
    Eigen::MatrixXd states, mask, d_states;
    BiGru::Cache cache;
  };
  std::map<std::string, GlossEntry> glosses;
  auto gloss_for = [&](const std::string& w, Eigen::Index col) -> GlossEntry& {
    auto [it, inserted] = glosses.try_emplace(w);
    GlossEntry& entry = it->second;
    if (inserted) {
      entry.ids = col < static_cast<Eigen::Index>(vocab_.size()) ? vocab_gloss_ids_[static_cast<std::size_t>(col)]
                                                                 : gloss_ids_for(w);
      if (!entry.ids.empty()) {
        Eigen::MatrixXd g(e, static_cast<Eigen::Index>(entry.ids.size()));
        for (std::size_t j = 0; j < entry.ids.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = gloss_emb_.value.col(entry.ids[j]);
        if (drop) {
          entry.mask = DropoutMask(g.rows(), g.cols(), rate, *rng);
          g = g.cwiseProduct(entry.mask);
        }
        entry.states = gloss_enc_.forward(g, &entry.cache);
        entry.d_states = Eigen::MatrixXd::Zero(entry.states.rows(), entry.states.cols());
      }
    }
    return entry;
  };

  double total = 0;
  for (const ReaderItem* item : batch) {
    const auto words = candidates_for(*item);
    const std::string gold = text::to_lower(item->gold);
    const auto gold_it = std::find(words.begin(), words.end(), gold);
    if (gold_it == words.end()) {
      throw ValidationError("gold '" + item->gold + "' not among candidates of " + item->id, "bad_gold");
    }
    const Eigen::Index gold_pos = gold_it - words.begin();
    const std::size_t q = placeholder_index(*item);
    if (item->passage.empty()) throw ValidationError("item " + item->id + " has an empty passage", "empty_passage");
    const Eigen::Index n = static_cast<Eigen::Index>(words.size());
    std::vector<Eigen::Index> cols;
    for (const auto& w : words) cols.push_back(emb_column(w));

    // ---- forward
    const Eigen::MatrixXd s_emb = embed_text(item->summary);
    Eigen::MatrixXd x = embed_text(item->passage);
    std::vector<BiGru::Cache> p_cache(layers), s_cache(layers);
    std::vector<Eigen::MatrixXd> p_mask(layers), s_mask(layers), hp(layers), hs(layers), gate(layers);
    for (std::size_t k = 0; k < layers; ++k) {
      Eigen::MatrixXd xin = x;
      Eigen::MatrixXd sin = s_emb;
      if (drop) {
        p_mask[k] = DropoutMask(xin.rows(), xin.cols(), rate, *rng);
        s_mask[k] = DropoutMask(sin.rows(), sin.cols(), rate, *rng);
        xin = xin.cwiseProduct(p_mask[k]);
        sin = sin.cwiseProduct(s_mask[k]);
      }
      hp[k] = passage_enc_[k].forward(xin, &p_cache[k]);
      hs[k] = summary_enc_[k].forward(sin, &s_cache[k]);
      if (k + 1 < layers) {
        Eigen::MatrixXd scores = hp[k].transpose() * hs[k];
        gate[k].resize(scores.rows(), scores.cols());
        for (Eigen::Index i = 0; i < scores.rows(); ++i) {
          gate[k].row(i) = nn::softmax(scores.row(i).transpose()).transpose();
        }
        x = hp[k].cwiseProduct(hs[k] * gate[k].transpose());
      }
    }
    const Eigen::MatrixXd& top_p = hp[layers - 1];
    const Eigen::MatrixXd& top_s = hs[layers - 1];
    const Eigen::VectorXd hq = top_s.col(static_cast<Eigen::Index>(q));
    const Eigen::VectorXd u = w_att_.value.transpose() * hq;
    const Eigen::VectorXd alpha = nn::softmax(top_p.transpose() * u);
    const Eigen::VectorXd p = top_p * alpha;
    Eigen::VectorXd z(2 * h2);
    if (variant_ == Variant::kGa) {
      z << hq, p;
    } else {
      z << p, hq;
    }
    Eigen::VectorXd z_mask;
    Eigen::VectorXd zd = z;
    if (drop) {
      z_mask = DropoutMask(z.size(), 1, rate, *rng).col(0);
      zd = z.cwiseProduct(z_mask);
    }
    const Eigen::VectorXd y = w_out_.value.transpose() * zd;
    Eigen::VectorXd logits(n);
    Eigen::VectorXd c;
    std::vector<Eigen::VectorXd> beta(static_cast<std::size_t>(n));
    std::vector<GlossEntry*> entries(static_cast<std::size_t>(n), nullptr);
    Eigen::MatrixXd reps(w_out_.value.cols(), n);
    if (variant_ == Variant::kAmwg) {
      c = (w_gloss_.value * zd + b_gloss_.value.col(0)).array().tanh().matrix();
      for (Eigen::Index t = 0; t < n; ++t) {
        GlossEntry& g = gloss_for(words[static_cast<std::size_t>(t)], cols[static_cast<std::size_t>(t)]);
        entries[static_cast<std::size_t>(t)] = &g;
        Eigen::VectorXd ag = Eigen::VectorXd::Zero(h2);
        if (g.states.cols() > 0) {
          beta[static_cast<std::size_t>(t)] = nn::softmax(g.states.transpose() * c);
          ag = g.states * beta[static_cast<std::size_t>(t)];
        }
        reps.col(t) << ag, cand_emb_.value.col(cols[static_cast<std::size_t>(t)]);
      }
    } else {
      for (Eigen::Index t = 0; t < n; ++t) reps.col(t) = cand_emb_.value.col(cols[static_cast<std::size_t>(t)]);
    }
    logits = reps.transpose() * y;
    const Eigen::VectorXd probs = nn::softmax(logits);
    total -= std::log(probs(gold_pos));

    // ---- backward
    Eigen::VectorXd dr = probs;
    dr(gold_pos) -= 1.0;
    const Eigen::VectorXd dy = reps * dr;
    const Eigen::MatrixXd dreps = y * dr.transpose();
    w_out_.grad += zd * dy.transpose();
    Eigen::VectorXd dzd = w_out_.value * dy;
    for (Eigen::Index t = 0; t < n; ++t) {
      cand_emb_.grad.col(cols[static_cast<std::size_t>(t)]) += dreps.col(t).tail(e);
    }
    if (variant_ == Variant::kAmwg) {
      Eigen::VectorXd dc = Eigen::VectorXd::Zero(h2);
      for (Eigen::Index t = 0; t < n; ++t) {
        GlossEntry& g = *entries[static_cast<std::size_t>(t)];
        if (g.states.cols() == 0) continue;
        const Eigen::VectorXd& b = beta[static_cast<std::size_t>(t)];
        const Eigen::VectorXd dag = dreps.col(t).head(h2);
        const Eigen::VectorXd dbeta = g.states.transpose() * dag;
        g.d_states += dag * b.transpose();
        const Eigen::VectorXd de = nn::softmax_backward(b, dbeta);
        dc += g.states * de;
        g.d_states += c * de.transpose();
      }
      const Eigen::VectorXd dpre = dc.cwiseProduct((1.0 - c.array().square()).matrix());
      w_gloss_.grad += dpre * zd.transpose();
      b_gloss_.grad += dpre;
      dzd += w_gloss_.value.transpose() * dpre;
    }
    const Eigen::VectorXd dz = drop ? Eigen::VectorXd(dzd.cwiseProduct(z_mask)) : dzd;
    Eigen::VectorXd dhq, dp;
    if (variant_ == Variant::kGa) {
      dhq = dz.head(h2);
      dp = dz.tail(h2);
    } else {
      dp = dz.head(h2);
      dhq = dz.tail(h2);
    }
    Eigen::MatrixXd dhp = dp * alpha.transpose();
    const Eigen::VectorXd dalpha = top_p.transpose() * dp;
    const Eigen::VectorXd de = nn::softmax_backward(alpha, dalpha);
    const Eigen::VectorXd du = top_p * de;
    dhp += u * de.transpose();
    dhq += w_att_.value * du;
    w_att_.grad += hq * du.transpose();
    Eigen::MatrixXd dhs = Eigen::MatrixXd::Zero(top_s.rows(), top_s.cols());
    dhs.col(static_cast<Eigen::Index>(q)) += dhq;

    for (std::size_t k = layers; k-- > 0;) {
      Eigen::MatrixXd dx = passage_enc_[k].backward(p_cache[k], dhp);
      summary_enc_[k].backward(s_cache[k], dhs);  // inputs are fixed embeddings
      if (drop) dx = dx.cwiseProduct(p_mask[k]);
      if (k == 0) break;
      // x_k = hp_{k-1} .* (hs_{k-1} A^T)
      const Eigen::MatrixXd& php = hp[k - 1];
      const Eigen::MatrixXd& phs = hs[k - 1];
      const Eigen::MatrixXd& a = gate[k - 1];
      const Eigen::MatrixXd qv = phs * a.transpose();
      Eigen::MatrixXd next_dhp = dx.cwiseProduct(qv);
      const Eigen::MatrixXd dq = dx.cwiseProduct(php);
      Eigen::MatrixXd next_dhs = dq * a;
      const Eigen::MatrixXd da = dq.transpose() * phs;
      Eigen::MatrixXd ds(a.rows(), a.cols());
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        ds.row(i) = nn::softmax_backward(a.row(i).transpose(), da.row(i).transpose()).transpose();
      }
      next_dhp += phs * ds.transpose();
      next_dhs += php * ds;
      dhp = std::move(next_dhp);
      dhs = std::move(next_dhs);
    }
  }

  for (auto& [w, g] : glosses) {
    if (g.states.cols() == 0) continue;
    Eigen::MatrixXd dg = gloss_enc_.backward(g.cache, g.d_states);
    if (drop) dg = dg.cwiseProduct(g.mask);
    for (std::size_t j = 0; j < g.ids.size(); ++j) gloss_emb_.grad.col(g.ids[j]) += dg.col(static_cast<Eigen::Index>(j));
  }
  return total;
}

std::vector<std::pair<std::string, double>> predict_topk(const ReaderModel& model, const ReaderItem& item,
                                                         const CandidateSet& prepared, std::size_t k) {
  const Eigen::VectorXd probs = model.probabilities(item, prepared);
  std::vector<std::size_t> order(prepared.words.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = probs(static_cast<Eigen::Index>(a));
    const double pb = probs(static_cast<Eigen::Index>(b));
    if (pa != pb) return pa > pb;
    return prepared.words[a] < prepared.words[b];
  });
  order.resize(std::min(k, order.size()));
  std::vector<std::pair<std::string, double>> out;
  for (auto i : order) out.emplace_back(prepared.words[i], probs(static_cast<Eigen::Index>(i)));
  return out;
}

std::vector<std::pair<std::string, double>> predict_topk(const ReaderModel& model, const ReaderItem& item,
                                                         std::span<const std::string> vocab, std::size_t k) {
  if (vocab.empty()) throw ValidationError("empty prediction vocabulary", "no_candidates");
  return predict_topk(model, item, model.prepare(vocab), k);
}

}  // namespace recam::readers
