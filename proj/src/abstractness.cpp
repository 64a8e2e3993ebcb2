#include "recam/abstractness.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <numeric>

#include "recam/text.hpp"

namespace recam {

double scale_rating(int raw) {
  if (raw < kMinRating || raw > kMaxRating) {
    throw DomainError("rating " + std::to_string(raw) + " outside [158, 670]");
  }
  return static_cast<double>(raw - kMinRating) / static_cast<double>(kMaxRating - kMinRating);
}

std::vector<RatingRecord> load_ratings(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ResourceError("cannot open rating file: " + file.string());
  std::vector<RatingRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    auto fields = text::split(line, '\t');
    if (fields.size() != 2) throw ParseError(file.string(), lineno, "expected word<TAB>rating");
    RatingRecord r;
    r.word = text::to_lower(text::trim(fields[0]));
    auto num = text::trim(fields[1]);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), r.raw_rating);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw ParseError(file.string(), lineno, "bad rating '" + num + "'");
    }
    if (r.raw_rating < kMinRating || r.raw_rating > kMaxRating) {
      throw ParseError(file.string(), lineno, "rating outside [158, 670]");
    }
    out.push_back(std::move(r));
  }
  return out;
}

RegressionScorer::RegressionScorer(Eigen::Index input_dim, Eigen::Index hidden1, Eigen::Index hidden2)
    : w1_("W1", hidden1, input_dim),
      b1_("b1", hidden1, 1),
      w2_("W2", hidden2, hidden1),
      b2_("b2", hidden2, 1),
      w3_("w3", hidden2, 1),
      b3_("b3", 1, 1) {}

void RegressionScorer::init(nn::Rng& rng) {
  // He-uniform for the ReLU layers, Glorot for the output unit.
  auto he = [&](Eigen::MatrixXd& m) {
    const double limit = std::sqrt(6.0 / static_cast<double>(m.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  };
  he(w1_.value);
  he(w2_.value);
  nn::glorot(w3_.value, rng);
  b1_.value.setZero();
  b2_.value.setZero();
  b3_.value.setZero();
}

Eigen::VectorXd RegressionScorer::forward(const Eigen::MatrixXd& x) const {
  if (x.rows() != input_dim()) throw DomainError("scorer input dimension mismatch");
  Eigen::MatrixXd a1 = ((w1_.value * x).colwise() + b1_.value.col(0)).cwiseMax(0.0);
  Eigen::MatrixXd a2 = ((w2_.value * a1).colwise() + b2_.value.col(0)).cwiseMax(0.0);
  Eigen::VectorXd z3 = (w3_.value.transpose() * a2).transpose().array() + b3_.value(0, 0);
  return nn::sigmoid(z3.array()).matrix();
}

double RegressionScorer::forward_one(const Eigen::VectorXd& x) const { return forward(x)(0); }

double RegressionScorer::mse(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) const {
  return (forward(x) - y).squaredNorm() / static_cast<double>(y.size());
}

double RegressionScorer::mse_and_gradients(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const double n = static_cast<double>(y.size());
  Eigen::MatrixXd z1 = (w1_.value * x).colwise() + b1_.value.col(0);
  Eigen::MatrixXd a1 = z1.cwiseMax(0.0);
  Eigen::MatrixXd z2 = (w2_.value * a1).colwise() + b2_.value.col(0);
  Eigen::MatrixXd a2 = z2.cwiseMax(0.0);
  Eigen::VectorXd z3 = (w3_.value.transpose() * a2).transpose().array() + b3_.value(0, 0);
  Eigen::VectorXd out = nn::sigmoid(z3.array()).matrix();
  Eigen::VectorXd diff = out - y;

  Eigen::VectorXd dz3 = (2.0 / n) * diff.array() * out.array() * (1.0 - out.array());
  w3_.grad += a2 * dz3;
  b3_.grad(0, 0) += dz3.sum();
  Eigen::MatrixXd dz2 = (w3_.value * dz3.transpose()).array() * (z2.array() > 0).cast<double>();
  w2_.grad += dz2 * a1.transpose();
  b2_.grad += dz2.rowwise().sum();
  Eigen::MatrixXd dz1 = (w2_.value.transpose() * dz2).array() * (z1.array() > 0).cast<double>();
  w1_.grad += dz1 * x.transpose();
  b1_.grad += dz1.rowwise().sum();
  return diff.squaredNorm() / n;
}

void RegressionScorer::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw ResourceError("cannot write scorer checkpoint: " + file.string());
  out << "recam-scorer 1\n";
  out << "dims " << input_dim() << ' ' << hidden1() << ' ' << hidden2() << '\n';
  out << std::setprecision(17);
  for (const nn::Param* p : parameters()) {
    out << p->name << ' ' << p->value.rows() << ' ' << p->value.cols() << '\n';
    for (Eigen::Index r = 0; r < p->value.rows(); ++r) {
      for (Eigen::Index c = 0; c < p->value.cols(); ++c) {
        out << (c ? " " : "") << p->value(r, c);
      }
      out << '\n';
    }
  }
}

RegressionScorer RegressionScorer::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ResourceError("cannot open scorer checkpoint: " + file.string());
  const std::string name = file.string();
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "recam-scorer" || version != 1) {
    throw ParseError(name, 1, "not a recam-scorer v1 checkpoint");
  }
  std::string tag;
  Eigen::Index d = 0, h1 = 0, h2 = 0;
  if (!(in >> tag >> d >> h1 >> h2) || tag != "dims" || d <= 0 || h1 <= 0 || h2 <= 0) {
    throw ParseError(name, 2, "bad dims header");
  }
  RegressionScorer s(d, h1, h2);
  for (nn::Param* p : s.parameters()) {
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> tag >> rows >> cols) || tag != p->name || rows != p->value.rows() ||
        cols != p->value.cols()) {
      throw ParseError(name, 0, "bad block header for " + p->name);
    }
    for (Eigen::Index i = 0; i < rows * cols; ++i) {
      double v = 0;
      if (!(in >> v)) throw ParseError(name, 0, "truncated block " + p->name);
      p->value(i / cols, i % cols) = v;
    }
  }
  return s;
}

ScorerTrainResult train_scorer(std::span<const RatingRecord> data, const EmbeddingTable& table,
                               const ScorerHyper& hyper) {
  if (hyper.hidden1 <= 0 || hyper.hidden2 <= 0 || hyper.batch <= 0 || hyper.epochs < 0 ||
      hyper.lr <= 0) {
    throw ValidationError("invalid scorer hyperparameters");
  }
  ScorerTrainResult result;
  std::vector<const RatingRecord*> kept;
  for (const auto& r : data) {
    if (table.contains(r.word)) {
      kept.push_back(&r);
    } else {
      ++result.dropped_oov;
    }
  }
  if (kept.empty()) throw ValidationError("no rating record has a word vector", "empty_dataset");

  const Eigen::Index n = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd x(table.dim(), n);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x.col(i) = table.at(kept[i]->word);
    y(i) = scale_rating(kept[i]->raw_rating);
  }

  nn::Rng rng(hyper.seed);
  RegressionScorer scorer(table.dim(), hyper.hidden1, hyper.hidden2);
  scorer.init(rng);
  nn::Adam adam(hyper.lr);
  auto params = scorer.parameters();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n; start += hyper.batch) {
      const Eigen::Index m = std::min<Eigen::Index>(hyper.batch, n - start);
      Eigen::MatrixXd xb(x.rows(), m);
      Eigen::VectorXd yb(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        xb.col(k) = x.col(order[static_cast<std::size_t>(start + k)]);
        yb(k) = y(order[static_cast<std::size_t>(start + k)]);
      }
      for (auto* p : params) p->zero_grad();
      const double loss = scorer.mse_and_gradients(xb, yb);
      if (!std::isfinite(loss)) {
        throw DivergenceError(epoch, static_cast<int>(start / hyper.batch), loss);
      }
      adam.step(params);
    }
    result.epoch_mse.push_back(scorer.mse(x, y));
  }
  result.train_mse = scorer.mse(x, y);
  result.scorer = std::move(scorer);
  return result;
}

double imperceptibility(std::string_view word, const RegressionScorer& scorer,
                        const EmbeddingTable& table) {
  return scorer.forward_one(table.at(word));
}

RatingSplit split_ratings(std::span<const RatingRecord> data, std::uint64_t seed) {
  std::vector<RatingRecord> shuffled(data.begin(), data.end());
  nn::Rng rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  RatingSplit out;
  std::size_t n_train = 0, n_test = 0;
  if (shuffled.size() >= kReferenceTrainSize + kReferenceTestSize) {
    n_train = kReferenceTrainSize;
    n_test = kReferenceTestSize;
  } else {
    n_train = shuffled.size() * kReferenceTrainSize / (kReferenceTrainSize + kReferenceTestSize);
    n_test = shuffled.size() - n_train;
  }
  out.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train),
                  shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_test));
  return out;
}

double heldout_pearson(std::span<const RatingRecord> test, const RegressionScorer& scorer,
                       const EmbeddingTable& table) {
  std::vector<double> pred, gold;
  for (const auto& r : test) {
    if (!table.contains(r.word)) continue;
    pred.push_back(imperceptibility(r.word, scorer, table));
    gold.push_back(scale_rating(r.raw_rating));
  }
  return pearson(pred, gold);
}

}  // namespace recam
