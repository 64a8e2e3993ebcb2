#include "recam/readers/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "recam/error.hpp"
#include "recam/text.hpp"

namespace recam::readers {

double accuracy(const ReaderModel& model, std::span<const ReaderItem> items) {
  if (items.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& item : items) {
    const auto words = model.candidates_for(item);
    const Eigen::VectorXd probs = model.probabilities(item, model.prepare(words));
    Eigen::Index best = 0;
    probs.maxCoeff(&best);
    if (words[static_cast<std::size_t>(best)] == text::to_lower(item.gold)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(items.size());
}

double mean_loss(const ReaderModel& model, std::span<const ReaderItem> items) {
  if (items.empty()) return 0.0;
  std::vector<const ReaderItem*> ptrs;
  for (const auto& it : items) ptrs.push_back(&it);
  return model.loss(ptrs) / static_cast<double>(items.size());
}

std::vector<CurvePoint> train(ReaderModel& model, std::span<const ReaderItem> items, const TrainingConfig& cfg,
                              std::span<const ReaderItem> dev, const EpochCallback& on_epoch) {
  if (items.empty()) throw ValidationError("no training items", "empty_dataset");
  if (cfg.batch == 0 || cfg.epochs <= 0) throw ValidationError("batch size and epochs must be positive");
  if (cfg.dropout < 0.0 || cfg.dropout >= 1.0) throw ValidationError("dropout must be in [0, 1)");

  nn::Rng rng(cfg.seed);
  nn::Adam adam(cfg.lr);
  auto params = model.parameters();
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<CurvePoint> curve;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0;
    for (std::size_t start = 0, batch_no = 0; start < order.size(); start += cfg.batch, ++batch_no) {
      const std::size_t end = std::min(order.size(), start + cfg.batch);
      std::vector<const ReaderItem*> batch;
      for (std::size_t i = start; i < end; ++i) batch.push_back(&items[order[i]]);
      model.zero_grad();
      const double loss = model.accumulate_gradients(batch, cfg.dropout > 0 ? &rng : nullptr, cfg.dropout);
      if (!std::isfinite(loss)) throw DivergenceError(epoch, static_cast<int>(batch_no), loss);
      const double scale = 1.0 / static_cast<double>(batch.size());
      for (auto* p : params) p->grad *= scale;
      adam.step(params);
      total += loss;
    }
    CurvePoint tp{epoch, "train", total / static_cast<double>(items.size()), accuracy(model, items)};
    curve.push_back(tp);
    bool keep_going = !on_epoch || on_epoch(tp);
    if (!dev.empty()) {
      CurvePoint dp{epoch, "dev", mean_loss(model, dev), accuracy(model, dev)};
      curve.push_back(dp);
      if (on_epoch) keep_going = on_epoch(dp) && keep_going;
    }
    if (!keep_going) break;
  }
  return curve;
}

void write_curve_csv(const std::filesystem::path& file, std::span<const CurvePoint> curve) {
  std::ofstream out(file);
  if (!out) throw ResourceError("cannot write curve: " + file.string());
  out << "epoch,split,loss,accuracy\n";
  for (const auto& p : curve) out << p.epoch << ',' << p.split << ',' << p.loss << ',' << p.accuracy << '\n';
}

}  // namespace recam::readers
