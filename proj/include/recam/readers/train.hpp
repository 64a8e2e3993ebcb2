#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "recam/readers/model.hpp"

namespace recam::readers {

struct TrainingConfig {
  int epochs = 10;
  std::size_t batch = 32;
  double lr = 1e-3;
  double dropout = 0.3;
  std::uint64_t seed = 0;
};

struct CurvePoint {
  int epoch = 0;
  std::string split;  // "train" | "dev"
  double loss = 0;    // mean NLL per item
  double accuracy = 0;
};

// Called after each epoch; returning false stops training early.
using EpochCallback = std::function<bool(const CurvePoint&)>;

// Minibatch Adam on the gold NLL. Items are shuffled each epoch with a
// generator seeded from cfg.seed. Throws DivergenceError on a non-finite
// batch loss.
std::vector<CurvePoint> train(ReaderModel& model, std::span<const ReaderItem> items, const TrainingConfig& cfg,
                              std::span<const ReaderItem> dev = {}, const EpochCallback& on_epoch = nullptr);

// Fraction of items whose argmax candidate is the gold word.
double accuracy(const ReaderModel& model, std::span<const ReaderItem> items);
// Mean gold NLL.
double mean_loss(const ReaderModel& model, std::span<const ReaderItem> items);

void write_curve_csv(const std::filesystem::path& file, std::span<const CurvePoint> curve);

}  // namespace recam::readers
