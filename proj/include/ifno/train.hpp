#pragma once

#include <iosfwd>

#include "ifno/autodiff.hpp"
#include "ifno/darcy.hpp"

namespace ifno {

struct TrainConfig {
  int epochs = 100;
  int batch_size = 20;
  double lr0 = 1e-3;
  double lr_min = 0.0;
  double weight_decay = 1e-4;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// lr_min + 0.5 * (lr0 - lr_min) * (1 + cos(pi * epoch / epochs)).
double cosine_lr(int epoch, const TrainConfig& cfg);

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;

  explicit AdamState(Eigen::Index n)
      : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

/// Adam with bias correction; decoupled weight decay is applied to the
/// parameters before the moment update.
void adam_step(ModelParameters& params, const GradientSet& grads, AdamState& state, double lr,
               const TrainConfig& cfg);

struct EpochMetrics {
  double train_l2 = 0.0;
  double test_l2 = 0.0;
  double train_h2 = 0.0;
  double test_h2 = 0.0;
};

struct TrainResult {
  ModelParameters params;
  std::vector<EpochMetrics> history;
};

/// Full training protocol: fit normalization scalars on the training set,
/// then run seeded shuffled mini-batches with the mean per-sample relative L2
/// loss and a per-epoch cosine schedule. Deterministic given the seed.
TrainResult train(const TrainConfig& cfg, const ModelConfig& mcfg,
                  const std::vector<DarcySample>& train_set,
                  const std::vector<DarcySample>& test_set, std::ostream* log = nullptr);

}  // namespace ifno
