#include "ifno/train.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include "ifno/metrics.hpp"

namespace ifno {

double cosine_lr(int epoch, const TrainConfig& cfg) {
  return cfg.lr_min + 0.5 * (cfg.lr0 - cfg.lr_min) *
                          (1.0 + std::cos(std::numbers::pi * epoch / cfg.epochs));
}

void adam_step(ModelParameters& params, const GradientSet& grads, AdamState& state, double lr,
               const TrainConfig& cfg) {
  if (grads.size() != params.values.size() || state.m.size() != params.values.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  if (cfg.weight_decay != 0.0) {
    params.values *= 1.0 - lr * cfg.weight_decay;
  }
  state.step += 1;
  state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grads;
  state.v.array() = cfg.beta2 * state.v.array() + (1.0 - cfg.beta2) * grads.array().square();
  const double bc1 = 1.0 - std::pow(cfg.beta1, state.step);
  const double bc2 = 1.0 - std::pow(cfg.beta2, state.step);
  params.values.array() -=
      lr * (state.m.array() / bc1) / ((state.v.array() / bc2).sqrt() + cfg.eps);
}

namespace {

NormStats fit_normalization(const std::vector<DarcySample>& train_set) {
  NormStats n;
  double sum_a = 0.0, sum_a2 = 0.0, sum_u = 0.0, sum_u2 = 0.0;
  long count = 0;
  for (const DarcySample& s : train_set) {
    sum_a += s.a.sum();
    sum_a2 += s.a.array().square().sum();
    sum_u += s.u.sum();
    sum_u2 += s.u.array().square().sum();
    count += s.a.size();
  }
  n.in_mean = sum_a / count;
  n.in_std = std::sqrt(std::max(0.0, sum_a2 / count - n.in_mean * n.in_mean));
  if (n.in_std == 0.0) n.in_std = 1.0;
  n.out_mean = sum_u / count;
  n.out_std = std::sqrt(std::max(0.0, sum_u2 / count - n.out_mean * n.out_mean));
  if (n.out_std == 0.0) n.out_std = 1.0;
  return n;
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const ModelConfig& mcfg,
                  const std::vector<DarcySample>& train_set,
                  const std::vector<DarcySample>& test_set, std::ostream* log) {
  if (train_set.empty() || test_set.empty()) {
    throw std::invalid_argument("train: datasets must be non-empty");
  }
  const int res = static_cast<int>(train_set.front().a.rows());
  for (const auto* set : {&train_set, &test_set}) {
    for (const DarcySample& s : *set) {
      if (s.a.rows() != res || s.a.cols() != res || s.u.rows() != res || s.u.cols() != res) {
        throw std::invalid_argument("train: non-uniform dataset resolution");
      }
    }
  }
  if (2 * mcfg.modes > res) {
    throw std::invalid_argument("train: modes incompatible with dataset resolution");
  }

  TrainResult result;
  result.params = init_parameters(mcfg, cfg.seed);
  result.params.norm = fit_normalization(train_set);

  AdamState state(result.params.values.size());
  std::mt19937_64 shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<int> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cosine_lr(epoch, cfg);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      GradientSet grad = GradientSet::Zero(result.params.values.size());
      for (std::size_t idx = start; idx < stop; ++idx) {
        const DarcySample& s = train_set[order[idx]];
        auto [pred, tape] =
            forward_with_tape(mcfg, result.params, ChannelField::from_grid(s.a));
        ChannelField cot;
        relative_l2_loss(pred, ChannelField::from_grid(s.u), &cot);
        grad += backward(tape, result.params, cot);
      }
      grad /= static_cast<double>(stop - start);
      adam_step(result.params, grad, state, lr, cfg);
    }

    const MetricReport train_rep =
        dataset_report(mcfg, result.params, train_set, GroupElement::identity);
    const MetricReport test_rep =
        dataset_report(mcfg, result.params, test_set, GroupElement::identity);
    result.history.push_back(
        {train_rep.mean_l2, test_rep.mean_l2, train_rep.mean_h2, test_rep.mean_h2});
    if (log) {
      (*log) << "epoch " << epoch + 1 << "/" << cfg.epochs << "  lr " << lr << "  train_l2 "
             << train_rep.mean_l2 << "  test_l2 " << test_rep.mean_l2 << "  train_h2 "
             << train_rep.mean_h2 << "  test_h2 " << test_rep.mean_h2 << std::endl;
    }
  }
  return result;
}

}  // namespace ifno
