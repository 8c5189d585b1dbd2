#pragma once

#include "ifno/model.hpp"

namespace ifno {

/// Cotangents for every free parameter, congruent with ModelParameters::values.
using GradientSet = Eigen::VectorXd;

/// Recorded primal intermediates of one forward evaluation.
struct Tape {
  ModelConfig cfg;
  ForwardTrace trace;
};

/// Same computation as forward(); additionally returns the tape.
std::pair<ChannelField, Tape> forward_with_tape(const ModelConfig& cfg,
                                                const ModelParameters& p,
                                                const ChannelField& a);

/// Exact reverse-mode gradients of a scalar loss, given its cotangent with
/// respect to the (denormalized) prediction.
GradientSet backward(const Tape& tape, const ModelParameters& p,
                     const ChannelField& loss_cotangent);

/// Mean-free scalar training loss: per-sample relative L2 over all output
/// values. Writes the prediction cotangent into `cotangent` when non-null.
double relative_l2_loss(const ChannelField& pred, const ChannelField& truth,
                        ChannelField* cotangent);

/// Central finite differences of the training loss against backward() over
/// every parameter. Returns max over parameters of
/// |analytic - numeric| / max(1, |numeric|). Intended for tiny models.
double grad_check(const ModelConfig& cfg, const ModelParameters& p, const ChannelField& a,
                  const ChannelField& target, double eps);

}  // namespace ifno
