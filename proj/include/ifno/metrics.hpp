#pragma once

#include <vector>

#include "ifno/darcy.hpp"
#include "ifno/model.hpp"

namespace ifno {

/// ||pred - truth||_2 / ||truth||_2 over grid samples.
double relative_l2(const ScalarGrid& pred, const ScalarGrid& truth);

/// Spectrally weighted Sobolev analogue: weights (1 + kappa^2)^2 on the error
/// and truth spectra. Requires a square power-of-two grid only for the fast
/// path; any shape is accepted.
double relative_h2(const ScalarGrid& pred, const ScalarGrid& truth);

struct MetricReport {
  std::vector<double> l2;
  std::vector<double> h2;
  double mean_l2 = 0.0;
  double mean_h2 = 0.0;
};

/// Evaluate a model over a dataset, transforming both input and target by the
/// given group element first. Means are arithmetic means of per-sample values.
MetricReport dataset_report(const ModelConfig& cfg, const ModelParameters& p,
                            const std::vector<DarcySample>& dataset, GroupElement transform);

}  // namespace ifno
