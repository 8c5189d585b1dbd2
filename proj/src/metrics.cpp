#include "ifno/metrics.hpp"

#include "ifno/fft.hpp"

namespace ifno {

double relative_l2(const ScalarGrid& pred, const ScalarGrid& truth) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
    throw std::invalid_argument("relative_l2: shape mismatch");
  }
  const double tn = truth.norm();
  if (tn == 0.0) throw std::invalid_argument("relative_l2: zero-norm truth");
  return (pred - truth).norm() / tn;
}

double relative_h2(const ScalarGrid& pred, const ScalarGrid& truth) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
    throw std::invalid_argument("relative_h2: shape mismatch");
  }
  const ScalarGrid wgt =
      spectral_h2_weights(static_cast<int>(truth.rows()), static_cast<int>(truth.cols()));
  const ComplexGrid err_hat = fft2((pred - truth).cast<std::complex<double>>());
  const ComplexGrid truth_hat = fft2(truth.cast<std::complex<double>>());
  const double num = (wgt.array() * err_hat.array().abs2()).sum();
  const double den = (wgt.array() * truth_hat.array().abs2()).sum();
  if (den == 0.0) throw std::invalid_argument("relative_h2: zero-norm truth");
  return std::sqrt(num / den);
}

MetricReport dataset_report(const ModelConfig& cfg, const ModelParameters& p,
                            const std::vector<DarcySample>& dataset, GroupElement transform) {
  if (dataset.empty()) throw std::invalid_argument("dataset_report: empty dataset");
  MetricReport rep;
  rep.l2.reserve(dataset.size());
  rep.h2.reserve(dataset.size());
  for (const DarcySample& s : dataset) {
    const ScalarGrid a = apply_group(transform, s.a);
    const ScalarGrid u = apply_group(transform, s.u);
    const ChannelField pred = forward(cfg, p, ChannelField::from_grid(a));
    rep.l2.push_back(relative_l2(pred.channel_copy(0), u));
    rep.h2.push_back(relative_h2(pred.channel_copy(0), u));
  }
  const auto n = static_cast<double>(dataset.size());
  for (double v : rep.l2) rep.mean_l2 += v;
  for (double v : rep.h2) rep.mean_h2 += v;
  rep.mean_l2 /= n;
  rep.mean_h2 /= n;
  return rep;
}

}  // namespace ifno
