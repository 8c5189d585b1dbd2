#include "ifno/model.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ifno {

ParamLayout layout_of(const ModelConfig& cfg) {
  const int dv = cfg.width;
  const ModeSet set = retained_modes(cfg.variant, cfg.modes);
  ParamLayout lo;
  lo.kernel_scalars = cfg.variant == Variant::standard
                          ? static_cast<Eigen::Index>(dv) * dv * set.slots() * 2
                          : static_cast<Eigen::Index>(dv) * dv * generator_size(cfg.modes);
  lo.field_scalars = static_cast<Eigen::Index>(cfg.modes) * cfg.modes;
  Eigen::Index at = 0;
  lo.p_weight = at;
  at += static_cast<Eigen::Index>(dv) * (cfg.in_channels + 1);
  lo.p_bias = at;
  at += dv;
  lo.pos_field = at;
  at += lo.field_scalars;
  lo.layer.resize(cfg.layers);
  for (int l = 0; l < cfg.layers; ++l) {
    lo.layer[l].kernel = at;
    at += lo.kernel_scalars;
    lo.layer[l].w = at;
    at += static_cast<Eigen::Index>(dv) * dv;
    lo.layer[l].b = at;
    at += dv;
  }
  lo.q1_weight = at;
  at += static_cast<Eigen::Index>(cfg.projection_hidden) * dv;
  lo.q1_bias = at;
  at += cfg.projection_hidden;
  lo.q2_weight = at;
  at += static_cast<Eigen::Index>(cfg.out_channels) * cfg.projection_hidden;
  lo.q2_bias = at;
  at += cfg.out_channels;
  lo.out_field = at;
  at += lo.field_scalars;
  lo.total = at;
  return lo;
}

std::int64_t count_parameters(const ModelConfig& cfg) { return layout_of(cfg).total; }

Eigen::MatrixXd cosine_basis(int m, int n) {
  Eigen::MatrixXd phi(m, n);
  for (int p = 0; p < m; ++p) {
    for (int i = 0; i < n; ++i) {
      phi(p, i) = std::cos(std::numbers::pi * p * (2.0 * i - n + 1.0) / n);
    }
  }
  return phi;
}

ScalarGrid expand_field(const Eigen::Ref<const RowMatrixXd>& gen, int h, int w) {
  if (gen.rows() != gen.cols()) {
    throw std::invalid_argument("expand_field: coefficient block must be square");
  }
  const int m = static_cast<int>(gen.rows());
  const Eigen::MatrixXd sym = 0.5 * (gen + gen.transpose());
  return cosine_basis(m, h).transpose() * sym * cosine_basis(m, w);
}

std::int64_t spectral_parameter_count(const ModelConfig& cfg) {
  return static_cast<std::int64_t>(layout_of(cfg).kernel_scalars) * cfg.layers;
}

Eigen::MatrixXcd kernel_slots(const ModelConfig& cfg, const ModelParameters& p, int l) {
  const ParamLayout lo = layout_of(cfg);
  const ModeSet set = retained_modes(cfg.variant, cfg.modes);
  const Eigen::Index pairs = static_cast<Eigen::Index>(cfg.width) * cfg.width;
  const double* base = p.values.data() + lo.layer[l].kernel;
  if (cfg.variant == Variant::standard) {
    return Eigen::Map<const RowMatrixXcd>(
        reinterpret_cast<const std::complex<double>*>(base), pairs, set.slots());
  }
  IsoGenerator g(cfg.width, cfg.width, cfg.modes);
  g.values = Eigen::Map<const Eigen::VectorXd>(base, g.values.size());
  return expand_generator(g, set).weights;
}

ModelParameters init_parameters(const ModelConfig& cfg, std::uint64_t seed) {
  const ParamLayout lo = layout_of(cfg);
  ModelParameters p;
  p.values.resize(lo.total);
  std::mt19937_64 rng(seed);
  auto fill_uniform = [&rng](double* dst, Eigen::Index n, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    for (Eigen::Index i = 0; i < n; ++i) dst[i] = dist(rng);
  };
  // Spectral weights follow the reference convention of uniform on
  // [0, scale): an all-positive kernel starts the spectral branch out as a
  // coherent low-pass operator rather than channel-cancelling noise, which
  // a symmetric draw at this scale would produce.
  auto fill_uniform_positive = [&rng](double* dst, Eigen::Index n, double scale) {
    std::uniform_real_distribution<double> dist(0.0, scale);
    for (Eigen::Index i = 0; i < n; ++i) dst[i] = dist(rng);
  };
  const int dv = cfg.width;
  double* v = p.values.data();
  // Affine maps that feed a relu use the fan-in scaling with relu gain
  // (uniform bound sqrt(6/fan)); the linear output stage uses 1/sqrt(fan).
  // Without the gain the relu stack contracts spatial variation ~0.58x per
  // layer and a 4-layer model starts from a near-constant predictor.
  const int lift_fan = cfg.in_channels + 1;  // data channels plus the positional channel
  const double lift_scale = std::sqrt(6.0 / static_cast<double>(lift_fan));
  fill_uniform(v + lo.p_weight, static_cast<Eigen::Index>(dv) * lift_fan, lift_scale);
  fill_uniform(v + lo.p_bias, dv, 1.0 / std::sqrt(static_cast<double>(lift_fan)));
  // Both learned fields start at zero: the untrained model is exactly
  // translation-equivariant and acquires positional structure only if the
  // data demands it.
  p.values.segment(lo.pos_field, lo.field_scalars).setZero();
  p.values.segment(lo.out_field, lo.field_scalars).setZero();
  const double spectral_scale = 1.0 / (static_cast<double>(dv) * dv);
  const double mix_scale = std::sqrt(6.0 / static_cast<double>(dv));
  const double bias_scale = 1.0 / std::sqrt(static_cast<double>(dv));
  for (int l = 0; l < cfg.layers; ++l) {
    fill_uniform_positive(v + lo.layer[l].kernel, lo.kernel_scalars, spectral_scale);
    fill_uniform(v + lo.layer[l].w, static_cast<Eigen::Index>(dv) * dv, mix_scale);
    fill_uniform(v + lo.layer[l].b, dv, bias_scale);
  }
  fill_uniform(v + lo.q1_weight, static_cast<Eigen::Index>(cfg.projection_hidden) * dv,
               mix_scale);
  fill_uniform(v + lo.q1_bias, cfg.projection_hidden, bias_scale);
  const double proj_scale = 1.0 / std::sqrt(static_cast<double>(cfg.projection_hidden));
  fill_uniform(v + lo.q2_weight,
               static_cast<Eigen::Index>(cfg.out_channels) * cfg.projection_hidden, proj_scale);
  fill_uniform(v + lo.q2_bias, cfg.out_channels, proj_scale);
  return p;
}

namespace {

// Spectral branch shared by inference and the taped forward: returns the
// inverse-transformed branch output and the gathered input spectra.
void spectral_branch(const ChannelField& v, const Eigen::MatrixXcd& kernel, const ModeSet& set,
                     ChannelField& z, Eigen::MatrixXcd& blocks) {
  const int c = v.channels();
  const int h = v.height;
  const int w = v.width;
  blocks.resize(c, set.slots());
  for (int i = 0; i < c; ++i) {
    SpectrumHalf s = rfft2(v.channel_copy(i));
    for (int r = 0; r < set.rows(); ++r) {
      const int row = ((set.kx[r] % h) + h) % h;
      for (int ky = 0; ky < set.m; ++ky) blocks(i, r * set.m + ky) = s(row, ky);
    }
  }
  z = ChannelField(c, h, w);
  Eigen::RowVectorXcd acc(set.slots());
  for (int o = 0; o < c; ++o) {
    acc.setZero();
    for (int i = 0; i < c; ++i) {
      acc += kernel.row(static_cast<Eigen::Index>(o) * c + i).cwiseProduct(blocks.row(i));
    }
    SpectrumHalf s = SpectrumHalf::Zero(h, w / 2 + 1);
    for (int r = 0; r < set.rows(); ++r) {
      const int row = ((set.kx[r] % h) + h) % h;
      for (int ky = 0; ky < set.m; ++ky) s(row, ky) = acc(r * set.m + ky);
    }
    z.set_channel(o, irfft2(s, w));
  }
}

}  // namespace

ChannelField fourier_layer(const ChannelField& v, const Eigen::MatrixXcd& kernel,
                           const ModeSet& set, const Eigen::MatrixXd& W,
                           const Eigen::VectorXd& b) {
  ChannelField z;
  Eigen::MatrixXcd blocks;
  spectral_branch(v, kernel, set, z, blocks);
  ChannelField pre = pointwise_affine(v, W, b);
  pre.data += z.data;
  return relu(pre);
}

ForwardTrace forward_trace(const ModelConfig& cfg, const ModelParameters& p,
                           const ChannelField& a) {
  if (a.channels() != cfg.in_channels) {
    throw std::invalid_argument("forward: expected " + std::to_string(cfg.in_channels) +
                                " input channels, got " + std::to_string(a.channels()));
  }
  if (a.height != a.width) {
    throw std::invalid_argument("forward: grid must be square");
  }
  if (2 * cfg.modes > a.height) {
    throw std::invalid_argument("forward: modes = " + std::to_string(cfg.modes) +
                                " too large for resolution " + std::to_string(a.height));
  }
  const ParamView pv(cfg, p);
  const ModeSet set = retained_modes(cfg.variant, cfg.modes);

  ForwardTrace t;
  t.a_norm = ChannelField(cfg.in_channels + 1, a.height, a.width);
  t.a_norm.data.topRows(cfg.in_channels) =
      ((a.data.array() - p.norm.in_mean) / p.norm.in_std).matrix();
  const ScalarGrid pos =
      kPositionGain * expand_field(pv.pos_field_gen(), a.height, a.width);
  t.a_norm.set_channel(cfg.in_channels, pos);
  t.lifted = pointwise_affine(t.a_norm, pv.lift_weight(), pv.lift_bias());

  ChannelField v = t.lifted;
  t.layers.resize(cfg.layers);
  for (int l = 0; l < cfg.layers; ++l) {
    LayerTrace& lt = t.layers[l];
    lt.input = v;
    const Eigen::MatrixXcd kernel = kernel_slots(cfg, p, l);
    ChannelField z;
    spectral_branch(v, kernel, set, z, lt.blocks);
    lt.preact = pointwise_affine(v, pv.mix_weight(l), pv.mix_bias(l));
    lt.preact.data += z.data;
    v = relu(lt.preact);
  }

  t.hidden_pre = pointwise_affine(v, pv.proj1_weight(), pv.proj1_bias());
  t.hidden = relu(t.hidden_pre);
  t.prediction = pointwise_affine(t.hidden, pv.proj2_weight(), pv.proj2_bias());
  t.prediction.data = t.prediction.data.array() * p.norm.out_std + p.norm.out_mean;
  // The output field lives in raw output units; adding it after the
  // denormalization lets its coefficients stay at the scale of the target.
  const ScalarGrid out_field = expand_field(pv.out_field_gen(), a.height, a.width);
  const auto field_row = Eigen::Map<const Eigen::RowVectorXd>(out_field.data(),
                                                              out_field.size());
  for (int c = 0; c < cfg.out_channels; ++c) t.prediction.data.row(c) += field_row;
  return t;
}

ChannelField forward(const ModelConfig& cfg, const ModelParameters& p, const ChannelField& a) {
  return forward_trace(cfg, p, a).prediction;
}

}  // namespace ifno
