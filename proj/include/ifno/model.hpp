#pragma once

#include <cstdint>
#include <vector>

#include "ifno/kernel.hpp"

namespace ifno {

struct ModelConfig {
  Variant variant = Variant::standard;
  int width = 32;             // lifted channels d_v
  int modes = 16;             // retained modes per axis m
  int layers = 4;             // Fourier layers L
  int in_channels = 1;
  int out_channels = 1;
  int projection_hidden = 128;
};

/// Gain applied to the learned positional channel before the lift. Adam moves
/// each coefficient by roughly the learning rate per step, so the gain sets
/// how fast the channel can reach a useful amplitude within a short run.
inline constexpr double kPositionGain = 16.0;

/// Global input/output normalization scalars, fitted on training data.
struct NormStats {
  double in_mean = 0.0;
  double in_std = 1.0;
  double out_mean = 0.0;
  double out_std = 1.0;
};

/// Offsets into the flat parameter vector; canonical order is
/// P weight, P bias, positional-field coefficients, then per layer
/// (kernel, W, b), then Q stage 1, Q stage 2, output-field coefficients.
/// Standard kernels store (re, im) pairs per slot in (o, i, slot) order;
/// isotropic layers store the triangular generator in (o, i, pair) order.
///
/// The two field blocks hold modes x modes coefficient matrices of learned
/// scalar fields (see expand_field). Both start at zero, so a freshly
/// initialized model is exactly translation-equivariant; during training they
/// let the model pick up the absolute-position structure of boundary-value
/// targets, which a purely translation-equivariant network cannot represent.
/// The positional field enters the lift as an extra input channel (scaled by
/// kPositionGain); the output field is added to the denormalized prediction.
struct ParamLayout {
  struct Layer {
    Eigen::Index kernel = 0;
    Eigen::Index w = 0;
    Eigen::Index b = 0;
  };
  Eigen::Index p_weight = 0;
  Eigen::Index p_bias = 0;
  Eigen::Index pos_field = 0;
  std::vector<Layer> layer;
  Eigen::Index q1_weight = 0;
  Eigen::Index q1_bias = 0;
  Eigen::Index q2_weight = 0;
  Eigen::Index q2_bias = 0;
  Eigen::Index out_field = 0;
  Eigen::Index kernel_scalars = 0;  // doubles per layer kernel
  Eigen::Index field_scalars = 0;   // doubles per learned field
  Eigen::Index total = 0;
};

ParamLayout layout_of(const ModelConfig& cfg);

/// Exact number of free real scalars in the model.
std::int64_t count_parameters(const ModelConfig& cfg);

/// Free real scalars in the spectral kernels alone (all layers).
std::int64_t spectral_parameter_count(const ModelConfig& cfg);

struct ModelParameters {
  Eigen::VectorXd values;
  NormStats norm;
};

/// Read-only structured views into the flat vector.
struct ParamView {
  const ModelConfig& cfg;
  const ParamLayout layout;
  const Eigen::VectorXd& v;

  ParamView(const ModelConfig& c, const ModelParameters& p)
      : cfg(c), layout(layout_of(c)), v(p.values) {}

  Eigen::Map<const RowMatrixXd> lift_weight() const {
    return {v.data() + layout.p_weight, cfg.width, cfg.in_channels + 1};
  }
  Eigen::Map<const RowMatrixXd> pos_field_gen() const {
    return {v.data() + layout.pos_field, cfg.modes, cfg.modes};
  }
  Eigen::Map<const RowMatrixXd> out_field_gen() const {
    return {v.data() + layout.out_field, cfg.modes, cfg.modes};
  }
  Eigen::Map<const Eigen::VectorXd> lift_bias() const {
    return {v.data() + layout.p_bias, cfg.width};
  }
  Eigen::Map<const RowMatrixXd> mix_weight(int l) const {
    return {v.data() + layout.layer[l].w, cfg.width, cfg.width};
  }
  Eigen::Map<const Eigen::VectorXd> mix_bias(int l) const {
    return {v.data() + layout.layer[l].b, cfg.width};
  }
  Eigen::Map<const RowMatrixXd> proj1_weight() const {
    return {v.data() + layout.q1_weight, cfg.projection_hidden, cfg.width};
  }
  Eigen::Map<const Eigen::VectorXd> proj1_bias() const {
    return {v.data() + layout.q1_bias, cfg.projection_hidden};
  }
  Eigen::Map<const RowMatrixXd> proj2_weight() const {
    return {v.data() + layout.q2_weight, cfg.out_channels, cfg.projection_hidden};
  }
  Eigen::Map<const Eigen::VectorXd> proj2_bias() const {
    return {v.data() + layout.q2_bias, cfg.out_channels};
  }
};

/// Reflection-invariant cosine basis: row p holds cos(pi p (2i - n + 1) / n),
/// which is even about the grid center, so the array reversal i -> n-1-i
/// leaves every row unchanged.
Eigen::MatrixXd cosine_basis(int m, int n);

/// Learned scalar field spanned by the cosine basis with a symmetrized
/// coefficient matrix: basis(h)^T (G + G^T)/2 basis(w). By construction the
/// field is exactly invariant under all eight D4 grid actions, so adding it
/// preserves the isotropic variant's equivariance.
ScalarGrid expand_field(const Eigen::Ref<const RowMatrixXd>& gen, int h, int w);

/// Expanded (or mapped) complex slot weights of layer l, as a
/// (d_v*d_v) x slots matrix aligned with retained_modes(cfg.variant, cfg.modes).
Eigen::MatrixXcd kernel_slots(const ModelConfig& cfg, const ModelParameters& p, int l);

/// Deterministic seeded initialization. Spectral weights are uniform at scale
/// 1/(d_v*d_v); affine maps use uniform fan-in scaling. Normalization starts
/// at (0, 1).
ModelParameters init_parameters(const ModelConfig& cfg, std::uint64_t seed);

/// One Fourier layer: relu(W v + b + irfft2(scatter(K . truncate(rfft2 v)))).
ChannelField fourier_layer(const ChannelField& v, const Eigen::MatrixXcd& kernel,
                           const ModeSet& set, const Eigen::MatrixXd& W,
                           const Eigen::VectorXd& b);

/// Primal intermediates of one layer, kept for the backward pass.
struct LayerTrace {
  ChannelField input;
  Eigen::MatrixXcd blocks;  // d_v x slots, input spectra at retained modes
  ChannelField preact;      // before relu
};

struct ForwardTrace {
  ChannelField a_norm;  // normalized input with the positional channel appended
  ChannelField lifted;
  std::vector<LayerTrace> layers;
  ChannelField hidden_pre;  // projection stage 1 before relu
  ChannelField hidden;
  ChannelField prediction;  // denormalized output
};

ForwardTrace forward_trace(const ModelConfig& cfg, const ModelParameters& p,
                           const ChannelField& a);

ChannelField forward(const ModelConfig& cfg, const ModelParameters& p, const ChannelField& a);

}  // namespace ifno
