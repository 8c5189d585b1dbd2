#include <doctest.h>

#include <numbers>
#include <random>

#include "ifno/model.hpp"

using namespace ifno;

namespace {

ModelConfig tiny(Variant v) {
  ModelConfig cfg;
  cfg.variant = v;
  cfg.width = 4;
  cfg.modes = 3;
  cfg.layers = 2;
  cfg.projection_hidden = 6;
  return cfg;
}

ChannelField rand_field(std::mt19937_64& rng, int c, int h, int w, double amp = 1.0) {
  std::uniform_real_distribution<double> d(-amp, amp);
  ChannelField f(c, h, w);
  for (Eigen::Index i = 0; i < f.data.size(); ++i) f.data.data()[i] = d(rng);
  return f;
}

}  // namespace

TEST_CASE("parameter counts reproduce the reference configuration") {
  ModelConfig cfg;  // standard, d_v=32, m=16, L=4, hidden=128
  CHECK(spectral_parameter_count(cfg) == 4194304);
  const auto total_std = count_parameters(cfg);
  CHECK(total_std >= 4160000);
  CHECK(total_std <= 4244000);
  // Lift (32 x 2 + 32), four layers of (2 * 2 * 32 * 16 * 16 kernel scalars
  // + 32 x 32 + 32), projection (128 x 32 + 128 + 128 + 1), and two 16 x 16
  // learned-field blocks.
  CHECK(total_std == 4203489);

  cfg.variant = Variant::isotropic;
  CHECK(spectral_parameter_count(cfg) == 557056);
  const auto total_iso = count_parameters(cfg);
  CHECK(total_iso >= 559000);
  CHECK(total_iso <= 571000);
  CHECK(total_iso == 566241);

  const double ratio = static_cast<double>(total_std) / static_cast<double>(total_iso);
  CHECK(ratio > 7.0);
  CHECK(ratio < 8.0);
}

TEST_CASE("layout partitions the parameter vector exactly") {
  for (Variant v : {Variant::standard, Variant::isotropic}) {
    const ModelConfig cfg = tiny(v);
    const ParamLayout lo = layout_of(cfg);
    CHECK(lo.field_scalars == cfg.modes * cfg.modes);
    Eigen::Index expect =
        static_cast<Eigen::Index>(cfg.width) * (cfg.in_channels + 1) + cfg.width;
    CHECK(lo.p_weight == 0);
    CHECK(lo.p_bias == cfg.width * (cfg.in_channels + 1));
    CHECK(lo.pos_field == expect);
    expect += lo.field_scalars;
    for (int l = 0; l < cfg.layers; ++l) {
      CHECK(lo.layer[l].kernel == expect);
      expect += lo.kernel_scalars + cfg.width * cfg.width + cfg.width;
      CHECK(lo.layer[l].b + cfg.width == expect);
    }
    CHECK(lo.q1_weight == expect);
    expect += cfg.projection_hidden * cfg.width + cfg.projection_hidden;
    expect += cfg.out_channels * cfg.projection_hidden + cfg.out_channels;
    CHECK(lo.out_field == expect);
    expect += lo.field_scalars;
    CHECK(lo.total == expect);
    CHECK(lo.total == count_parameters(cfg));
  }
}

TEST_CASE("initialization is deterministic and seed-sensitive") {
  const ModelConfig cfg = tiny(Variant::standard);
  const ModelParameters a = init_parameters(cfg, 7);
  const ModelParameters b = init_parameters(cfg, 7);
  const ModelParameters c = init_parameters(cfg, 8);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.values - c.values).cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.norm.in_mean == 0.0);
  CHECK(a.norm.out_std == 1.0);
}

TEST_CASE("initialized iso kernel expands to an exactly symmetric kernel") {
  const ModelConfig cfg = tiny(Variant::isotropic);
  const ModelParameters p = init_parameters(cfg, 3);
  for (int l = 0; l < cfg.layers; ++l) {
    SpectralKernel k(cfg.width, cfg.width, retained_modes(Variant::isotropic, cfg.modes));
    k.weights = kernel_slots(cfg, p, l);
    CHECK(verify_kernel_symmetry(k).max() == 0.0);
  }
}

TEST_CASE("fourier layer with zero kernel collapses to the affine branch") {
  std::mt19937_64 rng(31);
  const int dv = 3;
  const ChannelField v = rand_field(rng, dv, 8, 8);
  const ModeSet set = retained_modes(Variant::standard, 2);
  const Eigen::MatrixXcd zero_kernel =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dv) * dv, set.slots());
  Eigen::MatrixXd W = Eigen::MatrixXd::Identity(dv, dv);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dv);
  const ChannelField out = fourier_layer(v, zero_kernel, set, W, b);
  const ChannelField expect = relu(v);
  CHECK((out.data - expect.data).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fourier layer spectral branch matches a hand-rolled convolution") {
  // One channel, identity-on-retained-modes kernel, W = 0: the layer becomes
  // relu(low-pass(v)).
  std::mt19937_64 rng(32);
  const ChannelField v = rand_field(rng, 1, 16, 16);
  const ModeSet set = retained_modes(Variant::standard, 3);
  Eigen::MatrixXcd kernel = Eigen::MatrixXcd::Ones(1, set.slots());
  const Eigen::MatrixXd W = Eigen::MatrixXd::Zero(1, 1);
  const Eigen::VectorXd b = Eigen::VectorXd::Zero(1);
  const ChannelField out = fourier_layer(v, kernel, set, W, b);

  const SpectrumHalf s = rfft2(v.channel_copy(0));
  const ScalarGrid low =
      irfft2(scatter_modes(truncate_modes(s, set), set, 16, 16), 16);
  const ScalarGrid expect = low.cwiseMax(0.0);
  CHECK((out.channel_copy(0) - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("forward validates input shape") {
  const ModelConfig cfg = tiny(Variant::standard);
  const ModelParameters p = init_parameters(cfg, 1);
  std::mt19937_64 rng(33);
  CHECK_NOTHROW(forward(cfg, p, rand_field(rng, 1, 8, 8)));
  CHECK_THROWS_AS(forward(cfg, p, rand_field(rng, 2, 8, 8)), std::invalid_argument);
  CHECK_THROWS_AS(forward(cfg, p, rand_field(rng, 1, 4, 4)), std::invalid_argument);
}

TEST_CASE("forward is resolution-transferable") {
  // Same parameters evaluate on any grid large enough for the retained modes.
  // With every relu biased into its linear region the network is affine on
  // band-limited inputs, so evaluating on a refinement must reproduce the
  // coarse prediction exactly at shared points (the relu harmonics that break
  // this in general are absent).
  const ModelConfig cfg = tiny(Variant::isotropic);
  ModelParameters p = init_parameters(cfg, 5);
  p.norm = {0.1, 0.9, 0.0, 1.0};
  p.values *= 0.02;  // keep signals small relative to the biases below
  const ParamLayout lo = layout_of(cfg);
  for (int l = 0; l < cfg.layers; ++l) {
    p.values.segment(lo.layer[l].b, cfg.width).array() += 10.0;
  }
  p.values.segment(lo.q1_bias, cfg.projection_hidden).array() += 10.0;

  auto sample = [&](int n) {
    ScalarGrid g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        g(i, j) = std::sin(2.0 * std::numbers::pi * i / n) +
                  std::cos(2.0 * std::numbers::pi * j / n);
      }
    }
    return ChannelField::from_grid(g);
  };
  const ChannelField coarse = forward(cfg, p, sample(16));
  const ChannelField fine = forward(cfg, p, sample(32));
  // The coarse grid is the even-index subgrid of the fine one; band-limited
  // inputs give matching predictions at shared points.
  double diff = 0.0;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      diff = std::max(diff, std::abs(coarse.at(0, i, j) - fine.at(0, 2 * i, 2 * j)));
    }
  }
  CHECK(diff < 1e-9);
}

TEST_CASE("learned fields are D4-invariant and vanish at initialization") {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  RowMatrixXd gen(3, 3);
  for (Eigen::Index i = 0; i < gen.size(); ++i) gen.data()[i] = d(rng);

  const ScalarGrid field = expand_field(gen, 8, 8);
  CHECK(field.cwiseAbs().maxCoeff() > 0.0);
  for (GroupElement g : kGroupElements) {
    CHECK((apply_group(g, field) - field).cwiseAbs().maxCoeff() < 1e-12);
  }
  // The expansion only sees the symmetric part of the coefficient block.
  const ScalarGrid sym_only = expand_field(RowMatrixXd(0.5 * (gen + gen.transpose())), 8, 8);
  CHECK((field - sym_only).cwiseAbs().maxCoeff() < 1e-13);

  const ModelConfig cfg = tiny(Variant::isotropic);
  const ParamLayout lo = layout_of(cfg);
  const ModelParameters p = init_parameters(cfg, 21);
  CHECK(p.values.segment(lo.pos_field, lo.field_scalars).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.values.segment(lo.out_field, lo.field_scalars).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the output field adds to the prediction in raw units") {
  const ModelConfig cfg = tiny(Variant::standard);
  ModelParameters p = init_parameters(cfg, 22);
  p.norm = {0.3, 1.7, 2.0, 5.0};
  std::mt19937_64 rng(36);
  const ChannelField a = rand_field(rng, 1, 8, 8);

  const ChannelField base = forward(cfg, p, a);
  const ParamLayout lo = layout_of(cfg);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (Eigen::Index i = 0; i < lo.field_scalars; ++i) {
    p.values[lo.out_field + i] = d(rng);
  }
  const ChannelField shifted = forward(cfg, p, a);
  const ScalarGrid field =
      expand_field(Eigen::Map<const RowMatrixXd>(p.values.data() + lo.out_field,
                                                 cfg.modes, cfg.modes),
                   8, 8);
  const ScalarGrid diff = shifted.channel_copy(0) - base.channel_copy(0);
  CHECK((diff - field).cwiseAbs().maxCoeff() < 1e-12);  // no normalization applied
}

TEST_CASE("normalization scalars shift and scale the prediction affinely") {
  const ModelConfig cfg = tiny(Variant::standard);
  ModelParameters p = init_parameters(cfg, 9);
  std::mt19937_64 rng(34);
  const ChannelField a = rand_field(rng, 1, 8, 8);

  p.norm = {0.0, 1.0, 0.0, 1.0};
  const ChannelField base = forward(cfg, p, a);
  p.norm = {0.0, 1.0, 2.5, 3.0};
  const ChannelField scaled = forward(cfg, p, a);
  CHECK((scaled.data - (3.0 * base.data.array() + 2.5).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}
