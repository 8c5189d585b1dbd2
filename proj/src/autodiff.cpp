#include "ifno/autodiff.hpp"

namespace ifno {

std::pair<ChannelField, Tape> forward_with_tape(const ModelConfig& cfg,
                                                const ModelParameters& p,
                                                const ChannelField& a) {
  Tape t{cfg, forward_trace(cfg, p, a)};
  return {t.trace.prediction, std::move(t)};
}

namespace {

using cd = std::complex<double>;

RowMatrixXd relu_mask(const ChannelField& preact) {
  return (preact.data.array() > 0.0).cast<double>();
}

// d/dW and d/db of a pointwise affine map, plus the input cotangent.
void affine_adjoint(const RowMatrixXd& out_cot, const ChannelField& input,
                    Eigen::Map<const RowMatrixXd> W, double* grad_w, double* grad_b,
                    RowMatrixXd* in_cot) {
  Eigen::Map<RowMatrixXd> gw(grad_w, W.rows(), W.cols());
  gw += out_cot * input.data.transpose();
  Eigen::Map<Eigen::VectorXd> gb(grad_b, W.rows());
  gb += out_cot.rowwise().sum();
  if (in_cot) *in_cot = W.transpose() * out_cot;
}

// Adjoint of expand_field: project a grid cotangent onto the cosine basis
// and symmetrize, mirroring the (G + G^T)/2 coefficient symmetrization.
void field_adjoint(const Eigen::Map<const ScalarGrid>& cot, int m, double* grad) {
  const Eigen::MatrixXd raw = cosine_basis(m, static_cast<int>(cot.rows())) * cot *
                              cosine_basis(m, static_cast<int>(cot.cols())).transpose();
  Eigen::Map<RowMatrixXd> g(grad, m, m);
  g += 0.5 * (raw + raw.transpose());
}

}  // namespace

GradientSet backward(const Tape& tape, const ModelParameters& p,
                     const ChannelField& loss_cotangent) {
  const ModelConfig& cfg = tape.cfg;
  const ParamLayout lo = layout_of(cfg);
  if (p.values.size() != lo.total) {
    throw std::logic_error("backward: parameters do not match the tape's config");
  }
  const ForwardTrace& tr = tape.trace;
  if (loss_cotangent.channels() != cfg.out_channels ||
      loss_cotangent.height != tr.prediction.height ||
      loss_cotangent.width != tr.prediction.width) {
    throw std::logic_error("backward: loss cotangent shape mismatch");
  }
  const ParamView pv(cfg, p);
  const ModeSet set = retained_modes(cfg.variant, cfg.modes);
  const int dv = cfg.width;
  const int h = tr.prediction.height;
  const int w = tr.prediction.width;

  GradientSet g = GradientSet::Zero(lo.total);

  // The output field is added after denormalization, so its cotangent is the
  // raw loss cotangent, summed over output channels.
  for (int c = 0; c < cfg.out_channels; ++c) {
    field_adjoint(loss_cotangent.channel(c), cfg.modes, g.data() + lo.out_field);
  }

  // Denormalization is a fixed affine map of the normalized output.
  RowMatrixXd ybar = loss_cotangent.data * p.norm.out_std;

  // Projection stage 2.
  RowMatrixXd hbar;
  affine_adjoint(ybar, tr.hidden, pv.proj2_weight(), g.data() + lo.q2_weight,
                 g.data() + lo.q2_bias, &hbar);
  hbar = hbar.cwiseProduct(relu_mask(tr.hidden_pre));

  // Projection stage 1; its input is the last layer's activation.
  ChannelField last_act = relu(tr.layers.back().preact);
  RowMatrixXd vbar;
  affine_adjoint(hbar, last_act, pv.proj1_weight(), g.data() + lo.q1_weight,
                 g.data() + lo.q1_bias, &vbar);

  for (int l = cfg.layers - 1; l >= 0; --l) {
    const LayerTrace& lt = tr.layers[l];
    const RowMatrixXd wbar = vbar.cwiseProduct(relu_mask(lt.preact));

    RowMatrixXd affine_in_cot;
    affine_adjoint(wbar, lt.input, pv.mix_weight(l), g.data() + lo.layer[l].w,
                   g.data() + lo.layer[l].b, &affine_in_cot);

    // Spectral branch adjoint: gather output-spectrum cotangents at the
    // retained slots (Hermitian column weights live in irfft2_adjoint).
    Eigen::MatrixXcd out_blocks_cot(dv, set.slots());
    for (int o = 0; o < dv; ++o) {
      Eigen::Map<const ScalarGrid> zo(wbar.row(o).data(), h, w);
      SpectrumHalf ybar_half = irfft2_adjoint(zo, w);
      for (int r = 0; r < set.rows(); ++r) {
        const int row = ((set.kx[r] % h) + h) % h;
        for (int ky = 0; ky < set.m; ++ky) {
          out_blocks_cot(o, r * set.m + ky) = ybar_half(row, ky);
        }
      }
    }

    const Eigen::MatrixXcd kernel = kernel_slots(cfg, p, l);

    // Kernel cotangents: Kbar(o, i, t) = ybar(o, t) * conj(s(i, t)).
    if (cfg.variant == Variant::standard) {
      Eigen::Map<RowMatrixXcd> gk(reinterpret_cast<cd*>(g.data() + lo.layer[l].kernel),
                                  static_cast<Eigen::Index>(dv) * dv, set.slots());
      for (int o = 0; o < dv; ++o) {
        for (int i = 0; i < dv; ++i) {
          gk.row(static_cast<Eigen::Index>(o) * dv + i) +=
              out_blocks_cot.row(o).cwiseProduct(lt.blocks.row(i).conjugate());
        }
      }
    } else {
      // Fold each slot's real cotangent into its generator orbit entry.
      const int T = generator_size(cfg.modes);
      double* gen = g.data() + lo.layer[l].kernel;
      std::vector<int> slot_to_pair(set.slots());
      for (int r = 0; r < set.rows(); ++r) {
        for (int ky = 0; ky < set.m; ++ky) {
          slot_to_pair[r * set.m + ky] =
              generator_index(std::abs(set.kx[r]), ky, cfg.modes);
        }
      }
      for (int o = 0; o < dv; ++o) {
        for (int i = 0; i < dv; ++i) {
          double* dst = gen + (static_cast<Eigen::Index>(o) * dv + i) * T;
          for (int t = 0; t < set.slots(); ++t) {
            dst[slot_to_pair[t]] +=
                (out_blocks_cot(o, t) * std::conj(lt.blocks(i, t))).real();
          }
        }
      }
    }

    // Input-spectrum cotangents and the spectral input cotangent.
    Eigen::MatrixXcd in_blocks_cot = Eigen::MatrixXcd::Zero(dv, set.slots());
    for (int i = 0; i < dv; ++i) {
      for (int o = 0; o < dv; ++o) {
        in_blocks_cot.row(i) += kernel.row(static_cast<Eigen::Index>(o) * dv + i)
                                    .conjugate()
                                    .cwiseProduct(out_blocks_cot.row(o));
      }
    }
    vbar = affine_in_cot;
    for (int i = 0; i < dv; ++i) {
      SpectrumHalf sbar = SpectrumHalf::Zero(h, w / 2 + 1);
      for (int r = 0; r < set.rows(); ++r) {
        const int row = ((set.kx[r] % h) + h) % h;
        for (int ky = 0; ky < set.m; ++ky) sbar(row, ky) = in_blocks_cot(i, r * set.m + ky);
      }
      ScalarGrid vspec = rfft2_adjoint(sbar, w);
      vbar.row(i) += Eigen::Map<const Eigen::RowVectorXd>(vspec.data(), vspec.size());
    }
  }

  RowMatrixXd lift_in_cot;
  affine_adjoint(vbar, tr.a_norm, pv.lift_weight(), g.data() + lo.p_weight,
                 g.data() + lo.p_bias, &lift_in_cot);

  // Positional-field cotangent: the last lift input channel, scaled by the
  // fixed channel gain.
  const RowMatrixXd pos_cot = kPositionGain * lift_in_cot.row(cfg.in_channels);
  field_adjoint(Eigen::Map<const ScalarGrid>(pos_cot.data(), h, w), cfg.modes,
                g.data() + lo.pos_field);
  return g;
}

double relative_l2_loss(const ChannelField& pred, const ChannelField& truth,
                        ChannelField* cotangent) {
  if (pred.data.rows() != truth.data.rows() || pred.data.cols() != truth.data.cols()) {
    throw std::invalid_argument("relative_l2_loss: shape mismatch");
  }
  const RowMatrixXd diff = pred.data - truth.data;
  const double dn = diff.norm();
  const double tn = truth.data.norm();
  if (tn == 0.0) throw std::invalid_argument("relative_l2_loss: zero-norm truth");
  if (cotangent) {
    cotangent->height = pred.height;
    cotangent->width = pred.width;
    cotangent->data = dn == 0.0 ? RowMatrixXd::Zero(diff.rows(), diff.cols()).eval()
                                : (diff / (dn * tn)).eval();
  }
  return dn / tn;
}

double grad_check(const ModelConfig& cfg, const ModelParameters& p, const ChannelField& a,
                  const ChannelField& target, double eps) {
  auto [pred, tape] = forward_with_tape(cfg, p, a);
  ChannelField cot;
  relative_l2_loss(pred, target, &cot);
  const GradientSet analytic = backward(tape, p, cot);

  ModelParameters q = p;
  double max_rel = 0.0;
  for (Eigen::Index i = 0; i < q.values.size(); ++i) {
    const double saved = q.values[i];
    q.values[i] = saved + eps;
    const double lp = relative_l2_loss(forward(cfg, q, a), target, nullptr);
    q.values[i] = saved - eps;
    const double lm = relative_l2_loss(forward(cfg, q, a), target, nullptr);
    q.values[i] = saved;
    const double numeric = (lp - lm) / (2.0 * eps);
    const double rel = std::abs(analytic[i] - numeric) / std::max(1.0, std::abs(numeric));
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

}  // namespace ifno
