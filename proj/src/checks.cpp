#include "ifno/checks.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "ifno/autodiff.hpp"
#include "ifno/darcy.hpp"
#include "ifno/metrics.hpp"

namespace ifno {
namespace {

ScalarGrid random_grid(std::mt19937_64& rng, int h, int w, double amplitude = 1.0) {
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  ScalarGrid g(h, w);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = dist(rng);
  return g;
}

ComplexGrid random_complex_grid(std::mt19937_64& rng, int h, int w) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexGrid g(h, w);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    g.data()[i] = std::complex<double>(dist(rng), dist(rng));
  }
  return g;
}

bool report(std::ostream& os, const std::string& what, double value, double bound,
            bool smaller_is_pass = true) {
  const bool ok = smaller_is_pass ? value < bound : value > bound;
  os << "  " << (ok ? "ok  " : "FAIL") << "  " << what << " = " << value
     << (smaller_is_pass ? "  (< " : "  (> ") << bound << ")\n";
  return ok;
}

double max_abs_diff(const ChannelField& a, const ChannelField& b) {
  return (a.data - b.data).cwiseAbs().maxCoeff();
}

}  // namespace

bool check_fft(std::ostream& os) {
  bool ok = true;
  std::mt19937_64 rng(1234);

  ComplexGrid x16 = random_complex_grid(rng, 16, 16);
  const double oracle_err =
      (fft2(x16) - dft2_naive(x16)).cwiseAbs().maxCoeff() / dft2_naive(x16).cwiseAbs().maxCoeff();
  ok &= report(os, "fft2 vs naive DFT relative error (16x16)", oracle_err, 1e-10);

  ComplexGrid x128 = random_complex_grid(rng, 128, 128);
  const double round_trip = (ifft2(fft2(x128)) - x128).cwiseAbs().maxCoeff();
  ok &= report(os, "ifft2(fft2(x)) round-trip max error (128x128)", round_trip, 1e-10);

  ScalarGrid r64 = random_grid(rng, 64, 64);
  const double space = r64.array().square().sum();
  const double freq = fft2(r64.cast<std::complex<double>>()).array().abs2().sum() / (64.0 * 64.0);
  ok &= report(os, "Parseval relative defect", std::abs(space - freq) / space, 1e-9);

  const double real_rt = (irfft2(rfft2(r64), 64) - r64).cwiseAbs().maxCoeff();
  ok &= report(os, "irfft2(rfft2(x)) round-trip max error", real_rt, 1e-12);
  return ok;
}

bool check_symmetry(std::ostream& os) {
  bool ok = true;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  const int m = 16;
  IsoGenerator g(3, 2, m);
  for (Eigen::Index i = 0; i < g.values.size(); ++i) g.values[i] = dist(rng);
  const ModeSet set = retained_modes(Variant::isotropic, m);
  const SpectralKernel k = expand_generator(g, set);
  const SymmetryReport rep = verify_kernel_symmetry(k);
  ok &= report(os, "expanded kernel flip violation", rep.flip, 1e-300);
  ok &= report(os, "expanded kernel transpose violation", rep.transpose, 1e-300);
  ok &= report(os, "expanded kernel imaginary part", rep.imag, 1e-300);

  // Read-back through generator_index must be bitwise.
  double readback = 0.0;
  for (int r = 0; r < set.rows(); ++r) {
    for (int ky = 0; ky < m; ++ky) {
      const double expect = g.at(1, 0, std::abs(set.kx[r]), ky);
      readback = std::max(readback, std::abs(k.at(1, 0, r, ky).real() - expect));
    }
  }
  ok &= report(os, "generator read-back deviation", readback, 1e-300);

  os << "  retained slots per channel pair (iso, m=16): " << set.slots() << " from "
     << generator_size(m) << " generator values\n";
  ok &= set.slots() == 31 * 16 && generator_size(m) == 136;

  SpectralKernel randk(2, 2, retained_modes(Variant::standard, 4));
  for (Eigen::Index i = 0; i < randk.weights.size(); ++i) {
    randk.weights.data()[i] = std::complex<double>(dist(rng), dist(rng));
  }
  const SymmetryReport bad = verify_kernel_symmetry(randk);
  ok &= report(os, "random kernel max violation (sanity)", bad.max(), 0.01, false);
  return ok;
}

bool check_equivariance(std::ostream& os) {
  bool ok = true;
  const int n = 64;
  const int trials = 20;

  ModelConfig iso;
  iso.variant = Variant::isotropic;
  iso.width = 8;
  iso.modes = 8;
  iso.layers = 2;
  iso.projection_hidden = 16;

  ModelConfig std_cfg = iso;
  std_cfg.variant = Variant::standard;

  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> shift(1, n - 1);

  double worst_iso = 0.0;
  int std_violations = 0;
  double min_std_violation = 1e300;
  for (int t = 0; t < trials; ++t) {
    const ModelParameters pi = init_parameters(iso, 100 + t);
    const ModelParameters ps = init_parameters(std_cfg, 100 + t);
    // Large-amplitude inputs keep spatial variation alive through the relu
    // stack at init scale, so the negative control has signal to violate.
    const ChannelField a = ChannelField::from_grid(random_grid(rng, n, n, 10.0));
    const ChannelField out_iso = forward(iso, pi, a);
    for (GroupElement g : kGroupElements) {
      const double d = max_abs_diff(forward(iso, pi, apply_group(g, a)),
                                    apply_group(g, out_iso));
      worst_iso = std::max(worst_iso, d);
    }
    for (int s = 0; s < 5; ++s) {
      const int di = shift(rng);
      const int dj = shift(rng);
      const double d =
          max_abs_diff(forward(iso, pi, translate(a, di, dj)), translate(out_iso, di, dj));
      worst_iso = std::max(worst_iso, d);
    }
    const double viol = max_abs_diff(forward(std_cfg, ps, apply_group(GroupElement::flip_x, a)),
                                     apply_group(GroupElement::flip_x, forward(std_cfg, ps, a)));
    min_std_violation = std::min(min_std_violation, viol);
    if (viol > 1e-3) ++std_violations;
  }
  ok &= report(os, "iso model max equivariance defect (D4 + translations, 20 seeds)", worst_iso,
               1e-9);
  os << "  standard model flip-x violations > 1e-3: " << std_violations << "/" << trials
     << " seeds (smallest violation " << min_std_violation << ")\n";
  ok &= std_violations >= 19;
  return ok;
}

bool check_gradcheck(std::ostream& os) {
  bool ok = true;
  // The fixture seed is chosen so no relu preactivation sits within the
  // finite-difference probe of its kink (the positional channel's gain
  // amplifies the probe); central differences are only valid away from kinks.
  std::mt19937_64 rng(557);
  for (Variant variant : {Variant::standard, Variant::isotropic}) {
    ModelConfig cfg;
    cfg.variant = variant;
    cfg.width = 3;
    cfg.modes = 2;
    cfg.layers = 2;
    cfg.projection_hidden = 5;
    ModelParameters p = init_parameters(cfg, 42);
    p.norm = {0.2, 1.3, 0.1, 0.7};
    const ChannelField a = ChannelField::from_grid(random_grid(rng, 8, 8));
    const ChannelField target = ChannelField::from_grid(random_grid(rng, 8, 8));
    const double err = grad_check(cfg, p, a, target, 1e-4);
    ok &= report(os, to_string(variant) + " max relative gradient error", err, 1e-5);
  }
  return ok;
}

bool check_darcy(std::ostream& os) {
  bool ok = true;

  // Manufactured solution u = sin(pi x) sin(pi y) with a = 1.
  double prev_err = 0.0;
  double min_order = 1e300;
  int prev_n = 0;
  for (int n : {32, 64, 128}) {
    const double h = 1.0 / (n - 1);
    ScalarGrid a = ScalarGrid::Constant(n, n, 1.0);
    ScalarGrid f(n, n), exact(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = i * h, y = j * h;
        const double s = std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
        exact(i, j) = s;
        f(i, j) = 2.0 * std::numbers::pi * std::numbers::pi * s;
      }
    }
    const ScalarGrid u = solve_darcy(a, f, 1e-10);
    const double err = (u - exact).cwiseAbs().maxCoeff();
    if (prev_n != 0) {
      const double order = std::log(prev_err / err) / std::log(static_cast<double>(n - 1) /
                                                               static_cast<double>(prev_n - 1));
      os << "  n " << prev_n << " -> " << n << ": observed order " << order << "\n";
      min_order = std::min(min_order, order);
    }
    prev_err = err;
    prev_n = n;
  }
  ok &= report(os, "manufactured-solution convergence order", min_order, 1.9, false);

  // Solver equivariance, boundary, and positivity on a generated sample.
  const double tol = 1e-8;
  const int n = 64;
  const ScalarGrid a = threshold_coefficient(sample_grf(7, n));
  const ScalarGrid f = ScalarGrid::Constant(n, n, 1.0);
  const ScalarGrid u = solve_darcy(a, f, tol);
  double equiv = 0.0;
  for (GroupElement g : kGroupElements) {
    const ScalarGrid lhs = solve_darcy(apply_group(g, a), f, tol);
    equiv = std::max(equiv, (lhs - apply_group(g, u)).cwiseAbs().maxCoeff());
  }
  ok &= report(os, "solver D4 equivariance defect", equiv, 10.0 * tol);

  double boundary = 0.0;
  for (int i = 0; i < n; ++i) {
    boundary = std::max({boundary, std::abs(u(0, i)), std::abs(u(n - 1, i)),
                         std::abs(u(i, 0)), std::abs(u(i, n - 1))});
  }
  os << "  boundary max |u| = " << boundary << (boundary == 0.0 ? "  (exact)\n" : "  FAIL\n");
  ok &= boundary == 0.0;
  ok &= report(os, "interior minimum (maximum principle)", u.minCoeff(), -10.0 * tol, false);
  return ok;
}

int run_suite(const std::string& name, std::ostream& os) {
  bool ok;
  if (name == "fft") ok = check_fft(os);
  else if (name == "symmetry") ok = check_symmetry(os);
  else if (name == "equivariance") ok = check_equivariance(os);
  else if (name == "gradcheck") ok = check_gradcheck(os);
  else if (name == "darcy") ok = check_darcy(os);
  else throw std::invalid_argument("unknown suite: " + name);
  os << (ok ? "suite passed" : "suite FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace ifno
