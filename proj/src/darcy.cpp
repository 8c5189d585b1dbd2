#include "ifno/darcy.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ifno/fft.hpp"

namespace ifno {

ScalarGrid sample_grf(std::uint64_t seed, int n, double tau, double alpha) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexGrid spec(n, n);
  const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  for (int k = 0; k < n; ++k) {
    const int sk = (k <= n / 2) ? k : k - n;
    for (int l = 0; l < n; ++l) {
      const int sl = (l <= n / 2) ? l : l - n;
      const double re = gauss(rng);
      const double im = gauss(rng);
      const double kappa2 = static_cast<double>(sk) * sk + static_cast<double>(sl) * sl;
      const double amp =
          (sk == 0 && sl == 0) ? 0.0 : std::pow(four_pi2 * kappa2 + tau * tau, -alpha / 2.0);
      spec(k, l) = amp * std::complex<double>(re, im);
    }
  }
  // The real part of a complex field with symmetric spectral amplitudes is a
  // real field with the same density shape; k = 0 is zeroed so the mean is 0.
  ComplexGrid field = ifft2(spec);
  return static_cast<double>(n) * field.real();
}

ScalarGrid threshold_coefficient(const ScalarGrid& w, double a_low, double a_high) {
  return (w.array() >= 0.0).select(a_high, ScalarGrid::Constant(w.rows(), w.cols(), a_low));
}

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

// Matrix-free 5-point operator on the (n-2)^2 interior unknowns.
struct DarcyOperator {
  const ScalarGrid& a;
  int n;
  double inv_h2;

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const {
    const int m = n - 2;
    Eigen::VectorXd out(m * m);
    auto val = [&](int i, int j) -> double {
      if (i < 1 || i > m || j < 1 || j > m) return 0.0;  // Dirichlet boundary
      return u[(i - 1) * m + (j - 1)];
    };
    for (int i = 1; i <= m; ++i) {
      for (int j = 1; j <= m; ++j) {
        const double c = a(i, j);
        const double an = harmonic(c, a(i - 1, j));
        const double as = harmonic(c, a(i + 1, j));
        const double aw = harmonic(c, a(i, j - 1));
        const double ae = harmonic(c, a(i, j + 1));
        const double uc = val(i, j);
        out[(i - 1) * m + (j - 1)] =
            inv_h2 * (an * (uc - val(i - 1, j)) + as * (uc - val(i + 1, j)) +
                      aw * (uc - val(i, j - 1)) + ae * (uc - val(i, j + 1)));
      }
    }
    return out;
  }
};

}  // namespace

ScalarGrid solve_darcy(const ScalarGrid& a, const ScalarGrid& f, double tol) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || f.rows() != n || f.cols() != n) {
    throw std::invalid_argument("solve_darcy: a and f must be equal square grids");
  }
  if (n < 3) throw std::invalid_argument("solve_darcy: grid too small");
  if ((a.array() <= 0.0).any()) {
    throw std::invalid_argument("solve_darcy: diffusivity must be strictly positive");
  }
  const double h = 1.0 / (n - 1);
  const DarcyOperator op{a, n, 1.0 / (h * h)};
  const int m = n - 2;

  Eigen::VectorXd b(m * m);
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) b[(i - 1) * m + (j - 1)] = f(i, j);
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m * m);
  Eigen::VectorXd r = b;
  Eigen::VectorXd p = r;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    return ScalarGrid::Zero(n, n);
  }
  double rr = r.squaredNorm();
  const long max_iter = 10L * n * n;
  bool converged = false;
  for (long it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) / bnorm < tol) {
      converged = true;
      break;
    }
    const Eigen::VectorXd ap = op.apply(p);
    const double alpha = rr / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  if (!converged && std::sqrt(rr) / bnorm >= tol) {
    throw std::runtime_error("solve_darcy: CG did not converge, relative residual = " +
                             std::to_string(std::sqrt(rr) / bnorm));
  }

  ScalarGrid u = ScalarGrid::Zero(n, n);
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= m; ++j) u(i, j) = x[(i - 1) * m + (j - 1)];
  }
  return u;
}

std::vector<DarcySample> generate_dataset(int count, std::uint64_t seed0, int n) {
  if (count < 1) throw std::invalid_argument("generate_dataset: count must be >= 1");
  const ScalarGrid f = ScalarGrid::Constant(n, n, 1.0);
  std::vector<DarcySample> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    DarcySample s;
    s.a = threshold_coefficient(sample_grf(seed0 + i, n));
    s.u = solve_darcy(s.a, f);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ifno
