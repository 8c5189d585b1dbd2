#include <doctest.h>

#include <numbers>
#include <random>

#include "ifno/fft.hpp"
#include "ifno/kernel.hpp"

using namespace ifno;

namespace {

std::mt19937_64 seeded(std::uint64_t s) { return std::mt19937_64(s); }

ScalarGrid rand_real(std::mt19937_64& rng, int h, int w) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarGrid g(h, w);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = d(rng);
  return g;
}

ComplexGrid rand_complex(std::mt19937_64& rng, int h, int w) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ComplexGrid g(h, w);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = {d(rng), d(rng)};
  return g;
}

}  // namespace

TEST_CASE("dft2_naive on known signals") {
  const int n = 8;
  // Constant field: all energy at (0, 0).
  ComplexGrid c = ComplexGrid::Constant(n, n, 1.0);
  ComplexGrid C = dft2_naive(c);
  CHECK(std::abs(C(0, 0) - std::complex<double>(n * n, 0)) < 1e-12);
  C(0, 0) = 0.0;
  CHECK(C.cwiseAbs().maxCoeff() < 1e-12);

  // cos(2*pi*i/H): split between rows k_x = 1 and H-1, each H*W/2.
  ComplexGrid x(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) x(i, j) = std::cos(2.0 * std::numbers::pi * i / n);
  }
  ComplexGrid X = dft2_naive(x);
  CHECK(std::abs(X(1, 0) - std::complex<double>(n * n / 2.0, 0)) < 1e-10);
  CHECK(std::abs(X(n - 1, 0) - std::complex<double>(n * n / 2.0, 0)) < 1e-10);
  X(1, 0) = X(n - 1, 0) = 0.0;
  CHECK(X.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fft2 agrees with the naive oracle, including non-power-of-two") {
  auto rng = seeded(10);
  for (auto [h, w] : {std::pair{16, 16}, {8, 32}, {12, 20}, {7, 9}}) {
    const ComplexGrid x = rand_complex(rng, h, w);
    const ComplexGrid ref = dft2_naive(x);
    CHECK((fft2(x) - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("fft2 is linear") {
  auto rng = seeded(11);
  const ComplexGrid x = rand_complex(rng, 16, 16);
  const ComplexGrid y = rand_complex(rng, 16, 16);
  const ComplexGrid lhs = fft2(2.0 * x + std::complex<double>(0, 3) * y);
  const ComplexGrid rhs = 2.0 * fft2(x) + std::complex<double>(0, 3) * fft2(y);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ifft2 inverts fft2 and Parseval holds") {
  auto rng = seeded(12);
  const ComplexGrid x = rand_complex(rng, 64, 64);
  CHECK((ifft2(fft2(x)) - x).cwiseAbs().maxCoeff() < 1e-11);
  const double space = x.cwiseAbs2().sum();
  const double freq = fft2(x).cwiseAbs2().sum() / (64.0 * 64.0);
  CHECK(std::abs(space - freq) / space < 1e-12);
}

TEST_CASE("rfft2 satisfies Hermitian symmetry against the full transform") {
  auto rng = seeded(13);
  const int h = 16, w = 16;
  const ScalarGrid x = rand_real(rng, h, w);
  const ComplexGrid full = fft2(x.cast<std::complex<double>>());
  const SpectrumHalf half = rfft2(x);
  REQUIRE(half.rows() == h);
  REQUIRE(half.cols() == w / 2 + 1);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j <= w / 2; ++j) {
      CHECK(std::abs(half(i, j) - full(i, j)) < 1e-11);
      // X[-k] = conj(X[k])
      CHECK(std::abs(full((h - i) % h, (w - j) % w) - std::conj(full(i, j))) < 1e-11);
    }
  }
}

TEST_CASE("irfft2 round-trips and tolerates non-Hermitian shared columns") {
  auto rng = seeded(14);
  const ScalarGrid x = rand_real(rng, 32, 32);
  CHECK((irfft2(rfft2(x), 32) - x).cwiseAbs().maxCoeff() < 1e-12);

  // Arbitrary half spectra must still produce a real field (projection).
  const ComplexGrid junk = rand_complex(rng, 8, 5);
  const ScalarGrid y = irfft2(junk, 8);
  CHECK(y.allFinite());
  // Projection is idempotent: re-transform and invert again.
  CHECK((irfft2(rfft2(y), 8) - y).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("transform of a transposed field is the transposed spectrum") {
  auto rng = seeded(15);
  const ComplexGrid x = rand_complex(rng, 16, 16);
  const ComplexGrid lhs = fft2(ComplexGrid(x.transpose()));
  const ComplexGrid rhs = fft2(x).transpose();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("truncate and scatter are mutually inverse on the retained block") {
  auto rng = seeded(16);
  const ModeSet set = retained_modes(Variant::isotropic, 16);
  CHECK(set.rows() == 31);
  CHECK(set.slots() == 31 * 16);

  const SpectrumHalf s = rand_complex(rng, 128, 65);
  const Eigen::MatrixXcd block = truncate_modes(s, set);
  CHECK(block.rows() == set.rows());
  CHECK(block.cols() == set.m);

  const SpectrumHalf back = scatter_modes(block, set, 128, 128);
  CHECK((truncate_modes(back, set) - block).cwiseAbs().maxCoeff() == 0.0);

  // Everything outside the retained set is zero.
  SpectrumHalf masked = back;
  for (int r = 0; r < set.rows(); ++r) {
    const int row = (set.kx[r] % 128 + 128) % 128;
    masked.row(row).head(set.m).setZero();
  }
  CHECK(masked.cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(set.rows(), set.m);
  CHECK(scatter_modes(zero, set, 64, 64).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncate rejects grids too small for the mode count") {
  const ModeSet set = retained_modes(Variant::standard, 16);
  const SpectrumHalf s = SpectrumHalf::Zero(16, 9);
  CHECK_THROWS_AS(truncate_modes(s, set), std::out_of_range);
}

TEST_CASE("h2 weights at reference frequencies") {
  const ScalarGrid w = spectral_h2_weights(8, 8);
  CHECK(w(0, 0) == 1.0);          // kappa^2 = 0
  CHECK(w(1, 0) == 4.0);          // kappa^2 = 1
  CHECK(w(7, 0) == 4.0);          // signed frequency -1
  CHECK(w(2, 3) == doctest::Approx((1.0 + 13.0) * (1.0 + 13.0)));
  CHECK(w(4, 4) == doctest::Approx((1.0 + 32.0) * (1.0 + 32.0)));  // Nyquist both axes
  CHECK(w(3, 2) == w(2, 3));      // transpose symmetry on a square grid
}
