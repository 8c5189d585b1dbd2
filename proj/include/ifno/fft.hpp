#pragma once

#include <vector>

#include "ifno/grid.hpp"

namespace ifno {

/// Half spectrum of a real field: H x (W/2+1) complex entries, k_y in [0, W/2].
/// The missing columns are implied by Hermitian symmetry.
using SpectrumHalf = ComplexGrid;

/// Unnormalized forward DFT by direct summation. Test oracle for fft2; kept
/// independent of the fast path.
ComplexGrid dft2_naive(const ComplexGrid& x);

/// Unnormalized forward transform. Radix-2 fast path when both dimensions are
/// powers of two, naive fallback otherwise. Agrees with dft2_naive.
ComplexGrid fft2(const ComplexGrid& x);

/// Inverse transform with 1/(H*W) normalization; ifft2(fft2(x)) == x.
ComplexGrid ifft2(const ComplexGrid& x);

/// Forward transform of a real field, keeping columns k_y in [0, W/2].
SpectrumHalf rfft2(const ScalarGrid& x);

/// Inverse of rfft2. The half spectrum is Hermitian-projected first (the
/// shared columns k_y = 0 and k_y = W/2 are averaged with their conjugate
/// partners), so the output is exactly real for any input. `width` is the
/// full field width W.
ScalarGrid irfft2(const SpectrumHalf& s, int width);

/// Adjoint of irfft2 as a real-linear map, with cotangents stored as
/// d/dRe + i d/dIm. Shared columns carry weight 1, interior columns weight 2.
SpectrumHalf irfft2_adjoint(const ScalarGrid& zbar, int width);

/// Adjoint of rfft2 under the same convention.
ScalarGrid rfft2_adjoint(const SpectrumHalf& sbar, int width);

/// Retained low-frequency block: rows are the listed signed k_x values (in
/// order), columns are k_y = 0..m-1.
struct ModeSet {
  int m = 0;                // modes per axis
  std::vector<int> kx;      // signed row frequencies, canonical order

  int rows() const { return static_cast<int>(kx.size()); }
  int slots() const { return rows() * m; }
};

/// Gather the retained modes of a half spectrum into a rows() x m block.
Eigen::MatrixXcd truncate_modes(const SpectrumHalf& s, const ModeSet& set);

/// Place a block back into an otherwise-zero H x (W/2+1) half spectrum.
/// truncate_modes(scatter_modes(b)) == b.
SpectrumHalf scatter_modes(const Eigen::MatrixXcd& block, const ModeSet& set, int height,
                           int width);

/// Sobolev weights (1 + kappa^2)^2 over the full H x W frequency grid, with
/// signed integer frequencies.
ScalarGrid spectral_h2_weights(int height, int width);

}  // namespace ifno
