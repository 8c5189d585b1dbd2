#pragma once

#include "ifno/fft.hpp"

namespace ifno {

enum class Variant { standard, isotropic };

std::string to_string(Variant v);

/// Retained frequency block per variant. The standard kernel keeps
/// k_x in [-m, m-1] (2m rows, the reference convention); the isotropic kernel
/// keeps the symmetric set |k_x| <= m-1 (2m-1 rows), since the unpaired -m row
/// cannot satisfy R[k,l] = R[-k,l]. Columns are k_y = 0..m-1 either way.
ModeSet retained_modes(Variant v, int m);

/// Flat index of the unordered mode pair {p, q} in the upper-triangular
/// generator, row-major over 0 <= p <= q < m. Symmetric in its arguments.
int generator_index(int p, int q, int m);

/// Free parameters per channel pair of the isotropic kernel: m(m+1)/2.
int generator_size(int m);

/// Per-layer free parameters of the isotropic kernel: one real value per
/// channel pair and unordered mode pair.
struct IsoGenerator {
  int c_out = 0;
  int c_in = 0;
  int m = 0;
  Eigen::VectorXd values;  // index ((o*c_in)+i)*T + t, T = m(m+1)/2

  IsoGenerator() = default;
  IsoGenerator(int c_out_, int c_in_, int m_)
      : c_out(c_out_), c_in(c_in_), m(m_),
        values(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c_out_) * c_in_ *
                                     generator_size(m_))) {}

  double& at(int o, int i, int p, int q) {
    return values[(static_cast<Eigen::Index>(o) * c_in + i) * generator_size(m) +
                  generator_index(p, q, m)];
  }
  double at(int o, int i, int p, int q) const {
    return values[(static_cast<Eigen::Index>(o) * c_in + i) * generator_size(m) +
                  generator_index(p, q, m)];
  }
};

/// Complex spectral weights over a retained mode block. Row o*c_in + i holds
/// the slot vector for channel pair (o, i); slot t = row_index*m + k_y.
struct SpectralKernel {
  int c_out = 0;
  int c_in = 0;
  ModeSet set;
  Eigen::MatrixXcd weights;  // (c_out*c_in) x set.slots()

  SpectralKernel() = default;
  SpectralKernel(int c_out_, int c_in_, ModeSet set_)
      : c_out(c_out_), c_in(c_in_), set(std::move(set_)),
        weights(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(c_out_) * c_in_,
                                       set.slots())) {}

  std::complex<double>& at(int o, int i, int row, int ky) {
    return weights(static_cast<Eigen::Index>(o) * c_in + i, row * set.m + ky);
  }
  std::complex<double> at(int o, int i, int row, int ky) const {
    return weights(static_cast<Eigen::Index>(o) * c_in + i, row * set.m + ky);
  }

  /// Kernel entry looked up by signed k_x; throws if k_x is not retained.
  std::complex<double> at_freq(int o, int i, int kx, int ky) const;
};

/// Expand the triangular generator into the full symmetric kernel:
/// weight(o, i, k_x, k_y) = g(o, i, {|k_x|, k_y} sorted), imaginary part 0.
/// The retained set must be the isotropic set for g.m.
SpectralKernel expand_generator(const IsoGenerator& g, const ModeSet& retained);

/// Asymptotic parameter-reduction factor of the symmetry constraints in
/// d dimensions: 2^(d+1) * d!.
double reduction_factor(int d);

struct SymmetryReport {
  double flip = 0.0;       // max |R[k,l] - R[-k,l]|
  double transpose = 0.0;  // max |R[k,l] - R[l,k]| (via the |k| representative)
  double imag = 0.0;       // max |Im R|

  double max() const { return std::max(flip, std::max(transpose, imag)); }
};

SymmetryReport verify_kernel_symmetry(const SpectralKernel& k);

}  // namespace ifno
