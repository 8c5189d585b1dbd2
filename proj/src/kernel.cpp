#include "ifno/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace ifno {

std::string to_string(Variant v) {
  return v == Variant::standard ? "standard" : "isotropic";
}

ModeSet retained_modes(Variant v, int m) {
  if (m < 1) throw std::invalid_argument("retained_modes: m must be positive");
  ModeSet set;
  set.m = m;
  for (int k = 0; k < m; ++k) set.kx.push_back(k);
  if (v == Variant::standard) {
    for (int k = -m; k < 0; ++k) set.kx.push_back(k);
  } else {
    for (int k = -(m - 1); k < 0; ++k) set.kx.push_back(k);
  }
  return set;
}

int generator_index(int p, int q, int m) {
  if (p < 0 || q < 0 || p >= m || q >= m) {
    throw std::out_of_range("generator_index: mode pair (" + std::to_string(p) + ", " +
                            std::to_string(q) + ") out of range for m = " + std::to_string(m));
  }
  const int a = std::min(p, q);
  const int b = std::max(p, q);
  return a * m - a * (a - 1) / 2 + (b - a);
}

int generator_size(int m) { return m * (m + 1) / 2; }

std::complex<double> SpectralKernel::at_freq(int o, int i, int kx, int ky) const {
  for (int r = 0; r < set.rows(); ++r) {
    if (set.kx[r] == kx) return at(o, i, r, ky);
  }
  throw std::out_of_range("SpectralKernel: k_x = " + std::to_string(kx) + " not retained");
}

SpectralKernel expand_generator(const IsoGenerator& g, const ModeSet& retained) {
  const ModeSet iso = retained_modes(Variant::isotropic, g.m);
  if (retained.m != iso.m || retained.kx != iso.kx) {
    throw std::invalid_argument("expand_generator: retained set is not the isotropic set");
  }
  SpectralKernel k(g.c_out, g.c_in, retained);
  const int T = generator_size(g.m);
  for (Eigen::Index pair = 0; pair < k.weights.rows(); ++pair) {
    const auto src = g.values.segment(pair * T, T);
    for (int r = 0; r < retained.rows(); ++r) {
      const int p = std::abs(retained.kx[r]);
      for (int ky = 0; ky < retained.m; ++ky) {
        k.weights(pair, r * retained.m + ky) = src[generator_index(p, ky, g.m)];
      }
    }
  }
  return k;
}

double reduction_factor(int d) {
  if (d < 1) throw std::domain_error("reduction_factor: dimension must be >= 1");
  double fact = 1.0;
  for (int i = 2; i <= d; ++i) fact *= i;
  return std::pow(2.0, d + 1) * fact;
}

SymmetryReport verify_kernel_symmetry(const SpectralKernel& k) {
  SymmetryReport rep;
  const ModeSet& set = k.set;
  // Row index by signed k_x, -1 when absent.
  auto row_of = [&](int kx) {
    for (int r = 0; r < set.rows(); ++r) {
      if (set.kx[r] == kx) return r;
    }
    return -1;
  };
  for (Eigen::Index pair = 0; pair < k.weights.rows(); ++pair) {
    for (int r = 0; r < set.rows(); ++r) {
      const int kx = set.kx[r];
      for (int ky = 0; ky < set.m; ++ky) {
        const std::complex<double> v = k.weights(pair, r * set.m + ky);
        rep.imag = std::max(rep.imag, std::abs(v.imag()));
        const int rneg = row_of(-kx);
        if (rneg >= 0) {
          rep.flip = std::max(rep.flip,
                              std::abs(v - k.weights(pair, rneg * set.m + ky)));
        }
        // Transpose partner (ky, kx); only representable in the half block
        // for kx >= 0 (negative k_y slots are covered by the flip relation).
        if (kx >= 0) {
          const int rt = row_of(ky);
          rep.transpose =
              std::max(rep.transpose, std::abs(v - k.weights(pair, rt * set.m + kx)));
        }
      }
    }
  }
  return rep;
}

}  // namespace ifno
