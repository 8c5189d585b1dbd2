#include "ifno/fft.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

namespace ifno {
namespace {

using cd = std::complex<double>;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Forward roots e^{-2*pi*i*j/n}, j < n/2, cached per size.
// Single-threaded access only (see the module's concurrency contract).
const std::vector<cd>& twiddles(int n) {
  static std::unordered_map<int, std::vector<cd>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cd> tw(n / 2);
  for (int j = 0; j < n / 2; ++j) {
    double ang = -2.0 * std::numbers::pi * j / n;
    tw[j] = cd(std::cos(ang), std::sin(ang));
  }
  return cache.emplace(n, std::move(tw)).first->second;
}

const std::vector<int>& bit_reversal(int n) {
  static std::unordered_map<int, std::vector<int>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<int> rev(n, 0);
  for (int i = 1; i < n; ++i) rev[i] = (rev[i >> 1] >> 1) | ((i & 1) ? n >> 1 : 0);
  return cache.emplace(n, std::move(rev)).first->second;
}

// In-place iterative radix-2, forward sign convention; conjugate twiddles for
// the (unnormalized) inverse.
void fft1d(cd* a, int n, bool inverse) {
  if (n == 1) return;
  const auto& rev = bit_reversal(n);
  for (int i = 0; i < n; ++i) {
    if (i < rev[i]) std::swap(a[i], a[rev[i]]);
  }
  const auto& tw = twiddles(n);
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len >> 1;
    const int step = n / len;
    for (int start = 0; start < n; start += len) {
      for (int k = 0; k < half; ++k) {
        cd w = tw[k * step];
        if (inverse) w = std::conj(w);
        cd u = a[start + k];
        cd v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

ComplexGrid fft2_pow2(const ComplexGrid& x, bool inverse) {
  const int h = static_cast<int>(x.rows());
  const int w = static_cast<int>(x.cols());
  ComplexGrid y = x;
  for (int i = 0; i < h; ++i) fft1d(y.data() + static_cast<std::ptrdiff_t>(i) * w, w, inverse);
  std::vector<cd> col(h);
  for (int j = 0; j < w; ++j) {
    for (int i = 0; i < h; ++i) col[i] = y(i, j);
    fft1d(col.data(), h, inverse);
    for (int i = 0; i < h; ++i) y(i, j) = col[i];
  }
  return y;
}

ComplexGrid dft2_direct(const ComplexGrid& x, bool inverse) {
  const int h = static_cast<int>(x.rows());
  const int w = static_cast<int>(x.cols());
  const double sign = inverse ? 1.0 : -1.0;
  // Separable: rows then columns, O(HW(H+W)).
  ComplexGrid rows(h, w);
  for (int i = 0; i < h; ++i) {
    for (int l = 0; l < w; ++l) {
      cd acc(0.0, 0.0);
      for (int j = 0; j < w; ++j) {
        double ang = sign * 2.0 * std::numbers::pi * l * j / w;
        acc += x(i, j) * cd(std::cos(ang), std::sin(ang));
      }
      rows(i, l) = acc;
    }
  }
  ComplexGrid y(h, w);
  for (int k = 0; k < h; ++k) {
    for (int l = 0; l < w; ++l) {
      cd acc(0.0, 0.0);
      for (int i = 0; i < h; ++i) {
        double ang = sign * 2.0 * std::numbers::pi * k * i / h;
        acc += rows(i, l) * cd(std::cos(ang), std::sin(ang));
      }
      y(k, l) = acc;
    }
  }
  return y;
}

ComplexGrid transform(const ComplexGrid& x, bool inverse) {
  const int h = static_cast<int>(x.rows());
  const int w = static_cast<int>(x.cols());
  if (h == 0 || w == 0) throw std::invalid_argument("fft2: empty grid");
  if (is_pow2(h) && is_pow2(w)) return fft2_pow2(x, inverse);
  return dft2_direct(x, inverse);
}

int half_width(int w) { return w / 2 + 1; }

}  // namespace

ComplexGrid dft2_naive(const ComplexGrid& x) {
  const int h = static_cast<int>(x.rows());
  const int w = static_cast<int>(x.cols());
  ComplexGrid y(h, w);
  for (int k = 0; k < h; ++k) {
    for (int l = 0; l < w; ++l) {
      cd acc(0.0, 0.0);
      for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
          double ang = -2.0 * std::numbers::pi *
                       (static_cast<double>(k) * i / h + static_cast<double>(l) * j / w);
          acc += x(i, j) * cd(std::cos(ang), std::sin(ang));
        }
      }
      y(k, l) = acc;
    }
  }
  return y;
}

ComplexGrid fft2(const ComplexGrid& x) { return transform(x, false); }

ComplexGrid ifft2(const ComplexGrid& x) {
  ComplexGrid y = transform(x, true);
  y *= 1.0 / (static_cast<double>(x.rows()) * static_cast<double>(x.cols()));
  return y;
}

SpectrumHalf rfft2(const ScalarGrid& x) {
  ComplexGrid c = x.cast<cd>();
  ComplexGrid full = fft2(c);
  return full.leftCols(half_width(static_cast<int>(x.cols())));
}

namespace {

// Hermitian extension of a half spectrum into a full H x W spectrum. The
// shared columns (k_y = 0 and, for even W, k_y = W/2) are projected onto
// their Hermitian part so the inverse transform is exactly real.
ComplexGrid extend_hermitian(const SpectrumHalf& s, int width) {
  const int h = static_cast<int>(s.rows());
  const int hw = static_cast<int>(s.cols());
  if (hw != half_width(width)) {
    throw std::invalid_argument("irfft2: half spectrum has " + std::to_string(hw) +
                                " columns, expected " + std::to_string(half_width(width)));
  }
  ComplexGrid full = ComplexGrid::Zero(h, width);
  for (int l = 0; l < hw; ++l) {
    const bool shared = (l == 0) || (width % 2 == 0 && l == width / 2);
    for (int k = 0; k < h; ++k) {
      if (shared) {
        full(k, l) = 0.5 * (s(k, l) + std::conj(s((h - k) % h, l)));
      } else {
        full(k, l) = s(k, l);
        full((h - k) % h, width - l) = std::conj(s(k, l));
      }
    }
  }
  return full;
}

}  // namespace

ScalarGrid irfft2(const SpectrumHalf& s, int width) {
  ComplexGrid full = extend_hermitian(s, width);
  ComplexGrid z = ifft2(full);
  return z.real();
}

SpectrumHalf irfft2_adjoint(const ScalarGrid& zbar, int width) {
  const int h = static_cast<int>(zbar.rows());
  const int hw = half_width(width);
  ComplexGrid full = fft2(zbar.cast<cd>());
  SpectrumHalf out(h, hw);
  const double scale = 1.0 / (static_cast<double>(h) * width);
  for (int l = 0; l < hw; ++l) {
    const bool shared = (l == 0) || (width % 2 == 0 && l == width / 2);
    const double wgt = shared ? scale : 2.0 * scale;
    for (int k = 0; k < h; ++k) out(k, l) = wgt * full(k, l);
  }
  return out;
}

ScalarGrid rfft2_adjoint(const SpectrumHalf& sbar, int width) {
  const int h = static_cast<int>(sbar.rows());
  if (static_cast<int>(sbar.cols()) != half_width(width)) {
    throw std::invalid_argument("rfft2_adjoint: width mismatch");
  }
  ComplexGrid padded = ComplexGrid::Zero(h, width);
  padded.leftCols(sbar.cols()) = sbar;
  ComplexGrid z = ifft2(padded);
  return static_cast<double>(h) * width * z.real();
}

Eigen::MatrixXcd truncate_modes(const SpectrumHalf& s, const ModeSet& set) {
  const int h = static_cast<int>(s.rows());
  const int hw = static_cast<int>(s.cols());
  const int w = 2 * (hw - 1);
  if (2 * set.m > std::min(h, w)) {
    throw std::out_of_range("truncate_modes: m = " + std::to_string(set.m) +
                            " too large for a " + std::to_string(h) + "x" + std::to_string(w) +
                            " grid");
  }
  Eigen::MatrixXcd block(set.rows(), set.m);
  for (int r = 0; r < set.rows(); ++r) {
    const int row = ((set.kx[r] % h) + h) % h;
    for (int c = 0; c < set.m; ++c) block(r, c) = s(row, c);
  }
  return block;
}

SpectrumHalf scatter_modes(const Eigen::MatrixXcd& block, const ModeSet& set, int height,
                           int width) {
  if (block.rows() != set.rows() || block.cols() != set.m) {
    throw std::invalid_argument("scatter_modes: block shape does not match mode set");
  }
  if (2 * set.m > std::min(height, width)) {
    throw std::out_of_range("scatter_modes: m too large for resolution");
  }
  SpectrumHalf s = SpectrumHalf::Zero(height, half_width(width));
  for (int r = 0; r < set.rows(); ++r) {
    const int row = ((set.kx[r] % height) + height) % height;
    for (int c = 0; c < set.m; ++c) s(row, c) = block(r, c);
  }
  return s;
}

ScalarGrid spectral_h2_weights(int height, int width) {
  ScalarGrid wgt(height, width);
  for (int k = 0; k < height; ++k) {
    const int sk = (k <= height / 2) ? k : k - height;
    for (int l = 0; l < width; ++l) {
      const int sl = (l <= width / 2) ? l : l - width;
      const double kappa2 = static_cast<double>(sk) * sk + static_cast<double>(sl) * sl;
      wgt(k, l) = (1.0 + kappa2) * (1.0 + kappa2);
    }
  }
  return wgt;
}

}  // namespace ifno
