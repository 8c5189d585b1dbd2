#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ifno {

/// Dense 2D field on a uniform grid. Row-major so that raw data matches the
/// (row, col) serialization order used by the file formats.
template <typename Scalar>
using Grid = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ScalarGrid = Grid<double>;
using ComplexGrid = Grid<std::complex<double>>;

using RowMatrixXd = Grid<double>;
using RowMatrixXcd = Grid<std::complex<double>>;

/// Stack of same-shaped scalar grids, one per channel. Stored as a
/// channels x (height*width) matrix; pixel (i, j) lives in column i*width + j.
/// This makes every pointwise channel mixing a single matrix product.
struct ChannelField {
  int height = 0;
  int width = 0;
  RowMatrixXd data;  // row-major, so each channel row is a contiguous grid

  ChannelField() = default;
  ChannelField(int channels, int h, int w)
      : height(h), width(w), data(RowMatrixXd::Zero(channels, h * w)) {}

  int channels() const { return static_cast<int>(data.rows()); }

  double& at(int c, int i, int j) { return data(c, i * width + j); }
  double at(int c, int i, int j) const { return data(c, i * width + j); }

  /// View of one channel as an H x W grid.
  Eigen::Map<const ScalarGrid> channel(int c) const {
    return Eigen::Map<const ScalarGrid>(data.row(c).data(), height, width);
  }
  Eigen::Map<ScalarGrid> channel(int c) {
    return Eigen::Map<ScalarGrid>(data.row(c).data(), height, width);
  }

  ScalarGrid channel_copy(int c) const { return channel(c); }

  void set_channel(int c, const ScalarGrid& g) {
    data.row(c) = Eigen::Map<const Eigen::RowVectorXd>(g.data(), g.size());
  }

  static ChannelField from_grid(const ScalarGrid& g) {
    ChannelField f(1, static_cast<int>(g.rows()), static_cast<int>(g.cols()));
    f.set_channel(0, g);
    return f;
  }
};

/// The eight symmetries of the square.
enum class GroupElement {
  identity,
  flip_x,
  flip_y,
  transpose,
  rot90,
  rot180,
  rot270,
  anti_transpose,
};

inline constexpr GroupElement kGroupElements[8] = {
    GroupElement::identity,  GroupElement::flip_x, GroupElement::flip_y,
    GroupElement::transpose, GroupElement::rot90,  GroupElement::rot180,
    GroupElement::rot270,    GroupElement::anti_transpose,
};

std::string to_string(GroupElement g);

/// True for elements that swap the two axes (legal only on square grids).
bool swaps_axes(GroupElement g);

/// Group composition: apply_group(compose(g, h), x) == apply_group(g, apply_group(h, x)).
GroupElement compose(GroupElement g, GroupElement h);

GroupElement inverse(GroupElement g);

namespace detail {

struct IndexAction {
  bool swap;    // read source indices as (j, i)
  bool flip_i;  // then reflect the first source index
  bool flip_j;  // then reflect the second source index
};

IndexAction index_action(GroupElement g);

}  // namespace detail

/// Spatial action of a D4 element. Reflections are array reversals
/// (i -> H-1-i). Axis-swapping elements require a square grid.
template <typename Scalar>
Grid<Scalar> apply_group(GroupElement g, const Grid<Scalar>& x) {
  const auto act = detail::index_action(g);
  const int h = static_cast<int>(x.rows());
  const int w = static_cast<int>(x.cols());
  if (act.swap && h != w) {
    throw std::invalid_argument("apply_group: " + to_string(g) +
                                " requires a square grid, got " + std::to_string(h) + "x" +
                                std::to_string(w));
  }
  Grid<Scalar> y(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      int p = act.swap ? j : i;
      int q = act.swap ? i : j;
      if (act.flip_i) p = h - 1 - p;
      if (act.flip_j) q = w - 1 - q;
      y(i, j) = x(p, q);
    }
  }
  return y;
}

ChannelField apply_group(GroupElement g, const ChannelField& x);

/// Circular translation: output(i, j) = x((i - di) mod H, (j - dj) mod W).
template <typename Scalar>
Grid<Scalar> translate(const Grid<Scalar>& x, int di, int dj) {
  const int h = static_cast<int>(x.rows());
  const int w = static_cast<int>(x.cols());
  Grid<Scalar> y(h, w);
  for (int i = 0; i < h; ++i) {
    const int si = ((i - di) % h + h) % h;
    for (int j = 0; j < w; ++j) {
      y(i, j) = x(si, ((j - dj) % w + w) % w);
    }
  }
  return y;
}

ChannelField translate(const ChannelField& x, int di, int dj);

/// out[o] = sum_i M(o, i) * x[i] + b[o], applied at every pixel.
ChannelField pointwise_affine(const ChannelField& x, const Eigen::MatrixXd& M,
                              const Eigen::VectorXd& b);

ChannelField relu(const ChannelField& x);

}  // namespace ifno
