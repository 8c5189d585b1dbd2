#include "ifno/grid.hpp"

#include <array>

namespace ifno {
namespace detail {

IndexAction index_action(GroupElement g) {
  switch (g) {
    case GroupElement::identity:       return {false, false, false};
    case GroupElement::flip_x:         return {false, true, false};
    case GroupElement::flip_y:         return {false, false, true};
    case GroupElement::rot180:         return {false, true, true};
    case GroupElement::transpose:      return {true, false, false};
    case GroupElement::rot90:          return {true, false, true};
    case GroupElement::rot270:         return {true, true, false};
    case GroupElement::anti_transpose: return {true, true, true};
  }
  throw std::invalid_argument("index_action: bad group element");
}

namespace {

// Composition table derived once from the index actions on a labeled grid.
std::array<std::array<GroupElement, 8>, 8> make_compose_table() {
  constexpr int n = 3;
  ScalarGrid label(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) label(i, j) = i * n + j;

  std::array<ScalarGrid, 8> image;
  for (int k = 0; k < 8; ++k) image[k] = apply_group(kGroupElements[k], label);

  std::array<std::array<GroupElement, 8>, 8> table{};
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      ScalarGrid gh = apply_group(kGroupElements[a], image[b]);
      bool found = false;
      for (int k = 0; k < 8; ++k) {
        if (gh == image[k]) {
          table[a][b] = kGroupElements[k];
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("D4 composition table is not closed");
    }
  }
  return table;
}

}  // namespace
}  // namespace detail

std::string to_string(GroupElement g) {
  switch (g) {
    case GroupElement::identity:       return "identity";
    case GroupElement::flip_x:         return "flip-x";
    case GroupElement::flip_y:         return "flip-y";
    case GroupElement::transpose:      return "transpose";
    case GroupElement::rot90:          return "rot90";
    case GroupElement::rot180:         return "rot180";
    case GroupElement::rot270:         return "rot270";
    case GroupElement::anti_transpose: return "anti-transpose";
  }
  return "?";
}

bool swaps_axes(GroupElement g) { return detail::index_action(g).swap; }

GroupElement compose(GroupElement g, GroupElement h) {
  static const auto table = detail::make_compose_table();
  return table[static_cast<int>(g)][static_cast<int>(h)];
}

GroupElement inverse(GroupElement g) {
  for (GroupElement h : kGroupElements) {
    if (compose(g, h) == GroupElement::identity) return h;
  }
  throw std::logic_error("inverse: no inverse found");
}

ChannelField apply_group(GroupElement g, const ChannelField& x) {
  ChannelField y(x.channels(), x.height, x.width);
  for (int c = 0; c < x.channels(); ++c) {
    y.set_channel(c, apply_group(g, x.channel_copy(c)));
  }
  return y;
}

ChannelField translate(const ChannelField& x, int di, int dj) {
  ChannelField y(x.channels(), x.height, x.width);
  for (int c = 0; c < x.channels(); ++c) {
    y.set_channel(c, translate(x.channel_copy(c), di, dj));
  }
  return y;
}

ChannelField pointwise_affine(const ChannelField& x, const Eigen::MatrixXd& M,
                              const Eigen::VectorXd& b) {
  if (M.cols() != x.channels() || b.size() != M.rows()) {
    throw std::invalid_argument("pointwise_affine: dimension mismatch");
  }
  ChannelField y;
  y.height = x.height;
  y.width = x.width;
  y.data = (M * x.data).colwise() + b;
  return y;
}

ChannelField relu(const ChannelField& x) {
  ChannelField y = x;
  y.data = y.data.cwiseMax(0.0);
  return y;
}

}  // namespace ifno
