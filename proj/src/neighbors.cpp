#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "dvlae/error.hpp"
#include "dvlae/structure.hpp"

namespace dvlae {

std::array<double, 3> plane_spacings(const Cell& cell) {
  const double volume = std::abs(cell.determinant());
  const Vec3 a = cell.row(0).transpose();
  const Vec3 b = cell.row(1).transpose();
  const Vec3 c = cell.row(2).transpose();
  return {volume / b.cross(c).norm(), volume / c.cross(a).norm(), volume / a.cross(b).norm()};
}

namespace {

bool canonical_less(const Neighbor& x, const Neighbor& y) {
  if (x.distance != y.distance) return x.distance < y.distance;
  if (x.index != y.index) return x.index < y.index;
  return x.shift < y.shift;
}

}  // namespace

NeighborList neighbor_list(const Structure& s, double cutoff) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw Error("neighbor cutoff must be positive");
  s.validate();

  NeighborList list;
  list.cutoff = cutoff;
  list.entries.resize(s.size());
  const std::size_t n = s.size();

  if (!s.any_periodic()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const Vec3 d = s.positions[j] - s.positions[i];
        const double r = d.norm();
        if (r > 0.0 && r < cutoff) list.entries[i].push_back({j, {0, 0, 0}, r, d});
      }
      std::sort(list.entries[i].begin(), list.entries[i].end(), canonical_less);
    }
    return list;
  }

  // Work in wrapped fractional coordinates: frac = wrapped + cell_index.
  // An image at fractional offset f can only be within the cutoff if
  // |f_d| * spacing_d < cutoff along every periodic direction d.
  const Cell inverse = s.cell.inverse();
  const auto spacing = plane_spacings(s.cell);
  std::array<double, 3> reach{};
  for (int d = 0; d < 3; ++d) reach[d] = s.periodic[d] ? cutoff / spacing[d] : 0.0;

  std::vector<Vec3> wrapped(n);
  std::vector<std::array<long, 3>> cell_index(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 frac = (s.positions[i].transpose() * inverse).transpose();
    for (int d = 0; d < 3; ++d) {
      const double whole = s.periodic[d] ? std::floor(frac[d]) : 0.0;
      cell_index[i][d] = static_cast<long>(whole);
      wrapped[i][d] = frac[d] - whole;
    }
  }

  const Vec3 a = s.cell.row(0).transpose();
  const Vec3 b = s.cell.row(1).transpose();
  const Vec3 c = s.cell.row(2).transpose();

  for (std::size_t i = 0; i < n; ++i) {
    auto& out = list.entries[i];
    for (std::size_t j = 0; j < n; ++j) {
      std::array<long, 3> lo{}, hi{};
      for (int d = 0; d < 3; ++d) {
        if (!s.periodic[d]) continue;
        const double delta = wrapped[j][d] - wrapped[i][d];
        // one extra image each side absorbs rounding in the bound itself
        lo[d] = static_cast<long>(std::ceil(-reach[d] - delta)) - 1;
        hi[d] = static_cast<long>(std::floor(reach[d] - delta)) + 1;
      }
      for (long sa = lo[0]; sa <= hi[0]; ++sa) {
        for (long sb = lo[1]; sb <= hi[1]; ++sb) {
          for (long sc = lo[2]; sc <= hi[2]; ++sc) {
            // translate the wrapped-frame offset back to the raw positions
            const std::array<int, 3> shift{
                static_cast<int>(sa - cell_index[j][0] + cell_index[i][0]),
                static_cast<int>(sb - cell_index[j][1] + cell_index[i][1]),
                static_cast<int>(sc - cell_index[j][2] + cell_index[i][2])};
            if (i == j && shift == std::array<int, 3>{0, 0, 0}) continue;
            const Vec3 d = s.positions[j] - s.positions[i] +
                           (double(shift[0]) * a + double(shift[1]) * b + double(shift[2]) * c);
            const double r = d.norm();
            if (r > 0.0 && r < cutoff) out.push_back({j, shift, r, d});
          }
        }
      }
    }
    std::sort(out.begin(), out.end(), canonical_less);
  }
  return list;
}

}  // namespace dvlae
