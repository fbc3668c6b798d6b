#pragma once

// Corpus builders and small utilities shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dvlae/descriptors.hpp"
#include "dvlae/fingerprint.hpp"
#include "dvlae/structure.hpp"

namespace dvlae::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Structure molecule(std::vector<std::string> species, std::vector<Vec3> positions,
                          std::string id = "mol") {
  Structure s;
  s.species = std::move(species);
  s.positions = std::move(positions);
  s.id = std::move(id);
  return s;
}

inline Structure crystal(const Cell& cell, std::vector<std::string> species,
                         std::vector<Vec3> positions, std::string id = "xtal") {
  Structure s = molecule(std::move(species), std::move(positions), std::move(id));
  s.cell = cell;
  s.periodic = {true, true, true};
  return s;
}

inline Structure simple_cubic(double a, std::string element = "X") {
  return crystal(Cell::Identity() * a, {std::move(element)}, {Vec3::Zero()}, "sc");
}

/// Random triclinic cell: edge lengths in [lo, hi], off-diagonal shear up to
/// `shear` of the edge length.
inline Cell random_cell(Rng& rng, double lo, double hi, double shear = 0.3) {
  Cell cell = Cell::Zero();
  for (int d = 0; d < 3; ++d) {
    const double len = uniform(rng, lo, hi);
    cell(d, d) = len;
    for (int e = 0; e < 3; ++e) {
      if (e != d) cell(d, e) = uniform(rng, -shear, shear) * len;
    }
  }
  return cell;
}

/// Random periodic structure whose atoms are at least `min_sep` apart
/// (including periodic images).
inline Structure random_crystal(Rng& rng, std::size_t atoms, const std::vector<std::string>& elements,
                                double edge_lo, double edge_hi, double min_sep, std::string id) {
  for (;;) {
    const Cell cell = random_cell(rng, edge_lo, edge_hi);
    Structure s = crystal(cell, {}, {}, id);
    for (std::size_t i = 0; i < atoms; ++i) {
      s.species.push_back(elements[i % elements.size()]);
      const Vec3 frac(uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1));
      s.positions.push_back((frac.transpose() * cell).transpose());
    }
    const auto nl = neighbor_list(s, min_sep);
    bool ok = true;
    for (const auto& row : nl.entries) ok = ok && row.empty();
    if (ok) return s;
  }
}

/// Uniformly random proper rotation (unit quaternion from a 4-D Gaussian).
inline Eigen::Matrix3d random_rotation(Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline Structure rigid_motion(const Structure& s, const Eigen::Matrix3d& rot, const Vec3& shift) {
  Structure out = s;
  for (int d = 0; d < 3; ++d) out.cell.row(d) = (rot * s.cell.row(d).transpose()).transpose();
  for (auto& p : out.positions) p = rot * p + shift;
  return out;
}

inline Structure permuted(const Structure& s, const std::vector<std::size_t>& order) {
  Structure out = s;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.species[i] = s.species[order[i]];
    out.positions[i] = s.positions[order[i]];
  }
  return out;
}

inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

/// Smallest distance of any descriptor value to an interior bin edge,
/// relative to the column range. Supercell and rigid-motion equality of D
/// is only guaranteed when this exceeds 1e-6.
inline double min_edge_margin(std::span<const DescriptorMatrix> matrices, const HistogramSpec& spec) {
  double margin = 1.0;
  for (const auto& m : matrices) {
    std::size_t col0 = 0;
    for (std::size_t g = 0; g < spec.layout.size(); ++g) {
      const ElementBlock& block = m.blocks[g];
      for (std::size_t r = 0; r < block.rows; ++r) {
        for (std::size_t c = 0; c < block.cols; ++c) {
          const BinRange& range = spec.ranges[col0 + c];
          const double k = static_cast<double>(spec.bins);
          const double t = (block.at(r, c) - range.lo) / (range.hi - range.lo) * k;
          const double bin = std::floor(t);
          // the outermost edges are padding; values beyond them clamp
          if (bin >= 1.0) margin = std::min(margin, (t - bin) / k);
          if (bin <= k - 2.0) margin = std::min(margin, (bin + 1.0 - t) / k);
        }
      }
      col0 += spec.layout[g].count;
    }
  }
  return margin;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string pattern = (std::filesystem::temp_directory_path() / "dvlae-test-XXXXXX").string();
    if (mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dvlae::test
