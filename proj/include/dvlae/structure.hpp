#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

namespace dvlae {

using Vec3 = Eigen::Vector3d;
/// Lattice vectors stored as rows, in Å.
using Cell = Eigen::Matrix3d;

struct Structure {
  Cell cell = Cell::Zero();
  std::vector<std::string> species;
  std::vector<Vec3> positions;
  std::array<bool, 3> periodic{false, false, false};
  std::string id;
  std::string tag;

  std::size_t size() const noexcept { return positions.size(); }
  bool any_periodic() const noexcept { return periodic[0] || periodic[1] || periodic[2]; }
  double volume() const { return std::abs(cell.determinant()); }

  /// Throws Error if species/positions lengths differ or a periodic cell is
  /// singular.
  void validate() const;
};

struct Dataset {
  std::vector<Structure> structures;
  /// Distinct species in first-appearance order.
  std::vector<std::string> elements;

  /// Validates each structure, checks id uniqueness and collects elements.
  static Dataset from_structures(std::vector<Structure> structures);

  std::size_t size() const noexcept { return structures.size(); }
  const Structure* find(std::string_view id) const;
};

/// Reads concatenated extended-XYZ frames. Frame ids are `<source>#<index>`.
/// The comment line is a list of key=value pairs; `Lattice`, `Properties`,
/// `pbc` and `tag` (or `config_type`) are interpreted, everything else is
/// ignored. A frame without `Lattice` is non-periodic.
Dataset parse_extxyz(std::istream& in, const std::string& source);
Dataset parse_extxyz_string(std::string_view text, const std::string& source);
Dataset read_extxyz_file(const std::filesystem::path& path, const std::string& source = {});

/// Reads a manifest: one path per line, `#` starts a comment, blank lines
/// skipped. Relative paths resolve against the manifest's directory.
std::vector<std::filesystem::path> read_manifest(const std::filesystem::path& path);

/// Loads and concatenates several extended-XYZ files into one dataset. With a
/// non-empty `id_base`, frame ids use each path relative to it, so ids do not
/// depend on where the project directory lives.
Dataset load_dataset(const std::vector<std::filesystem::path>& files,
                     const std::filesystem::path& id_base = {});

/// Serialises back to extended XYZ (full double precision).
std::string write_extxyz(const Structure& s);

/// Replicates `s` na x nb x nc times. Atoms are emitted cell by cell with the
/// cell index running lexicographically (a slowest, c fastest) and the
/// original atom order inside each cell. The id gains a `@naxnbxnc` suffix.
Structure build_supercell(const Structure& s, std::array<int, 3> reps);

struct Neighbor {
  std::size_t index;
  std::array<int, 3> shift;  // lattice image of the neighbor
  double distance;
  Vec3 displacement;  // positions[index] + shift * cell - positions[center]
};

/// Per-center neighbor entries with 0 < R < cutoff, sorted by
/// (distance, index, shift).
struct NeighborList {
  double cutoff = 0.0;
  std::vector<std::vector<Neighbor>> entries;

  std::size_t size() const noexcept { return entries.size(); }
  const std::vector<Neighbor>& operator[](std::size_t i) const { return entries[i]; }
};

/// Enumerates every periodic image closer than `cutoff`. The image range per
/// direction is derived from the cell's plane spacings, so cutoffs larger
/// than the cell are handled. Non-periodic directions are never replicated.
NeighborList neighbor_list(const Structure& s, double cutoff);

/// Plane spacings V / |b x c| etc. of the lattice.
std::array<double, 3> plane_spacings(const Cell& cell);

}  // namespace dvlae
