#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dvlae/structure.hpp"

namespace dvlae {

/// Cutoff radii in Å; f_c is 1 below inner, tapers to 0 at outer.
struct CutoffParams {
  double inner = 5.4;
  double outer = 6.0;

  void validate() const;
  friend bool operator==(const CutoffParams&, const CutoffParams&) = default;
};

/// f_c(r): 1 for r < inner, 1 - 10x^3 + 15x^4 - 6x^5 with
/// x = (r - inner) / (outer - inner) on [inner, outer), 0 beyond.
/// C1-continuous at both radii.
double cutoff_value(double r, const CutoffParams& cut);

/// G2: sum_j exp(-eta (R_ij - R_s)^2) f_c(R_ij) over neighbors of one element.
struct RadialParams {
  double eta = 0.0;
  double r_s = 0.0;
  std::string neighbor;
  CutoffParams cutoff;

  friend bool operator==(const RadialParams&, const RadialParams&) = default;
};

enum class AngularKind { G4, G5 };

/// G4 / G5 over unordered neighbor pairs {j, k} whose species match the
/// unordered element pair.
struct AngularParams {
  AngularKind kind = AngularKind::G4;
  double eta = 0.0;
  double zeta = 1.0;
  int lambda = 1;
  std::string first;
  std::string second;
  CutoffParams cutoff;

  bool matches(std::string_view a, std::string_view b) const {
    return (a == first && b == second) || (a == second && b == first);
  }
  friend bool operator==(const AngularParams&, const AngularParams&) = default;
};

using SymmetryFunction = std::variant<RadialParams, AngularParams>;

/// Canonical one-line description, used for layout checksums and reports.
std::string describe(const SymmetryFunction& f);

struct ElementFunctions {
  std::string element;
  std::vector<SymmetryFunction> functions;
};

/// Descriptor definitions per center element. Element order, then function
/// order inside each element, defines the column order of every downstream
/// matrix and bit vector.
class SymmetryFunctionSet {
 public:
  SymmetryFunctionSet() = default;
  explicit SymmetryFunctionSet(std::vector<ElementFunctions> blocks);

  /// Default grid: radial eta in {0, 0.5, 1, 2, 4} with R_s = 0 for every
  /// (center, neighbor) pair; G4 and G5 with eta in {0, 0.5}, zeta in {1, 4},
  /// lambda = +-1 for every (center, unordered neighbor pair). r_c = 6 Å,
  /// r_ci = 0.9 r_c.
  static SymmetryFunctionSet default_grid(const std::vector<std::string>& elements,
                                          double outer_cutoff = 6.0);

  const std::vector<ElementFunctions>& blocks() const noexcept { return blocks_; }
  std::vector<std::string> elements() const;
  /// Index of the element block, or npos.
  std::size_t element_index(std::string_view element) const;
  std::size_t total_columns() const;
  double max_cutoff() const;
  bool has_angular() const;

  /// Canonical text of every definition, one per line.
  std::string canonical_text() const;

 private:
  std::vector<ElementFunctions> blocks_;
};

/// Geometry of one neighbor pair {j, k} seen from center i.
struct TripletGeometry {
  double r_ij;
  double r_ik;
  double r_jk;
  double cos_theta;  // angle at i, clamped to [-1, 1]
};

double radial_g2(std::span<const Neighbor> neighbors, std::span<const std::string> species,
                 const RadialParams& p);

/// Unordered pairs of the center's neighbor entries, each counted once.
/// (1 + lambda cos)^zeta uses the 0^0 = 1 convention when zeta = 0.
double angular_g4(std::span<const Neighbor> neighbors, std::span<const std::string> species,
                  const AngularParams& p);
double angular_g5(std::span<const Neighbor> neighbors, std::span<const std::string> species,
                  const AngularParams& p);

/// Dispatches on p.kind.
double angular_value(std::span<const Neighbor> neighbors, std::span<const std::string> species,
                     const AngularParams& p);

/// Row-major values for the atoms of one center element.
struct ElementBlock {
  std::string element;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> atoms;  // structure atom index of each row
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values).subspan(r * cols, cols);
  }
};

struct DescriptorMatrix {
  std::string structure_id;
  std::vector<ElementBlock> blocks;  // same order as the function set
};

/// Evaluates every definition for every atom. Throws Error naming the element
/// if a species has no block in `sfset`.
DescriptorMatrix compute_structure_descriptors(const Structure& s,
                                               const SymmetryFunctionSet& sfset);

/// compute_structure_descriptors over a dataset (parallel per structure,
/// output in dataset order).
std::vector<DescriptorMatrix> compute_dataset_descriptors(const Dataset& ds,
                                                          const SymmetryFunctionSet& sfset);

}  // namespace dvlae
