#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dvlae/bits.hpp"
#include "dvlae/descriptors.hpp"
#include "dvlae/structure.hpp"
#include "dvlae/vectors.hpp"

namespace dvlae {

/// How a bin of the current structure is compared with the reference's.
/// Occupancy: bit = present(cur) XOR present(ref).
/// CountEquality: bit = count(cur) != count(ref).
enum class Comparison { Occupancy, CountEquality };

std::string_view to_string(Comparison c);
Comparison comparison_from_string(std::string_view s);

struct ColumnGroup {
  std::string element;
  std::size_t count = 0;
  friend bool operator==(const ColumnGroup&, const ColumnGroup&) = default;
};

struct BinRange {
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const BinRange&, const BinRange&) = default;
};

/// Binning shared by every structure in a run: k uniform bins per descriptor
/// column. Columns are ordered by (element, descriptor).
struct HistogramSpec {
  std::size_t bins = 0;
  Comparison comparison = Comparison::Occupancy;
  std::vector<ColumnGroup> layout;
  std::vector<BinRange> ranges;  // one per column
  std::string descriptor_hash;   // hash of the descriptor definitions
  std::string checksum;          // set by finalize()

  std::size_t columns() const noexcept { return ranges.size(); }
  std::size_t bit_count() const noexcept { return bins * columns(); }

  /// floor(k (v - lo) / (hi - lo)) clamped to [0, k - 1].
  std::size_t bin_of(std::size_t column, double v) const;

  /// Recomputes `checksum` from every other field.
  void finalize();
  std::string compute_checksum() const;

  friend bool operator==(const HistogramSpec&, const HistogramSpec&) = default;
};

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Hash of the canonical descriptor definitions.
std::string descriptor_hash(const SymmetryFunctionSet& sfset);

/// Global per-column min/max over all inputs, padded by
/// max(1e-9, 1e-6 (hi - lo)) each side; a column whose values are all equal
/// to v gets (v - 1e-6, v + 1e-6). Throws on bins == 0, no input, layout
/// disagreement or a column without any value.
HistogramSpec determine_bin_edges(std::span<const DescriptorMatrix> matrices, std::size_t bins,
                                  std::string descriptor_hash = {},
                                  Comparison comparison = Comparison::Occupancy);

struct StructureHistogram {
  std::string structure_id;
  std::string spec_checksum;
  std::vector<std::uint32_t> counts;  // column-major, bin-minor
  BitVector occupancy;                // bit = count > 0

  std::uint32_t count(std::size_t column, std::size_t bin, std::size_t bins) const {
    return counts[column * bins + bin];
  }
};

StructureHistogram build_histograms(const DescriptorMatrix& d, const HistogramSpec& spec);

struct DifferenceVector {
  std::string structure_id;
  std::string tag;
  std::string reference_id;
  std::string spec_checksum;
  BitVector bits;  // bit (column i, bin j) at i * k + j

  friend bool operator==(const DifferenceVector&, const DifferenceVector&) = default;
};

/// Per-bin comparison of `cur` against `ref` under spec.comparison.
DifferenceVector difference_vector(const StructureHistogram& cur, const StructureHistogram& ref,
                                   const HistogramSpec& spec);

/// popcount(a.bits ^ b.bits). Throws on checksum or length mismatch.
std::size_t hamming_distance(const DifferenceVector& a, const DifferenceVector& b);

/// Everything needed to fingerprint further structures against the same
/// reference and binning.
struct FingerprintSpec {
  HistogramSpec histogram;
  std::string reference_id;
  StructureHistogram reference;
};

struct FingerprintSet {
  FingerprintSpec spec;
  std::vector<DifferenceVector> fingerprints;
};

/// First structure containing every element of the dataset, or nullptr.
const Structure* auto_reference(const Dataset& ds);

/// Throws Error naming the first dataset element missing from `ref`.
void require_all_elements(const Structure& ref, const std::vector<std::string>& elements);

/// Computes descriptors, fixes edges over ds plus ref, and returns one
/// difference vector per structure in dataset order.
FingerprintSet batch_fingerprints(const Dataset& ds, const Structure& ref,
                                  const SymmetryFunctionSet& sfset, std::size_t bins,
                                  Comparison comparison = Comparison::Occupancy);

/// Same, but reusing a previously fixed spec (binning and reference
/// histogram). Values outside the stored ranges clamp into the end bins.
std::vector<DifferenceVector> fingerprints_with_spec(const Dataset& ds,
                                                     const SymmetryFunctionSet& sfset,
                                                     const FingerprintSpec& spec);

/// Per-atom rows concatenated (element order, then atom order) and
/// zero-padded to the longest structure.
std::vector<LabeledVector> baseline_padded_descriptor(const Dataset& ds,
                                                      const SymmetryFunctionSet& sfset);
std::vector<LabeledVector> baseline_padded_descriptor(std::span<const DescriptorMatrix> matrices,
                                                      std::span<const std::string> tags);

/// Per-element column means of the descriptor rows, concatenated in element
/// order; zeros for elements absent from a structure.
std::vector<LabeledVector> mean_descriptor_vectors(std::span<const DescriptorMatrix> matrices,
                                                   std::span<const std::string> tags);

// Fingerprint files: see README for the grammar. Round-trips bit-exactly.
std::string write_fingerprint_file(const FingerprintSet& set);
FingerprintSet read_fingerprint_file(std::string_view text);
std::string write_spec_file(const FingerprintSpec& spec);
FingerprintSpec read_spec_file(std::string_view text);

}  // namespace dvlae
