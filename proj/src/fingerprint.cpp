#include "dvlae/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "dvlae/error.hpp"
#include "dvlae/parallel.hpp"
#include "dvlae/simd/kernels.hpp"

namespace dvlae {

std::string_view to_string(Comparison c) {
  return c == Comparison::Occupancy ? "occupancy" : "count-equality";
}

Comparison comparison_from_string(std::string_view s) {
  if (s == "occupancy") return Comparison::Occupancy;
  if (s == "count-equality") return Comparison::CountEquality;
  throw Error("unknown comparison '" + std::string(s) + "' (expected occupancy|count-equality)");
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kDigits[h & 0xF];
    h >>= 4;
  }
  return out;
}

std::string descriptor_hash(const SymmetryFunctionSet& sfset) {
  return fnv1a_hex(sfset.canonical_text());
}

std::size_t HistogramSpec::bin_of(std::size_t column, double v) const {
  const BinRange& r = ranges[column];
  const double t = static_cast<double>(bins) * (v - r.lo) / (r.hi - r.lo);
  if (!(t > 0.0)) return 0;
  if (t >= static_cast<double>(bins - 1)) return bins - 1;
  return static_cast<std::size_t>(std::floor(t));
}

std::string HistogramSpec::compute_checksum() const {
  std::string blob = "bins=" + std::to_string(bins) + ";comparison=" +
                     std::string(to_string(comparison)) + ";layout=";
  for (const auto& g : layout) blob += g.element + ":" + std::to_string(g.count) + ",";
  blob += ";descriptors=" + descriptor_hash + ";edges=";
  for (const auto& r : ranges) {
    for (double v : {r.lo, r.hi}) {
      const auto bits = std::bit_cast<std::uint64_t>(v);
      char raw[8];
      for (int b = 0; b < 8; ++b) raw[b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
      blob.append(raw, 8);
    }
  }
  return fnv1a_hex(blob);
}

void HistogramSpec::finalize() { checksum = compute_checksum(); }

HistogramSpec determine_bin_edges(std::span<const DescriptorMatrix> matrices, std::size_t bins,
                                  std::string desc_hash, Comparison comparison) {
  if (bins == 0) throw Error("number of bins must be at least 1");
  if (matrices.empty()) throw Error("cannot determine bin edges without descriptor data");

  HistogramSpec spec;
  spec.bins = bins;
  spec.comparison = comparison;
  spec.descriptor_hash = std::move(desc_hash);
  for (const auto& blk : matrices.front().blocks) spec.layout.push_back({blk.element, blk.cols});

  std::size_t columns = 0;
  for (const auto& g : spec.layout) columns += g.count;
  std::vector<double> lo(columns, std::numeric_limits<double>::infinity());
  std::vector<double> hi(columns, -std::numeric_limits<double>::infinity());

  for (const auto& m : matrices) {
    if (m.blocks.size() != spec.layout.size()) {
      throw Error("descriptor layout of '" + m.structure_id + "' differs from the run layout");
    }
    std::size_t offset = 0;
    for (std::size_t b = 0; b < m.blocks.size(); ++b) {
      const auto& blk = m.blocks[b];
      if (blk.element != spec.layout[b].element || blk.cols != spec.layout[b].count) {
        throw Error("descriptor layout of '" + m.structure_id + "' differs from the run layout");
      }
      for (std::size_t r = 0; r < blk.rows; ++r) {
        for (std::size_t c = 0; c < blk.cols; ++c) {
          const double v = blk.at(r, c);
          lo[offset + c] = std::min(lo[offset + c], v);
          hi[offset + c] = std::max(hi[offset + c], v);
        }
      }
      offset += blk.cols;
    }
  }

  spec.ranges.resize(columns);
  std::size_t column = 0;
  for (const auto& g : spec.layout) {
    for (std::size_t c = 0; c < g.count; ++c, ++column) {
      if (!(lo[column] <= hi[column])) {
        throw Error("descriptor column " + std::to_string(c) + " of element '" + g.element +
                    "' has no values in any input structure");
      }
      if (lo[column] == hi[column]) {
        spec.ranges[column] = {lo[column] - 1e-6, hi[column] + 1e-6};
      } else {
        const double pad = std::max(1e-9, 1e-6 * (hi[column] - lo[column]));
        spec.ranges[column] = {lo[column] - pad, hi[column] + pad};
      }
    }
  }
  spec.finalize();
  return spec;
}

StructureHistogram build_histograms(const DescriptorMatrix& d, const HistogramSpec& spec) {
  if (d.blocks.size() != spec.layout.size()) {
    throw Error("descriptor layout of '" + d.structure_id + "' does not match the histogram spec");
  }
  StructureHistogram h;
  h.structure_id = d.structure_id;
  h.spec_checksum = spec.checksum;
  h.counts.assign(spec.bit_count(), 0);
  h.occupancy = BitVector(spec.bit_count());

  std::size_t offset = 0;
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    const auto& blk = d.blocks[b];
    if (blk.element != spec.layout[b].element || blk.cols != spec.layout[b].count) {
      throw Error("descriptor layout of '" + d.structure_id + "' does not match the histogram spec");
    }
    for (std::size_t r = 0; r < blk.rows; ++r) {
      for (std::size_t c = 0; c < blk.cols; ++c) {
        const std::size_t column = offset + c;
        const std::size_t slot = column * spec.bins + spec.bin_of(column, blk.at(r, c));
        ++h.counts[slot];
        h.occupancy.set(slot);
      }
    }
    offset += blk.cols;
  }
  return h;
}

DifferenceVector difference_vector(const StructureHistogram& cur, const StructureHistogram& ref,
                                   const HistogramSpec& spec) {
  if (cur.spec_checksum != spec.checksum || ref.spec_checksum != spec.checksum) {
    throw Error("histogram of '" + (cur.spec_checksum != spec.checksum ? cur.structure_id
                                                                         : ref.structure_id) +
                "' was built with a different spec (checksum mismatch)");
  }
  DifferenceVector dv;
  dv.structure_id = cur.structure_id;
  dv.reference_id = ref.structure_id;
  dv.spec_checksum = spec.checksum;
  if (spec.comparison == Comparison::Occupancy) {
    dv.bits = bitwise_xor(cur.occupancy, ref.occupancy);
  } else {
    dv.bits = BitVector(spec.bit_count());
    for (std::size_t i = 0; i < cur.counts.size(); ++i) {
      if (cur.counts[i] != ref.counts[i]) dv.bits.set(i);
    }
  }
  return dv;
}

std::size_t hamming_distance(const DifferenceVector& a, const DifferenceVector& b) {
  if (a.spec_checksum != b.spec_checksum) {
    throw Error("fingerprints '" + a.structure_id + "' and '" + b.structure_id +
                "' use different specs");
  }
  return hamming(a.bits, b.bits);
}

const Structure* auto_reference(const Dataset& ds) {
  for (const Structure& s : ds.structures) {
    bool complete = true;
    for (const std::string& e : ds.elements) {
      if (std::find(s.species.begin(), s.species.end(), e) == s.species.end()) {
        complete = false;
        break;
      }
    }
    if (complete) return &s;
  }
  return nullptr;
}

void require_all_elements(const Structure& ref, const std::vector<std::string>& elements) {
  for (const std::string& e : elements) {
    if (std::find(ref.species.begin(), ref.species.end(), e) == ref.species.end()) {
      throw Error("reference structure '" + ref.id + "' lacks element '" + e + "'");
    }
  }
}

FingerprintSet batch_fingerprints(const Dataset& ds, const Structure& ref,
                                  const SymmetryFunctionSet& sfset, std::size_t bins,
                                  Comparison comparison) {
  require_all_elements(ref, ds.elements);
  if (bins == 0) throw Error("number of bins must be at least 1");

  std::vector<DescriptorMatrix> matrices = compute_dataset_descriptors(ds, sfset);
  matrices.push_back(compute_structure_descriptors(ref, sfset));

  FingerprintSet set;
  set.spec.histogram = determine_bin_edges(matrices, bins, descriptor_hash(sfset), comparison);
  set.spec.reference_id = ref.id;
  set.spec.reference = build_histograms(matrices.back(), set.spec.histogram);

  set.fingerprints.resize(ds.size());
  parallel_for(ds.size(), [&](std::size_t i) {
    const StructureHistogram h = build_histograms(matrices[i], set.spec.histogram);
    set.fingerprints[i] = difference_vector(h, set.spec.reference, set.spec.histogram);
    set.fingerprints[i].tag = ds.structures[i].tag;
  });
  return set;
}

std::vector<DifferenceVector> fingerprints_with_spec(const Dataset& ds,
                                                     const SymmetryFunctionSet& sfset,
                                                     const FingerprintSpec& spec) {
  if (descriptor_hash(sfset) != spec.histogram.descriptor_hash) {
    throw Error("descriptor definitions differ from those the spec was built with");
  }
  std::vector<DifferenceVector> out(ds.size());
  parallel_for(ds.size(), [&](std::size_t i) {
    const DescriptorMatrix m = compute_structure_descriptors(ds.structures[i], sfset);
    out[i] = difference_vector(build_histograms(m, spec.histogram), spec.reference, spec.histogram);
    out[i].tag = ds.structures[i].tag;
  });
  return out;
}

std::vector<LabeledVector> baseline_padded_descriptor(std::span<const DescriptorMatrix> matrices,
                                                      std::span<const std::string> tags) {
  std::vector<LabeledVector> out;
  out.reserve(matrices.size());
  std::size_t longest = 0;
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    LabeledVector v{matrices[i].structure_id, i < tags.size() ? tags[i] : std::string{}, {}};
    for (const auto& blk : matrices[i].blocks) {
      v.values.insert(v.values.end(), blk.values.begin(), blk.values.end());
    }
    longest = std::max(longest, v.values.size());
    out.push_back(std::move(v));
  }
  for (auto& v : out) v.values.resize(longest, 0.0);
  return out;
}

std::vector<LabeledVector> baseline_padded_descriptor(const Dataset& ds,
                                                      const SymmetryFunctionSet& sfset) {
  const auto matrices = compute_dataset_descriptors(ds, sfset);
  std::vector<std::string> tags;
  for (const auto& s : ds.structures) tags.push_back(s.tag);
  return baseline_padded_descriptor(matrices, tags);
}

std::vector<LabeledVector> mean_descriptor_vectors(std::span<const DescriptorMatrix> matrices,
                                                   std::span<const std::string> tags) {
  std::vector<LabeledVector> out;
  out.reserve(matrices.size());
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    LabeledVector v{matrices[i].structure_id, i < tags.size() ? tags[i] : std::string{}, {}};
    for (const auto& blk : matrices[i].blocks) {
      std::vector<double> mean(blk.cols, 0.0);
      for (std::size_t r = 0; r < blk.rows; ++r) {
        for (std::size_t c = 0; c < blk.cols; ++c) mean[c] += blk.at(r, c);
      }
      if (blk.rows > 0) {
        for (double& m : mean) m /= static_cast<double>(blk.rows);
      }
      v.values.insert(v.values.end(), mean.begin(), mean.end());
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace dvlae
