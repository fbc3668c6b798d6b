#include "dvlae/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dvlae/error.hpp"
#include "dvlae/parallel.hpp"

namespace dvlae {

void CutoffParams::validate() const {
  if (!(inner >= 0.0) || !(outer > inner) || !std::isfinite(outer)) {
    throw Error("cutoff radii must satisfy 0 <= r_ci < r_c");
  }
}

double cutoff_value(double r, const CutoffParams& cut) {
  if (r < cut.inner) return 1.0;
  if (r >= cut.outer) return 0.0;
  const double x = (r - cut.inner) / (cut.outer - cut.inner);
  // rounding can push the polynomial a few ulp outside [0, 1] near the ends
  return std::clamp(((15.0 - 6.0 * x) * x - 10.0) * x * x * x + 1.0, 0.0, 1.0);
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string describe(const SymmetryFunction& f) {
  if (const auto* r = std::get_if<RadialParams>(&f)) {
    return "G2 " + r->neighbor + " eta=" + fmt(r->eta) + " rs=" + fmt(r->r_s) +
           " rci=" + fmt(r->cutoff.inner) + " rc=" + fmt(r->cutoff.outer);
  }
  const auto& a = std::get<AngularParams>(f);
  return std::string(a.kind == AngularKind::G4 ? "G4 " : "G5 ") + a.first + "-" + a.second +
         " eta=" + fmt(a.eta) + " zeta=" + fmt(a.zeta) + " lambda=" + std::to_string(a.lambda) +
         " rci=" + fmt(a.cutoff.inner) + " rc=" + fmt(a.cutoff.outer);
}

SymmetryFunctionSet::SymmetryFunctionSet(std::vector<ElementFunctions> blocks)
    : blocks_(std::move(blocks)) {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (std::size_t o = 0; o < b; ++o) {
      if (blocks_[o].element == blocks_[b].element) {
        throw Error("element '" + blocks_[b].element + "' appears twice in the descriptor set");
      }
    }
    if (blocks_[b].functions.empty()) {
      throw Error("element '" + blocks_[b].element + "' has no descriptor definitions");
    }
    for (const auto& f : blocks_[b].functions) {
      std::visit(
          [&](const auto& p) {
            p.cutoff.validate();
            if (!(p.eta >= 0.0) || !std::isfinite(p.eta)) throw Error("eta must be finite and >= 0");
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, RadialParams>) {
              if (!(p.r_s >= 0.0) || !std::isfinite(p.r_s)) throw Error("R_s must be finite and >= 0");
            } else {
              if (p.lambda != 1 && p.lambda != -1) throw Error("lambda must be +1 or -1");
              if (!(p.zeta >= 0.0) || !std::isfinite(p.zeta)) throw Error("zeta must be finite and >= 0");
            }
          },
          f);
    }
  }
}

SymmetryFunctionSet SymmetryFunctionSet::default_grid(const std::vector<std::string>& elements,
                                                      double outer_cutoff) {
  const CutoffParams cut{0.9 * outer_cutoff, outer_cutoff};
  std::vector<ElementFunctions> blocks;
  for (const std::string& center : elements) {
    ElementFunctions block{center, {}};
    for (const std::string& nb : elements) {
      for (double eta : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        block.functions.emplace_back(RadialParams{eta, 0.0, nb, cut});
      }
    }
    for (AngularKind kind : {AngularKind::G4, AngularKind::G5}) {
      for (std::size_t a = 0; a < elements.size(); ++a) {
        for (std::size_t b = a; b < elements.size(); ++b) {
          for (double eta : {0.0, 0.5}) {
            for (double zeta : {1.0, 4.0}) {
              for (int lambda : {1, -1}) {
                block.functions.emplace_back(
                    AngularParams{kind, eta, zeta, lambda, elements[a], elements[b], cut});
              }
            }
          }
        }
      }
    }
    blocks.push_back(std::move(block));
  }
  return SymmetryFunctionSet(std::move(blocks));
}

std::vector<std::string> SymmetryFunctionSet::elements() const {
  std::vector<std::string> out;
  for (const auto& b : blocks_) out.push_back(b.element);
  return out;
}

std::size_t SymmetryFunctionSet::element_index(std::string_view element) const {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].element == element) return b;
  }
  return static_cast<std::size_t>(-1);
}

std::size_t SymmetryFunctionSet::total_columns() const {
  std::size_t total = 0;
  for (const auto& b : blocks_) total += b.functions.size();
  return total;
}

double SymmetryFunctionSet::max_cutoff() const {
  double rc = 0.0;
  for (const auto& b : blocks_) {
    for (const auto& f : b.functions) {
      rc = std::max(rc, std::visit([](const auto& p) { return p.cutoff.outer; }, f));
    }
  }
  return rc;
}

bool SymmetryFunctionSet::has_angular() const {
  for (const auto& b : blocks_) {
    for (const auto& f : b.functions) {
      if (std::holds_alternative<AngularParams>(f)) return true;
    }
  }
  return false;
}

std::string SymmetryFunctionSet::canonical_text() const {
  std::string out;
  for (const auto& b : blocks_) {
    for (const auto& f : b.functions) out += b.element + ": " + describe(f) + "\n";
  }
  return out;
}

namespace {

struct Triplet {
  TripletGeometry geom;
  std::size_t j;  // positions in the neighbor array
  std::size_t k;
};

// Unordered pairs j < k of the neighbor entries with both arms inside `reach`,
// in canonical (j, k) order.
std::vector<Triplet> build_triplets(std::span<const Neighbor> neighbors, double reach) {
  std::size_t limit = 0;
  while (limit < neighbors.size() && neighbors[limit].distance < reach) ++limit;
  std::vector<Triplet> out;
  out.reserve(limit * (limit > 0 ? limit - 1 : 0) / 2);
  for (std::size_t j = 0; j < limit; ++j) {
    const Neighbor& nj = neighbors[j];
    for (std::size_t k = j + 1; k < limit; ++k) {
      const Neighbor& nk = neighbors[k];
      const double r_jk = (nk.displacement - nj.displacement).norm();
      const double cos_theta =
          std::clamp(nj.displacement.dot(nk.displacement) / (nj.distance * nk.distance), -1.0, 1.0);
      out.push_back({{nj.distance, nk.distance, r_jk, cos_theta}, j, k});
    }
  }
  return out;
}

double angular_term(const TripletGeometry& g, const AngularParams& p) {
  const double base = 1.0 + p.lambda * g.cos_theta;
  // std::pow(0, 0) == 1, which is the documented convention for zeta = 0
  const double angle = std::pow(base < 0.0 ? 0.0 : base, p.zeta);
  if (p.kind == AngularKind::G4) {
    return angle * std::exp(-p.eta * (g.r_ij * g.r_ij + g.r_ik * g.r_ik + g.r_jk * g.r_jk)) *
           cutoff_value(g.r_ij, p.cutoff) * cutoff_value(g.r_ik, p.cutoff) *
           cutoff_value(g.r_jk, p.cutoff);
  }
  return angle * std::exp(-p.eta * (g.r_ij * g.r_ij + g.r_ik * g.r_ik)) *
         cutoff_value(g.r_ij, p.cutoff) * cutoff_value(g.r_ik, p.cutoff);
}

double angular_sum(std::span<const Triplet> triplets, std::span<const Neighbor> neighbors,
                   std::span<const std::string> species, const AngularParams& p) {
  double sum = 0.0;
  for (const Triplet& t : triplets) {
    if (t.geom.r_ij >= p.cutoff.outer || t.geom.r_ik >= p.cutoff.outer) continue;
    if (!p.matches(species[neighbors[t.j].index], species[neighbors[t.k].index])) continue;
    sum += angular_term(t.geom, p);
  }
  return std::pow(2.0, 1.0 - p.zeta) * sum;
}

}  // namespace

double radial_g2(std::span<const Neighbor> neighbors, std::span<const std::string> species,
                 const RadialParams& p) {
  double sum = 0.0;
  for (const Neighbor& n : neighbors) {
    if (n.distance >= p.cutoff.outer) break;
    if (species[n.index] != p.neighbor) continue;
    const double dr = n.distance - p.r_s;
    sum += std::exp(-p.eta * dr * dr) * cutoff_value(n.distance, p.cutoff);
  }
  return sum;
}

double angular_value(std::span<const Neighbor> neighbors, std::span<const std::string> species,
                     const AngularParams& p) {
  const auto triplets = build_triplets(neighbors, p.cutoff.outer);
  return angular_sum(triplets, neighbors, species, p);
}

double angular_g4(std::span<const Neighbor> neighbors, std::span<const std::string> species,
                  const AngularParams& p) {
  AngularParams q = p;
  q.kind = AngularKind::G4;
  return angular_value(neighbors, species, q);
}

double angular_g5(std::span<const Neighbor> neighbors, std::span<const std::string> species,
                  const AngularParams& p) {
  AngularParams q = p;
  q.kind = AngularKind::G5;
  return angular_value(neighbors, species, q);
}

DescriptorMatrix compute_structure_descriptors(const Structure& s,
                                               const SymmetryFunctionSet& sfset) {
  const auto& defs = sfset.blocks();
  std::vector<std::size_t> block_of(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    block_of[a] = sfset.element_index(s.species[a]);
    if (block_of[a] == static_cast<std::size_t>(-1)) {
      throw Error("structure '" + s.id + "' contains element '" + s.species[a] +
                  "' which has no descriptor definitions");
    }
  }

  DescriptorMatrix out;
  out.structure_id = s.id;
  out.blocks.resize(defs.size());
  for (std::size_t b = 0; b < defs.size(); ++b) {
    out.blocks[b].element = defs[b].element;
    out.blocks[b].cols = defs[b].functions.size();
  }
  for (std::size_t a = 0; a < s.size(); ++a) out.blocks[block_of[a]].atoms.push_back(a);
  for (auto& blk : out.blocks) {
    blk.rows = blk.atoms.size();
    blk.values.assign(blk.rows * blk.cols, 0.0);
  }
  if (s.size() == 0) return out;

  double angular_reach = 0.0;
  for (const auto& b : defs) {
    for (const auto& f : b.functions) {
      if (const auto* ang = std::get_if<AngularParams>(&f)) {
        angular_reach = std::max(angular_reach, ang->cutoff.outer);
      }
    }
  }

  const NeighborList nl = neighbor_list(s, sfset.max_cutoff());
  const std::span<const std::string> species(s.species);
  for (auto& blk : out.blocks) {
    const auto& functions = defs[sfset.element_index(blk.element)].functions;
    for (std::size_t r = 0; r < blk.rows; ++r) {
      const std::span<const Neighbor> env(nl[blk.atoms[r]]);
      std::vector<Triplet> triplets;
      if (angular_reach > 0.0) triplets = build_triplets(env, angular_reach);
      for (std::size_t c = 0; c < blk.cols; ++c) {
        const auto& f = functions[c];
        double value = 0.0;
        if (const auto* rad = std::get_if<RadialParams>(&f)) {
          value = radial_g2(env, species, *rad);
        } else {
          value = angular_sum(triplets, env, species, std::get<AngularParams>(f));
        }
        if (!std::isfinite(value)) {
          throw std::logic_error("non-finite descriptor value in structure '" + s.id + "'");
        }
        blk.values[r * blk.cols + c] = value;
      }
    }
  }
  return out;
}

std::vector<DescriptorMatrix> compute_dataset_descriptors(const Dataset& ds,
                                                          const SymmetryFunctionSet& sfset) {
  std::vector<DescriptorMatrix> out(ds.size());
  parallel_for(ds.size(),
               [&](std::size_t i) { out[i] = compute_structure_descriptors(ds.structures[i], sfset); });
  return out;
}

}  // namespace dvlae
