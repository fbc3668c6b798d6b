// Acceptance suite: one PASS/FAIL line per criterion, each with a runtime
// limit. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "../support.hpp"
#include "dvlae/cli.hpp"
#include "dvlae/descriptors.hpp"
#include "dvlae/embedding.hpp"
#include "dvlae/fingerprint.hpp"
#include "dvlae/plot.hpp"
#include "dvlae/screening.hpp"
#include "dvlae/simd/kernels.hpp"

using namespace dvlae;
using dvlae::test::Rng;

namespace fs = std::filesystem;

namespace {

// Thrown by expect() to abort a criterion with a message.
struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

std::vector<DescriptorMatrix> descriptors_of(const std::vector<Structure>& structures,
                                             const SymmetryFunctionSet& sfset) {
  return compute_dataset_descriptors(Dataset::from_structures(structures), sfset);
}

double max_deviation(const DescriptorMatrix& a, const DescriptorMatrix& b) {
  double worst = 0.0;
  for (std::size_t g = 0; g < a.blocks.size(); ++g) {
    const auto& x = a.blocks[g].values;
    const auto& y = b.blocks[g].values;
    if (x.size() != y.size()) return INFINITY;
    for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(x[k] - y[k]));
  }
  return worst;
}

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sq += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(sq);
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

// ---------------------------------------------------------------------------

void primitive_and_supercells() {
  Rng rng(1001);
  const auto sfset = SymmetryFunctionSet::default_grid({"A", "B"});
  const Structure ref = test::random_crystal(rng, 4, {"A", "B"}, 3.0, 4.0, 0.9, "ref");
  for (int attempt = 0; attempt < 20; ++attempt) {
    const Structure prim = test::random_crystal(rng, 2, {"A", "B"}, 2.8, 3.5, 0.9, "prim");
    const std::vector<Structure> all{prim, build_supercell(prim, {2, 1, 1}), build_supercell(prim, {2, 2, 1}),
                                     build_supercell(prim, {2, 2, 2})};
    const Dataset ds = Dataset::from_structures(all);
    const auto set = batch_fingerprints(ds, ref, sfset, 20);
    const auto ms = compute_dataset_descriptors(ds, sfset);
    if (test::min_edge_margin(ms, set.spec.histogram) <= 1e-6) continue;

    expect(!set.fingerprints[0].bits.none(), "primitive fingerprint equals the reference");
    for (std::size_t i = 1; i < all.size(); ++i) {
      const std::size_t h = hamming_distance(set.fingerprints[0], set.fingerprints[i]);
      expect(h == 0, all[i].id + ": Hamming distance " + std::to_string(h));
    }
    const auto padded = baseline_padded_descriptor(ds, sfset);
    for (std::size_t i = 1; i < all.size(); ++i) {
      const double d = euclidean(padded[0].values, padded[i].values);
      expect(d > 0.0, all[i].id + ": padded baseline distance is 0");
    }
    return;
  }
  throw Failure{"no primitive cell with values clear of the bin edges in 20 attempts"};
}

// 50 random structures, their transformed copies and a spec fixed on the
// originals, retried until every value is clear of the bin edges.
template <typename Transform>
void invariance(std::uint64_t seed, Transform transform, double tolerance) {
  Rng rng(seed);
  const auto sfset = SymmetryFunctionSet::default_grid({"A", "B"});
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::vector<Structure> originals, moved;
    for (int i = 0; i < 50; ++i) {
      const std::size_t atoms = 2 + rng() % 4;
      originals.push_back(test::random_crystal(rng, atoms, {"A", "B"}, 3.0, 4.5, 0.9, "s" + std::to_string(i)));
      moved.push_back(transform(rng, originals.back()));
    }
    const Structure ref = test::random_crystal(rng, 4, {"A", "B"}, 3.0, 4.0, 0.9, "ref");
    const auto set = batch_fingerprints(Dataset::from_structures(originals), ref, sfset, 20);
    const auto ms = descriptors_of(originals, sfset);
    const auto mm = descriptors_of(moved, sfset);

    double worst = 0.0;
    for (std::size_t i = 0; i < ms.size(); ++i) worst = std::max(worst, max_deviation(ms[i], mm[i]));
    expect(worst <= tolerance, "max descriptor deviation " + num(worst));
    if (test::min_edge_margin(ms, set.spec.histogram) <= 1e-6) continue;

    const auto again = fingerprints_with_spec(Dataset::from_structures(moved), sfset, set.spec);
    for (std::size_t i = 0; i < originals.size(); ++i) {
      expect(again[i].bits == set.fingerprints[i].bits, originals[i].id + ": fingerprint changed");
    }
    return;
  }
  throw Failure{"no corpus with values clear of the bin edges in 20 attempts"};
}

void rigid_motion() {
  invariance(
      1002,
      [](Rng& rng, const Structure& s) {
        const Vec3 shift(test::uniform(rng, -10, 10), test::uniform(rng, -10, 10), test::uniform(rng, -10, 10));
        return test::rigid_motion(s, test::random_rotation(rng), shift);
      },
      1e-9);
}

void permutation() {
  // Reordering atoms only reorders equal-distance neighbors, so values agree
  // to rounding and D must be bit-identical.
  invariance(
      1003,
      [](Rng& rng, const Structure& s) {
        return test::permuted(s, test::random_permutation(rng, s.size()));
      },
      INFINITY);
}

void neighbor_oracle() {
  Rng rng(1004);
  using Key = std::pair<std::size_t, std::array<int, 3>>;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t atoms = 1 + rng() % 8;
    Structure s = test::crystal(test::random_cell(rng, 1.5, 4.0), {}, {}, "t" + std::to_string(trial));
    for (std::size_t i = 0; i < atoms; ++i) {
      // fractional coordinates partly outside the home cell
      const Vec3 frac(test::uniform(rng, -1, 2), test::uniform(rng, -1, 2), test::uniform(rng, -1, 2));
      s.species.push_back(i % 2 ? "B" : "A");
      s.positions.push_back((frac.transpose() * s.cell).transpose());
    }
    const double rc = test::uniform(rng, 1.0, 4.0);
    const auto nl = neighbor_list(s, rc);
    const auto want = oracle::neighbors(s, rc);
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::map<Key, double> expected, got;
      for (const auto& p : want[i]) expected[{p.j, p.shift}] = p.distance;
      for (const auto& n : nl[i]) got[{n.index, n.shift}] = n.distance;
      const std::string where = "cell " + std::to_string(trial) + " atom " + std::to_string(i);
      expect(got.size() == nl[i].size(), where + ": repeated (j, shift)");
      expect(got.size() == expected.size(), where + ": " + std::to_string(got.size()) + " neighbors, oracle " +
                                                std::to_string(expected.size()));
      for (const auto& [key, r] : expected) {
        const auto it = got.find(key);
        expect(it != got.end(), where + ": missing image");
        expect(std::abs(it->second - r) <= 1e-12, where + ": distance off by " + num(it->second - r));
      }
    }
  }
}

void hand_values() {
  const double h = std::sqrt(3.0) / 2.0;
  const CutoffParams wide{2.0, 3.0};
  const SymmetryFunctionSet tri_set({{"A",
                                      {AngularParams{AngularKind::G4, 0.0, 1.0, 1, "A", "A", wide},
                                       AngularParams{AngularKind::G4, 0.0, 1.0, -1, "A", "A", wide}}}});
  const auto tri = compute_structure_descriptors(
      test::molecule({"A", "A", "A"}, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, h, 0)}), tri_set);
  for (std::size_t atom = 0; atom < 3; ++atom) {
    const double plus = tri.blocks[0].at(atom, 0);
    const double minus = tri.blocks[0].at(atom, 1);
    expect(std::abs(plus - 1.5) <= 1e-12, "triangle G4 lambda=+1 is " + num(plus));
    expect(std::abs(minus - 0.5) <= 1e-12, "triangle G4 lambda=-1 is " + num(minus));
  }

  const AngularParams g5{AngularKind::G5, 0.0, 1.0, -1, "A", "A", wide};
  const SymmetryFunctionSet chain_set({{"A", {g5}}, {"B", {g5}}});
  const auto chain = compute_structure_descriptors(
      test::molecule({"A", "B", "A"}, {Vec3(-1.3, 0, 0), Vec3::Zero(), Vec3(1.3, 0, 0)}), chain_set);
  const double centre = chain.blocks[1].at(0, 0);
  expect(std::abs(centre - 2.0) <= 1e-12, "chain G5 lambda=-1 is " + num(centre));
}

void dedup() {
  Rng rng(1006);
  const auto sfset = SymmetryFunctionSet::default_grid({"A", "B"}, 5.0);
  bool built = false;
  for (int attempt = 0; attempt < 20 && !built; ++attempt) {
    std::vector<Structure> corpus, unique;
    for (int u = 0; u < 20; ++u) {
      const std::size_t atoms = 2 + rng() % 3;
      Structure s = test::random_crystal(rng, atoms, {"A", "B"}, 3.0, 4.5, 0.9, "u" + std::to_string(u));
      unique.push_back(s);
      for (int c = 0; c < 5; ++c) {
        Structure copy = s;
        copy.id = s.id + "/copy" + std::to_string(c);
        corpus.push_back(copy);
      }
      std::array<int, 3> reps{1, 1, 1};
      reps[static_cast<std::size_t>(u % 3)] = 2;
      corpus.push_back(build_supercell(s, reps));
    }
    const Structure ref = test::random_crystal(rng, 4, {"A", "B"}, 3.0, 4.0, 0.9, "ref");
    const Dataset ds = Dataset::from_structures(corpus);
    const auto set = batch_fingerprints(ds, ref, sfset, 20);
    if (test::min_edge_margin(compute_dataset_descriptors(ds, sfset), set.spec.histogram) <= 1e-6) continue;
    built = true;

    const ScreeningReport report = dedup_exact(set.fingerprints);
    expect(report.input_count == 120, "input count " + std::to_string(report.input_count));
    expect(report.kept.size() == 20, std::to_string(report.kept.size()) + " kept, expected 20");
    for (std::size_t u = 0; u < 20; ++u) {
      expect(report.kept[u] == unique[u].id + "/copy0", "kept " + report.kept[u]);
    }
    std::vector<DifferenceVector> kept;
    for (const auto& fp : set.fingerprints) {
      if (std::find(report.kept.begin(), report.kept.end(), fp.structure_id) != report.kept.end()) kept.push_back(fp);
    }
    const ScreeningReport again = dedup_exact(kept);
    expect(again.kept == report.kept && again.removed.empty(), "dedup is not idempotent");
  }
  expect(built, "no corpus with values clear of the bin edges in 20 attempts");

  // radius-0 leader clustering against exact dedup on random patterns with
  // many repeats
  std::vector<BitVector> pool;
  for (int p = 0; p < 60; ++p) {
    BitVector b(200);
    for (std::size_t k = 0; k < 200; ++k) b.set(k, rng() % 2 == 1);
    pool.push_back(b);
  }
  std::vector<DifferenceVector> fps;
  for (int i = 0; i < 200; ++i) {
    DifferenceVector d;
    d.structure_id = "f" + std::to_string(i);
    d.spec_checksum = "0000000000000000";
    d.bits = pool[rng() % pool.size()];
    fps.push_back(d);
  }
  const ScreeningReport exact = dedup_exact(fps);
  const ScreeningReport radius0 = dedup_hamming(fps, 0);
  expect(exact.kept == radius0.kept, "radius 0 keeps a different set");
  expect(exact.removed == radius0.removed, "radius 0 merges differently");
  std::vector<std::string> patterns;
  for (const auto& f : fps) patterns.push_back(f.bits.to_hex());
  expect(exact.kept.size() == oracle::exact_unique(patterns).size(), "exact dedup disagrees with the oracle");
}

void novelty() {
  Rng rng(1007);
  std::vector<LabeledVector> cands, train;
  std::vector<std::vector<double>> raw_c, raw_t;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> t(4);
    for (auto& v : t) v = test::uniform(rng, 0.0, 1.5);
    raw_t.push_back(t);
    train.push_back({"t" + std::to_string(i), "", t});
  }
  for (int i = 0; i < 50; ++i) {
    std::vector<double> c(4);
    if (i % 5 == 0) {
      c = raw_t[rng() % raw_t.size()];  // exact training member
    } else if (i % 5 == 1) {
      c = raw_t[rng() % raw_t.size()];
      for (auto& v : c) v += test::uniform(rng, -0.06, 0.06);
    } else {
      for (auto& v : c) v = test::uniform(rng, -0.5, 2.0);
    }
    raw_c.push_back(c);
    cands.push_back({"c" + std::to_string(i), "", c});
  }
  for (double threshold : {0.0, 0.1, 1.0}) {
    for (Aggregate agg : {Aggregate::Min, Aggregate::Mean}) {
      const NoveltyResult got = novelty_screen(cands, train, {threshold, agg});
      std::vector<std::string> want;
      for (std::size_t c : oracle::novelty(raw_c, raw_t, threshold, agg == Aggregate::Min)) want.push_back(cands[c].id);
      expect(got.accepted == want, "threshold " + num(threshold) + (agg == Aggregate::Min ? " min" : " mean") +
                                       ": " + std::to_string(got.accepted.size()) + " accepted, oracle " +
                                       std::to_string(want.size()));
    }
  }
}

void tsne() {
  Rng rng(1008);
  for (int m = 0; m < 50; ++m) {
    const std::size_t n = 30 + rng() % 40;
    const std::size_t dims = 2 + rng() % 8;
    std::vector<std::vector<double>> pts(n, std::vector<double>(dims));
    for (auto& p : pts) {
      for (auto& v : p) v = test::uniform(rng, -3.0, 3.0);
    }
    const double target = test::uniform(rng, 2.0, (double(n) - 1.0) / 3.0 - 0.5);
    const auto cond = perplexity_calibration(pairwise_distances(pts, Metric::Euclidean), target);
    for (std::size_t i = 0; i < n; ++i) {
      const double got = row_perplexity(cond, i);
      expect(std::abs(got - target) <= 1e-3,
             "matrix " + std::to_string(m) + " row " + std::to_string(i) + ": perplexity " + num(got) + " vs " + num(target));
    }
  }

  std::vector<std::vector<double>> pts;
  std::vector<int> labels;
  std::vector<std::string> ids, tags;
  std::normal_distribution<double> normal;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> centre(10);
    for (auto& v : centre) v = test::uniform(rng, -10.0, 10.0);
    for (int i = 0; i < 20; ++i) {
      std::vector<double> p = centre;
      for (auto& v : p) v += normal(rng);
      pts.push_back(p);
      labels.push_back(c);
      ids.push_back("p" + std::to_string(pts.size() - 1));
      tags.push_back("cluster" + std::to_string(c));
    }
  }
  TsneConfig cfg;
  cfg.perplexity = 15.0;
  cfg.seed = 42;
  const auto d = pairwise_distances(pts, Metric::Euclidean);
  const TsneResult a = tsne_embed(d, cfg);
  expect(a.final_kl < a.initial_kl, "final KL " + num(a.final_kl) + " >= initial " + num(a.initial_kl));
  const double agreement = oracle::nn_label_agreement(a.coordinates, labels);
  expect(agreement >= 0.95, "1-NN label agreement " + num(agreement));
  const TsneResult b = tsne_embed(d, cfg);
  expect(write_embedding_csv(make_embedding(ids, tags, a.coordinates)) ==
             write_embedding_csv(make_embedding(ids, tags, b.coordinates)),
         "same seed gave different CSV bytes");
}

void ood() {
  Rng rng(1009);
  const auto sfset = SymmetryFunctionSet::default_grid({"A", "B"}, 5.0);
  std::vector<Structure> training, all;
  for (int i = 0; i < 30; ++i) {
    training.push_back(test::random_crystal(rng, 2 + rng() % 3, {"A", "B"}, 3.2, 4.2, 1.2, "train" + std::to_string(i)));
  }
  all = training;
  for (int i = 0; i < 9; ++i) {
    all.push_back(test::random_crystal(rng, 2 + rng() % 3, {"A", "B"}, 3.2, 4.2, 1.2, "new" + std::to_string(i)));
  }
  // compressed copy of a training structure: short bonds far outside the corpus
  Structure outlier = training[3];
  outlier.id = "compressed";
  outlier.cell *= 0.55;
  for (auto& p : outlier.positions) p *= 0.55;
  all.push_back(outlier);

  const Dataset ds = Dataset::from_structures(all);
  const auto set = batch_fingerprints(ds, training[0], sfset, 20);
  const std::vector<DifferenceVector> train_fp(set.fingerprints.begin(), set.fingerprints.begin() + 30);

  // the outlier occupies bins no other structure touches
  const auto ms = compute_dataset_descriptors(ds, sfset);
  const auto outlier_h = build_histograms(ms.back(), set.spec.histogram);
  BitVector others(outlier_h.occupancy.size());
  for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
    const auto h = build_histograms(ms[i], set.spec.histogram);
    for (std::size_t k = 0; k < others.size(); ++k) others.set(k, others.test(k) || h.occupancy.test(k));
  }
  std::size_t exclusive = 0;
  for (std::size_t k = 0; k < others.size(); ++k) exclusive += outlier_h.occupancy.test(k) && !others.test(k);
  expect(exclusive > 0, "outlier occupies no otherwise-empty bin");

  const auto ranked = rank_ood(set.fingerprints, train_fp);
  expect(ranked[0].id == "compressed", "top-ranked is " + ranked[0].id);
  expect(ranked[0].normalized > ranked[1].normalized, "outlier ties with " + ranked[1].id);
  for (const auto& score : ranked) {
    if (score.id.rfind("train", 0) == 0) expect(score.min_hamming == 0, score.id + " scores " + num(score.normalized));
  }

  std::vector<std::string> ids, tags;
  std::vector<std::vector<double>> reals;
  for (std::size_t i = 0; i < all.size(); ++i) {
    ids.push_back(all[i].id);
    tags.push_back(i < 30 ? "training" : "prediction");
    reals.push_back(to_reals(set.fingerprints[i].bits));
  }
  PlotSpec plot;
  for (std::size_t i = 0; i < 20; ++i) plot.highlight.push_back(ranked[i].id);
  const std::string svg = render_scatter_svg(make_embedding(ids, tags, pca_coordinates(reals, 2)), plot);
  const std::size_t diamonds = count_of(svg, "class=\"diamond\"");
  expect(diamonds == 20, std::to_string(diamonds) + " diamonds in the plot");
}

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = test::read_text(e.path());
  return files;
}

void round_trips() {
  Rng rng(1010);
  const auto sfset = SymmetryFunctionSet::default_grid({"A", "B"}, 4.5);
  std::vector<Structure> structures;
  for (int i = 0; i < 12; ++i) {
    structures.push_back(test::random_crystal(rng, 2 + rng() % 4, {"A", "B"}, 3.0, 4.0, 0.9, "s" + std::to_string(i)));
  }
  const Dataset ds = Dataset::from_structures(structures);
  const auto set = batch_fingerprints(ds, structures[0], sfset, 16);
  const std::string text = write_fingerprint_file(set);
  const FingerprintSet parsed = read_fingerprint_file(text);
  expect(write_fingerprint_file(parsed) == text, "fingerprint file changed after parse/write");
  expect(parsed.fingerprints == set.fingerprints, "fingerprint records changed after parsing");
  expect(parsed.spec.histogram == set.spec.histogram, "histogram spec changed after parsing");

  std::vector<std::string> ids, tags;
  Eigen::MatrixXd coords(12, 2);
  for (int i = 0; i < 12; ++i) {
    ids.push_back(structures[static_cast<std::size_t>(i)].id);
    tags.push_back(i % 2 ? "odd" : "even");
    coords(i, 0) = test::uniform(rng, -1e3, 1e3);
    coords(i, 1) = std::ldexp(test::uniform(rng, -1, 1), -40);
  }
  const Embedding e = make_embedding(ids, tags, coords);
  const std::string csv = write_embedding_csv(e);
  expect(read_embedding_csv(csv) == e, "embedding changed after parsing");
  expect(write_embedding_csv(read_embedding_csv(csv)) == csv, "embedding CSV changed after parse/write");

  // every command twice from a clean output directory
  test::TempDir dir;
  std::string xyz;
  for (std::size_t i = 0; i < structures.size(); ++i) {
    Structure s = structures[i];
    s.tag = i % 3 ? "bulk" : "defect";
    xyz += write_extxyz(s);
  }
  test::write_text(dir / "data.xyz", xyz);
  test::write_text(dir / "run.ini",
                   "seed = 11\nout = out\n[data]\nfiles = data.xyz\n[descriptors]\nr_c = 4.5\n"
                   "[fingerprint]\nbins = 16\nvectors = all\n[embed]\nperplexity = 3\niterations = 400\n");
  const std::string cfg = (dir / "run.ini").string();
  const std::string out = (dir / "out").string();
  const std::vector<std::vector<std::string>> commands{
      {"fingerprint", "--config", cfg},
      {"screen", "--config", cfg},
      {"embed", "--config", cfg, "--compare-baseline"},
      {"ood", "--config", cfg, "--training", out + "/fingerprints.dvf", "--predictions", out + "/fingerprints.dvf",
       "--top-n", "3"},
      {"plot", "--config", cfg, "--highlight", out + "/highlight.txt"},
      {"embed", "--config", cfg, "--method", "pca", "--input", out + "/mean.csv"},
      {"plot", "--config", cfg, "--output", out + "/plot_pca.svg"},
  };
  std::map<std::string, std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    fs::remove_all(dir / "out");
    std::map<std::string, std::string> outputs;
    for (const auto& args : commands) {
      expect(run_cli(args) == 0, args[0] + " failed");
      // later commands overwrite some files, so record after each one
      for (const auto& [name, bytes] : snapshot(dir / "out")) outputs[args[0] + ":" + name] = bytes;
    }
    if (pass == 0) {
      first = outputs;
      continue;
    }
    expect(outputs.size() == first.size(), "different set of outputs on the second run");
    for (const auto& [key, bytes] : first) {
      expect(outputs[key] == bytes, key + " differs between runs");
    }
  }
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<void()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"primitive cell and supercells share D; padded baseline separates them", 10, primitive_and_supercells},
      {"rigid-motion invariance of descriptors and fingerprints", 30, rigid_motion},
      {"permutation invariance of D", 10, permutation},
      {"neighbor list matches brute-force replication", 60, neighbor_oracle},
      {"hand-computed G4 and G5 values", 1, hand_values},
      {"dedup keeps one of each unique structure", 30, dedup},
      {"novelty screening matches the double-loop oracle", 10, novelty},
      {"t-SNE calibration, convergence, cluster quality and determinism", 120, tsne},
      {"OOD ranking puts the outlier first and highlights 20 points", 30, ood},
      {"file formats and CLI reruns are byte-identical", 30, round_trips},
  };
  std::printf("kernels: %s\n", std::string(simd::active_kernels().name).c_str());
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    std::string error;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.check();
    } catch (const Failure& f) {
      error = f.what;
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty() && secs > c.limit_seconds) error = "took longer than " + num(c.limit_seconds) + " s";
    const bool pass = error.empty();
    if (!pass) ++failures;
    std::printf("%s %2zu %s (%.2f s, limit %.0f s)%s%s\n", pass ? "PASS" : "FAIL", i + 1, c.name, secs,
                c.limit_seconds, pass ? "" : ": ", error.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
