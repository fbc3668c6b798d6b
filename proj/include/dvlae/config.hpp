#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dvlae/descriptors.hpp"
#include "dvlae/embedding.hpp"
#include "dvlae/fingerprint.hpp"
#include "dvlae/screening.hpp"

namespace dvlae {

struct ReferenceSelector {
  enum class Kind { Auto, Id, Path } kind = Kind::Auto;
  std::string value;  // structure id, or file path for Kind::Path
};

/// One radial grid entry; empty element fields mean "every element".
struct RadialEntry {
  double eta = 0.0;
  double r_s = 0.0;
  std::string center;
  std::string neighbor;
};

struct AngularEntry {
  double eta = 0.0;
  double zeta = 1.0;
  int lambda = 1;
  std::string center;
  std::string first;
  std::string second;
};

/// Run configuration. Grammar (INI, `;` or `#` full-line comments, list
/// values separated by commas):
///
///   format = 1
///   out = results            ; optional, relative to the config file
///   seed = 7
///   [data]      manifest, files, subset, elements
///   [reference] select = auto | id:<structure id> | path:<xyz file>
///   [descriptors] grid = default|custom, r_c, r_ci, radial, g4, g5
///   [fingerprint] bins, comparison, vectors = none|padded|mean|all
///   [screen]    mode = exact|hamming|novelty, radius, threshold,
///               aggregate = min|mean, candidates, training
///   [embed]     method = tsne|pca, input = fingerprints|padded|mean,
///               perplexity, iterations, learning_rate, compare_baseline
///   [ood]       top_n
///   [plot]      width, height
struct RunConfig {
  std::filesystem::path path;  // the config file; base for relative paths
  int format = 1;
  std::filesystem::path out_dir = "dvlae-out";
  std::uint64_t seed = 0;

  std::vector<std::filesystem::path> manifests;
  std::vector<std::filesystem::path> files;
  std::optional<std::filesystem::path> subset;
  std::vector<std::string> elements;

  ReferenceSelector reference;

  bool default_grid = true;
  double r_c = 6.0;
  std::optional<double> r_ci;
  std::vector<RadialEntry> radial;
  std::vector<AngularEntry> g4;
  std::vector<AngularEntry> g5;

  std::size_t bins = 50;
  Comparison comparison = Comparison::Occupancy;
  std::string vectors = "none";

  std::string screen_mode = "exact";
  std::size_t radius = 0;
  NoveltyConfig novelty;
  std::optional<std::filesystem::path> candidates;
  std::optional<std::filesystem::path> training;

  std::string embed_method = "tsne";
  std::string embed_input = "fingerprints";
  TsneConfig tsne;
  bool compare_baseline = false;

  std::size_t top_n = 20;

  int plot_width = 800;
  int plot_height = 600;

  /// Every structure file named by `manifests` and `files`.
  std::vector<std::filesystem::path> dataset_files() const;

  /// Builds the descriptor set for `elements` (the config's element list).
  SymmetryFunctionSet symmetry_functions() const;
};

RunConfig parse_config(std::string_view text, const std::filesystem::path& config_path);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace dvlae
