#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dvlae/fingerprint.hpp"
#include "dvlae/vectors.hpp"

namespace dvlae {

struct ScreeningReport {
  std::string mode;  // "exact" or "hamming"
  std::size_t radius = 0;
  std::vector<std::string> kept;
  // removed id -> id of the kept representative it was merged into
  std::vector<std::pair<std::string, std::string>> removed;
  std::size_t input_count = 0;
  std::size_t output_count = 0;
  double reduction_ratio = 0.0;  // removed / input

  friend bool operator==(const ScreeningReport&, const ScreeningReport&) = default;
};

/// Keeps the first occurrence (input order) of every distinct bit pattern.
ScreeningReport dedup_exact(std::span<const DifferenceVector> fps);

/// Greedy leader clustering in input order: a fingerprint is removed iff it
/// lies within `radius` of an already kept leader (the earliest such leader
/// becomes its representative). radius 0 reproduces dedup_exact.
ScreeningReport dedup_hamming(std::span<const DifferenceVector> fps, std::size_t radius);

nlohmann::json to_json(const ScreeningReport& report);
ScreeningReport report_from_json(const nlohmann::json& j);

enum class Aggregate { Min, Mean };

struct NoveltyConfig {
  double threshold = 0.1;
  Aggregate aggregate = Aggregate::Mean;
};

struct NoveltyScore {
  std::string id;
  double min_distance = 0.0;   // closest training vector
  double mean_distance = 0.0;  // average over training vectors
  bool accepted = false;
};

struct NoveltyResult {
  std::vector<NoveltyScore> scores;  // candidate order
  std::vector<std::string> accepted;
};

/// For each candidate, Euclidean distance to every training vector; the
/// candidate is accepted when the configured aggregate (min or mean) is
/// strictly greater than the threshold. With no training vectors every
/// candidate is accepted and a warning is emitted.
NoveltyResult novelty_screen(std::span<const LabeledVector> candidates,
                             std::span<const LabeledVector> training, const NoveltyConfig& cfg);

nlohmann::json to_json(const NoveltyResult& result, const NoveltyConfig& cfg);

struct OodScore {
  std::string id;
  std::size_t min_hamming = 0;
  double normalized = 0.0;  // min_hamming / bit count
};

OodScore ood_score(const DifferenceVector& fp, std::span<const DifferenceVector> training);

/// Scores every prediction and sorts by normalized score, descending; ties
/// keep input order.
std::vector<OodScore> rank_ood(std::span<const DifferenceVector> predictions,
                               std::span<const DifferenceVector> training);

}  // namespace dvlae
