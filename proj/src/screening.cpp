#include "dvlae/screening.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dvlae/error.hpp"
#include "dvlae/log.hpp"
#include "dvlae/parallel.hpp"
#include "dvlae/simd/kernels.hpp"

namespace dvlae {
namespace {

void require_common_spec(std::span<const DifferenceVector> fps) {
  for (const auto& fp : fps) {
    if (fp.spec_checksum != fps.front().spec_checksum || fp.bits.size() != fps.front().bits.size()) {
      throw Error("fingerprint '" + fp.structure_id + "' was produced with a different spec");
    }
  }
}

ScreeningReport finish(ScreeningReport r, std::size_t input) {
  r.input_count = input;
  r.output_count = r.kept.size();
  r.reduction_ratio =
      input == 0 ? 0.0 : static_cast<double>(r.removed.size()) / static_cast<double>(input);
  return r;
}

}  // namespace

ScreeningReport dedup_exact(std::span<const DifferenceVector> fps) {
  require_common_spec(fps);
  ScreeningReport r;
  r.mode = "exact";
  std::map<std::vector<std::uint64_t>, std::size_t> first;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    const auto words = fps[i].bits.words();
    const auto [it, inserted] = first.try_emplace({words.begin(), words.end()}, i);
    if (inserted) {
      r.kept.push_back(fps[i].structure_id);
    } else {
      r.removed.emplace_back(fps[i].structure_id, fps[it->second].structure_id);
    }
  }
  return finish(std::move(r), fps.size());
}

ScreeningReport dedup_hamming(std::span<const DifferenceVector> fps, std::size_t radius) {
  require_common_spec(fps);
  ScreeningReport r;
  r.mode = "hamming";
  r.radius = radius;
  std::vector<std::size_t> leaders;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    bool merged = false;
    for (std::size_t leader : leaders) {
      if (hamming(fps[i].bits, fps[leader].bits) <= radius) {
        r.removed.emplace_back(fps[i].structure_id, fps[leader].structure_id);
        merged = true;
        break;
      }
    }
    if (!merged) {
      leaders.push_back(i);
      r.kept.push_back(fps[i].structure_id);
    }
  }
  return finish(std::move(r), fps.size());
}

nlohmann::json to_json(const ScreeningReport& report) {
  nlohmann::json removed = nlohmann::json::array();
  for (const auto& [id, rep] : report.removed) removed.push_back({{"id", id}, {"kept_as", rep}});
  nlohmann::json j;
  j["mode"] = report.mode;
  j["radius"] = report.radius;
  j["input_count"] = report.input_count;
  j["output_count"] = report.output_count;
  j["reduction_ratio"] = report.reduction_ratio;
  j["kept"] = report.kept;
  j["removed"] = removed;
  return j;
}

ScreeningReport report_from_json(const nlohmann::json& j) {
  try {
    ScreeningReport r;
    r.mode = j.at("mode").get<std::string>();
    r.radius = j.at("radius").get<std::size_t>();
    r.input_count = j.at("input_count").get<std::size_t>();
    r.output_count = j.at("output_count").get<std::size_t>();
    r.reduction_ratio = j.at("reduction_ratio").get<double>();
    r.kept = j.at("kept").get<std::vector<std::string>>();
    for (const auto& entry : j.at("removed")) {
      r.removed.emplace_back(entry.at("id").get<std::string>(), entry.at("kept_as").get<std::string>());
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed screening report: ") + e.what());
  }
}

NoveltyResult novelty_screen(std::span<const LabeledVector> candidates,
                             std::span<const LabeledVector> training, const NoveltyConfig& cfg) {
  if (!(cfg.threshold >= 0.0)) throw Error("novelty threshold must be >= 0");
  NoveltyResult result;
  result.scores.resize(candidates.size());

  if (training.empty()) {
    warn("novelty screening against an empty training set: every candidate is accepted");
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      result.scores[c] = {candidates[c].id, INFINITY, INFINITY, true};
      result.accepted.push_back(candidates[c].id);
    }
    return result;
  }

  const std::size_t dim = training.front().values.size();
  for (const auto& t : training) {
    if (t.values.size() != dim) throw Error("training vector '" + t.id + "' has a different dimension");
  }
  for (const auto& c : candidates) {
    if (c.values.size() != dim) {
      throw Error("candidate '" + c.id + "' has dimension " + std::to_string(c.values.size()) +
                  ", training vectors have " + std::to_string(dim));
    }
  }

  const auto& kernels = simd::active_kernels();
  parallel_for(candidates.size(), [&](std::size_t c) {
    double min_d = INFINITY;
    double sum_d = 0.0;
    for (const auto& t : training) {
      const double d = std::sqrt(kernels.squared_distance(candidates[c].values, t.values));
      min_d = std::min(min_d, d);
      sum_d += d;
    }
    const double mean_d = sum_d / static_cast<double>(training.size());
    const double aggregate = cfg.aggregate == Aggregate::Min ? min_d : mean_d;
    result.scores[c] = {candidates[c].id, min_d, mean_d, aggregate > cfg.threshold};
  });
  for (const auto& s : result.scores) {
    if (s.accepted) result.accepted.push_back(s.id);
  }
  return result;
}

nlohmann::json to_json(const NoveltyResult& result, const NoveltyConfig& cfg) {
  nlohmann::json scores = nlohmann::json::array();
  for (const auto& s : result.scores) {
    scores.push_back({{"id", s.id},
                      {"min_distance", std::isfinite(s.min_distance) ? nlohmann::json(s.min_distance)
                                                                      : nlohmann::json(nullptr)},
                      {"mean_distance", std::isfinite(s.mean_distance)
                                            ? nlohmann::json(s.mean_distance)
                                            : nlohmann::json(nullptr)},
                      {"accepted", s.accepted}});
  }
  nlohmann::json j;
  j["mode"] = "novelty";
  j["threshold"] = cfg.threshold;
  j["aggregate"] = cfg.aggregate == Aggregate::Min ? "min" : "mean";
  j["input_count"] = result.scores.size();
  j["output_count"] = result.accepted.size();
  j["accepted"] = result.accepted;
  j["scores"] = scores;
  return j;
}

OodScore ood_score(const DifferenceVector& fp, std::span<const DifferenceVector> training) {
  if (training.empty()) throw Error("cannot score '" + fp.structure_id + "' against an empty store");
  std::size_t best = fp.bits.size();
  for (const auto& t : training) best = std::min(best, hamming_distance(fp, t));
  const double bits = static_cast<double>(fp.bits.size());
  return {fp.structure_id, best, bits > 0 ? static_cast<double>(best) / bits : 0.0};
}

std::vector<OodScore> rank_ood(std::span<const DifferenceVector> predictions,
                               std::span<const DifferenceVector> training) {
  std::vector<OodScore> scores(predictions.size());
  parallel_for(predictions.size(),
               [&](std::size_t i) { scores[i] = ood_score(predictions[i], training); });
  std::stable_sort(scores.begin(), scores.end(), [](const OodScore& a, const OodScore& b) {
    return a.min_hamming > b.min_hamming;
  });
  return scores;
}

}  // namespace dvlae
