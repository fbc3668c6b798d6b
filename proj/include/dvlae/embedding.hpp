#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "dvlae/bits.hpp"
#include "dvlae/vectors.hpp"

namespace dvlae {

enum class Metric { Euclidean, Hamming };

/// Dense symmetric n x n matrix with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Euclidean distances between real vectors. Metric::Hamming is rejected.
DistanceMatrix pairwise_distances(std::span<const std::vector<double>> vectors, Metric metric);
/// Hamming distances between bit vectors. Metric::Euclidean is rejected.
DistanceMatrix pairwise_distances(std::span<const BitVector> vectors, Metric metric);

struct EmbeddedPoint {
  std::string id;
  std::string tag;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const EmbeddedPoint&, const EmbeddedPoint&) = default;
};

struct Embedding {
  std::vector<EmbeddedPoint> points;
  friend bool operator==(const Embedding&, const Embedding&) = default;
};

/// Mean-centred projection onto the leading `dims` principal axes (right
/// singular vectors of the centred data, descending variance). Each axis is
/// oriented so its largest-magnitude loading is positive.
Eigen::MatrixXd pca_coordinates(std::span<const std::vector<double>> vectors, std::size_t dims);
Embedding pca_project(std::span<const LabeledVector> vectors);

/// Conditional Gaussian affinities P(j|i) from a distance matrix. Each row's
/// bandwidth is bisected until its perplexity exp(H) is within 1e-5 of the
/// target (at most 100 steps). Rows sum to 1 and P(i|i) = 0. A row whose
/// distances are all zero becomes uniform, with a warning.
Eigen::MatrixXd perplexity_calibration(const DistanceMatrix& distances, double perplexity);

/// exp(Shannon entropy) of one conditional row, skipping the diagonal.
double row_perplexity(const Eigen::MatrixXd& conditional, std::size_t row);

struct TsneConfig {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double learning_rate = 200.0;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  std::size_t momentum_switch = 250;
  double exaggeration = 12.0;
  std::size_t exaggeration_iterations = 250;
  std::uint64_t seed = 0;

  /// Throws Error unless perplexity < (n - 1) / 3 and the rest is positive.
  void validate(std::size_t points) const;
};

struct TsneResult {
  Eigen::MatrixXd coordinates;  // n x 2
  double initial_kl = 0.0;
  double final_kl = 0.0;
  std::vector<std::pair<std::size_t, double>> kl_trace;  // (iteration, KL)
};

/// Exact-gradient t-SNE (Student-t, one degree of freedom) on a precomputed
/// distance matrix. Bit-identical output for a fixed seed.
TsneResult tsne_embed(const DistanceMatrix& distances, const TsneConfig& cfg);

/// KL(P || Q) for a joint P and the Student-t affinities of `coordinates`.
double kl_divergence(const Eigen::MatrixXd& joint, const Eigen::MatrixXd& coordinates);

/// Symmetrised joint affinities (P + P^T) / (2n).
Eigen::MatrixXd joint_probabilities(const Eigen::MatrixXd& conditional);

Embedding make_embedding(std::span<const std::string> ids, std::span<const std::string> tags,
                         const Eigen::MatrixXd& coordinates);

/// CSV with header `id,tag,x,y`; coordinates printed with 17 significant
/// digits so a parse/write cycle is byte-identical.
std::string write_embedding_csv(const Embedding& e);
Embedding read_embedding_csv(std::string_view text);

/// Vector CSV: header `id,tag,v0,...,v{d-1}`.
std::string write_vector_csv(std::span<const LabeledVector> vectors);
std::vector<LabeledVector> read_vector_csv(std::string_view text);

/// 0/1 reals from bits, for PCA over fingerprints.
std::vector<double> to_reals(const BitVector& bits);

}  // namespace dvlae
