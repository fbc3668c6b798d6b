#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dvlae/embedding.hpp"
#include "dvlae/error.hpp"
#include "dvlae/log.hpp"
#include "dvlae/simd/kernels.hpp"

namespace dvlae {
namespace {

constexpr double kPerplexityTolerance = 1e-5;
constexpr int kMaxBisection = 100;
constexpr double kMinGain = 0.01;
constexpr double kQFloor = 1e-12;

// Fills row i of P for bandwidth beta over shifted squared distances and
// returns exp(H).
double fill_row(const std::vector<double>& shifted, std::size_t i, double beta,
                Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> row) {
  double sum = 0.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    const double w = j == i ? 0.0 : std::exp(-beta * shifted[j]);
    row[static_cast<Eigen::Index>(j)] = w;
    sum += w;
  }
  double entropy = 0.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    double& p = row[static_cast<Eigen::Index>(j)];
    p /= sum;
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

}  // namespace

double row_perplexity(const Eigen::MatrixXd& conditional, std::size_t row) {
  double entropy = 0.0;
  const auto r = static_cast<Eigen::Index>(row);
  for (Eigen::Index j = 0; j < conditional.cols(); ++j) {
    const double p = conditional(r, j);
    if (j != r && p > 0.0) entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

Eigen::MatrixXd perplexity_calibration(const DistanceMatrix& distances, double perplexity) {
  if (!(perplexity > 0.0)) throw Error("perplexity must be positive");
  const std::size_t n = distances.size();
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(ni, ni);
  if (n < 2) return p;

  std::vector<double> shifted(n);
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    double farthest = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = distances(i, j);
      nearest = std::min(nearest, d * d);
      farthest = std::max(farthest, d * d);
    }
    auto row = p.row(static_cast<Eigen::Index>(i));
    if (farthest == 0.0) {
      warn("point " + std::to_string(i) + " has zero distance to every other point; using a uniform row");
      for (std::size_t j = 0; j < n; ++j) row[static_cast<Eigen::Index>(j)] = j == i ? 0.0 : 1.0 / double(n - 1);
      continue;
    }
    // Shifting by the nearest squared distance leaves P unchanged and keeps
    // the largest weight at 1, so the row never underflows.
    double spread = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      shifted[j] = j == i ? 0.0 : distances(i, j) * distances(i, j) - nearest;
      spread += shifted[j];
    }
    spread /= static_cast<double>(n - 1);

    double beta = spread > 0.0 ? 1.0 / spread : 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int step = 0; step < kMaxBisection; ++step) {
      const double achieved = fill_row(shifted, i, beta, row);
      if (std::abs(achieved - perplexity) < kPerplexityTolerance) break;
      if (achieved > perplexity) {
        lo = beta;  // too flat: sharpen
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
      if (step + 1 == kMaxBisection) fill_row(shifted, i, beta, row);
    }
  }
  return p;
}

Eigen::MatrixXd joint_probabilities(const Eigen::MatrixXd& conditional) {
  const double n = static_cast<double>(conditional.rows());
  Eigen::MatrixXd joint = (conditional + conditional.transpose()) / (2.0 * n);
  return joint;
}

namespace {

// Student-t numerators and their sum for the current coordinates.
double student_t(const Eigen::MatrixXd& y, std::vector<double>& xs, std::vector<double>& ys,
                 Eigen::MatrixXd& num) {
  const Eigen::Index n = y.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = y(i, 0);
    ys[static_cast<std::size_t>(i)] = y(i, 1);
  }
  const auto& kernels = simd::active_kernels();
  double total = 0.0;
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    kernels.student_t_row(y(i, 0), y(i, 1), xs, ys, row);
    row[static_cast<std::size_t>(i)] = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      num(i, j) = row[static_cast<std::size_t>(j)];
      total += row[static_cast<std::size_t>(j)];
    }
  }
  return total;
}

// Index of the first point whose distance row equals row i and which lies at
// distance 0 from i (i itself if none). Such points are indistinguishable.
std::vector<std::size_t> duplicate_representatives(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> rep(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep[i] = i;
    for (std::size_t r = 0; r < i; ++r) {
      if (rep[r] != r || d(i, r) != 0.0) continue;
      bool same = true;
      for (std::size_t k = 0; k < n && same; ++k) {
        if (k != i && k != r) same = d(i, k) == d(r, k);
      }
      if (same) {
        rep[i] = r;
        break;
      }
    }
  }
  return rep;
}

double kl_from(const Eigen::MatrixXd& joint, const Eigen::MatrixXd& num, double total) {
  double kl = 0.0;
  for (Eigen::Index i = 0; i < joint.rows(); ++i) {
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
      const double p = joint(i, j);
      if (i == j || p <= 0.0) continue;
      const double q = std::max(num(i, j) / total, kQFloor);
      kl += p * std::log(p / q);
    }
  }
  return kl;
}

}  // namespace

double kl_divergence(const Eigen::MatrixXd& joint, const Eigen::MatrixXd& coordinates) {
  const auto n = static_cast<std::size_t>(coordinates.rows());
  std::vector<double> xs(n), ys(n);
  Eigen::MatrixXd num(coordinates.rows(), coordinates.rows());
  const double total = student_t(coordinates, xs, ys, num);
  return kl_from(joint, num, total);
}

void TsneConfig::validate(std::size_t points) const {
  if (!(perplexity > 0.0)) throw Error("perplexity must be positive");
  if (!(perplexity < (static_cast<double>(points) - 1.0) / 3.0)) {
    throw Error("perplexity " + std::to_string(perplexity) + " is too large for " +
                std::to_string(points) + " points: it must be < (n - 1) / 3");
  }
  if (iterations == 0) throw Error("t-SNE needs at least one iteration");
  if (!(learning_rate > 0.0)) throw Error("learning rate must be positive");
}

TsneResult tsne_embed(const DistanceMatrix& distances, const TsneConfig& cfg) {
  const std::size_t n = distances.size();
  cfg.validate(n);
  const auto ni = static_cast<Eigen::Index>(n);

  // Exact duplicates get bit-identical conditional rows and a shared starting
  // point; their gradients then stay identical and they never separate.
  Eigen::MatrixXd conditional = perplexity_calibration(distances, cfg.perplexity);
  const auto rep = duplicate_representatives(distances);
  for (std::size_t i = 0; i < n; ++i) {
    if (rep[i] == i) continue;
    const auto r = static_cast<Eigen::Index>(rep[i]);
    const auto k = static_cast<Eigen::Index>(i);
    conditional.row(k) = conditional.row(r);
    std::swap(conditional(k, k), conditional(k, r));
  }
  const Eigen::MatrixXd joint = joint_probabilities(conditional);

  TsneResult result;
  Eigen::MatrixXd& y = result.coordinates;
  y.resize(ni, 2);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1e-4);
  for (Eigen::Index i = 0; i < ni; ++i) {
    y(i, 0) = normal(rng);
    y(i, 1) = normal(rng);
  }
  for (std::size_t i = 0; i < n; ++i) y.row(static_cast<Eigen::Index>(i)) = y.row(static_cast<Eigen::Index>(rep[i]));

  Eigen::MatrixXd num(ni, ni);
  Eigen::MatrixXd grad(ni, 2);
  Eigen::MatrixXd update = Eigen::MatrixXd::Zero(ni, 2);
  Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(ni, 2);
  std::vector<double> xs(n), ys(n);

  double total = student_t(y, xs, ys, num);
  result.initial_kl = kl_from(joint, num, total);
  result.kl_trace.emplace_back(0, result.initial_kl);

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const double exaggeration = it < cfg.exaggeration_iterations ? cfg.exaggeration : 1.0;
    const double momentum = it < cfg.momentum_switch ? cfg.initial_momentum : cfg.final_momentum;

    // dC/dy_i = 4 sum_j (p_ij - q_ij) num_ij (y_i - y_j)
    for (Eigen::Index i = 0; i < ni; ++i) {
      double gx = 0.0;
      double gy = 0.0;
      for (Eigen::Index j = 0; j < ni; ++j) {
        if (j == i) continue;
        const double q = std::max(num(i, j) / total, kQFloor);
        const double w = (exaggeration * joint(i, j) - q) * num(i, j);
        gx += w * (y(i, 0) - y(j, 0));
        gy += w * (y(i, 1) - y(j, 1));
      }
      grad(i, 0) = 4.0 * gx;
      grad(i, 1) = 4.0 * gy;
    }

    for (Eigen::Index i = 0; i < ni; ++i) {
      for (Eigen::Index d = 0; d < 2; ++d) {
        const bool same_sign = (grad(i, d) > 0.0) == (update(i, d) > 0.0);
        gains(i, d) = std::max(same_sign ? gains(i, d) * 0.8 : gains(i, d) + 0.2, kMinGain);
        update(i, d) = momentum * update(i, d) - cfg.learning_rate * gains(i, d) * grad(i, d);
        y(i, d) += update(i, d);
      }
    }
    const Eigen::RowVector2d mean = y.colwise().mean();
    y.rowwise() -= mean;

    total = student_t(y, xs, ys, num);
    if ((it + 1) % 50 == 0 || it + 1 == cfg.iterations) {
      const double kl = kl_from(joint, num, total);
      if (!std::isfinite(kl) || !y.allFinite()) {
        throw std::logic_error("t-SNE diverged at iteration " + std::to_string(it + 1));
      }
      result.kl_trace.emplace_back(it + 1, kl);
    }
  }
  result.final_kl = result.kl_trace.back().second;
  return result;
}

}  // namespace dvlae
