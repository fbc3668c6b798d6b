#include "dvlae/embedding.hpp"

#include <charconv>
#include <cmath>

#include <Eigen/SVD>

#include "csv.hpp"
#include "dvlae/error.hpp"
#include "dvlae/simd/kernels.hpp"

namespace dvlae {

DistanceMatrix pairwise_distances(std::span<const std::vector<double>> vectors, Metric metric) {
  if (metric != Metric::Euclidean) throw Error("hamming metric requires bit-vector input");
  const std::size_t n = vectors.size();
  for (const auto& v : vectors) {
    if (v.size() != vectors.front().size()) throw Error("vectors have differing dimensions");
  }
  const auto& kernels = simd::active_kernels();
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d.set(i, j, std::sqrt(kernels.squared_distance(vectors[i], vectors[j])));
    }
  }
  return d;
}

DistanceMatrix pairwise_distances(std::span<const BitVector> vectors, Metric metric) {
  if (metric != Metric::Hamming) throw Error("euclidean metric requires real-vector input");
  const std::size_t n = vectors.size();
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d.set(i, j, static_cast<double>(hamming(vectors[i], vectors[j])));
    }
  }
  return d;
}

Eigen::MatrixXd pca_coordinates(std::span<const std::vector<double>> vectors, std::size_t dims) {
  const std::size_t n = vectors.size();
  if (n < dims) {
    throw Error("PCA needs at least " + std::to_string(dims) + " points, got " + std::to_string(n));
  }
  const std::size_t d = n == 0 ? 0 : vectors.front().size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    if (vectors[i].size() != d) throw Error("vectors have differing dimensions");
    for (std::size_t k = 0; k < d; ++k) x(i, k) = vectors[i][k];
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(dims));
  if (n == 0 || d == 0) return out;

  x.rowwise() -= x.colwise().mean();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  const Eigen::MatrixXd& v = svd.matrixV();
  const Eigen::Index axes = std::min<Eigen::Index>(static_cast<Eigen::Index>(dims), v.cols());
  for (Eigen::Index a = 0; a < axes; ++a) {
    Eigen::VectorXd axis = v.col(a);
    Eigen::Index biggest = 0;
    for (Eigen::Index k = 1; k < axis.size(); ++k) {
      if (std::abs(axis[k]) > std::abs(axis[biggest])) biggest = k;
    }
    if (axis[biggest] < 0.0) axis = -axis;
    out.col(a) = x * axis;
  }
  return out;
}

Embedding pca_project(std::span<const LabeledVector> vectors) {
  std::vector<std::vector<double>> values;
  std::vector<std::string> ids, tags;
  for (const auto& v : vectors) {
    values.push_back(v.values);
    ids.push_back(v.id);
    tags.push_back(v.tag);
  }
  return make_embedding(ids, tags, pca_coordinates(values, 2));
}

Embedding make_embedding(std::span<const std::string> ids, std::span<const std::string> tags,
                         const Eigen::MatrixXd& coordinates) {
  if (static_cast<std::size_t>(coordinates.rows()) != ids.size() || coordinates.cols() < 2) {
    throw std::logic_error("embedding coordinates do not match the point list");
  }
  Embedding e;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const double x = coordinates(static_cast<Eigen::Index>(i), 0);
    const double y = coordinates(static_cast<Eigen::Index>(i), 1);
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw std::logic_error("non-finite embedding coordinate for '" + ids[i] + "'");
    }
    e.points.push_back({ids[i], i < tags.size() ? tags[i] : std::string{}, x, y});
  }
  return e;
}

std::vector<double> to_reals(const BitVector& bits) {
  std::vector<double> out(bits.size());
  for (std::size_t b = 0; b < bits.size(); ++b) out[b] = bits.test(b) ? 1.0 : 0.0;
  return out;
}

namespace {

double parse_number(const std::string& s, std::size_t row) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("CSV row " + std::to_string(row) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string write_embedding_csv(const Embedding& e) {
  std::string out = "id,tag,x,y\n";
  for (const auto& p : e.points) {
    out += csv::quote(p.id) + "," + csv::quote(p.tag) + "," + csv::format_double(p.x) + "," +
           csv::format_double(p.y) + "\n";
  }
  return out;
}

Embedding read_embedding_csv(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.empty() || records.front() != std::vector<std::string>{"id", "tag", "x", "y"}) {
    throw Error("embedding CSV must start with the header 'id,tag,x,y'");
  }
  Embedding e;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r];
    if (f.size() != 4) throw Error("embedding CSV row " + std::to_string(r) + " must have 4 fields");
    e.points.push_back({f[0], f[1], parse_number(f[2], r), parse_number(f[3], r)});
  }
  return e;
}

std::string write_vector_csv(std::span<const LabeledVector> vectors) {
  const std::size_t dim = vectors.empty() ? 0 : vectors.front().values.size();
  std::string out = "id,tag";
  for (std::size_t k = 0; k < dim; ++k) out += ",v" + std::to_string(k);
  out += "\n";
  for (const auto& v : vectors) {
    if (v.values.size() != dim) throw Error("vectors have differing dimensions");
    out += csv::quote(v.id) + "," + csv::quote(v.tag);
    for (double x : v.values) out += "," + csv::format_double(x);
    out += "\n";
  }
  return out;
}

std::vector<LabeledVector> read_vector_csv(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.empty() || records.front().size() < 2 || records.front()[0] != "id" ||
      records.front()[1] != "tag") {
    throw Error("vector CSV must start with a header 'id,tag,v0,...'");
  }
  const std::size_t dim = records.front().size() - 2;
  std::vector<LabeledVector> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r];
    if (f.size() != dim + 2) {
      throw Error("vector CSV row " + std::to_string(r) + " has " + std::to_string(f.size()) +
                  " fields, expected " + std::to_string(dim + 2));
    }
    LabeledVector v{f[0], f[1], {}};
    v.values.reserve(dim);
    for (std::size_t k = 0; k < dim; ++k) v.values.push_back(parse_number(f[k + 2], r));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace dvlae
