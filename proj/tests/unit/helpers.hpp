#pragma once

#include "ilamm/core.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testutil {

using ilamm::Index;
using ilamm::Matrix;
using ilamm::Vector;

inline Matrix gaussian_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> z;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = z(rng);
  return m;
}

inline Vector gaussian_vector(std::mt19937_64& rng, Index len, double scale = 1.0) {
  std::normal_distribution<double> z;
  Vector v(len);
  for (Index i = 0; i < len; ++i) v[i] = scale * z(rng);
  return v;
}

inline Vector random_labels(std::mt19937_64& rng, Index n) {
  std::bernoulli_distribution coin(0.5);
  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = coin(rng) ? 1.0 : -1.0;
  return y;
}

// Random instance of the given loss; Huber uses alpha = 1.
inline ilamm::ProblemInstance random_instance(std::mt19937_64& rng, Index n,
                                              Index d, ilamm::LossKind kind) {
  Matrix x = gaussian_matrix(rng, n, d);
  switch (kind) {
    case ilamm::LossKind::Squared:
      return {x, gaussian_vector(rng, n, 2.0), ilamm::Loss::squared()};
    case ilamm::LossKind::Logistic:
      return {x, random_labels(rng, n), ilamm::Loss::logistic()};
    case ilamm::LossKind::Huber:
      return {x, gaussian_vector(rng, n, 2.0), ilamm::Loss::huber(1.0)};
  }
  return {x, gaussian_vector(rng, n), ilamm::Loss::squared()};
}

// Top eigenvalue of a symmetric PSD matrix.
inline double power_iteration(const Matrix& a, int iters = 2000) {
  Vector v = Vector::Ones(a.cols()).normalized();
  double value = 0.0;
  for (int k = 0; k < iters; ++k) {
    Vector w = a * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    value = v.dot(w);
    v = w / norm;
  }
  return value;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ilamm_unit_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_matrix(const std::filesystem::path& p, const Matrix& m) {
  std::ofstream out(p);
  out.precision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
}

inline void write_vector(const std::filesystem::path& p, const Vector& v) {
  std::ofstream out(p);
  out.precision(17);
  for (Index i = 0; i < v.size(); ++i) out << v[i] << '\n';
}

}  // namespace testutil
