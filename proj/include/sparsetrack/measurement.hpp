// Copyright 2026 the sparsetrack authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Measurement matrices and bounded-noise observations y = A x + w with
// ||w||_inf <= c, hence ||w||_2 <= c*sqrt(n).

#ifndef SPARSETRACK_MEASUREMENT_HPP
#define SPARSETRACK_MEASUREMENT_HPP

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "sparsetrack/random.hpp"
#include "sparsetrack/signal_model.hpp"

namespace sparsetrack {

inline Matrix gaussian_matrix(int n, int m, std::uint64_t seed,
                              bool normalize = true) {
  if (n <= 0 || m <= 0 || n > m)
    throw std::invalid_argument("gaussian_matrix: require 0 < n <= m");
  Rng rng(seed);
  Matrix a(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = rng.normal();
  if (normalize)
    for (int j = 0; j < m; ++j) a.col(j).normalize();
  return a;
}

inline Vector uniform_noise(int n, double c, std::uint64_t seed) {
  if (c < 0.0) throw std::invalid_argument("uniform_noise: require c >= 0");
  Rng rng(seed);
  Vector w(n);
  for (int i = 0; i < n; ++i) w[i] = rng.uniform(-c, c);
  return w;
}

// Worst-case l2 bound for entrywise noise bound c.
inline double noise_bound(double c, int n) {
  return c * std::sqrt(static_cast<double>(n));
}

inline Vector measure(const Matrix& a, const Vector& x, const Vector& w) {
  if (a.cols() != x.size() || a.rows() != w.size())
    throw std::invalid_argument("measure: shape mismatch");
  return a * x + w;
}

struct MeasurementModel {
  Matrix a;    // n x m, used for t > 0
  Matrix a0;   // n0 x m, used at t = 0
  double c = 0.0;
  double eps = 0.0;
  double eps0 = 0.0;

  int n() const { return static_cast<int>(a.rows()); }
  int n0() const { return static_cast<int>(a0.rows()); }
  int m() const { return static_cast<int>(a.cols()); }
};

// The t=0 bootstrap is plain CS, so it gets more rows; 3*S0+10 is enough in
// practice for the supports this model produces.
inline int default_n0(int m, int s0) { return std::min(m, 3 * s0 + 10); }

inline MeasurementModel make_measurement_model(int n, int n0, int m, double c,
                                               std::uint64_t seed) {
  if (n >= m) throw std::invalid_argument("measurement model: require n < m");
  if (n0 < n) throw std::invalid_argument("measurement model: require n0 >= n");
  MeasurementModel mm;
  mm.a = gaussian_matrix(n, m, mix_seed(seed, 1));
  mm.a0 = gaussian_matrix(n0, m, mix_seed(seed, 2));
  mm.c = c;
  mm.eps = noise_bound(c, n);
  mm.eps0 = noise_bound(c, n0);
  return mm;
}

// Plain CSV, row-major, first line "n,m".
inline void save_matrix_csv(const Matrix& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.precision(17);
  out << a.rows() << "," << a.cols() << "\n";
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (j) out << ",";
      out << a(i, j);
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty matrix file: " + path);
  int n = 0, m = 0;
  char comma = 0;
  std::istringstream header(line);
  if (!(header >> n >> comma >> m) || comma != ',' || n <= 0 || m <= 0)
    throw std::runtime_error("bad matrix header in " + path);
  Matrix a(n, m);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("truncated matrix file: " + path);
    std::istringstream row(line);
    std::string cell;
    for (int j = 0; j < m; ++j) {
      if (!std::getline(row, cell, ','))
        throw std::runtime_error("short row in " + path);
      a(i, j) = std::stod(cell);
    }
  }
  return a;
}

}  // namespace sparsetrack

#endif  // SPARSETRACK_MEASUREMENT_HPP
