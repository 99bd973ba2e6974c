// Copyright 2026 The Satpath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "satpath/linalg.h"

#include <algorithm>
#include <cmath>
#include <utility>

namespace satpath {

double SupNorm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::optional<std::vector<double>> SolveSquare(Matrix a, std::vector<double> b) {
  const int n = a.rows();
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) < kSingularityThreshold) return std::nullopt;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      if (factor == 0.0) continue;
      for (int c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
    x[r] = s / a(r, r);
  }
  return x;
}

std::optional<std::vector<double>> SolveConsistent(Matrix a,
                                                   std::vector<double> b) {
  const int rows = a.rows();
  const int cols = a.cols();
  std::vector<int> pivot_cols;
  int r = 0;
  for (int col = 0; col < cols && r < rows; ++col) {
    int pivot = r;
    for (int i = r + 1; i < rows; ++i) {
      if (std::abs(a(i, col)) > std::abs(a(pivot, col))) pivot = i;
    }
    if (std::abs(a(pivot, col)) < kSingularityThreshold) continue;
    if (pivot != r) {
      for (int c = 0; c < cols; ++c) std::swap(a(r, c), a(pivot, c));
      std::swap(b[r], b[pivot]);
    }
    const double inv = 1.0 / a(r, col);
    for (int c = 0; c < cols; ++c) a(r, c) *= inv;
    b[r] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a(i, col) == 0.0) continue;
      const double factor = a(i, col);
      for (int c = 0; c < cols; ++c) a(i, c) -= factor * a(r, c);
      b[i] -= factor * b[r];
    }
    pivot_cols.push_back(col);
    ++r;
  }
  for (int i = r; i < rows; ++i) {
    if (std::abs(b[i]) > 1e-9) return std::nullopt;
  }
  std::vector<double> x(cols, 0.0);
  for (int i = 0; i < r; ++i) x[pivot_cols[i]] = b[i];
  return x;
}

std::optional<std::vector<double>> NewtonSolve(const ResidualFn& f,
                                               std::vector<double> x,
                                               const NewtonOptions& options) {
  const int n = static_cast<int>(x.size());
  std::vector<double> fx(n), fp(n), fm(n), trial(n), ft(n);
  f(x, fx);
  double norm = SupNorm(fx);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (!std::isfinite(norm)) return std::nullopt;
    if (norm <= options.tolerance) return x;
    Matrix jac(n, n);
    for (int j = 0; j < n; ++j) {
      const double saved = x[j];
      x[j] = saved + options.fd_step;
      f(x, fp);
      x[j] = saved - options.fd_step;
      f(x, fm);
      x[j] = saved;
      for (int i = 0; i < n; ++i) {
        jac(i, j) = (fp[i] - fm[i]) / (2.0 * options.fd_step);
      }
    }
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -fx[i];
    auto step = SolveSquare(jac, rhs);
    if (!step) return std::nullopt;
    double scale = 1.0;
    bool improved = false;
    for (int halvings = 0; halvings < 30; ++halvings) {
      for (int i = 0; i < n; ++i) trial[i] = x[i] + scale * (*step)[i];
      f(trial, ft);
      const double trial_norm = SupNorm(ft);
      if (std::isfinite(trial_norm) && trial_norm < norm) {
        x.swap(trial);
        fx.swap(ft);
        norm = trial_norm;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
  }
  if (norm <= options.tolerance) return x;
  return std::nullopt;
}

}  // namespace satpath
