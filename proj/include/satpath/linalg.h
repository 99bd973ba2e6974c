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

#ifndef SATPATH_LINALG_H_
#define SATPATH_LINALG_H_

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace satpath {

// Pivots with absolute value below this are treated as zero.
inline constexpr double kSingularityThreshold = 1e-10;

// Row-major dense matrix, just enough for the small systems the solvers build.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int r, int c) { return data_[r * cols_ + c]; }
  double operator()(int r, int c) const { return data_[r * cols_ + c]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Gaussian elimination with partial pivoting on a square system.  Returns
// nullopt when a pivot falls below kSingularityThreshold.
std::optional<std::vector<double>> SolveSquare(Matrix a, std::vector<double> b);

// Any solution of a possibly non-square system, with free variables set to
// zero.  Returns nullopt when the system is inconsistent.
std::optional<std::vector<double>> SolveConsistent(Matrix a,
                                                   std::vector<double> b);

// F: R^n -> R^n, written into the output span.
using ResidualFn =
    std::function<void(std::span<const double>, std::span<double>)>;

struct NewtonOptions {
  int max_iterations = 50;
  double tolerance = 1e-13;   // on the sup-norm of F
  double fd_step = 1e-7;      // central differences for the Jacobian
};

// Damped Newton iteration with a finite-difference Jacobian and backtracking
// on |F|.  Returns the root, or nullopt if |F| never drops below tolerance.
std::optional<std::vector<double>> NewtonSolve(const ResidualFn& f,
                                               std::vector<double> start,
                                               const NewtonOptions& options = {});

double SupNorm(std::span<const double> v);

}  // namespace satpath

#endif  // SATPATH_LINALG_H_
