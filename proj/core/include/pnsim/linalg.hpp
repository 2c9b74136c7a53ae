// Copyright 2026 The pnsim Authors
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

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pnsim {

using Complex = std::complex<double>;

/// Dense complex column vector (optical field amplitudes).
class CVector {
 public:
  CVector() = default;
  explicit CVector(std::size_t dim, Complex fill = {}) : data_(dim, fill) {}
  CVector(std::initializer_list<Complex> values) : data_(values) {}
  explicit CVector(std::vector<Complex> values) : data_(std::move(values)) {}

  std::size_t dim() const noexcept { return data_.size(); }
  Complex& operator[](std::size_t i) noexcept { return data_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<Complex> values() noexcept { return data_; }
  std::span<const Complex> values() const noexcept { return data_; }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  double norm() const noexcept;

  friend bool operator==(const CVector&, const CVector&) = default;

 private:
  std::vector<Complex> data_;
};

/// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols, Complex fill = {})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Row-major nested initializer; rows must have equal length.
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const Complex> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept {
    return data_[r * cols_ + c];
  }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<Complex> row(std::size_t r) noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const Complex> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const Complex> values() const noexcept { return data_; }
  std::span<Complex> values() noexcept { return data_; }

  CVector column(std::size_t c) const;
  void set_column(std::size_t c, const CVector& v);

  CMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const noexcept;

  CMatrix& operator*=(Complex s) noexcept;

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Matrix product; throws Error on inner-dimension mismatch.
CMatrix matmul(const CMatrix& a, const CMatrix& b);
CVector matvec(const CMatrix& a, const CVector& x);

CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(Complex s, CMatrix m);

/// max |a_ij - b_ij|; shapes must match.
double max_abs_diff(const CMatrix& a, const CMatrix& b);
double max_abs_diff(const CVector& a, const CVector& b);

/// True iff max elementwise |m^H m - I| <= tol. Throws on non-square input.
bool is_unitary(const CMatrix& m, double tol);
/// The max elementwise |m^H m - I| itself.
double unitarity_residual(const CMatrix& m);

/// Haar-distributed n x n unitary from QR of a complex Gaussian matrix.
/// Identical (n, seed) gives bitwise-identical output.
CMatrix haar_random_unitary(std::size_t n, std::uint64_t seed);

/// Complex Gaussian vector normalized to unit length.
CVector random_unit_vector(std::size_t n, std::uint64_t seed);

/// |Tr(u^H v)|^2 / N^2, clipped to [0, 1]. Global-phase invariant.
double fidelity(const CMatrix& u, const CMatrix& v);

/// Fidelity after rescaling `v` to the Frobenius norm of an N x N unitary.
/// Uniform loss then does not register as matrix error.
double normalized_fidelity(const CMatrix& u, const CMatrix& v);

bool all_finite(std::span<const Complex> values) noexcept;

// Text format: first line "rows cols", then row-major "re im" pairs.
// NaN/Inf and short files are rejected with ParseError.
CMatrix read_matrix(std::istream& in);
CMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const CMatrix& m);
void write_matrix_file(const std::string& path, const CMatrix& m);

/// Vectors use the matrix format with a single column.
CVector read_vector_file(const std::string& path);
void write_vector_file(const std::string& path, const CVector& v);

CMatrix column_matrix(const CVector& v);

}  // namespace pnsim
