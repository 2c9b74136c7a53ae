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

#include "pnsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "pnsim/error.hpp"
#include "pnsim/rng.hpp"

namespace pnsim {

double CVector::norm() const noexcept {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error("CMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CVector CMatrix::column(std::size_t c) const {
  CVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void CMatrix::set_column(std::size_t c, const CVector& v) {
  if (v.dim() != rows_) throw Error("set_column: dimension mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex CMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

CMatrix& CMatrix::operator*=(Complex s) noexcept {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream os;
    os << "matmul: dimension mismatch (" << a.rows() << "x" << a.cols()
       << " times " << b.rows() << "x" << b.cols() << ")";
    throw Error(os.str());
  }
  CMatrix out(a.rows(), b.cols());
  // i-k-j order keeps the inner loop on contiguous rows.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      const auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

CVector matvec(const CMatrix& a, const CVector& x) {
  if (a.cols() != x.dim()) throw Error("matvec: dimension mismatch");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc = 0.0;
    const auto r = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) acc += r[k] * x[k];
    y[i] = acc;
  }
  return y;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("matrix subtraction: shape mismatch");
  CMatrix out = a;
  for (std::size_t i = 0; i < out.values().size(); ++i)
    out.values()[i] -= b.values()[i];
  return out;
}

CMatrix operator*(Complex s, CMatrix m) {
  m *= s;
  return m;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

double max_abs_diff(const CVector& a, const CVector& b) {
  if (a.dim() != b.dim()) throw Error("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double unitarity_residual(const CMatrix& m) {
  if (!m.is_square()) throw Error("is_unitary: matrix is not square");
  const std::size_t n = m.rows();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += std::conj(m(k, i)) * m(k, j);
      if (i == j) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

bool is_unitary(const CMatrix& m, double tol) {
  if (!(tol > 0.0)) throw Error("is_unitary: tolerance must be positive");
  return unitarity_residual(m) <= tol;
}

CMatrix haar_random_unitary(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error("haar_random_unitary: n must be >= 1");
  CounterRng rng(seed, 0x4a4152ULL);
  CMatrix q(n, n);
  for (auto& z : q.values()) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = Complex(re, im) * std::sqrt(0.5);
  }
  // Classical Gram-Schmidt with one re-orthogonalization pass. The R factor
  // comes out with a positive real diagonal, which is exactly the phase
  // normalization that makes Q Haar-distributed.
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= proj * q(i, k);
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
  }
  return q;
}

CVector random_unit_vector(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error("random_unit_vector: n must be >= 1");
  CounterRng rng(seed, 0x5645ULL);
  CVector v(n);
  for (auto& z : v) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = Complex(re, im);
  }
  const double nrm = v.norm();
  for (auto& z : v) z /= nrm;
  return v;
}

namespace {

Complex trace_overlap(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || !u.is_square())
    throw Error("fidelity: matrices must share the same square shape");
  // Tr(u^H v) = sum_ij conj(u_ij) v_ij
  Complex acc = 0.0;
  for (std::size_t i = 0; i < u.values().size(); ++i)
    acc += std::conj(u.values()[i]) * v.values()[i];
  return acc;
}

}  // namespace

double fidelity(const CMatrix& u, const CMatrix& v) {
  const Complex t = trace_overlap(u, v);
  const double n = static_cast<double>(u.rows());
  return std::clamp(std::norm(t) / (n * n), 0.0, 1.0);
}

double normalized_fidelity(const CMatrix& u, const CMatrix& v) {
  const Complex t = trace_overlap(u, v);
  const double n = static_cast<double>(u.rows());
  const double vv = v.frobenius_norm();
  if (vv == 0.0) return 0.0;
  // v rescaled to Frobenius norm sqrt(N).
  return std::clamp(std::norm(t) / (n * vv * vv), 0.0, 1.0);
}

bool all_finite(std::span<const Complex> values) noexcept {
  return std::all_of(values.begin(), values.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

namespace {

double read_real(std::istream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw ParseError(std::string("matrix file: missing ") + what);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError("matrix file: bad number '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError("matrix file: bad number '" + tok + "'");
  if (!std::isfinite(v)) throw ParseError("matrix file: non-finite value '" + tok + "'");
  return v;
}

}  // namespace

CMatrix read_matrix(std::istream& in) {
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols)) throw ParseError("matrix file: missing 'rows cols' header");
  if (rows <= 0 || cols <= 0) throw ParseError("matrix file: dimensions must be positive");
  CMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (auto& z : m.values()) {
    const double re = read_real(in, "real part");
    const double im = read_real(in, "imaginary part");
    z = Complex(re, im);
  }
  std::string extra;
  if (in >> extra) throw ParseError("matrix file: trailing data '" + extra + "'");
  return m;
}

CMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const CMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << "  ";
      out << m(r, c).real() << ' ' << m(r, c).imag();
    }
    out << '\n';
  }
  out.precision(old);
}

void write_matrix_file(const std::string& path, const CMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write matrix file '" + path + "'");
  write_matrix(out, m);
}

CVector read_vector_file(const std::string& path) {
  const CMatrix m = read_matrix_file(path);
  if (m.cols() != 1) throw ParseError("vector file '" + path + "' must have one column");
  return m.column(0);
}

CMatrix column_matrix(const CVector& v) {
  CMatrix m(v.dim(), 1);
  m.set_column(0, v);
  return m;
}

void write_vector_file(const std::string& path, const CVector& v) {
  write_matrix_file(path, column_matrix(v));
}

}  // namespace pnsim
