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

// Reference implementations used only by tests. Each one is written from the
// defining formula, without calling the library routine it checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "pnsim/linalg.hpp"
#include "pnsim/mesh.hpp"
#include "pnsim/rng.hpp"

namespace pnsim::oracle {

using Dense = std::vector<std::vector<Complex>>;

inline Dense to_dense(const CMatrix& m) {
  Dense d(m.rows(), std::vector<Complex>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) d[r][c] = m(r, c);
  return d;
}

inline Dense identity(std::size_t n) {
  Dense d(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 1.0;
  return d;
}

/// Textbook triple loop, j-inner.
inline Dense matmul(const Dense& a, const Dense& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Dense c(n, std::vector<Complex>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Complex s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i][p] * b[p][j];
      c[i][j] = s;
    }
  return c;
}

inline std::vector<Complex> matvec(const Dense& a, const std::vector<Complex>& x) {
  std::vector<Complex> y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline double max_abs_diff(const Dense& a, const CMatrix& b) {
  double e = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < a[r].size(); ++c) e = std::max(e, std::abs(a[r][c] - b(r, c)));
  return e;
}

/// Closed form of the ideal MZI in the coupler-phase-coupler-phase
/// convention: i e^{i theta/2} [[e^{i phi} s, c], [e^{i phi} c, -s]] with
/// s = sin(theta/2), c = cos(theta/2).
inline std::array<Complex, 4> mzi_closed_form(double theta, double phi) {
  const Complex pre = Complex(0.0, 1.0) * std::polar(1.0, theta / 2.0);
  const double s = std::sin(theta / 2.0), c = std::cos(theta / 2.0);
  const Complex e = std::polar(1.0, phi);
  return {pre * e * s, pre * c, pre * e * c, -pre * s};
}

/// Full-matrix product of embedded MZIs, left-multiplied in placement order,
/// then the output phase screen. Ideal components only.
inline Dense mesh_forward(const MeshTopology& t, const PhaseProgram& p) {
  const std::size_t n = t.n_ports();
  Dense acc = identity(n);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto m = mzi_closed_form(p.settings[k].theta, p.settings[k].phi);
    Dense e = identity(n);
    const std::size_t a = t.placements()[k].top_port;
    e[a][a] = m[0];
    e[a][a + 1] = m[1];
    e[a + 1][a] = m[2];
    e[a + 1][a + 1] = m[3];
    acc = matmul(e, acc);
  }
  for (std::size_t r = 0; r < n; ++r)
    for (auto& z : acc[r]) z *= std::polar(1.0, p.output_phases[r]);
  return acc;
}

/// |Tr(u^H v)|^2 / N^2 from the definition.
inline double trace_fidelity(const Dense& u, const CMatrix& v) {
  Complex tr = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t k = 0; k < u.size(); ++k) tr += std::conj(u[k][i]) * v(k, i);
  const double n = static_cast<double>(u.size());
  return std::norm(tr) / (n * n);
}

/// Uniform random phase program for `t`, independent of library RNG helpers
/// only in how draws are consumed.
inline PhaseProgram random_program(const MeshTopology& t, std::uint64_t seed) {
  CounterRng rng(seed, 77);
  PhaseProgram p;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < t.size(); ++k)
    p.settings.push_back(MZISetting{two_pi * rng.uniform(), two_pi * rng.uniform()});
  for (std::size_t r = 0; r < t.n_ports(); ++r) p.output_phases.push_back(two_pi * rng.uniform());
  return p;
}

inline CMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                             double scale = 1.0) {
  CounterRng rng(seed, 91);
  CMatrix m(rows, cols);
  for (auto& z : m.values()) z = scale * Complex(rng.normal(), rng.normal());
  return m;
}

inline double relative_l2(const std::vector<Complex>& got, const std::vector<Complex>& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    num += std::norm(got[i] - want[i]);
    den += std::norm(want[i]);
  }
  return std::sqrt(num / den);
}

/// Saturating Q1.15 from its definition: round(v * 2^15) clamped to int16.
inline double q15_round_trip(double v) {
  const double s = std::clamp(std::nearbyint(v * 32768.0), -32768.0, 32767.0);
  return s / 32768.0;
}

}  // namespace pnsim::oracle
