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

#include "pnsim/decompose.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "pnsim/error.hpp"

namespace pnsim {

namespace {

struct Gate {
  std::size_t top_port;
  double theta;
  double phi;
};

// W <- W * T(theta, phi)^H on columns (m, m+1).
void apply_right_inverse(CMatrix& w, const Gate& g) {
  const CMatrix t = mzi_transfer({g.theta, g.phi});
  const Complex h00 = std::conj(t(0, 0)), h01 = std::conj(t(1, 0));
  const Complex h10 = std::conj(t(0, 1)), h11 = std::conj(t(1, 1));
  for (std::size_t r = 0; r < w.rows(); ++r) {
    const Complex a = w(r, g.top_port), b = w(r, g.top_port + 1);
    w(r, g.top_port) = a * h00 + b * h10;
    w(r, g.top_port + 1) = a * h01 + b * h11;
  }
}

// W <- T(theta, phi) * W on rows (m, m+1).
void apply_left(CMatrix& w, const Gate& g) {
  const CMatrix t = mzi_transfer({g.theta, g.phi});
  for (std::size_t c = 0; c < w.cols(); ++c) {
    const Complex a = w(g.top_port, c), b = w(g.top_port + 1, c);
    w(g.top_port, c) = t(0, 0) * a + t(0, 1) * b;
    w(g.top_port + 1, c) = t(1, 0) * a + t(1, 1) * b;
  }
}

// Entries this small are already null; the bar state leaves them in place
// so that diagonal inputs decompose into all-bar meshes.
constexpr double kNullFloor = 1e-14;

// Right factor that zeroes w(row, m) using w(row, m + 1).
Gate null_from_right(const CMatrix& w, std::size_t row, std::size_t m) {
  const Complex a = w(row, m), b = w(row, m + 1);
  if (std::abs(a) <= kNullFloor) return {m, std::numbers::pi, 0.0};
  const double theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
  const double phi = (std::abs(a) > 0.0 && std::abs(b) > 0.0) ? std::arg(-a / b) : 0.0;
  return {m, theta, phi};
}

// Left factor that zeroes w(m + 1, col) using w(m, col).
Gate null_from_left(const CMatrix& w, std::size_t m, std::size_t col) {
  const Complex a = w(m, col), b = w(m + 1, col);
  if (std::abs(b) <= kNullFloor) return {m, std::numbers::pi, 0.0};
  const double theta = 2.0 * std::atan2(std::abs(a), std::abs(b));
  const double phi = (std::abs(a) > 0.0 && std::abs(b) > 0.0) ? std::arg(b / a) : 0.0;
  return {m, theta, phi};
}

}  // namespace

PhaseProgram decompose_clements(const CMatrix& u) {
  if (!u.is_square() || u.rows() == 0) throw Error("decompose_clements: target must be square");
  const double residual = unitarity_residual(u);
  if (!(residual <= kDecomposeUnitarityTol)) {
    std::ostringstream os;
    os << "decompose_clements: target is not unitary (residual " << residual
       << " > " << kDecomposeUnitarityTol << ")";
    throw Error(os.str());
  }
  const std::size_t n = u.rows();
  CMatrix w = u;
  std::vector<Gate> right, left;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (i % 2 == 0) {
      for (std::size_t j = 0; j <= i; ++j) {
        const Gate g = null_from_right(w, n - 1 - j, i - j);
        apply_right_inverse(w, g);
        right.push_back(g);
      }
    } else {
      for (std::size_t j = 1; j <= i + 1; ++j) {
        const std::size_t row = n + j - i - 2;
        const Gate g = null_from_left(w, row - 1, j - 1);
        apply_left(w, g);
        left.push_back(g);
      }
    }
  }

  // Now L_q...L_1 U R_1^H...R_p^H = D, i.e. U = L_1^H...L_q^H D R_p...R_1.
  // Rewrite T^H(theta, phi) D = D' T(theta, phi') from the innermost factor out.
  std::vector<Complex> d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = w(k, k);
  std::vector<Gate> pushed(left.size());
  for (std::size_t k = left.size(); k-- > 0;) {
    const Gate& g = left[k];
    const std::size_t m = g.top_port;
    const Complex d1 = d[m], d2 = d[m + 1];
    const Complex rot = -std::polar(1.0, -g.theta);
    pushed[k] = {m, g.theta, std::arg(d1) - std::arg(d2)};
    d[m] = rot * std::polar(1.0, -g.phi) * d2;
    d[m + 1] = rot * d2;
  }

  // Application order on an input vector: R_1..R_p, then pushed q..1.
  std::vector<Gate> order = right;
  for (std::size_t k = pushed.size(); k-- > 0;) order.push_back(pushed[k]);

  const MeshTopology topo = build_clements(n);
  // The k-th gate acting on a port pair maps onto the k-th placement of the
  // rectangular mesh on that pair.
  std::vector<std::vector<std::size_t>> slots(n);
  for (std::size_t idx = 0; idx < topo.size(); ++idx)
    slots[topo.placements()[idx].top_port].push_back(idx);
  std::vector<std::size_t> used(n, 0);

  PhaseProgram program = PhaseProgram::zeros(topo);
  for (const Gate& g : order) {
    auto& pair_slots = slots[g.top_port];
    if (used[g.top_port] >= pair_slots.size())
      throw Error("decompose_clements: internal placement mismatch");
    program.settings[pair_slots[used[g.top_port]++]] = MZISetting::wrapped(g.theta, g.phi);
  }
  for (std::size_t k = 0; k < n; ++k) program.output_phases[k] = wrap_phase(std::arg(d[k]));
  return program;
}

}  // namespace pnsim
