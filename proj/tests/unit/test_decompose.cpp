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

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include "oracles.hpp"
#include "pnsim/decompose.hpp"
#include "pnsim/error.hpp"
#include "pnsim/robustness.hpp"

namespace pnsim {
namespace {

constexpr double kPi = std::numbers::pi;

// Round-trip fidelity evaluated with the embedded-product oracle, not with
// the library's forward pass.
double round_trip(const CMatrix& u) {
  const MeshTopology t = build_clements(u.rows());
  const PhaseProgram p = decompose_clements(u);
  return oracle::trace_fidelity(oracle::mesh_forward(t, p), u);
}

TEST(Clements, IdentityRoundTrip) { EXPECT_NEAR(round_trip(CMatrix::identity(4)), 1.0, 1e-12); }

TEST(Clements, DiagonalUsesBarStates) {
  std::vector<Complex> d;
  for (int k = 0; k < 5; ++k) d.push_back(std::polar(1.0, 0.7 * k + 0.1));
  const CMatrix u = CMatrix::diagonal(d);
  const PhaseProgram p = decompose_clements(u);
  for (const auto& s : p.settings) {
    const double off = std::min(std::abs(s.theta - kPi), 2 * kPi - std::abs(s.theta - kPi));
    EXPECT_LT(off, 1e-9);
  }
  EXPECT_GE(round_trip(u), 1.0 - 1e-10);
}

TEST(Clements, HaarRoundTripExact) {
  const CMatrix u = haar_random_unitary(8, 3);
  EXPECT_GE(round_trip(u), 1.0 - 1e-9);
  // The program reproduces the matrix itself, not just up to phase.
  const MeshTopology t = build_clements(8);
  EXPECT_LE(max_abs_diff(forward_matrix(t, decompose_clements(u)), u), 1e-10);
}

TEST(Clements, RoundTripAcrossSizes) {
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 8u, 11u, 16u})
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      ASSERT_GE(round_trip(haar_random_unitary(n, seed)), 1.0 - 1e-9) << n << " " << seed;
}

TEST(Clements, PermutationRoundTrip) {
  CMatrix p(4, 4);
  p(0, 2) = p(1, 0) = p(2, 3) = p(3, 1) = 1.0;
  EXPECT_GE(round_trip(p), 1.0 - 1e-10);
}

TEST(Clements, SettingsAreWrapped) {
  const PhaseProgram p = decompose_clements(haar_random_unitary(6, 1));
  for (const auto& s : p.settings) {
    EXPECT_GE(s.theta, 0.0);
    EXPECT_LT(s.theta, 2 * kPi);
    EXPECT_GE(s.phi, 0.0);
    EXPECT_LT(s.phi, 2 * kPi);
  }
}

TEST(Clements, NonUnitaryRejectedWithResidual) {
  CMatrix a = haar_random_unitary(4, 1);
  a(0, 0) += 0.01;
  try {
    decompose_clements(a);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
  EXPECT_THROW(decompose_clements(CMatrix(2, 3)), Error);
}

TEST(Fit, RecoversProgramOnSameMesh) {
  for (ArchTag arch : {ArchTag::clements, ArchTag::fldzhyan}) {
    const MeshTopology t = build_topology(arch, 4);
    const CMatrix target = forward_matrix(t, oracle::random_program(t, 8));
    FitConfig cfg;
    cfg.restarts = 6;
    cfg.seed = 1;
    const FitResult r = fit_phases(t, target, cfg);
    EXPECT_LE(r.residual, 1e-6) << to_string(arch);
    EXPECT_NEAR(r.residual, 1.0 - fidelity(forward_matrix(t, r.program), target), 1e-12);
  }
}

TEST(Fit, ClementsUniversalAtFour) {
  const MeshTopology t = build_clements(4);
  FitConfig cfg;
  cfg.restarts = 10;
  cfg.seed = 5;
  EXPECT_LE(fit_phases(t, haar_random_unitary(4, 21), cfg).residual, 1e-6);
}

TEST(Fit, FoldsGlobalPhase) {
  const MeshTopology t = build_fldzhyan(4);
  const CMatrix u = haar_random_unitary(4, 2);
  FitConfig cfg;
  cfg.restarts = 8;
  const FitResult r = fit_phases(t, u, cfg);
  ASSERT_LE(r.residual, 1e-8);
  EXPECT_LE(max_abs_diff(forward_matrix(t, r.program), u), 1e-3);
}

TEST(Fit, DeterministicAndJobsIndependent) {
  const MeshTopology t = build_fldzhyan(4);
  const CMatrix u = haar_random_unitary(4, 9);
  FitConfig a;
  a.restarts = 4;
  a.seed = 77;
  FitConfig b = a;
  b.jobs = 4;
  const FitResult ra = fit_phases(t, u, a);
  const FitResult rb = fit_phases(t, u, b);
  EXPECT_EQ(ra.program, rb.program);
  EXPECT_EQ(ra.best_restart, rb.best_restart);
  EXPECT_EQ(ra.residual, rb.residual);
}

TEST(Fit, RemovingLastLayerHurts) {
  const MeshTopology full = build_clements(4);
  const MeshTopology cut = full.without_last_layer();
  ASSERT_LT(cut.size(), full.size());
  FitConfig cfg;
  cfg.restarts = 3;
  cfg.max_iterations = 200;
  std::vector<double> rf, rc;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const CMatrix u = haar_random_unitary(4, 1000 + s);
    cfg.seed = s;
    rf.push_back(fit_phases(full, u, cfg).residual);
    rc.push_back(fit_phases(cut, u, cfg).residual);
  }
  EXPECT_GT(percentile(rc, 50.0), percentile(rf, 50.0));
}

TEST(Fit, ShapeMismatchThrows) {
  EXPECT_THROW(fit_phases(build_clements(4), CMatrix::identity(3), {}), Error);
}

}  // namespace
}  // namespace pnsim
