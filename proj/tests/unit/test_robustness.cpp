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

#include <cmath>
#include <sstream>

#include "pnsim/error.hpp"
#include "pnsim/robustness.hpp"

namespace pnsim {
namespace {

TEST(Sample, ZeroSpecIsIdeal) {
  const MeshTopology t = build_clements(6);
  EXPECT_EQ(sample_imperfections({}, t, 5), ImperfectionSample::ideal(t));
}

TEST(Sample, Deterministic) {
  const MeshTopology t = build_clements(6);
  ImperfectionSpec spec;
  spec.phase_sigma = 0.1;
  spec.coupler_sigma = 0.05;
  spec.loss_db_per_mzi = 0.2;
  EXPECT_EQ(sample_imperfections(spec, t, 9), sample_imperfections(spec, t, 9));
  EXPECT_NE(sample_imperfections(spec, t, 9), sample_imperfections(spec, t, 10));
}

TEST(Sample, PhaseStdMatchesSigma) {
  // 10^4 draws: enough MZIs on one large mesh plus a few seeds.
  ImperfectionSpec spec;
  spec.phase_sigma = 0.1;
  const MeshTopology t = build_clements(32);
  std::vector<double> draws;
  for (std::uint64_t seed = 0; draws.size() < 10000; ++seed) {
    const ImperfectionSample s = sample_imperfections(spec, t, seed);
    for (const auto& m : s.mzi) {
      draws.push_back(m.theta_offset);
      draws.push_back(m.phi_offset);
    }
  }
  draws.resize(10000);
  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= draws.size();
  double var = 0.0;
  for (double d : draws) var += (d - mean) * (d - mean);
  const double sd = std::sqrt(var / (draws.size() - 1));
  EXPECT_NEAR(sd, 0.1, 0.005);
}

TEST(Sample, LossToTransmission) {
  ImperfectionSpec spec;
  spec.loss_db_per_mzi = 20.0;
  EXPECT_NEAR(spec.transmission(), 0.1, 1e-12);
  spec.loss_db_per_mzi = -1.0;
  EXPECT_THROW(spec.validate(), Error);
}

TEST(McFidelity, IdealIsExact) {
  for (std::size_t n : {2u, 8u, 16u}) {
    const McSummary s = mc_fidelity(ArchTag::clements, n, {}, 20, 3);
    EXPECT_GE(s.fid_median, 1.0 - 1e-9);
    EXPECT_GE(s.fid_p5, 1.0 - 1e-9);
    EXPECT_LE(s.rmse_p95, 1e-9);
  }
}

TEST(McFidelity, PhaseNoiseLowersMedian) {
  ImperfectionSpec noisy;
  noisy.phase_sigma = 0.2;
  const McSummary clean = mc_fidelity(ArchTag::clements, 8, {}, 500, 42);
  const McSummary dirty = mc_fidelity(ArchTag::clements, 8, noisy, 500, 42);
  EXPECT_LT(dirty.fid_median, clean.fid_median);
}

TEST(McFidelity, LossLeavesFidelityButCutsThroughput) {
  ImperfectionSpec lossy;
  lossy.loss_db_per_mzi = 0.5;
  const McSummary s = mc_fidelity(ArchTag::clements, 4, lossy, 10, 1);
  // Edge waveguides skip MZIs in alternate columns, so per-MZI loss is not a
  // pure global scalar. The normalized fidelity only sees that imbalance.
  EXPECT_GT(s.fid_median, 0.99);
  EXPECT_LT(s.fid_median, 1.0);
  EXPECT_LT(s.throughput_mean, 0.9);
  EXPECT_GT(s.rmse_median, 0.05);
}

TEST(McFidelity, QuantizationLadder) {
  std::vector<double> medians;
  for (int levels = 4; levels <= 256; levels *= 2) {
    ImperfectionSpec spec;
    spec.pcm_levels = levels;
    medians.push_back(mc_fidelity(ArchTag::clements, 8, spec, 200, 7).fid_median);
  }
  int inversions = 0;
  for (std::size_t i = 1; i < medians.size(); ++i)
    if (medians[i] < medians[i - 1]) ++inversions;
  EXPECT_LE(inversions, 1);
  EXPECT_GT(medians.back(), medians.front());
}

TEST(McFidelity, JobsDoNotChangeResults) {
  ImperfectionSpec spec;
  spec.phase_sigma = 0.05;
  spec.coupler_sigma = 0.02;
  McOptions one, four;
  four.jobs = 4;
  const auto a = mc_trials(build_clements(6), spec, 30, 8, one);
  const auto b = mc_trials(build_clements(6), spec, 30, 8, four);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].fidelity, b[i].fidelity);
    EXPECT_EQ(a[i].mvm_rel_rmse, b[i].mvm_rel_rmse);
  }
}

TEST(McFidelity, ZeroTrialsRejected) {
  EXPECT_THROW(mc_fidelity(ArchTag::clements, 4, {}, 0, 1), Error);
}

TEST(Percentile, Interpolates) {
  EXPECT_DOUBLE_EQ(percentile({3, 1, 2}, 50), 2.0);
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 50), 2.5);
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 0), 1.0);
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4}, 100), 4.0);
  EXPECT_THROW(percentile({}, 50), Error);
}

SweepGrid three_point_grid() {
  SweepGrid g;
  g.axes = {{"phase_sigma", {0.0, 0.05, 0.1}}};
  g.trials_per_point = 4;
  g.base_seed = 11;
  return g;
}

McOptions quick_fit() {
  McOptions o;
  o.fit.restarts = 2;
  o.fit.max_iterations = 200;
  o.probes = 4;
  return o;
}

TEST(Compare, SinglePointMatchesMcFidelity) {
  SweepGrid g;
  g.axes = {{"coupler_sigma", {0.03}}};
  g.trials_per_point = 12;
  g.base_seed = 4;
  const auto rows = compare_architectures({ArchTag::clements}, 6, g);
  ASSERT_EQ(rows.size(), 1u);
  ImperfectionSpec spec;
  spec.coupler_sigma = 0.03;
  const McSummary direct = mc_fidelity(ArchTag::clements, 6, spec, 12, 4);
  EXPECT_EQ(rows[0].summary.fid_median, direct.fid_median);
  EXPECT_EQ(rows[0].summary.rmse_p95, direct.rmse_p95);
}

TEST(Compare, ShapeAndIdealConvergence) {
  const auto rows =
      compare_architectures({ArchTag::clements, ArchTag::fldzhyan}, 4, three_point_grid(),
                            quick_fit());
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].arch, i % 2 == 0 ? ArchTag::clements : ArchTag::fldzhyan);
    EXPECT_EQ(rows[i].spec.phase_sigma, (std::vector<double>{0.0, 0.05, 0.1})[i / 2]);
  }
  EXPECT_GE(rows[0].summary.fid_p5, 1.0 - 1e-6);
  EXPECT_GE(rows[1].summary.fid_p5, 1.0 - 1e-6);
  ASSERT_TRUE(rows[1].summary.fit_residual_median.has_value());
  EXPECT_FALSE(rows[0].summary.fit_residual_median.has_value());
}

TEST(Compare, PairedTargetsAcrossArchitectures) {
  // The same trial seed draws the same target regardless of mesh, so an
  // ideal point gives the same Clements fidelity whether or not another
  // architecture runs beside it.
  const auto both = mc_trials(build_clements(4), {}, 5, 3, quick_fit());
  const auto fl = mc_trials(build_fldzhyan(4), {}, 5, 3, quick_fit());
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(both[i].seed, fl[i].seed);
}

TEST(Grid, CartesianProductInFileOrder) {
  SweepGrid g;
  g.axes = {{"phase_sigma", {0.0, 0.1}}, {"pcm_levels", {0, 16}}};
  const auto pts = g.points();
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_FALSE(pts[0].pcm_levels.has_value());
  EXPECT_EQ(pts[1].pcm_levels, 16);
  EXPECT_EQ(pts[2].phase_sigma, 0.1);
  g.axes.push_back({"temperature", {1.0}});
  EXPECT_THROW(g.points(), ParseError);
}

TEST(Csv, ReproducibleBytes) {
  SweepGrid g = three_point_grid();
  auto render = [&] {
    std::ostringstream os;
    write_sweep_csv(os, compare_architectures({ArchTag::clements}, 4, g));
    return os.str();
  };
  const std::string a = render();
  EXPECT_EQ(a, render());
  EXPECT_EQ(a.substr(0, a.find('\n')), kSweepCsvHeader);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 4);
}

}  // namespace
}  // namespace pnsim
