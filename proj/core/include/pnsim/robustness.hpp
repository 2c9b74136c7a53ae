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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pnsim/decompose.hpp"
#include "pnsim/mesh.hpp"
#include "pnsim/pcm.hpp"

namespace pnsim {

struct ImperfectionSpec {
  double phase_sigma = 0.0;      ///< rad, std of additive phase offsets
  double coupler_sigma = 0.0;    ///< rad, std of coupler-angle deviation
  double loss_db_per_mzi = 0.0;  ///< dB, >= 0
  std::optional<int> pcm_levels;
  QuantizeTargets quantize_targets = QuantizeTargets::both;

  /// Field transmission per MZI, 10^(-dB/20).
  double transmission() const noexcept;
  void validate() const;
};

/// Gaussian phase and coupler draws, fixed loss per MZI. Draw j of MZI k is
/// a pure function of (seed, k, j), so meshes sharing placement indices
/// share draws.
ImperfectionSample sample_imperfections(const ImperfectionSpec& spec, const MeshTopology& t,
                                        std::uint64_t seed);

struct TrialRecord {
  std::uint64_t seed = 0;
  ArchTag arch = ArchTag::clements;
  std::size_t n = 0;
  double fidelity = 0.0;      ///< scale-normalized; loss shows up in throughput
  double mvm_rel_rmse = 0.0;  ///< over the probe vectors, loss included
  double throughput = 1.0;    ///< ||M||_F^2 / n
  std::optional<double> residual_after_fit;
};

struct McSummary {
  std::size_t trials = 0;
  double fid_median = 0.0, fid_mean = 0.0, fid_p5 = 0.0, fid_p95 = 0.0;
  double rmse_median = 0.0, rmse_mean = 0.0, rmse_p5 = 0.0, rmse_p95 = 0.0;
  double throughput_mean = 0.0;
  std::optional<double> fit_residual_median;
};

struct McOptions {
  FitConfig fit{};           ///< used for meshes without an analytic rule
  std::size_t probes = 10;   ///< MVM probe vectors per trial
  std::size_t jobs = 1;      ///< worker threads; results do not depend on it
};

/// Linear-interpolation percentile, p in [0, 100].
double percentile(std::vector<double> values, double p);

/// One Monte Carlo trial. Clements meshes are programmed analytically, all
/// others by fit_phases.
TrialRecord run_trial(const MeshTopology& t, const ImperfectionSpec& spec,
                      std::uint64_t trial_seed, const McOptions& opts = {});

std::vector<TrialRecord> mc_trials(const MeshTopology& t, const ImperfectionSpec& spec,
                                   std::size_t trials, std::uint64_t base_seed,
                                   const McOptions& opts = {});

McSummary summarize(const std::vector<TrialRecord>& records);

McSummary mc_fidelity(ArchTag arch, std::size_t n, const ImperfectionSpec& spec,
                      std::size_t trials, std::uint64_t base_seed, const McOptions& opts = {});
McSummary mc_fidelity(const MeshTopology& t, const ImperfectionSpec& spec,
                      std::size_t trials, std::uint64_t base_seed, const McOptions& opts = {});

/// Axes are named after ImperfectionSpec fields: phase_sigma, coupler_sigma,
/// loss_db, pcm_levels (0 = no quantization). Points are the Cartesian
/// product, last axis varying fastest.
struct SweepGrid {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  std::size_t trials_per_point = 1;
  std::uint64_t base_seed = 0;
  ImperfectionSpec base{};

  void validate() const;
  std::vector<ImperfectionSpec> points() const;
};

struct SweepRow {
  ArchTag arch = ArchTag::clements;
  std::size_t n = 0;
  ImperfectionSpec spec;
  McSummary summary;
};

/// Every architecture sees the same base seed at every grid point, so
/// targets and imperfection draws are paired. Rows: grid-point major,
/// architectures in the given order.
std::vector<SweepRow> compare_architectures(const std::vector<ArchTag>& archs, std::size_t n,
                                            const SweepGrid& grid, const McOptions& opts = {});

inline constexpr const char* kSweepCsvHeader =
    "arch,n,phase_sigma,coupler_sigma,loss_db,pcm_levels,trials,fid_median,fid_mean,"
    "fid_p5,fid_p95,rmse_median,rmse_p95,fit_residual_median";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace pnsim
