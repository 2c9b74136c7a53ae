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

#include "pnsim/robustness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <thread>

#include "pnsim/error.hpp"
#include "pnsim/rng.hpp"

namespace pnsim {

namespace {

constexpr std::uint64_t kOutputStreamBase = 1ULL << 32;

// Sub-seeds of one trial.
enum : std::uint64_t { kTargetSeed = 1, kImperfectionSeed = 2, kFitSeed = 3, kProbeSeed = 100 };

}  // namespace

double ImperfectionSpec::transmission() const noexcept {
  return std::pow(10.0, -loss_db_per_mzi / 20.0);
}

void ImperfectionSpec::validate() const {
  if (!(phase_sigma >= 0.0) || !std::isfinite(phase_sigma))
    throw Error("imperfections: phase_sigma must be >= 0");
  if (!(coupler_sigma >= 0.0) || !std::isfinite(coupler_sigma))
    throw Error("imperfections: coupler_sigma must be >= 0");
  if (!(loss_db_per_mzi >= 0.0) || !std::isfinite(loss_db_per_mzi))
    throw Error("imperfections: loss_db_per_mzi must be >= 0");
  if (pcm_levels && *pcm_levels < 2) throw Error("imperfections: pcm_levels must be >= 2");
}

ImperfectionSample sample_imperfections(const ImperfectionSpec& spec, const MeshTopology& t,
                                        std::uint64_t seed) {
  spec.validate();
  ImperfectionSample s = ImperfectionSample::ideal(t);
  const double tr = spec.transmission();
  for (std::size_t k = 0; k < t.size(); ++k) {
    auto& m = s.mzi[k];
    if (spec.coupler_sigma > 0.0) {
      m.coupler1_delta = spec.coupler_sigma * CounterRng::normal_at(seed, k, 0);
      m.coupler2_delta = spec.coupler_sigma * CounterRng::normal_at(seed, k, 1);
    }
    if (spec.phase_sigma > 0.0) {
      m.theta_offset = spec.phase_sigma * CounterRng::normal_at(seed, k, 2);
      m.phi_offset = spec.phase_sigma * CounterRng::normal_at(seed, k, 3);
    }
    m.transmission = tr;
  }
  if (spec.phase_sigma > 0.0)
    for (std::size_t r = 0; r < t.n_ports(); ++r)
      s.output_phase_offsets[r] =
          spec.phase_sigma * CounterRng::normal_at(seed, kOutputStreamBase + r, 0);
  return s;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error("percentile: no values");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

TrialRecord run_trial(const MeshTopology& t, const ImperfectionSpec& spec,
                      std::uint64_t trial_seed, const McOptions& opts) {
  const std::size_t n = t.n_ports();
  TrialRecord rec;
  rec.seed = trial_seed;
  rec.arch = t.arch();
  rec.n = n;

  const CMatrix target = haar_random_unitary(n, derive_seed(trial_seed, kTargetSeed));
  PhaseProgram program;
  if (t.arch() == ArchTag::clements) {
    program = decompose_clements(target);
  } else {
    FitConfig fit = opts.fit;
    fit.seed = derive_seed(trial_seed, kFitSeed);
    fit.jobs = 1;
    const FitResult fr = fit_phases(t, target, fit);
    program = fr.program;
    rec.residual_after_fit = fr.residual;
  }
  if (spec.pcm_levels) program = quantize_program(program, *spec.pcm_levels, spec.quantize_targets);

  const ImperfectionSample imp =
      sample_imperfections(spec, t, derive_seed(trial_seed, kImperfectionSeed));
  const CMatrix realized = forward_matrix(t, program, &imp);
  rec.fidelity = normalized_fidelity(target, realized);
  const double fro = realized.frobenius_norm();
  rec.throughput = fro * fro / static_cast<double>(n);

  double err = 0.0, ref = 0.0;
  for (std::size_t k = 0; k < opts.probes; ++k) {
    const CVector x = random_unit_vector(n, derive_seed(trial_seed, kProbeSeed + k));
    const CVector want = matvec(target, x);
    const CVector got = apply_mesh(t, program, x, &imp);
    for (std::size_t i = 0; i < n; ++i) {
      err += std::norm(got[i] - want[i]);
      ref += std::norm(want[i]);
    }
  }
  rec.mvm_rel_rmse = ref > 0.0 ? std::sqrt(err / ref) : 0.0;
  return rec;
}

std::vector<TrialRecord> mc_trials(const MeshTopology& t, const ImperfectionSpec& spec,
                                   std::size_t trials, std::uint64_t base_seed,
                                   const McOptions& opts) {
  if (trials == 0) throw Error("mc_fidelity: trials must be >= 1");
  spec.validate();
  std::vector<TrialRecord> out(trials);
  const std::size_t jobs = std::clamp<std::size_t>(opts.jobs, 1, trials);
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < trials; i += jobs)
      out[i] = run_trial(t, spec, derive_seed(base_seed, i), opts);
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  return out;
}

McSummary summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw Error("summarize: no trials");
  std::vector<double> fid, rmse, resid;
  double thr = 0.0;
  for (const auto& r : records) {
    fid.push_back(r.fidelity);
    rmse.push_back(r.mvm_rel_rmse);
    thr += r.throughput;
    if (r.residual_after_fit) resid.push_back(*r.residual_after_fit);
  }
  const double count = static_cast<double>(records.size());
  McSummary s;
  s.trials = records.size();
  s.fid_median = percentile(fid, 50.0);
  s.fid_mean = std::accumulate(fid.begin(), fid.end(), 0.0) / count;
  s.fid_p5 = percentile(fid, 5.0);
  s.fid_p95 = percentile(fid, 95.0);
  s.rmse_median = percentile(rmse, 50.0);
  s.rmse_mean = std::accumulate(rmse.begin(), rmse.end(), 0.0) / count;
  s.rmse_p5 = percentile(rmse, 5.0);
  s.rmse_p95 = percentile(rmse, 95.0);
  s.throughput_mean = thr / count;
  if (!resid.empty()) s.fit_residual_median = percentile(resid, 50.0);
  return s;
}

McSummary mc_fidelity(const MeshTopology& t, const ImperfectionSpec& spec, std::size_t trials,
                      std::uint64_t base_seed, const McOptions& opts) {
  return summarize(mc_trials(t, spec, trials, base_seed, opts));
}

McSummary mc_fidelity(ArchTag arch, std::size_t n, const ImperfectionSpec& spec,
                      std::size_t trials, std::uint64_t base_seed, const McOptions& opts) {
  return mc_fidelity(build_topology(arch, n), spec, trials, base_seed, opts);
}

void SweepGrid::validate() const {
  if (axes.empty()) throw Error("sweep grid: no axes");
  if (trials_per_point == 0) throw Error("sweep grid: trials must be >= 1");
  for (const auto& [name, values] : axes) {
    if (name != "phase_sigma" && name != "coupler_sigma" && name != "loss_db" &&
        name != "pcm_levels")
      throw ParseError("sweep grid: unknown axis '" + name + "'");
    if (values.empty()) throw ParseError("sweep grid: axis '" + name + "' is empty");
    if (name == "pcm_levels") {
      for (double v : values)
        if (v != 0.0 && (v < 2.0 || v != std::floor(v)))
          throw ParseError("sweep grid: pcm_levels values must be 0 or integers >= 2");
    }
  }
}

std::vector<ImperfectionSpec> SweepGrid::points() const {
  validate();
  std::vector<ImperfectionSpec> pts{base};
  for (const auto& [name, values] : axes) {
    std::vector<ImperfectionSpec> next;
    for (const auto& p : pts) {
      for (double v : values) {
        ImperfectionSpec s = p;
        if (name == "phase_sigma") s.phase_sigma = v;
        else if (name == "coupler_sigma") s.coupler_sigma = v;
        else if (name == "loss_db") s.loss_db_per_mzi = v;
        else if (v == 0.0) s.pcm_levels.reset();
        else s.pcm_levels = static_cast<int>(v);
        s.validate();
        next.push_back(s);
      }
    }
    pts = std::move(next);
  }
  return pts;
}

std::vector<SweepRow> compare_architectures(const std::vector<ArchTag>& archs, std::size_t n,
                                            const SweepGrid& grid, const McOptions& opts) {
  if (archs.empty()) throw Error("compare_architectures: no architectures");
  std::vector<MeshTopology> topos;
  for (ArchTag a : archs) topos.push_back(build_topology(a, n));
  std::vector<SweepRow> rows;
  for (const auto& spec : grid.points()) {
    for (const auto& t : topos) {
      SweepRow row;
      row.arch = t.arch();
      row.n = n;
      row.spec = spec;
      row.summary = mc_fidelity(t, spec, grid.trials_per_point, grid.base_seed, opts);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out << to_string(r.arch) << ',' << r.n << ',' << num(r.spec.phase_sigma) << ','
        << num(r.spec.coupler_sigma) << ',' << num(r.spec.loss_db_per_mzi) << ','
        << (r.spec.pcm_levels ? *r.spec.pcm_levels : 0) << ',' << s.trials << ','
        << num(s.fid_median) << ',' << num(s.fid_mean) << ',' << num(s.fid_p5) << ','
        << num(s.fid_p95) << ',' << num(s.rmse_median) << ',' << num(s.rmse_p95) << ','
        << (s.fit_residual_median ? num(*s.fit_residual_median) : std::string()) << '\n';
  }
}

}  // namespace pnsim
