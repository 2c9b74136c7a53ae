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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Tolerances and time budgets are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "device_cases.hpp"
#include "oracles.hpp"
#include "pnsim/decompose.hpp"
#include "pnsim/faults.hpp"
#include "pnsim/mvm.hpp"
#include "pnsim/robustness.hpp"

namespace pnsim {
namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. Analytic decomposition round trip, scored by an independent forward pass.
Verdict clements_round_trip() {
  constexpr double kTol = 1e-9;
  Verdict v;
  double worst = 1.0;
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    const MeshTopology t = build_clements(n);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const CMatrix u = haar_random_unitary(n, seed);
      const double f = oracle::trace_fidelity(oracle::mesh_forward(t, decompose_clements(u)), u);
      worst = std::min(worst, f);
    }
  }
  v.require(worst >= 1.0 - kTol, "fidelity " + fmt("%.17g", worst));
  v.detail = "min fidelity " + fmt("%.15f", worst) + (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

// 2. The 8x8 core is a 28-MZI mesh.
Verdict mesh_size() {
  Verdict v;
  const MeshTopology t = build_clements(8);
  v.require(t.n_ports() == 8, "ports");
  v.require(t.size() == 28 && t.size() == 8 * 7 / 2, "mzi count " + std::to_string(t.size()));
  const CMatrix m = forward_matrix(t, PhaseProgram::zeros(t));
  v.require(m.rows() == 8 && m.cols() == 8, "shape");
  if (v.pass) v.detail = "28 MZIs, 8x8";
  return v;
}

// 3. Programmed mesh against a direct complex matmul.
Verdict mvm_oracle() {
  constexpr double kTol = 1e-9;
  Verdict v;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const CMatrix a = oracle::random_matrix(8, 8, derive_seed(31, s));
    const CVector x = oracle::random_matrix(8, 1, derive_seed(32, s)).column(0);
    double fs = 0.0;
    for (const auto& z : x) fs = std::max(fs, std::abs(z));
    const auto y = run_mvm(synthesize_general_matrix(a), encode_vector(x, fs));
    const auto want = oracle::matvec(oracle::to_dense(a), {x.begin(), x.end()});
    worst = std::max(worst, oracle::relative_l2({y[0].begin(), y[0].end()}, want));
  }
  v.require(worst <= kTol, "error above tolerance");
  v.detail = "max rel l2 " + fmt("%.3e", worst) + (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

double rel_frobenius(const CMatrix& got, const CMatrix& a, const CMatrix& b) {
  const auto want = oracle::matmul(oracle::to_dense(a), oracle::to_dense(b));
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.rows(); ++i)
    for (std::size_t j = 0; j < got.cols(); ++j) {
      num += std::norm(got(i, j) - want[i][j]);
      den += std::norm(want[i][j]);
    }
  return std::sqrt(num / den);
}

// 4. TDM and WDM schedules agree exactly and match the oracle.
Verdict gemm_consistency() {
  constexpr double kTol = 1e-8;
  Verdict v;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const CMatrix a = oracle::random_matrix(8, 8, derive_seed(41, s));
    const CMatrix b = oracle::random_matrix(8, 8, derive_seed(42, s));
    const GemmResult tdm = run_gemm(a, b, {GemmMode::tdm, 1, {}});
    worst = std::max(worst, rel_frobenius(tdm.product, a, b));
    v.require(tdm.programming_events == 1, "tdm programmed more than once");
    for (std::size_t k : {2u, 4u}) {
      const GemmResult wdm = run_gemm(a, b, {GemmMode::wdm, k, {}});
      v.require(wdm.product == tdm.product, "wdm K=" + std::to_string(k) + " differs from tdm");
      v.require(wdm.programming_events == 1, "wdm programmed more than once");
      worst = std::max(worst, rel_frobenius(wdm.product, a, b));
    }
  }
  v.require(worst <= kTol, "error above tolerance");
  v.detail = "bit-identical, max rel frob " + fmt("%.3e", worst) +
             (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

// 5. SVD program reconstruction, elementwise relative error.
Verdict synthesis() {
  constexpr double kTol = 1e-8;
  Verdict v;
  double worst = 0.0;
  for (std::size_t n : {4u, 8u}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const CMatrix a = oracle::random_matrix(n, n, derive_seed(50 + n, s));
      const CMatrix r = general_forward_matrix(synthesize_general_matrix(a));
      for (std::size_t i = 0; i < a.values().size(); ++i)
        worst = std::max(worst, std::abs(r.values()[i] - a.values()[i]) / std::abs(a.values()[i]));
    }
  }
  v.require(worst <= kTol, "error above tolerance");
  v.detail = "max elementwise rel " + fmt("%.3e", worst) +
             (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

// 6. More PCM levels give better fidelity; quantization error is bounded.
Verdict pcm_ladder() {
  Verdict v;
  ImperfectionSpec coarse, fine;
  coarse.pcm_levels = 4;
  fine.pcm_levels = 256;
  const double m4 = mc_fidelity(ArchTag::clements, 8, coarse, 200, 606).fid_median;
  const double m256 = mc_fidelity(ArchTag::clements, 8, fine, 200, 606).fid_median;
  v.require(m256 > m4, "256-level median not above 4-level median");
  CounterRng rng(66);
  bool bounded = true;
  for (int levels = 2; levels <= 1024; levels *= 2) {
    for (int i = 0; i < 5000; ++i) {
      const double phi = 2 * kPi * rng.uniform();
      const double d = std::fmod(std::abs(quantize_phase(phi, levels).phase - phi), 2 * kPi);
      bounded &= std::min(d, 2 * kPi - d) <= kPi / levels;
    }
  }
  v.require(bounded, "quantization error above pi/L");
  v.detail = "median F(4)=" + fmt("%.6f", m4) + " F(256)=" + fmt("%.9f", m256) +
             (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

// 7. Phase noise lowers paired median fidelity; sweep CSV is reproducible.
Verdict robustness() {
  Verdict v;
  ImperfectionSpec noisy;
  noisy.phase_sigma = 0.2;
  const double clean = mc_fidelity(ArchTag::clements, 8, {}, 500, 707).fid_median;
  const double dirty = mc_fidelity(ArchTag::clements, 8, noisy, 500, 707).fid_median;
  v.require(dirty < clean, "noisy median not below clean median");

  SweepGrid grid;
  grid.axes = {{"phase_sigma", {0.0, 0.2}}};
  grid.trials_per_point = 500;
  grid.base_seed = 707;
  auto csv = [&](std::size_t jobs) {
    McOptions o;
    o.jobs = jobs;
    std::ostringstream os;
    write_sweep_csv(os, compare_architectures({ArchTag::clements}, 8, grid, o));
    return os.str();
  };
  const std::string first = csv(1);
  v.require(first == csv(1), "CSV differs between identical runs");
  v.require(first == csv(4), "CSV depends on thread count");
  v.detail = "median F(0)=" + fmt("%.12f", clean) + " F(0.2)=" + fmt("%.6f", dirty) +
             (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

// 8. Non-volatile weights hold for free; heaters pay power times time.
Verdict energy_contrast() {
  Verdict v;
  const auto c = testing::make_case(8, 4, 808);
  HostOp hold;
  hold.kind = HostOp::Kind::delay;
  hold.ps = 1'000'000'000;  // 1 ms of held weights
  HostScript script = c.script;
  script.ops.push_back(hold);

  DeviceConfig pcm;
  const RunResult a = run_device(pcm, c.image, script);
  DeviceConfig thermo;
  thermo.weights = WeightTechnology::thermo_optic;
  thermo.thermo.p_pi_w = 0.02;
  const RunResult b = run_device(thermo, c.image, script);

  v.require(!a.timeout_hit && !b.timeout_hit, "run did not complete");
  v.require(a.ledger.static_hold_j == 0.0, "PCM hold energy nonzero");
  v.require(a.hold_time_ps > 0, "PCM hold time zero");
  const double expect = b.hold_power_w * (static_cast<double>(b.hold_time_ps) * 1e-12);
  v.require(b.ledger.static_hold_j == expect, "thermo hold energy != power x time");
  v.require(b.ledger.static_hold_j > 0.0, "thermo hold energy zero");
  v.detail = "pcm 0 J; thermo " + fmt("%.6g", b.hold_power_w) + " W x " +
             fmt("%.6g", b.hold_time_ps * 1e-12) + " s = " + fmt("%.6g", b.ledger.static_hold_j) +
             " J" + (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

// 9. Scripted device runs against the library, plus protocol invariants.
Verdict device_equivalence() {
  constexpr double kTol = 1.0 / 16384.0;  // 2^-14 per real component
  Verdict v;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto c = testing::make_case(8, 1 + s % 4, derive_seed(909, s));
    // Poll STATUS while each command is in flight.
    HostScript script;
    for (const auto& op : c.script.ops) {
      if (op.kind == HostOp::Kind::wait_irq) {
        for (int i = 0; i < 40; ++i) {
          script.ops.push_back({HostOp::Kind::read, reg::kStatus});
          HostOp d;
          d.kind = HostOp::Kind::delay;
          d.ps = 173;
          script.ops.push_back(d);
        }
      }
      script.ops.push_back(op);
    }
    const RunResult r = run_device({}, c.image, script);
    const RunResult again = run_device({}, c.image, script);
    v.require(!r.timeout_hit, "run hung");
    v.require(r.trace.digest() == again.trace.digest(), "trace digest not deterministic");
    v.require(r.commands_completed == 2 && r.irq_count == 2 && r.trace.count("irq_raise") == 2,
              "IRQ count != commands");
    for (std::uint32_t st : r.reads)
      if ((st & status::kBusy) && (st & status::kDone)) v.require(false, "BUSY and DONE together");
    const std::string sm = testing::check_state_machine(r.trace);
    v.require(sm.empty(), sm);

    // Library: a programmed core fed the same unquantized operands.
    PhotonicCore core(8);
    core.program(c.weights);
    const CMatrix got = unpack_outputs(c.layout, r.host_memory);
    double fs = 0.0;
    for (const auto& z : c.inputs.values()) fs = std::max(fs, std::abs(z));
    for (std::size_t j = 0; j < c.inputs.cols(); ++j) {
      const CVector want = core.infer(encode_vector(c.inputs.column(j), fs))[0];
      for (std::size_t i = 0; i < 8; ++i) {
        worst = std::max(worst, std::abs(got(i, j).real() - want[i].real()));
        worst = std::max(worst, std::abs(got(i, j).imag() - want[i].imag()));
      }
    }
  }
  v.require(worst <= kTol, "component error above 2^-14");
  v.detail = "max component error " + fmt("%.3e", worst) +
             (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

// 10. Fault campaign sanity.
Verdict fault_campaign() {
  Verdict v;
  const auto c = testing::make_case(8, 2, 1010);
  const RunResult gold = run_device({}, c.image, c.script);

  // Flips on weight words before the weights DMA rewrites them.
  const auto early = exhaustive_spm(c.layout.weights_addr / 4, 8, 0);
  const CampaignResult masked = campaign({}, c.image, c.script, early, kDefaultFaultTolerance, 4);
  v.require(masked.histogram[static_cast<int>(Outcome::masked)] == early.size(),
            "overwritten transients not all Masked");

  const FaultSpec stuck{MmrFault{reg::kCtrl, 0, 0}, FaultKind::permanent, 0};
  const CampaignResult hang = campaign({}, c.image, c.script, std::span(&stuck, 1));
  v.require(hang.rows[0].outcome == Outcome::hang, "CTRL stuck-at-0 not Hang");
  v.require(run_device({}, c.image, c.script, std::span(&stuck, 1)).timeout_hit,
            "CTRL stuck-at-0 did not time out");

  std::uint64_t written = 0;
  for (const auto& e : gold.trace.events)
    if (e.kind == "state" && e.detail == "COMPUTING->DONE") written = e.t_ps + 1;
  const auto out_faults = exhaustive_spm(c.layout.output_addr / 4, 8 * 2, written);
  const CampaignResult out = campaign({}, c.image, c.script, out_faults, kDefaultFaultTolerance, 4);
  v.require(out.histogram[static_cast<int>(Outcome::hang)] == 0 &&
                out.histogram[static_cast<int>(Outcome::detected)] == 0,
            "output-region flips outside {Masked, SDC}");

  RandomFaultConfig rc;
  rc.count = 300;
  rc.seed = 1010;
  rc.spm_words = c.layout.bytes() / 4;
  rc.phase_sites = Device({}).phase_fault_sites();
  rc.n_ports = 8;
  rc.pcm_levels = placeholder_pcm_model().num_levels();
  rc.horizon_ps = gold.total_time_ps;
  auto table = [&](std::size_t jobs) {
    std::ostringstream os;
    write_campaign_csv(os, campaign({}, c.image, c.script, random_faults(rc),
                                    kDefaultFaultTolerance, jobs));
    return os.str();
  };
  const std::string t1 = table(1);
  v.require(t1 == table(1) && t1 == table(4), "campaign table not reproducible");

  v.detail = "masked " + std::to_string(early.size()) + "/" + std::to_string(early.size()) +
             ", output region Masked=" +
             std::to_string(out.histogram[static_cast<int>(Outcome::masked)]) +
             " SDC=" + std::to_string(out.histogram[static_cast<int>(Outcome::sdc)]) +
             (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

}  // namespace
}  // namespace pnsim

int main() {
  using namespace pnsim;
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> check;
  };
  const Criterion criteria[] = {
      {1, "clements round trip", 5, clements_round_trip},
      {2, "8x8 mesh has 28 MZIs", 1, mesh_size},
      {3, "mvm matches matmul", 5, mvm_oracle},
      {4, "gemm tdm == wdm", 10, gemm_consistency},
      {5, "general-matrix synthesis", 10, synthesis},
      {6, "pcm quantization ladder", 60, pcm_ladder},
      {7, "robustness monotonicity", 120, robustness},
      {8, "pcm vs thermo hold energy", 1, energy_contrast},
      {9, "device vs library", 30, device_equivalence},
      {10, "fault campaign sanity", 60, fault_campaign},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      v.pass = false;
      v.detail += "; over time budget";
    }
    if (!v.pass) ++failures;
    std::printf("criterion %2d %-28s %s  %.2fs  %s\n", c.id, c.name, v.pass ? "PASS" : "FAIL",
                secs, v.detail.c_str());
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
