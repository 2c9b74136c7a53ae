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

#include "pnsim/pcm.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "pnsim/error.hpp"

namespace pnsim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

PCMDeviceModel::PCMDeviceModel(double delta_n, double delta_k, int num_levels,
                               double e_prog_per_step_j, double t_switch_per_step_s)
    : delta_n_(delta_n),
      delta_k_(delta_k),
      fom_(delta_n / delta_k),
      num_levels_(num_levels),
      e_prog_per_step_j_(e_prog_per_step_j),
      t_switch_per_step_s_(t_switch_per_step_s) {
  if (!(delta_n > 0.0) || !std::isfinite(delta_n)) throw Error("PCM model: delta_n must be > 0");
  if (!(delta_k > 0.0) || !std::isfinite(delta_k)) throw Error("PCM model: delta_k must be > 0");
  if (num_levels < 2) throw Error("PCM model: num_levels must be >= 2");
  if (!(e_prog_per_step_j >= 0.0)) throw Error("PCM model: e_prog_per_step_j must be >= 0");
  if (!(t_switch_per_step_s >= 0.0)) throw Error("PCM model: t_switch_per_step_s must be >= 0");
}

double PCMDeviceModel::level_spacing() const noexcept { return kTwoPi / num_levels_; }

double PCMDeviceModel::phase_of(int level) const {
  if (level < 0 || level >= num_levels_) throw Error("PCM level out of range");
  return level * level_spacing();
}

QuantizedPhaseState quantize_phase(double phi, int num_levels) {
  if (num_levels < 2) throw Error("quantize_phase: num_levels must be >= 2");
  if (!std::isfinite(phi)) throw Error("quantize_phase: phase must be finite");
  const double spacing = kTwoPi / num_levels;
  const double x = wrap_phase(phi) / spacing;
  int lower = static_cast<int>(std::floor(x));
  if (lower >= num_levels) lower = num_levels - 1;
  const double frac = x - lower;
  int level = lower;
  if (frac > 0.5) {
    level = (lower + 1) % num_levels;
  } else if (frac == 0.5 && lower == num_levels - 1) {
    level = 0;  // tie between L-1 and the wrapped level 0
  }
  return {level, level * spacing};
}

QuantizedPhaseState quantize_phase(double phi, const PCMDeviceModel& m) {
  return quantize_phase(phi, m.num_levels());
}

double pcm_field_transmission(double phase, double fom) {
  if (!(fom > 0.0)) throw Error("pcm_field_transmission: fom must be > 0");
  if (!(phase >= 0.0)) throw Error("pcm_field_transmission: phase must be >= 0");
  return std::exp(-phase / fom);
}

double pcm_field_transmission(double phase, const PCMDeviceModel& m) {
  return pcm_field_transmission(phase, m.fom());
}

TransitionCost program_transition(const QuantizedPhaseState& from, int to_level,
                                  const PCMDeviceModel& m) {
  if (to_level < 0 || to_level >= m.num_levels()) {
    std::ostringstream os;
    os << "program_transition: level " << to_level << " outside [0, " << m.num_levels() << ")";
    throw Error(os.str());
  }
  const int steps = std::abs(to_level - from.level);
  return {{to_level, m.phase_of(to_level)},
          steps * m.e_prog_per_step_j(),
          steps * m.t_switch_per_step_s()};
}

double thermo_optic_hold_power(const PhaseProgram& p, const ThermoOpticModel& m) {
  double phase_sum = 0.0;
  for (const auto& s : p.settings) phase_sum += wrap_phase(s.theta) + wrap_phase(s.phi);
  for (double ph : p.output_phases) phase_sum += wrap_phase(ph);
  return phase_sum / std::numbers::pi * m.p_pi_w;
}

std::string_view to_string(QuantizeTargets t) noexcept {
  switch (t) {
    case QuantizeTargets::theta: return "theta";
    case QuantizeTargets::phi: return "phi";
    case QuantizeTargets::both: return "both";
  }
  return "both";
}

QuantizeTargets parse_quantize_targets(std::string_view text) {
  if (text == "theta") return QuantizeTargets::theta;
  if (text == "phi") return QuantizeTargets::phi;
  if (text == "both") return QuantizeTargets::both;
  throw ParseError("quantize_targets must be theta, phi or both (got '" + std::string(text) + "')");
}

PhaseProgram quantize_program(const PhaseProgram& p, int num_levels, QuantizeTargets targets) {
  const bool q_theta = targets != QuantizeTargets::phi;
  const bool q_phi = targets != QuantizeTargets::theta;
  PhaseProgram out = p;
  for (auto& s : out.settings) {
    if (q_theta) s.theta = quantize_phase(s.theta, num_levels).phase;
    if (q_phi) s.phi = quantize_phase(s.phi, num_levels).phase;
  }
  if (q_phi)
    for (auto& ph : out.output_phases) ph = quantize_phase(ph, num_levels).phase;
  return out;
}

}  // namespace pnsim
