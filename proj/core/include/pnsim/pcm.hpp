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

#include <string_view>

#include "pnsim/mesh.hpp"

namespace pnsim {

/// Multilevel non-volatile phase shifter built from a phase-change patch.
///
/// Material constants are inputs; the repository ships no blessed values.
/// The level grid spans [0, 2*pi) uniformly: level k sits at k * 2*pi / L.
class PCMDeviceModel {
 public:
  PCMDeviceModel(double delta_n, double delta_k, int num_levels,
                 double e_prog_per_step_j, double t_switch_per_step_s);

  double delta_n() const noexcept { return delta_n_; }
  double delta_k() const noexcept { return delta_k_; }
  /// delta_n / delta_k
  double fom() const noexcept { return fom_; }
  int num_levels() const noexcept { return num_levels_; }
  double e_prog_per_step_j() const noexcept { return e_prog_per_step_j_; }
  double t_switch_per_step_s() const noexcept { return t_switch_per_step_s_; }

  double level_spacing() const noexcept;
  double phase_of(int level) const;

 private:
  double delta_n_;
  double delta_k_;
  double fom_;
  int num_levels_;
  double e_prog_per_step_j_;
  double t_switch_per_step_s_;
};

struct QuantizedPhaseState {
  int level = 0;
  double phase = 0.0;
  friend bool operator==(const QuantizedPhaseState&, const QuantizedPhaseState&) = default;
};

/// Nearest level on the wrapped grid; exact ties go to the lower index.
QuantizedPhaseState quantize_phase(double phi, int num_levels);
QuantizedPhaseState quantize_phase(double phi, const PCMDeviceModel& m);

/// Field transmission of a patch tuned to `phase`: exp(-phase / fom).
/// Phase and absorption accrue over the same patch length, so the loss per
/// radian is 1 / fom.
double pcm_field_transmission(double phase, double fom);
double pcm_field_transmission(double phase, const PCMDeviceModel& m);

struct TransitionCost {
  QuantizedPhaseState state;
  double energy_j = 0.0;
  double time_s = 0.0;
};

/// Discrete level jump; cost scales with |to_level - from.level|.
TransitionCost program_transition(const QuantizedPhaseState& from, int to_level,
                                  const PCMDeviceModel& m);

/// Non-volatile: nothing is dissipated to hold a programmed level.
constexpr double pcm_hold_power_w() noexcept { return 0.0; }

/// Volatile heater baseline.
struct ThermoOpticModel {
  double p_pi_w = 0.0;  ///< watts per pi of phase shift
};

/// Sum over every phase shifter (theta, phi, output screen) of
/// (phase / pi) * p_pi, phases taken in [0, 2*pi).
double thermo_optic_hold_power(const PhaseProgram& p, const ThermoOpticModel& m);

enum class QuantizeTargets { theta, phi, both };

std::string_view to_string(QuantizeTargets t) noexcept;
QuantizeTargets parse_quantize_targets(std::string_view text);

/// Snap program phases to the level grid. The output phase screen counts as
/// external phase and follows the phi switch.
PhaseProgram quantize_program(const PhaseProgram& p, int num_levels, QuantizeTargets targets);

}  // namespace pnsim
