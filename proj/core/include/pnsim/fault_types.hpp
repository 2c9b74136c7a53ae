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
#include <string>
#include <variant>

#include "pnsim/mvm.hpp"
#include "pnsim/pcm.hpp"

namespace pnsim {

/// Bit of a memory-mapped register. Transients flip it; permanent faults pin
/// it to stuck_value.
struct MmrFault {
  std::uint32_t offset = 0;
  unsigned bit = 0;
  unsigned stuck_value = 0;
  friend bool operator==(const MmrFault&, const MmrFault&) = default;
};

/// Bit of a scratchpad word (word index, not byte address).
struct SpmFault {
  std::uint32_t word = 0;
  unsigned bit = 0;
  unsigned stuck_value = 0;
  friend bool operator==(const SpmFault&, const SpmFault&) = default;
};

/// Internal (theta) shifter of one MZI pinned to a PCM level. Placements are
/// numbered over the input-side mesh first, then the output-side mesh.
struct PhaseFault {
  std::size_t placement = 0;
  int stuck_level = 0;
  friend bool operator==(const PhaseFault&, const PhaseFault&) = default;
};

/// Detector port reading a fixed real value.
struct DetectorFault {
  std::size_t port = 0;
  double stuck_value = 0.0;
  friend bool operator==(const DetectorFault&, const DetectorFault&) = default;
};

using FaultTarget = std::variant<MmrFault, SpmFault, PhaseFault, DetectorFault>;

enum class FaultKind { transient, permanent };

struct FaultSpec {
  FaultTarget target;
  FaultKind kind = FaultKind::transient;
  std::uint64_t time_ps = 0;  ///< activation time (transient) or onset (permanent)
  friend bool operator==(const FaultSpec&, const FaultSpec&) = default;
};

/// Compact identifier such as "SPM:0x10:3" or "PHASE:5:0".
std::string describe_target(const FaultTarget& t);

/// Pin the internal shifter named by `f` to its PCM level. Placement indices
/// run over g.right_program first, then g.left_program.
void apply_phase_fault(GeneralMatrixProgram& g, const PhaseFault& f, const PCMDeviceModel& model);

}  // namespace pnsim
