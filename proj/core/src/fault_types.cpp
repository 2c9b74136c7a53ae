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

#include "pnsim/fault_types.hpp"

#include <cstdio>
#include <type_traits>

#include "pnsim/error.hpp"

namespace pnsim {

std::string describe_target(const FaultTarget& t) {
  char buf[64];
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, MmrFault>)
          std::snprintf(buf, sizeof buf, "MMR:0x%02x:%u", f.offset, f.bit);
        else if constexpr (std::is_same_v<T, SpmFault>)
          std::snprintf(buf, sizeof buf, "SPM:0x%x:%u", f.word, f.bit);
        else if constexpr (std::is_same_v<T, PhaseFault>)
          std::snprintf(buf, sizeof buf, "PHASE:%zu:%d", f.placement, f.stuck_level);
        else
          std::snprintf(buf, sizeof buf, "DETECTOR:%zu:%.17g", f.port, f.stuck_value);
      },
      t);
  return buf;
}

void apply_phase_fault(GeneralMatrixProgram& g, const PhaseFault& f,
                       const PCMDeviceModel& model) {
  const std::size_t per_mesh = g.right_program.settings.size();
  if (f.placement >= per_mesh + g.left_program.settings.size())
    throw Error("phase fault placement out of range");
  auto& mesh = f.placement < per_mesh ? g.right_program : g.left_program;
  const std::size_t k = f.placement < per_mesh ? f.placement : f.placement - per_mesh;
  mesh.settings[k].theta = model.phase_of(f.stuck_level);
}

}  // namespace pnsim
