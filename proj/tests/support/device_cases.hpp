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

// Scripted MVM scenarios shared by the device, fault and acceptance tests.

#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "pnsim/device.hpp"
#include "pnsim/rng.hpp"

namespace pnsim::testing {

/// Weights and inputs that fit the Q1.15 range without saturating:
/// 0.9 times a Haar unitary and columns of norm 0.9.
struct MvmCase {
  MvmLayout layout;
  CMatrix weights;
  CMatrix inputs;  ///< n x m, one vector per column
  std::vector<std::uint32_t> image;
  HostScript script;
};

inline MvmCase make_case(std::uint32_t n, std::uint32_t m, std::uint64_t seed,
                         std::uint32_t channels = 1) {
  MvmCase c;
  c.layout = MvmLayout::make(n, m, channels);
  c.weights = 0.9 * haar_random_unitary(n, derive_seed(seed, 1));
  c.inputs = CMatrix(n, m);
  for (std::uint32_t j = 0; j < m; ++j) {
    const CVector x = random_unit_vector(n, derive_seed(seed, 100 + j));
    for (std::uint32_t i = 0; i < n; ++i) c.inputs(i, j) = 0.9 * x[i];
  }
  c.image = pack_host_image(c.layout, c.weights, c.inputs);
  c.script = make_mvm_script(c.layout);
  return c;
}

/// Same data as the device holds after Q1.15 encoding.
inline CMatrix as_stored(const CMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.values().size(); ++i)
    out.values()[i] = decode_q15(encode_q15(m.values()[i]));
  return out;
}

/// Checks every "state" trace event against the allowed transitions.
/// Returns an empty string when the trace is valid.
inline std::string check_state_machine(const Trace& trace) {
  static const std::set<std::string> allowed = {
      "IDLE->PROGRAMMING", "IDLE->COMPUTING", "PROGRAMMING->DONE", "COMPUTING->DONE",
      "DONE->IDLE",        "IDLE->ERROR",     "PROGRAMMING->ERROR", "COMPUTING->ERROR",
      "DONE->ERROR"};
  std::string state = "IDLE";
  bool resetting = false;
  for (const auto& e : trace.events) {
    if (e.kind == "soft_reset") {
      resetting = true;
      continue;
    }
    if (e.kind != "state") continue;
    if (resetting && e.detail.ends_with("->IDLE")) {
      // SOFT_RESET returns to IDLE from anywhere.
      resetting = false;
      state = "IDLE";
      continue;
    }
    resetting = false;
    if (!allowed.count(e.detail)) return "illegal transition " + e.detail;
    const auto arrow = e.detail.find("->");
    if (e.detail.substr(0, arrow) != state)
      return "transition " + e.detail + " from state " + state;
    state = e.detail.substr(arrow + 2);
  }
  return {};
}

}  // namespace pnsim::testing
