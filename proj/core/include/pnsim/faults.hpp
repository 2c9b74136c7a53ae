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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pnsim/device.hpp"
#include "pnsim/fault_types.hpp"

namespace pnsim {

enum class Outcome { masked, sdc, detected, hang };
std::string_view to_string(Outcome o) noexcept;

/// Arms `fault` on `device`; validation errors propagate as Error.
void inject(Device& device, const FaultSpec& fault);

/// Default comparison tolerance: one Q1.15 step of slack on either side.
inline constexpr double kDefaultFaultTolerance = 1.0 / 16384.0;

/// Hang > Detected > SDC > Masked. Memory is compared per decoded Q1.15
/// component over the whole host image.
Outcome classify(const RunResult& gold, const RunResult& faulty, double tol, bool timeout_hit);
inline Outcome classify(const RunResult& gold, const RunResult& faulty,
                        double tol = kDefaultFaultTolerance) {
  return classify(gold, faulty, tol, faulty.timeout_hit);
}

/// Time of the first trace event that differs, ignoring fault activations.
std::optional<std::uint64_t> first_divergence(const Trace& gold, const Trace& faulty);

/// Target plus stuck value (permanent MMR/SPM only), e.g. "MMR:0x00:0=0".
std::string describe(const FaultSpec& f);

// Fault list text, one fault per line ('#' comments):
//   T MMR offset bit time_ps          P MMR offset bit stuck time_ps
//   T SPM word bit time_ps            P SPM word bit stuck time_ps
//   T|P PHASE placement level time_ps
//   T|P DETECTOR port value time_ps
// offset and word are hex, everything else decimal.
std::vector<FaultSpec> parse_fault_list(std::istream& in);
std::vector<FaultSpec> load_fault_list(const std::string& path);
void write_fault_list(std::ostream& out, std::span<const FaultSpec> faults);

/// Every bit of SPM words [first_word, first_word + count) at one time.
std::vector<FaultSpec> exhaustive_spm(std::uint32_t first_word, std::uint32_t count,
                                      std::uint64_t time_ps);
/// Every bit of every register, transient, at one time.
std::vector<FaultSpec> exhaustive_mmr(std::uint64_t time_ps);

struct RandomFaultConfig {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::uint32_t spm_words = 0;      ///< SPM targets drawn from [0, spm_words)
  std::size_t phase_sites = 0;
  std::size_t n_ports = 0;
  int pcm_levels = 2;
  std::uint64_t horizon_ps = 0;     ///< activation times uniform in [0, horizon_ps]
  double permanent_fraction = 0.5;
};
/// Target class uniform over MMR, SPM, PHASE, DETECTOR (classes with no
/// sites are skipped).
std::vector<FaultSpec> random_faults(const RandomFaultConfig& cfg);

struct CampaignRow {
  std::size_t fault_id = 0;
  FaultSpec fault;
  Outcome outcome = Outcome::masked;
  std::optional<std::uint64_t> first_div_ps;
};

struct CampaignResult {
  RunResult gold;
  std::vector<CampaignRow> rows;  ///< ordered by fault id
  std::array<std::size_t, 4> histogram{};  ///< indexed by Outcome
};

/// Runs the gold script once, then one fresh device per fault. Throws Error
/// if the gold run hangs or reports an error. Results do not depend on jobs.
CampaignResult campaign(const DeviceConfig& cfg, std::span<const std::uint32_t> host_image,
                        const HostScript& script, std::span<const FaultSpec> faults,
                        double tol = kDefaultFaultTolerance, std::size_t jobs = 1);

/// Single device run from a fresh device; shared by campaigns and tools.
RunResult run_device(const DeviceConfig& cfg, std::span<const std::uint32_t> host_image,
                     const HostScript& script, std::span<const FaultSpec> faults = {});

inline constexpr const char* kCampaignCsvHeader =
    "fault_id,target,kind,time_ps,outcome,first_div_ps";
void write_campaign_csv(std::ostream& out, const CampaignResult& r);

}  // namespace pnsim
