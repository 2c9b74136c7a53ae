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

/**
 * @file device.hpp
 * @brief Event-driven model of the photonic MVM accelerator as a
 *        memory-mapped device.
 *
 * The device consists of a Compute Unit (the photonic core: two Clements
 * meshes and an attenuator column) and a Communications Interface: eight
 * 32-bit memory-mapped registers, a word-addressed scratchpad, a DMA engine
 * between host memory and the scratchpad, and a single interrupt line.
 *
 * Register map (byte offsets):
 * ```
 * 0x00 CTRL          bit0 START, bit1 MODE (0 load weights, 1 compute),
 *                    bit2 IRQ_EN, bit3 SOFT_RESET
 * 0x04 STATUS        bit0 BUSY, bit1 DONE, bit2 ERROR (read-only)
 * 0x08 DIM_N         core size, must equal the configured port count
 * 0x0C DIM_M         number of input vectors
 * 0x10 WEIGHTS_ADDR  scratchpad byte address of the N x N weights
 * 0x14 INPUT_ADDR    scratchpad byte address of M vectors of N words
 * 0x18 OUTPUT_ADDR   scratchpad byte address for M vectors of N words
 * 0x1C CHANNELS      WDM channels per frame (0 or 1 = TDM)
 * ```
 *
 * Scratchpad words hold one complex value as two Q1.15 halves: real part in
 * bits 0..15, imaginary part in bits 16..31, saturating on encode.
 *
 * State machine: IDLE -> {PROGRAMMING, COMPUTING} -> DONE -> IDLE (host
 * writes CTRL with START clear), and any state -> ERROR. SOFT_RESET returns
 * to IDLE from anywhere.
 *
 * Events are ordered by (time, insertion order). The host is a transaction
 * script; every register access costs one bus cycle.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pnsim/fault_types.hpp"
#include "pnsim/linalg.hpp"
#include "pnsim/mvm.hpp"
#include "pnsim/pcm.hpp"

namespace pnsim {

namespace reg {
inline constexpr std::uint32_t kCtrl = 0x00;
inline constexpr std::uint32_t kStatus = 0x04;
inline constexpr std::uint32_t kDimN = 0x08;
inline constexpr std::uint32_t kDimM = 0x0C;
inline constexpr std::uint32_t kWeightsAddr = 0x10;
inline constexpr std::uint32_t kInputAddr = 0x14;
inline constexpr std::uint32_t kOutputAddr = 0x18;
inline constexpr std::uint32_t kChannels = 0x1C;
inline constexpr std::size_t kCount = 8;

std::string_view name(std::uint32_t offset) noexcept;
}  // namespace reg

namespace ctrl {
inline constexpr std::uint32_t kStart = 1u << 0;
inline constexpr std::uint32_t kMode = 1u << 1;
inline constexpr std::uint32_t kIrqEn = 1u << 2;
inline constexpr std::uint32_t kSoftReset = 1u << 3;
}  // namespace ctrl

namespace status {
inline constexpr std::uint32_t kBusy = 1u << 0;
inline constexpr std::uint32_t kDone = 1u << 1;
inline constexpr std::uint32_t kError = 1u << 2;
}  // namespace status

enum class DeviceState { idle, programming, computing, done, error };
std::string_view to_string(DeviceState s) noexcept;

struct TimingConfig {
  std::uint64_t symbol_period_ps = 20;  ///< one vector slot per modulator symbol (50 GHz)
  std::uint32_t dma_bytes_per_cycle = 8;
  std::uint64_t bus_cycle_ps = 1000;
  std::uint64_t pcm_prog_step_ps = 100000;
  std::uint64_t optical_pipeline_latency_ps = 200;
  std::uint64_t thermo_settle_ps = 10000000;

  void validate() const;
};

struct EnergyConfig {
  double detection_j_per_sample = 0.0;
  double dma_j_per_byte = 0.0;
};

enum class WeightTechnology { pcm, thermo_optic };
std::string_view to_string(WeightTechnology t) noexcept;
WeightTechnology parse_weight_technology(std::string_view text);

/// Stand-in material so library users and tests can build a device without a
/// config file. These numbers are placeholders, not measured constants.
PCMDeviceModel placeholder_pcm_model();

struct DeviceConfig {
  std::size_t n_ports = 8;
  std::size_t spm_bytes = 64 * 1024;
  std::size_t host_bytes = 64 * 1024;
  WeightTechnology weights = WeightTechnology::pcm;
  PCMDeviceModel pcm = placeholder_pcm_model();
  ThermoOpticModel thermo{};
  /// Compute with level-quantized phases/attenuations instead of exact ones.
  bool quantize_weights = false;
  DetectorConfig detector{};
  TimingConfig timing{};
  EnergyConfig energy{};

  void validate() const;
};

enum class DmaDirection { host_to_spm, spm_to_host };

struct DmaDescriptor {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  std::uint32_t len = 0;  ///< bytes, multiple of 4
  DmaDirection direction = DmaDirection::host_to_spm;
};

struct HostOp {
  enum class Kind { write, read, dma, wait_irq, delay };
  Kind kind = Kind::delay;
  std::uint32_t offset = 0;
  std::uint32_t value = 0;
  DmaDescriptor dma{};
  std::uint64_t ps = 0;  ///< WAITIRQ timeout or DELAY duration
};

struct HostScript {
  std::vector<HostOp> ops;
};

// Line-oriented text: "W off val", "R off", "DMA src dst len H2S|S2H",
// "WAITIRQ timeout_ps", "DELAY ps". Offsets, values, addresses and lengths
// are hex (0x prefix optional); times are decimal. '#' starts a comment.
HostScript parse_host_script(std::istream& in);
HostScript load_host_script(const std::string& path);
void write_host_script(std::ostream& out, const HostScript& s);

/// Memory images are raw little-endian 32-bit words.
std::vector<std::uint32_t> read_memory_image(const std::string& path);
void write_memory_image(const std::string& path, std::span<const std::uint32_t> words);

struct TraceEvent {
  std::uint64_t t_ps = 0;
  std::string kind;
  std::string detail;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
  std::vector<TraceEvent> events;

  /// One JSON object per line with keys t_ps, kind, detail.
  std::string to_jsonl() const;
  std::uint64_t digest() const;
  bool contains(std::string_view kind, std::string_view detail = {}) const;
  std::size_t count(std::string_view kind) const;
};

struct EnergyLedger {
  double programming_j = 0.0;
  double static_hold_j = 0.0;
  double detection_j = 0.0;
  double dma_j = 0.0;

  double total_j() const noexcept {
    return programming_j + static_hold_j + detection_j + dma_j;
  }
};

struct EnergyReport {
  double programming_j = 0.0;
  double static_hold_j = 0.0;
  double detection_j = 0.0;
  double dma_j = 0.0;
  double total_j = 0.0;
  double wall_time_s = 0.0;
  double average_power_w = 0.0;
};

EnergyReport energy_report(const EnergyLedger& ledger, std::uint64_t wall_time_ps);

struct RunResult {
  Trace trace;
  EnergyLedger ledger;
  std::vector<std::uint32_t> host_memory;
  std::vector<std::uint32_t> spm;
  std::uint64_t total_time_ps = 0;
  bool timeout_hit = false;
  std::size_t irq_count = 0;
  std::size_t commands_completed = 0;
  std::vector<std::uint32_t> reads;  ///< values returned by R transactions
  std::uint64_t dma_bytes_read = 0;
  std::uint64_t dma_bytes_written = 0;
  /// Heater power held for the current weights (0 for PCM) and how long it
  /// was held; static_hold_j = sum of power * time over programming epochs.
  double hold_power_w = 0.0;
  std::uint64_t hold_time_ps = 0;
};

// Q1.15 complex word codec.
std::uint32_t encode_q15(Complex z) noexcept;
Complex decode_q15(std::uint32_t word) noexcept;
inline constexpr double kQ15Step = 1.0 / 32768.0;

class Device {
 public:
  explicit Device(DeviceConfig cfg);

  /// Zero all registers and scratchpad, IDLE, empty ledger and trace.
  /// Host memory and armed faults are untouched.
  void reset();

  const DeviceConfig& config() const noexcept { return cfg_; }
  DeviceState state() const noexcept { return state_; }
  std::uint64_t now_ps() const noexcept { return now_; }

  void load_host_image(std::span<const std::uint32_t> words, std::uint32_t byte_addr = 0);
  std::span<const std::uint32_t> host_memory() const noexcept { return host_; }
  std::span<const std::uint32_t> spm() const noexcept { return spm_; }
  const EnergyLedger& ledger() const noexcept { return ledger_; }
  const Trace& trace() const noexcept { return trace_; }

  /// Immediate register access at the current simulated time.
  std::uint32_t host_read(std::uint32_t offset);
  void host_write(std::uint32_t offset, std::uint32_t value);

  /// Arm a fault for the next run. Throws Error for out-of-range targets.
  void arm(const FaultSpec& fault);
  /// Weights currently held by the photonic core, if any were loaded.
  const std::optional<GeneralMatrixProgram>& weights() const noexcept { return active_; }

  /// Execute a host script to completion (or until a WAITIRQ times out),
  /// then drain pending device events.
  RunResult run(const HostScript& script);

  std::uint64_t state_digest() const;

  /// Number of independently addressable phase shifters per mesh pair,
  /// i.e. the valid PhaseFault placement range.
  std::size_t phase_fault_sites() const noexcept;

 private:
  struct Event {
    std::uint64_t t;
    std::uint64_t seq;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept {
      return a.t != b.t ? a.t > b.t : a.seq > b.seq;
    }
  };

  void schedule(std::uint64_t t, std::function<void()> fn);
  void record(std::string kind, std::string detail);
  void set_state(DeviceState s);
  void raise_irq();
  void enter_error(const std::string& why);
  void soft_reset();
  void on_ctrl_write();
  void start_command();
  void finish_programming(GeneralMatrixProgram program, std::vector<int> levels);
  void finish_compute(std::uint64_t started, std::uint32_t n, std::uint32_t m,
                      std::uint32_t channels, std::uint32_t out_addr,
                      std::vector<CVector> inputs);
  void accrue_hold();

  std::uint32_t effective_reg(std::size_t idx) const;
  std::uint32_t spm_read(std::uint32_t word) const;
  void spm_write(std::uint32_t word, std::uint32_t value);
  bool spm_range_ok(std::uint64_t byte_addr, std::uint64_t bytes) const noexcept;
  bool host_range_ok(std::uint64_t byte_addr, std::uint64_t bytes) const noexcept;

  void activate_transient(const FaultSpec& f);
  GeneralMatrixProgram with_permanent_phase_faults(GeneralMatrixProgram g) const;
  std::vector<int> program_levels(const GeneralMatrixProgram& g) const;

  // Host process.
  void host_step();
  void host_next(std::uint64_t delay);

  DeviceConfig cfg_;
  std::vector<std::uint32_t> regs_;
  std::vector<std::uint32_t> spm_;
  std::vector<std::uint32_t> host_;
  DeviceState state_ = DeviceState::idle;
  std::uint64_t now_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t generation_ = 0;  // invalidates in-flight completions
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  Trace trace_;
  EnergyLedger ledger_;
  std::optional<GeneralMatrixProgram> active_;
  std::vector<int> levels_;  // current PCM level of every shifter
  double hold_power_w_ = 0.0;
  std::uint64_t hold_since_ps_ = 0;
  std::uint64_t hold_time_ps_ = 0;
  std::vector<FaultSpec> faults_;

  // Per-run bookkeeping.
  const HostScript* script_ = nullptr;
  std::size_t pc_ = 0;
  bool waiting_irq_ = false;
  bool host_aborted_ = false;
  std::uint64_t wait_token_ = 0;
  bool inert_ = false;  // current event had no effect; it must not extend the run
  std::size_t irq_pending_ = 0;
  std::size_t irq_count_ = 0;
  std::size_t commands_completed_ = 0;
  std::vector<std::uint32_t> reads_;
  std::uint64_t dma_read_ = 0;
  std::uint64_t dma_written_ = 0;
};

/// Standard single-command layout used by tools and tests: host memory and
/// scratchpad share addresses; weights, then inputs, then outputs.
struct MvmLayout {
  std::uint32_t n = 8;
  std::uint32_t m = 1;
  std::uint32_t channels = 1;
  std::uint32_t weights_addr = 0;
  std::uint32_t input_addr = 0;
  std::uint32_t output_addr = 0;

  static MvmLayout make(std::uint32_t n, std::uint32_t m, std::uint32_t channels = 1);
  std::uint32_t bytes() const noexcept { return output_addr + 4 * n * m; }
};

/// Host image holding Q1.15 weights (row-major) and inputs (column j of `x`
/// stored as vector j).
std::vector<std::uint32_t> pack_host_image(const MvmLayout& layout, const CMatrix& weights,
                                           const CMatrix& x);
/// Load weights, stream inputs, compute, copy results back; one WAITIRQ per
/// command.
HostScript make_mvm_script(const MvmLayout& layout, std::uint64_t timeout_ps = 1'000'000'000);
/// Decode the N x M result block at the layout's output address.
CMatrix unpack_outputs(const MvmLayout& layout, std::span<const std::uint32_t> memory);

/// FNV-1a 64-bit.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept;
std::string hex64(std::uint64_t v);

}  // namespace pnsim
