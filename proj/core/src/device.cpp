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

#include "pnsim/device.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "pnsim/error.hpp"

namespace pnsim {

namespace reg {
std::string_view name(std::uint32_t offset) noexcept {
  switch (offset) {
    case kCtrl: return "CTRL";
    case kStatus: return "STATUS";
    case kDimN: return "DIM_N";
    case kDimM: return "DIM_M";
    case kWeightsAddr: return "WEIGHTS_ADDR";
    case kInputAddr: return "INPUT_ADDR";
    case kOutputAddr: return "OUTPUT_ADDR";
    case kChannels: return "CHANNELS";
    default: return "?";
  }
}
}  // namespace reg

std::string_view to_string(DeviceState s) noexcept {
  switch (s) {
    case DeviceState::idle: return "IDLE";
    case DeviceState::programming: return "PROGRAMMING";
    case DeviceState::computing: return "COMPUTING";
    case DeviceState::done: return "DONE";
    case DeviceState::error: return "ERROR";
  }
  return "?";
}

std::string_view to_string(WeightTechnology t) noexcept {
  return t == WeightTechnology::pcm ? "pcm" : "thermo";
}

WeightTechnology parse_weight_technology(std::string_view text) {
  if (text == "pcm") return WeightTechnology::pcm;
  if (text == "thermo") return WeightTechnology::thermo_optic;
  throw ParseError("weights must be pcm or thermo (got '" + std::string(text) + "')");
}

PCMDeviceModel placeholder_pcm_model() {
  // Placeholder values only; real studies must supply material constants.
  return PCMDeviceModel(0.2, 0.002, 64, 1e-12, 1e-7);
}

void TimingConfig::validate() const {
  if (symbol_period_ps == 0 || dma_bytes_per_cycle == 0 || bus_cycle_ps == 0 ||
      pcm_prog_step_ps == 0 || optical_pipeline_latency_ps == 0 || thermo_settle_ps == 0)
    throw Error("timing: all timing parameters must be positive");
}

void DeviceConfig::validate() const {
  if (n_ports < 1 || n_ports > 64) throw Error("device: n_ports must be in [1, 64]");
  if (spm_bytes == 0 || spm_bytes % 4 || host_bytes == 0 || host_bytes % 4)
    throw Error("device: memory sizes must be positive multiples of 4");
  if (spm_bytes > (1ULL << 32) || host_bytes > (1ULL << 32))
    throw Error("device: memories are limited to 4 GiB");
  if (!(thermo.p_pi_w >= 0.0)) throw Error("device: p_pi_w must be >= 0");
  if (!(detector.noise_sigma >= 0.0) || !std::isfinite(detector.noise_sigma))
    throw Error("device: noise_sigma must be finite and >= 0");
  if (!(energy.detection_j_per_sample >= 0.0) || !(energy.dma_j_per_byte >= 0.0))
    throw Error("device: energy coefficients must be >= 0");
  timing.validate();
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

std::string hex32(std::uint32_t v) {
  char buf[11];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

std::string json_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::uint16_t to_q15(double v) noexcept {
  if (!std::isfinite(v)) return 0;
  const double s = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
  return static_cast<std::uint16_t>(static_cast<std::int16_t>(s));
}

double from_q15(std::uint16_t h) noexcept {
  return static_cast<double>(static_cast<std::int16_t>(h)) / 32768.0;
}

}  // namespace

std::uint32_t encode_q15(Complex z) noexcept {
  return static_cast<std::uint32_t>(to_q15(z.real())) |
         (static_cast<std::uint32_t>(to_q15(z.imag())) << 16);
}

Complex decode_q15(std::uint32_t word) noexcept {
  return {from_q15(static_cast<std::uint16_t>(word & 0xffffu)),
          from_q15(static_cast<std::uint16_t>(word >> 16))};
}

std::string Trace::to_jsonl() const {
  std::string out;
  for (const auto& e : events) {
    out += "{\"t_ps\":" + std::to_string(e.t_ps) + ",\"kind\":\"" + json_escape(e.kind) +
           "\",\"detail\":\"" + json_escape(e.detail) + "\"}\n";
  }
  return out;
}

std::uint64_t Trace::digest() const { return fnv1a(to_jsonl()); }

bool Trace::contains(std::string_view kind, std::string_view detail) const {
  return std::any_of(events.begin(), events.end(), [&](const TraceEvent& e) {
    return e.kind == kind && (detail.empty() || e.detail == detail);
  });
}

std::size_t Trace::count(std::string_view kind) const {
  return static_cast<std::size_t>(std::count_if(
      events.begin(), events.end(), [&](const TraceEvent& e) { return e.kind == kind; }));
}

EnergyReport energy_report(const EnergyLedger& ledger, std::uint64_t wall_time_ps) {
  EnergyReport r;
  r.programming_j = ledger.programming_j;
  r.static_hold_j = ledger.static_hold_j;
  r.detection_j = ledger.detection_j;
  r.dma_j = ledger.dma_j;
  r.total_j = ledger.total_j();
  r.wall_time_s = static_cast<double>(wall_time_ps) * 1e-12;
  r.average_power_w = r.wall_time_s > 0.0 ? r.total_j / r.wall_time_s : 0.0;
  return r;
}

Device::Device(DeviceConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  host_.assign(cfg_.host_bytes / 4, 0u);
  reset();
}

void Device::reset() {
  regs_.assign(reg::kCount, 0u);
  spm_.assign(cfg_.spm_bytes / 4, 0u);
  state_ = DeviceState::idle;
  now_ = 0;
  seq_ = 0;
  ++generation_;
  queue_ = {};
  trace_ = {};
  ledger_ = {};
  active_.reset();
  levels_.assign(0, 0);
  hold_power_w_ = 0.0;
  hold_since_ps_ = 0;
  hold_time_ps_ = 0;
  irq_pending_ = 0;
  waiting_irq_ = false;
}

void Device::load_host_image(std::span<const std::uint32_t> words, std::uint32_t byte_addr) {
  if (byte_addr % 4 || !host_range_ok(byte_addr, 4ULL * words.size()))
    throw Error("host image does not fit in host memory");
  std::copy(words.begin(), words.end(), host_.begin() + byte_addr / 4);
}

void Device::schedule(std::uint64_t t, std::function<void()> fn) {
  queue_.push(Event{t, seq_++, std::move(fn)});
}

void Device::record(std::string kind, std::string detail) {
  trace_.events.push_back({now_, std::move(kind), std::move(detail)});
}

void Device::set_state(DeviceState s) {
  if (s == state_) return;
  record("state", std::string(to_string(state_)) + "->" + std::string(to_string(s)));
  state_ = s;
  std::uint32_t bits = 0;
  if (s == DeviceState::programming || s == DeviceState::computing) bits = status::kBusy;
  if (s == DeviceState::done) bits = status::kDone;
  if (s == DeviceState::error) bits = status::kError;
  regs_[reg::kStatus / 4] = bits;
}

void Device::raise_irq() {
  ++irq_count_;
  record("irq_raise", "");
  if (waiting_irq_) {
    waiting_irq_ = false;
    ++wait_token_;
    record("irq_clear", "");
    host_next(cfg_.timing.bus_cycle_ps);
  } else {
    ++irq_pending_;
  }
}

void Device::enter_error(const std::string& why) {
  ++generation_;
  record("error", why);
  set_state(DeviceState::error);
  if (effective_reg(reg::kCtrl / 4) & ctrl::kIrqEn) raise_irq();
}

void Device::soft_reset() {
  ++generation_;
  record("soft_reset", "");
  std::fill(regs_.begin(), regs_.end(), 0u);
  set_state(DeviceState::idle);
  regs_[reg::kStatus / 4] = 0;
  irq_pending_ = 0;
}

std::uint32_t Device::effective_reg(std::size_t idx) const {
  std::uint32_t v = regs_[idx];
  for (const auto& f : faults_) {
    if (f.kind != FaultKind::permanent || now_ < f.time_ps) continue;
    if (const auto* m = std::get_if<MmrFault>(&f.target); m && m->offset / 4 == idx) {
      const std::uint32_t mask = 1u << m->bit;
      v = m->stuck_value ? (v | mask) : (v & ~mask);
    }
  }
  return v;
}

std::uint32_t Device::spm_read(std::uint32_t word) const {
  std::uint32_t v = spm_[word];
  for (const auto& f : faults_) {
    if (f.kind != FaultKind::permanent || now_ < f.time_ps) continue;
    if (const auto* s = std::get_if<SpmFault>(&f.target); s && s->word == word) {
      const std::uint32_t mask = 1u << s->bit;
      v = s->stuck_value ? (v | mask) : (v & ~mask);
    }
  }
  return v;
}

void Device::spm_write(std::uint32_t word, std::uint32_t value) { spm_[word] = value; }

bool Device::spm_range_ok(std::uint64_t byte_addr, std::uint64_t bytes) const noexcept {
  return byte_addr % 4 == 0 && byte_addr + bytes <= 4ULL * spm_.size();
}

bool Device::host_range_ok(std::uint64_t byte_addr, std::uint64_t bytes) const noexcept {
  return byte_addr % 4 == 0 && byte_addr + bytes <= 4ULL * host_.size();
}

std::uint32_t Device::host_read(std::uint32_t offset) {
  if (offset % 4 || offset / 4 >= reg::kCount) {
    record("bus_error", "read " + hex32(offset));
    return 0;
  }
  const std::uint32_t v = effective_reg(offset / 4);
  record("mmr_read", std::string(reg::name(offset)) + "=" + hex32(v));
  return v;
}

void Device::host_write(std::uint32_t offset, std::uint32_t value) {
  if (offset % 4 || offset / 4 >= reg::kCount) {
    record("bus_error", "write " + hex32(offset));
    return;
  }
  record("mmr_write", std::string(reg::name(offset)) + "=" + hex32(value));
  if (offset == reg::kStatus) return;  // read-only
  const bool busy = state_ == DeviceState::programming || state_ == DeviceState::computing;
  if (offset != reg::kCtrl && busy) {
    enter_error(std::string("write to ") + std::string(reg::name(offset)) + " while busy");
    return;
  }
  regs_[offset / 4] = value;
  if (offset == reg::kCtrl) on_ctrl_write();
}

void Device::on_ctrl_write() {
  const std::uint32_t v = effective_reg(reg::kCtrl / 4);
  if (v & ctrl::kSoftReset) {
    soft_reset();
    return;
  }
  switch (state_) {
    case DeviceState::idle:
      if (v & ctrl::kStart) start_command();
      break;
    case DeviceState::done:
      if (v & ctrl::kStart) enter_error("START while DONE was not acknowledged");
      else set_state(DeviceState::idle);
      break;
    default:
      break;
  }
}

std::vector<int> Device::program_levels(const GeneralMatrixProgram& g) const {
  const int levels = cfg_.pcm.num_levels();
  std::vector<int> out;
  for (const PhaseProgram* p : {&g.right_program, &g.left_program}) {
    for (const auto& s : p->settings) {
      out.push_back(quantize_phase(s.theta, levels).level);
      out.push_back(quantize_phase(s.phi, levels).level);
    }
    for (double ph : p->output_phases) out.push_back(quantize_phase(ph, levels).level);
  }
  for (double a : g.attenuations)
    out.push_back(static_cast<int>(std::lround(a * (levels - 1))));
  return out;
}

std::size_t Device::phase_fault_sites() const noexcept {
  return cfg_.n_ports * (cfg_.n_ports - 1);
}

void Device::start_command() {
  const std::uint32_t v = effective_reg(reg::kCtrl / 4);
  const std::uint32_t n = effective_reg(reg::kDimN / 4);
  const std::uint32_t m = effective_reg(reg::kDimM / 4);
  if (n != cfg_.n_ports) {
    enter_error("DIM_N=" + std::to_string(n) + " does not match core size " +
                std::to_string(cfg_.n_ports));
    return;
  }
  const std::uint64_t gen = generation_;

  if (!(v & ctrl::kMode)) {
    const std::uint32_t addr = effective_reg(reg::kWeightsAddr / 4);
    if (!spm_range_ok(addr, 4ULL * n * n)) {
      enter_error("WEIGHTS_ADDR " + hex32(addr) + " out of bounds or unaligned");
      return;
    }
    CMatrix w(n, n);
    for (std::uint32_t i = 0; i < n * n; ++i) w.values()[i] = decode_q15(spm_read(addr / 4 + i));
    GeneralMatrixProgram g;
    try {
      g = synthesize_general_matrix(w);
    } catch (const Error& e) {
      enter_error(e.what());
      return;
    }
    if (cfg_.quantize_weights) {
      const int levels = cfg_.pcm.num_levels();
      g.right_program = quantize_program(g.right_program, levels, QuantizeTargets::both);
      g.left_program = quantize_program(g.left_program, levels, QuantizeTargets::both);
      g = quantize_attenuations(g, levels);
    }
    std::vector<int> levels = program_levels(g);
    std::uint64_t duration = cfg_.timing.thermo_settle_ps;
    if (cfg_.weights == WeightTechnology::pcm) {
      int max_steps = 0;
      for (std::size_t i = 0; i < levels.size(); ++i) {
        const int prev = i < levels_.size() ? levels_[i] : 0;
        max_steps = std::max(max_steps, std::abs(levels[i] - prev));
      }
      duration = static_cast<std::uint64_t>(max_steps) * cfg_.timing.pcm_prog_step_ps;
    }
    set_state(DeviceState::programming);
    schedule(now_ + duration, [this, gen, g = std::move(g), levels = std::move(levels)]() mutable {
      if (gen == generation_) finish_programming(std::move(g), std::move(levels));
      else inert_ = true;
    });
    return;
  }

  if (!active_) {
    enter_error("compute requested with no weights loaded");
    return;
  }
  if (m == 0) {
    enter_error("DIM_M must be >= 1");
    return;
  }
  const std::uint32_t in_addr = effective_reg(reg::kInputAddr / 4);
  const std::uint32_t out_addr = effective_reg(reg::kOutputAddr / 4);
  std::uint32_t channels = effective_reg(reg::kChannels / 4);
  if (channels == 0) channels = 1;
  const std::uint64_t bytes = 4ULL * n * m;
  if (!spm_range_ok(in_addr, bytes)) {
    enter_error("INPUT_ADDR " + hex32(in_addr) + " out of bounds or unaligned");
    return;
  }
  if (!spm_range_ok(out_addr, bytes)) {
    enter_error("OUTPUT_ADDR " + hex32(out_addr) + " out of bounds or unaligned");
    return;
  }
  std::vector<CVector> inputs(m, CVector(n));
  for (std::uint32_t j = 0; j < m; ++j)
    for (std::uint32_t i = 0; i < n; ++i) inputs[j][i] = decode_q15(spm_read(in_addr / 4 + j * n + i));

  const std::size_t slots =
      gemm_slots(channels > 1 ? GemmMode::wdm : GemmMode::tdm, m, channels);
  const std::uint64_t duration =
      cfg_.timing.optical_pipeline_latency_ps + slots * cfg_.timing.symbol_period_ps;
  const std::uint64_t started = now_;
  set_state(DeviceState::computing);
  schedule(now_ + duration, [this, gen, started, n, m, channels, out_addr,
                             inputs = std::move(inputs)]() mutable {
    if (gen == generation_) finish_compute(started, n, m, channels, out_addr, std::move(inputs));
    else inert_ = true;
  });
}

void Device::accrue_hold() {
  const std::uint64_t dt = now_ - hold_since_ps_;
  if (active_) {
    ledger_.static_hold_j += hold_power_w_ * (static_cast<double>(dt) * 1e-12);
    hold_time_ps_ += dt;
  }
  hold_since_ps_ = now_;
}

void Device::finish_programming(GeneralMatrixProgram program, std::vector<int> levels) {
  accrue_hold();
  long long steps = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const int prev = i < levels_.size() ? levels_[i] : 0;
    steps += std::abs(levels[i] - prev);
  }
  if (cfg_.weights == WeightTechnology::pcm) {
    ledger_.programming_j += static_cast<double>(steps) * cfg_.pcm.e_prog_per_step_j();
    hold_power_w_ = pcm_hold_power_w();
  } else {
    hold_power_w_ = thermo_optic_hold_power(program.right_program, cfg_.thermo) +
                    thermo_optic_hold_power(program.left_program, cfg_.thermo);
  }
  levels_ = std::move(levels);
  active_ = std::move(program);
  record("program", "level_steps=" + std::to_string(steps));
  set_state(DeviceState::done);
  ++commands_completed_;
  if (effective_reg(reg::kCtrl / 4) & ctrl::kIrqEn) raise_irq();
}

GeneralMatrixProgram Device::with_permanent_phase_faults(GeneralMatrixProgram g) const {
  for (const auto& f : faults_) {
    if (f.kind != FaultKind::permanent || now_ < f.time_ps) continue;
    if (const auto* p = std::get_if<PhaseFault>(&f.target)) apply_phase_fault(g, *p, cfg_.pcm);
  }
  return g;
}

void Device::finish_compute(std::uint64_t started, std::uint32_t n, std::uint32_t m,
                            std::uint32_t channels, std::uint32_t out_addr,
                            std::vector<CVector> inputs) {
  const GeneralMatrixProgram program = with_permanent_phase_faults(*active_);
  double full_scale = 0.0;
  for (const auto& x : inputs)
    for (const auto& z : x) full_scale = std::max(full_scale, std::abs(z));
  if (full_scale == 0.0) full_scale = 1.0;

  const std::uint64_t sp = cfg_.timing.symbol_period_ps;
  const std::uint64_t first_readout = started + cfg_.timing.optical_pipeline_latency_ps;
  MvmOptions opts;
  opts.detector = cfg_.detector;
  const std::size_t slots = (m + channels - 1) / channels;
  for (std::size_t s = 0; s < slots; ++s) {
    const std::size_t lo = s * channels, hi = std::min<std::size_t>(m, lo + channels);
    const EncodedFrame frame = encode_channels(
        std::span<const CVector>(inputs.data() + lo, hi - lo), full_scale);
    opts.slot = s;
    auto outs = run_mvm(program, frame, opts);

    const std::uint64_t window_lo = first_readout + s * sp;
    const std::uint64_t window_hi = window_lo + sp;
    for (const auto& f : faults_) {
      const auto* d = std::get_if<DetectorFault>(&f.target);
      if (!d) continue;
      const bool hit = f.kind == FaultKind::permanent
                           ? window_hi >= f.time_ps
                           : (f.time_ps >= window_lo && f.time_ps < window_hi);
      if (hit)
        for (auto& y : outs) y[d->port] = Complex(d->stuck_value, 0.0);
    }
    for (std::size_t k = 0; k < outs.size(); ++k)
      for (std::uint32_t i = 0; i < n; ++i)
        spm_write(static_cast<std::uint32_t>(out_addr / 4 + (lo + k) * n + i),
                  encode_q15(outs[k][i]));
  }
  ledger_.detection_j += cfg_.energy.detection_j_per_sample * static_cast<double>(n) * m;
  record("compute", "vectors=" + std::to_string(m) + " slots=" + std::to_string(slots));
  set_state(DeviceState::done);
  ++commands_completed_;
  if (effective_reg(reg::kCtrl / 4) & ctrl::kIrqEn) raise_irq();
}

void Device::arm(const FaultSpec& f) {
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, MmrFault>) {
          if (t.offset % 4 || t.offset / 4 >= reg::kCount || t.bit >= 32 || t.stuck_value > 1)
            throw Error("fault: invalid MMR target " + describe_target(f.target));
        } else if constexpr (std::is_same_v<T, SpmFault>) {
          if (t.word >= spm_.size() || t.bit >= 32 || t.stuck_value > 1)
            throw Error("fault: invalid SPM target " + describe_target(f.target));
        } else if constexpr (std::is_same_v<T, PhaseFault>) {
          if (t.placement >= phase_fault_sites() || t.stuck_level < 0 ||
              t.stuck_level >= cfg_.pcm.num_levels())
            throw Error("fault: invalid PHASE target " + describe_target(f.target));
        } else {
          if (t.port >= cfg_.n_ports || !std::isfinite(t.stuck_value))
            throw Error("fault: invalid DETECTOR target " + describe_target(f.target));
        }
      },
      f.target);
  faults_.push_back(f);
}

void Device::activate_transient(const FaultSpec& f) {
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, MmrFault>) {
          regs_[t.offset / 4] ^= 1u << t.bit;
        } else if constexpr (std::is_same_v<T, SpmFault>) {
          spm_[t.word] ^= 1u << t.bit;
        } else if constexpr (std::is_same_v<T, PhaseFault>) {
          if (active_) apply_phase_fault(*active_, t, cfg_.pcm);
        }
        // Detector transients act on the readout window containing time_ps.
      },
      f.target);
}

void Device::host_next(std::uint64_t delay) {
  schedule(now_ + delay, [this] { host_step(); });
}

void Device::host_step() {
  if (host_aborted_ || !script_) return;
  if (pc_ >= script_->ops.size()) {
    record("script_end", "");
    script_ = nullptr;
    return;
  }
  const HostOp& op = script_->ops[pc_++];
  const std::uint64_t bus = cfg_.timing.bus_cycle_ps;
  switch (op.kind) {
    case HostOp::Kind::write:
      host_write(op.offset, op.value);
      host_next(bus);
      break;
    case HostOp::Kind::read:
      reads_.push_back(host_read(op.offset));
      host_next(bus);
      break;
    case HostOp::Kind::delay:
      host_next(op.ps);
      break;
    case HostOp::Kind::wait_irq:
      if (irq_pending_ > 0) {
        --irq_pending_;
        record("irq_clear", "");
        host_next(bus);
      } else {
        waiting_irq_ = true;
        const std::uint64_t token = ++wait_token_;
        schedule(now_ + op.ps, [this, token] {
          if (waiting_irq_ && token == wait_token_) {
            waiting_irq_ = false;
            host_aborted_ = true;
            record("hang", "WAITIRQ timed out");
          } else {
            inert_ = true;
          }
        });
      }
      break;
    case HostOp::Kind::dma: {
      const DmaDescriptor d = op.dma;
      const bool to_spm = d.direction == DmaDirection::host_to_spm;
      const std::string desc = hex32(d.src) + "->" + hex32(d.dst) + " len=" +
                               std::to_string(d.len) + (to_spm ? " H2S" : " S2H");
      const bool ok = d.len > 0 && d.len % 4 == 0 &&
                      (to_spm ? host_range_ok(d.src, d.len) && spm_range_ok(d.dst, d.len)
                              : spm_range_ok(d.src, d.len) && host_range_ok(d.dst, d.len));
      if (!ok) {
        record("dma_error", desc);
        enter_error("invalid DMA descriptor");
        host_next(bus);
        break;
      }
      record("dma_start", desc);
      const std::uint64_t cycles =
          (d.len + cfg_.timing.dma_bytes_per_cycle - 1) / cfg_.timing.dma_bytes_per_cycle;
      schedule(now_ + cycles * bus, [this, d, to_spm, desc] {
        const std::uint32_t words = d.len / 4;
        // Checksum of the moved words, so data corruption shows up in the trace.
        std::uint64_t sum = fnv1a({});
        for (std::uint32_t i = 0; i < words; ++i) {
          std::uint32_t w;
          if (to_spm) {
            w = host_[d.src / 4 + i];
            spm_write(d.dst / 4 + i, w);
          } else {
            w = spm_read(d.src / 4 + i);
            host_[d.dst / 4 + i] = w;
          }
          sum = fnv1a(std::string_view(reinterpret_cast<const char*>(&w), sizeof w), sum);
        }
        dma_read_ += d.len;
        dma_written_ += d.len;
        ledger_.dma_j += cfg_.energy.dma_j_per_byte * d.len;
        record("dma_end", desc + " read=" + std::to_string(d.len) +
                              " written=" + std::to_string(d.len) +
                              " fnv=" + hex32(static_cast<std::uint32_t>(sum ^ (sum >> 32))));
        host_next(0);
      });
      break;
    }
  }
}

RunResult Device::run(const HostScript& script) {
  script_ = &script;
  pc_ = 0;
  waiting_irq_ = false;
  host_aborted_ = false;
  irq_count_ = 0;
  commands_completed_ = 0;
  reads_.clear();
  dma_read_ = dma_written_ = 0;
  const std::uint64_t start = now_;

  for (const auto& f : faults_) {
    const std::uint64_t t = std::max(f.time_ps, start);
    schedule(t, [this, f] {
      inert_ = true;  // activations alone do not extend the run
      record("fault", std::string(f.kind == FaultKind::transient ? "transient " : "permanent ") +
                          describe_target(f.target));
      if (f.kind == FaultKind::transient) activate_transient(f);
    });
  }
  host_next(0);

  std::uint64_t last = now_;
  while (!queue_.empty() && !host_aborted_) {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.t;
    inert_ = false;
    ev.fn();
    if (!inert_) last = now_;
  }
  queue_ = {};
  now_ = last;
  accrue_hold();
  script_ = nullptr;

  RunResult r;
  r.trace = trace_;
  r.ledger = ledger_;
  r.host_memory = host_;
  r.spm = spm_;
  r.total_time_ps = now_;
  r.timeout_hit = host_aborted_;
  r.irq_count = irq_count_;
  r.commands_completed = commands_completed_;
  r.reads = reads_;
  r.dma_bytes_read = dma_read_;
  r.dma_bytes_written = dma_written_;
  r.hold_power_w = hold_power_w_;
  r.hold_time_ps = hold_time_ps_;
  return r;
}

std::uint64_t Device::state_digest() const {
  std::uint64_t h = fnv1a({});
  auto feed = [&h](const void* p, std::size_t n) {
    h = fnv1a(std::string_view(static_cast<const char*>(p), n), h);
  };
  feed(regs_.data(), regs_.size() * sizeof(std::uint32_t));
  feed(spm_.data(), spm_.size() * sizeof(std::uint32_t));
  const int st = static_cast<int>(state_);
  feed(&st, sizeof st);
  feed(&now_, sizeof now_);
  const double e[4] = {ledger_.programming_j, ledger_.static_hold_j, ledger_.detection_j,
                       ledger_.dma_j};
  feed(e, sizeof e);
  feed(levels_.data(), levels_.size() * sizeof(int));
  const bool has = active_.has_value();
  feed(&has, sizeof has);
  return h;
}

MvmLayout MvmLayout::make(std::uint32_t n, std::uint32_t m, std::uint32_t channels) {
  if (n == 0 || m == 0) throw Error("MvmLayout: n and m must be >= 1");
  MvmLayout l;
  l.n = n;
  l.m = m;
  l.channels = channels;
  l.weights_addr = 0;
  l.input_addr = 4 * n * n;
  l.output_addr = l.input_addr + 4 * n * m;
  return l;
}

std::vector<std::uint32_t> pack_host_image(const MvmLayout& l, const CMatrix& weights,
                                           const CMatrix& x) {
  if (weights.rows() != l.n || weights.cols() != l.n)
    throw Error("pack_host_image: weights must be n x n");
  if (x.rows() != l.n || x.cols() != l.m) throw Error("pack_host_image: inputs must be n x m");
  std::vector<std::uint32_t> img(l.bytes() / 4, 0u);
  for (std::uint32_t i = 0; i < l.n * l.n; ++i)
    img[l.weights_addr / 4 + i] = encode_q15(weights.values()[i]);
  for (std::uint32_t j = 0; j < l.m; ++j)
    for (std::uint32_t i = 0; i < l.n; ++i) img[l.input_addr / 4 + j * l.n + i] = encode_q15(x(i, j));
  return img;
}

HostScript make_mvm_script(const MvmLayout& l, std::uint64_t timeout_ps) {
  using K = HostOp::Kind;
  HostScript s;
  auto w = [&](std::uint32_t off, std::uint32_t v) {
    HostOp op;
    op.kind = K::write;
    op.offset = off;
    op.value = v;
    s.ops.push_back(op);
  };
  auto dma = [&](std::uint32_t src, std::uint32_t dst, std::uint32_t len, DmaDirection dir) {
    HostOp op;
    op.kind = K::dma;
    op.dma = {src, dst, len, dir};
    s.ops.push_back(op);
  };
  auto wait = [&] {
    HostOp op;
    op.kind = K::wait_irq;
    op.ps = timeout_ps;
    s.ops.push_back(op);
  };
  const std::uint32_t wbytes = 4 * l.n * l.n, xbytes = 4 * l.n * l.m;
  dma(l.weights_addr, l.weights_addr, wbytes, DmaDirection::host_to_spm);
  w(reg::kDimN, l.n);
  w(reg::kDimM, l.m);
  w(reg::kWeightsAddr, l.weights_addr);
  w(reg::kInputAddr, l.input_addr);
  w(reg::kOutputAddr, l.output_addr);
  w(reg::kChannels, l.channels);
  w(reg::kCtrl, ctrl::kStart | ctrl::kIrqEn);
  wait();
  w(reg::kCtrl, 0);
  dma(l.input_addr, l.input_addr, xbytes, DmaDirection::host_to_spm);
  w(reg::kCtrl, ctrl::kStart | ctrl::kMode | ctrl::kIrqEn);
  wait();
  HostOp rd;
  rd.kind = K::read;
  rd.offset = reg::kStatus;
  s.ops.push_back(rd);
  w(reg::kCtrl, 0);
  dma(l.output_addr, l.output_addr, xbytes, DmaDirection::spm_to_host);
  return s;
}

CMatrix unpack_outputs(const MvmLayout& l, std::span<const std::uint32_t> memory) {
  if (4ULL * memory.size() < l.bytes()) throw Error("unpack_outputs: memory too small");
  CMatrix y(l.n, l.m);
  for (std::uint32_t j = 0; j < l.m; ++j)
    for (std::uint32_t i = 0; i < l.n; ++i) y(i, j) = decode_q15(memory[l.output_addr / 4 + j * l.n + i]);
  return y;
}

}  // namespace pnsim
