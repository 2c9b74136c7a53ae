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

#include "pnsim/faults.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "pnsim/error.hpp"
#include "pnsim/rng.hpp"

namespace pnsim {

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::masked: return "Masked";
    case Outcome::sdc: return "SDC";
    case Outcome::detected: return "Detected";
    case Outcome::hang: return "Hang";
  }
  return "?";
}

void inject(Device& device, const FaultSpec& fault) { device.arm(fault); }

namespace {

bool reports_error(const Trace& t) { return t.count("error") > 0; }

}  // namespace

Outcome classify(const RunResult& gold, const RunResult& faulty, double tol, bool timeout_hit) {
  if (timeout_hit) return Outcome::hang;
  if (reports_error(faulty.trace) && !reports_error(gold.trace)) return Outcome::detected;
  if (gold.host_memory.size() != faulty.host_memory.size()) return Outcome::sdc;
  for (std::size_t i = 0; i < gold.host_memory.size(); ++i) {
    if (gold.host_memory[i] == faulty.host_memory[i]) continue;
    const Complex a = decode_q15(gold.host_memory[i]);
    const Complex b = decode_q15(faulty.host_memory[i]);
    if (std::abs(a.real() - b.real()) > tol || std::abs(a.imag() - b.imag()) > tol)
      return Outcome::sdc;
  }
  return Outcome::masked;
}

std::optional<std::uint64_t> first_divergence(const Trace& gold, const Trace& faulty) {
  auto next = [](const Trace& t, std::size_t i) {
    while (i < t.events.size() && t.events[i].kind == "fault") ++i;
    return i;
  };
  std::size_t i = next(gold, 0), j = next(faulty, 0);
  while (i < gold.events.size() && j < faulty.events.size()) {
    if (!(gold.events[i] == faulty.events[j]))
      return std::min(gold.events[i].t_ps, faulty.events[j].t_ps);
    i = next(gold, i + 1);
    j = next(faulty, j + 1);
  }
  if (i < gold.events.size()) return gold.events[i].t_ps;
  if (j < faulty.events.size()) return faulty.events[j].t_ps;
  return std::nullopt;
}

std::string describe(const FaultSpec& f) {
  std::string s = describe_target(f.target);
  if (f.kind == FaultKind::permanent) {
    if (const auto* m = std::get_if<MmrFault>(&f.target)) s += "=" + std::to_string(m->stuck_value);
    if (const auto* w = std::get_if<SpmFault>(&f.target)) s += "=" + std::to_string(w->stuck_value);
  }
  return s;
}

namespace {

template <typename T>
T number(const std::string& tok, int base, std::size_t line) {
  std::string_view sv = tok;
  if (base == 16 && (sv.starts_with("0x") || sv.starts_with("0X"))) sv.remove_prefix(2);
  T v{};
  auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v, base);
  if (sv.empty() || ec != std::errc() || ptr != sv.data() + sv.size())
    throw ParseError("fault list line " + std::to_string(line) + ": bad number '" + tok + "'");
  return v;
}

double real_number(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || !std::isfinite(v))
    throw ParseError("fault list line " + std::to_string(line) + ": bad value '" + tok + "'");
  return v;
}

}  // namespace

std::vector<FaultSpec> parse_fault_list(std::istream& in) {
  std::vector<FaultSpec> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto fail = [&](const std::string& why) {
      return ParseError("fault list line " + std::to_string(line) + ": " + why);
    };
    if (tok.size() < 2) throw fail("expected 'T|P KIND args time_ps'");
    FaultSpec f;
    if (tok[0] == "T") f.kind = FaultKind::transient;
    else if (tok[0] == "P") f.kind = FaultKind::permanent;
    else throw fail("kind must be T or P");
    const bool perm = f.kind == FaultKind::permanent;
    const std::string& k = tok[1];
    auto want = [&](std::size_t args) {
      if (tok.size() != args + 3)
        throw fail(k + " takes " + std::to_string(args) + " argument(s) plus time_ps");
    };
    if (k == "MMR" || k == "SPM") {
      want(perm ? 3 : 2);
      const auto addr = number<std::uint32_t>(tok[2], 16, line);
      const auto bit = number<unsigned>(tok[3], 10, line);
      const unsigned stuck = perm ? number<unsigned>(tok[4], 10, line) : 0u;
      if (bit > 31) throw fail("bit must be in [0, 31]");
      if (stuck > 1) throw fail("stuck value must be 0 or 1");
      if (k == "MMR") f.target = MmrFault{addr, bit, stuck};
      else f.target = SpmFault{addr, bit, stuck};
    } else if (k == "PHASE") {
      want(2);
      f.target = PhaseFault{number<std::size_t>(tok[2], 10, line), number<int>(tok[3], 10, line)};
    } else if (k == "DETECTOR") {
      want(2);
      f.target = DetectorFault{number<std::size_t>(tok[2], 10, line), real_number(tok[3], line)};
    } else {
      throw fail("unknown target kind '" + k + "'");
    }
    f.time_ps = number<std::uint64_t>(tok.back(), 10, line);
    out.push_back(f);
  }
  return out;
}

std::vector<FaultSpec> load_fault_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open fault list '" + path + "'");
  return parse_fault_list(in);
}

void write_fault_list(std::ostream& out, std::span<const FaultSpec> faults) {
  char buf[128];
  for (const auto& f : faults) {
    const bool perm = f.kind == FaultKind::permanent;
    const char* k = perm ? "P" : "T";
    const auto t = static_cast<unsigned long long>(f.time_ps);
    if (const auto* m = std::get_if<MmrFault>(&f.target)) {
      if (perm) std::snprintf(buf, sizeof buf, "%s MMR 0x%02x %u %u %llu", k, m->offset, m->bit, m->stuck_value, t);
      else std::snprintf(buf, sizeof buf, "%s MMR 0x%02x %u %llu", k, m->offset, m->bit, t);
    } else if (const auto* s = std::get_if<SpmFault>(&f.target)) {
      if (perm) std::snprintf(buf, sizeof buf, "%s SPM 0x%x %u %u %llu", k, s->word, s->bit, s->stuck_value, t);
      else std::snprintf(buf, sizeof buf, "%s SPM 0x%x %u %llu", k, s->word, s->bit, t);
    } else if (const auto* p = std::get_if<PhaseFault>(&f.target)) {
      std::snprintf(buf, sizeof buf, "%s PHASE %zu %d %llu", k, p->placement, p->stuck_level, t);
    } else {
      const auto& d = std::get<DetectorFault>(f.target);
      std::snprintf(buf, sizeof buf, "%s DETECTOR %zu %.17g %llu", k, d.port, d.stuck_value, t);
    }
    out << buf << '\n';
  }
}

std::vector<FaultSpec> exhaustive_spm(std::uint32_t first_word, std::uint32_t count,
                                      std::uint64_t time_ps) {
  std::vector<FaultSpec> out;
  out.reserve(32ULL * count);
  for (std::uint32_t w = 0; w < count; ++w)
    for (unsigned b = 0; b < 32; ++b)
      out.push_back({SpmFault{first_word + w, b, 0}, FaultKind::transient, time_ps});
  return out;
}

std::vector<FaultSpec> exhaustive_mmr(std::uint64_t time_ps) {
  std::vector<FaultSpec> out;
  for (std::uint32_t r = 0; r < reg::kCount; ++r)
    for (unsigned b = 0; b < 32; ++b)
      out.push_back({MmrFault{4 * r, b, 0}, FaultKind::transient, time_ps});
  return out;
}

std::vector<FaultSpec> random_faults(const RandomFaultConfig& cfg) {
  std::vector<int> classes{0};
  if (cfg.spm_words > 0) classes.push_back(1);
  if (cfg.phase_sites > 0 && cfg.pcm_levels > 0) classes.push_back(2);
  if (cfg.n_ports > 0) classes.push_back(3);
  std::vector<FaultSpec> out;
  out.reserve(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    CounterRng rng(cfg.seed, i);
    auto below = [&](std::uint64_t n) { return rng.next_u64() % n; };
    FaultSpec f;
    f.kind = rng.uniform() < cfg.permanent_fraction ? FaultKind::permanent : FaultKind::transient;
    f.time_ps = below(cfg.horizon_ps + 1);
    switch (classes[below(classes.size())]) {
      case 0:
        f.target = MmrFault{static_cast<std::uint32_t>(4 * below(reg::kCount)),
                            static_cast<unsigned>(below(32)), static_cast<unsigned>(below(2))};
        break;
      case 1:
        f.target = SpmFault{static_cast<std::uint32_t>(below(cfg.spm_words)),
                            static_cast<unsigned>(below(32)), static_cast<unsigned>(below(2))};
        break;
      case 2:
        f.target = PhaseFault{static_cast<std::size_t>(below(cfg.phase_sites)),
                              static_cast<int>(below(static_cast<std::uint64_t>(cfg.pcm_levels)))};
        break;
      default:
        f.target = DetectorFault{static_cast<std::size_t>(below(cfg.n_ports)),
                                 2.0 * rng.uniform() - 1.0};
        break;
    }
    // Stuck values only mean something for permanent bit faults.
    if (f.kind == FaultKind::transient) {
      if (auto* m = std::get_if<MmrFault>(&f.target)) m->stuck_value = 0;
      if (auto* s = std::get_if<SpmFault>(&f.target)) s->stuck_value = 0;
    }
    out.push_back(f);
  }
  return out;
}

RunResult run_device(const DeviceConfig& cfg, std::span<const std::uint32_t> host_image,
                     const HostScript& script, std::span<const FaultSpec> faults) {
  Device dev(cfg);
  dev.load_host_image(host_image);
  for (const auto& f : faults) inject(dev, f);
  return dev.run(script);
}

CampaignResult campaign(const DeviceConfig& cfg, std::span<const std::uint32_t> host_image,
                        const HostScript& script, std::span<const FaultSpec> faults,
                        double tol, std::size_t jobs) {
  CampaignResult r;
  r.gold = run_device(cfg, host_image, script);
  if (r.gold.timeout_hit) throw Error("gold run hung (WAITIRQ timeout); fix the script first");
  if (reports_error(r.gold.trace)) throw Error("gold run entered ERROR; fix the script first");

  // Validate every target up front so a bad list fails before any work.
  {
    Device probe(cfg);
    for (const auto& f : faults) inject(probe, f);
  }

  r.rows.resize(faults.size());
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, faults.size()));
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < faults.size(); i += workers) {
      const RunResult faulty = run_device(cfg, host_image, script, faults.subspan(i, 1));
      CampaignRow& row = r.rows[i];
      row.fault_id = i;
      row.fault = faults[i];
      row.outcome = classify(r.gold, faulty, tol);
      row.first_div_ps = first_divergence(r.gold.trace, faulty.trace);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& row : r.rows) ++r.histogram[static_cast<std::size_t>(row.outcome)];
  return r;
}

void write_campaign_csv(std::ostream& out, const CampaignResult& r) {
  out << kCampaignCsvHeader << '\n';
  for (const auto& row : r.rows) {
    out << row.fault_id << ',' << describe(row.fault) << ','
        << (row.fault.kind == FaultKind::permanent ? "permanent" : "transient") << ','
        << row.fault.time_ps << ',' << to_string(row.outcome) << ',';
    if (row.first_div_ps) out << *row.first_div_ps;
    out << '\n';
  }
}

}  // namespace pnsim
