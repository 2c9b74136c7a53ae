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

#include "pnsim/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <iterator>
#include <set>
#include <sstream>

#include "pnsim/error.hpp"

namespace pnsim {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string slurp(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Typed accessors that name the offending line on failure.
struct Reader {
  const std::string& origin;

  [[noreturn]] void fail(const IniDocument::Entry& e, const std::string& why) const {
    throw ParseError(origin + ":" + std::to_string(e.line) + ": " + e.key + ": " + why);
  }

  double real(const IniDocument::Entry& e) const {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(e.value, &used);
    } catch (const std::exception&) {
      fail(e, "expected a number, got '" + e.value + "'");
    }
    if (used != e.value.size() || !std::isfinite(v))
      fail(e, "expected a finite number, got '" + e.value + "'");
    return v;
  }

  double nonneg(const IniDocument::Entry& e) const {
    const double v = real(e);
    if (v < 0.0) fail(e, "must be >= 0");
    return v;
  }

  std::uint64_t u64(const IniDocument::Entry& e) const {
    std::uint64_t v = 0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    int base = 10;
    if (e.value.size() > 2 && e.value[0] == '0' && (e.value[1] == 'x' || e.value[1] == 'X')) {
      b += 2;
      base = 16;
    }
    auto [p, ec] = std::from_chars(b, end, v, base);
    if (b == end || ec != std::errc() || p != end)
      fail(e, "expected a non-negative integer, got '" + e.value + "'");
    return v;
  }

  bool boolean(const IniDocument::Entry& e) const {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    fail(e, "expected true or false, got '" + e.value + "'");
  }

  template <typename F>
  auto wrap(const IniDocument::Entry& e, F&& f) const {
    try {
      return f(e.value);
    } catch (const Error& ex) {
      fail(e, ex.what());
    }
  }
};

using Handler = std::function<void(const IniDocument::Entry&)>;

void dispatch(const std::vector<IniDocument::Entry>& entries,
              const std::map<std::string, Handler>& handlers, const std::string& section,
              const std::string& origin) {
  for (const auto& e : entries) {
    auto it = handlers.find(e.key);
    if (it == handlers.end())
      throw ParseError(origin + ":" + std::to_string(e.line) + ": unknown key '" + e.key +
                       "' in section [" + section + "]");
    it->second(e);
  }
}

void reject_unknown_sections(const IniDocument& doc, const std::set<std::string>& known,
                             const std::string& origin) {
  for (const auto& [name, entries] : doc.sections)
    if (!known.count(name))
      throw ParseError(origin + ": unknown section [" + name + "]");
}

std::map<std::string, Handler> imperfection_handlers(ImperfectionSpec& s, const Reader& r) {
  return {
      {"phase_sigma", [&](const auto& e) { s.phase_sigma = r.nonneg(e); }},
      {"coupler_sigma", [&](const auto& e) { s.coupler_sigma = r.nonneg(e); }},
      {"loss_db_per_mzi", [&](const auto& e) { s.loss_db_per_mzi = r.nonneg(e); }},
      {"pcm_levels",
       [&](const auto& e) {
         const auto v = r.u64(e);
         if (v == 1 || v > 1'000'000) r.fail(e, "must be 0 (off) or in [2, 1e6]");
         if (v == 0) s.pcm_levels.reset();
         else s.pcm_levels = static_cast<int>(v);
       }},
      {"quantize_targets",
       [&](const auto& e) {
         s.quantize_targets = r.wrap(e, [](const std::string& v) { return parse_quantize_targets(v); });
       }},
  };
}

}  // namespace

IniDocument IniDocument::parse(std::istream& in, const std::string& origin) {
  IniDocument doc;
  doc.sections.push_back({"", {}});
  std::set<std::string> seen_sections{""};
  std::set<std::string> seen_keys;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto cut = raw.find_first_of("#;");
    const std::string text = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (text.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line) + ": ";
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError(where + "unterminated section header");
      const std::string name = trim(std::string_view(text).substr(1, text.size() - 2));
      if (name.empty()) throw ParseError(where + "empty section name");
      if (!seen_sections.insert(name).second)
        throw ParseError(where + "duplicate section [" + name + "]");
      doc.sections.push_back({name, {}});
      seen_keys.clear();
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(where + "expected 'key = value'");
    Entry e{trim(std::string_view(text).substr(0, eq)), trim(std::string_view(text).substr(eq + 1)),
            line};
    if (e.key.empty()) throw ParseError(where + "missing key");
    if (e.value.empty()) throw ParseError(where + "missing value for '" + e.key + "'");
    if (!seen_keys.insert(e.key).second) throw ParseError(where + "duplicate key '" + e.key + "'");
    doc.sections.back().second.push_back(std::move(e));
  }
  return doc;
}

const std::vector<IniDocument::Entry>* IniDocument::section(const std::string& name) const {
  for (const auto& [n, entries] : sections)
    if (n == name) return &entries;
  return nullptr;
}

RunConfig parse_run_config(std::istream& in, const std::string& base_dir,
                           const std::string& origin) {
  const std::string text = slurp(in);
  std::istringstream ss(text);
  const IniDocument doc = IniDocument::parse(ss, origin);
  reject_unknown_sections(
      doc, {"", "material", "timing", "imperfections", "device", "energy", "paths"}, origin);
  const Reader r{origin};

  RunConfig cfg;
  cfg.digest = fnv1a(text);
  DeviceConfig& dev = cfg.device;

  if (const auto* top = doc.section(""))
    dispatch(*top, {{"seed", [&](const auto& e) { cfg.seed = r.u64(e); }}}, "", origin);

  // Material: unspecified keys fall back to the placeholder model.
  const PCMDeviceModel ph = placeholder_pcm_model();
  double dn = ph.delta_n(), dk = ph.delta_k(), e_prog = ph.e_prog_per_step_j(),
         t_sw = ph.t_switch_per_step_s();
  int levels = ph.num_levels();
  bool t_sw_given = false;
  if (const auto* s = doc.section("material")) {
    dispatch(*s,
             {{"delta_n", [&](const auto& e) { dn = r.real(e); }},
              {"delta_k", [&](const auto& e) { dk = r.real(e); }},
              {"num_levels",
               [&](const auto& e) {
                 const auto v = r.u64(e);
                 if (v < 2 || v > 1'000'000) r.fail(e, "must be in [2, 1e6]");
                 levels = static_cast<int>(v);
               }},
              {"e_prog_per_step_j", [&](const auto& e) { e_prog = r.nonneg(e); }},
              {"t_switch_per_step_s",
               [&](const auto& e) {
                 t_sw = r.nonneg(e);
                 t_sw_given = true;
               }},
              {"p_pi_w", [&](const auto& e) { dev.thermo.p_pi_w = r.nonneg(e); }}},
             "material", origin);
  }
  try {
    dev.pcm = PCMDeviceModel(dn, dk, levels, e_prog, t_sw);
  } catch (const Error& ex) {
    throw ParseError(origin + ": [material]: " + ex.what());
  }

  bool step_given = false;
  if (const auto* s = doc.section("timing")) {
    TimingConfig& t = dev.timing;
    dispatch(*s,
             {{"symbol_period_ps", [&](const auto& e) { t.symbol_period_ps = r.u64(e); }},
              {"dma_bytes_per_cycle",
               [&](const auto& e) {
                 const auto v = r.u64(e);
                 if (v > 1u << 20) r.fail(e, "too large");
                 t.dma_bytes_per_cycle = static_cast<std::uint32_t>(v);
               }},
              {"bus_cycle_ps", [&](const auto& e) { t.bus_cycle_ps = r.u64(e); }},
              {"pcm_prog_step_ps",
               [&](const auto& e) {
                 t.pcm_prog_step_ps = r.u64(e);
                 step_given = true;
               }},
              {"optical_pipeline_latency_ps",
               [&](const auto& e) { t.optical_pipeline_latency_ps = r.u64(e); }},
              {"thermo_settle_ps", [&](const auto& e) { t.thermo_settle_ps = r.u64(e); }}},
             "timing", origin);
  }
  if (!step_given && t_sw_given)
    dev.timing.pcm_prog_step_ps =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(t_sw * 1e12)));

  if (const auto* s = doc.section("imperfections"))
    dispatch(*s, imperfection_handlers(cfg.imperfections, r), "imperfections", origin);

  if (const auto* s = doc.section("device")) {
    dispatch(*s,
             {{"n_ports",
               [&](const auto& e) { dev.n_ports = static_cast<std::size_t>(r.u64(e)); }},
              {"weights",
               [&](const auto& e) {
                 dev.weights =
                     r.wrap(e, [](const std::string& v) { return parse_weight_technology(v); });
               }},
              {"quantize_weights", [&](const auto& e) { dev.quantize_weights = r.boolean(e); }},
              {"spm_bytes",
               [&](const auto& e) { dev.spm_bytes = static_cast<std::size_t>(r.u64(e)); }},
              {"host_bytes",
               [&](const auto& e) { dev.host_bytes = static_cast<std::size_t>(r.u64(e)); }},
              {"detector",
               [&](const auto& e) {
                 dev.detector.mode =
                     r.wrap(e, [](const std::string& v) { return parse_detection_mode(v); });
               }},
              {"noise_sigma", [&](const auto& e) { dev.detector.noise_sigma = r.nonneg(e); }}},
             "device", origin);
  }

  if (const auto* s = doc.section("energy")) {
    dispatch(*s,
             {{"detection_j_per_sample",
               [&](const auto& e) { dev.energy.detection_j_per_sample = r.nonneg(e); }},
              {"dma_j_per_byte", [&](const auto& e) { dev.energy.dma_j_per_byte = r.nonneg(e); }}},
             "energy", origin);
  }

  if (const auto* s = doc.section("paths")) {
    auto resolve = [&](const IniDocument::Entry& e) {
      std::filesystem::path p(e.value);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      if (!std::filesystem::is_regular_file(p)) r.fail(e, "file not found: " + p.string());
      return p.string();
    };
    dispatch(*s,
             {{"host_image", [&](const auto& e) { cfg.host_image = resolve(e); }},
              {"script", [&](const auto& e) { cfg.script = resolve(e); }}},
             "paths", origin);
  }

  dev.detector.seed = cfg.seed.value_or(0);
  try {
    dev.validate();
    cfg.imperfections.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& ex) {
    throw ParseError(origin + ": " + ex.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_run_config(in, dir.empty() ? "." : dir.string(), path);
}

SweepConfig parse_sweep_config(std::istream& in, const std::string& origin) {
  const std::string text = slurp(in);
  std::istringstream ss(text);
  const IniDocument doc = IniDocument::parse(ss, origin);
  reject_unknown_sections(doc, {"", "grid", "imperfections", "fit"}, origin);
  if (const auto* top = doc.section(""); top && !top->empty())
    throw ParseError(origin + ":" + std::to_string(top->front().line) +
                     ": keys must be inside a section");
  const Reader r{origin};
  SweepConfig sc;
  sc.digest = fnv1a(text);

  const auto* grid = doc.section("grid");
  if (!grid || grid->empty()) throw ParseError(origin + ": missing or empty [grid] section");
  for (const auto& e : *grid) {
    std::vector<double> values;
    std::stringstream list(e.value);
    for (std::string item; std::getline(list, item, ',');) {
      IniDocument::Entry one{e.key, trim(item), e.line};
      if (one.value.empty()) r.fail(e, "empty list item");
      values.push_back(r.nonneg(one));
    }
    sc.grid.axes.emplace_back(e.key, std::move(values));
  }
  if (const auto* s = doc.section("imperfections"))
    dispatch(*s, imperfection_handlers(sc.grid.base, r), "imperfections", origin);
  if (const auto* s = doc.section("fit")) {
    FitConfig& f = sc.options.fit;
    dispatch(*s,
             {{"max_iterations",
               [&](const auto& e) { f.max_iterations = static_cast<std::size_t>(r.u64(e)); }},
              {"restarts",
               [&](const auto& e) {
                 f.restarts = static_cast<std::size_t>(r.u64(e));
                 if (f.restarts == 0) r.fail(e, "must be >= 1");
               }},
              {"tolerance", [&](const auto& e) { f.tolerance = r.nonneg(e); }},
              {"probes",
               [&](const auto& e) { sc.options.probes = static_cast<std::size_t>(r.u64(e)); }}},
             "fit", origin);
  }
  try {
    sc.grid.validate();
    sc.grid.base.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& ex) {
    throw ParseError(origin + ": " + ex.what());
  }
  return sc;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open grid '" + path + "'");
  return parse_sweep_config(in, path);
}

}  // namespace pnsim
