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

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "pnsim/config.hpp"
#include "pnsim/decompose.hpp"
#include "pnsim/device.hpp"
#include "pnsim/error.hpp"
#include "pnsim/faults.hpp"
#include "pnsim/rng.hpp"
#include "pnsim/robustness.hpp"
#include "pnsim/version.hpp"

namespace pnsim::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::uint64_t seed_or(std::optional<std::uint64_t> fallback) const {
    return seed.value_or(fallback.value_or(0));
  }
};

json header(std::uint64_t config_digest, std::uint64_t seed) {
  return json{{"tool", "pnsim"},
              {"version", kVersion},
              {"config_digest", hex64(config_digest)},
              {"seed", seed}};
}

std::string csv_header_comment(std::uint64_t config_digest, std::uint64_t seed) {
  return std::string("# pnsim ") + kVersion + " config_digest=" + hex64(config_digest) +
         " seed=" + std::to_string(seed);
}

// Writes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& f) {
  if (path.empty() || path == "-") {
    f(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path + "'");
  f(file);
  if (!file) throw Error("failed writing '" + path + "'");
}

double full_scale_of(const CMatrix& x) {
  double s = 0.0;
  for (const auto& z : x.values()) s = std::max(s, std::abs(z));
  return s > 0.0 ? s : 1.0;
}

// ---------------------------------------------------------------- decompose

struct DecomposeArgs {
  std::string target, arch = "clements", output;
  std::size_t restarts = 4, max_iterations = 400;
};

int cmd_decompose(const DecomposeArgs& a, const Globals& g, std::ostream& out,
                  std::ostream& err) {
  const CMatrix target = read_matrix_file(a.target);
  if (target.rows() != target.cols()) throw ParseError("target must be square");
  const ArchTag arch = parse_arch_tag(a.arch);
  const std::uint64_t seed = g.seed_or(std::nullopt);

  std::ostringstream note;
  ProgramBundle bundle = GeneralMatrixProgram{};
  if (unitarity_residual(target) <= kDecomposeUnitarityTol) {
    MeshTopology t = build_topology(arch, target.rows());
    if (arch == ArchTag::clements) {
      bundle = MeshBundle{t, decompose_clements(target)};
    } else {
      FitConfig fc;
      fc.seed = seed;
      fc.restarts = a.restarts;
      fc.max_iterations = a.max_iterations;
      const FitResult fr = fit_phases(t, target, fc);
      note << "# fit residual " << fr.residual << " (restart " << fr.best_restart << ")\n";
      bundle = MeshBundle{t, fr.program};
    }
  } else {
    if (arch != ArchTag::clements)
      throw ParseError("non-unitary targets are synthesized by SVD and need --arch clements");
    bundle = synthesize_general_matrix(target);
    note << "# non-unitary target: SVD synthesis on two Clements meshes\n";
  }
  emit(a.output, out, [&](std::ostream& o) {
    o << "# pnsim " << kVersion << " decompose arch=" << to_string(arch) << " seed=" << seed
      << '\n'
      << note.str();
    write_bundle(o, bundle);
  });
  (void)err;
  return kOk;
}

// ---------------------------------------------------------------------- mvm

struct MvmArgs {
  std::string program, input, imperfections, detector = "coherent", output;
};

int cmd_mvm(const MvmArgs& a, const Globals& g, std::ostream& out, std::ostream&) {
  const ProgramBundle bundle = load_bundle(a.program);
  const CMatrix x = read_matrix_file(a.input);
  const std::size_t n = std::visit(
      [](const auto& b) {
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, MeshBundle>)
          return b.topology.n_ports();
        else
          return b.attenuations.size();
      },
      bundle);
  if (x.rows() != n) throw ParseError("input has " + std::to_string(x.rows()) +
                                      " rows but the program has " + std::to_string(n) + " ports");

  std::optional<RunConfig> cfg;
  if (!a.imperfections.empty()) cfg = load_run_config(a.imperfections);
  const std::uint64_t seed = g.seed_or(cfg ? cfg->seed : std::nullopt);
  const ImperfectionSpec spec = cfg ? cfg->imperfections : ImperfectionSpec{};

  MvmOptions opts;
  opts.detector.mode = parse_detection_mode(a.detector);
  opts.detector.seed = seed;
  if (cfg) opts.detector.noise_sigma = cfg->device.detector.noise_sigma;

  const double scale = full_scale_of(x);
  CMatrix y(n, x.cols());
  auto store = [&](std::size_t j, const std::vector<CVector>& res) {
    for (std::size_t i = 0; i < n; ++i) y(i, j) = res[0][i];
  };

  if (const auto* mb = std::get_if<MeshBundle>(&bundle)) {
    PhaseProgram p = mb->program;
    if (spec.pcm_levels) p = quantize_program(p, *spec.pcm_levels, spec.quantize_targets);
    const ImperfectionSample imp = sample_imperfections(spec, mb->topology, seed);
    opts.imperfections = &imp;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      opts.slot = j;
      store(j, run_mvm(mb->topology, p, encode_vector(x.column(j), scale), opts));
    }
  } else {
    GeneralMatrixProgram gp = std::get<GeneralMatrixProgram>(bundle);
    if (spec.pcm_levels) {
      gp.right_program = quantize_program(gp.right_program, *spec.pcm_levels, spec.quantize_targets);
      gp.left_program = quantize_program(gp.left_program, *spec.pcm_levels, spec.quantize_targets);
      gp = quantize_attenuations(gp, *spec.pcm_levels);
    }
    const MeshTopology t = build_clements(n);
    const ImperfectionSample right = sample_imperfections(spec, t, derive_seed(seed, 0));
    const ImperfectionSample left = sample_imperfections(spec, t, derive_seed(seed, 1));
    opts.imperfections = &right;
    opts.output_imperfections = &left;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      opts.slot = j;
      store(j, run_mvm(gp, encode_vector(x.column(j), scale), opts));
    }
  }
  emit(a.output, out, [&](std::ostream& o) { write_matrix(o, y); });
  return kOk;
}

// --------------------------------------------------------------------- gemm

struct GemmArgs {
  std::string a, b, mode = "tdm", detector = "coherent", output, product;
  std::size_t channels = 1;
  double noise_sigma = 0.0;
  bool oracle = false;
};

int cmd_gemm(const GemmArgs& a, const Globals& g, std::ostream& out, std::ostream&) {
  const CMatrix am = read_matrix_file(a.a);
  const CMatrix bm = read_matrix_file(a.b);
  if (am.rows() != am.cols()) throw ParseError("--a must be square");
  if (bm.rows() != am.cols()) throw ParseError("--b row count must match --a");
  if (a.noise_sigma < 0.0) throw ParseError("--noise-sigma must be >= 0");
  GemmPlan plan;
  plan.mode = parse_gemm_mode(a.mode);
  plan.channels = a.channels;
  if (plan.mode == GemmMode::wdm && a.channels == 0) throw ParseError("--channels must be >= 1");
  DetectorConfig det;
  det.mode = parse_detection_mode(a.detector);
  det.noise_sigma = a.noise_sigma;
  det.seed = g.seed_or(std::nullopt);

  const GemmResult r = run_gemm(am, bm, plan, det);
  const GemmReport rep = make_gemm_report(am, bm, plan, r, a.oracle);
  std::ostringstream canon;
  canon.precision(17);
  canon << "mode=" << a.mode << ";channels=" << a.channels << ";detector=" << a.detector
        << ";noise_sigma=" << a.noise_sigma << ";oracle=" << a.oracle;
  json j;
  j["header"] = header(fnv1a(canon.str()), det.seed);
  j["rows"] = rep.rows;
  j["inner"] = rep.inner;
  j["cols"] = rep.cols;
  j["mode"] = std::string(to_string(rep.mode));
  j["channels"] = rep.channels;
  j["slots"] = rep.slots;
  j["programming_events"] = rep.programming_events;
  j["max_rel_error"] = rep.max_rel_error ? json(*rep.max_rel_error) : json(nullptr);
  j["mean_rel_error"] = rep.mean_rel_error ? json(*rep.mean_rel_error) : json(nullptr);
  emit(a.output, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  if (!a.product.empty()) write_matrix_file(a.product, r.product);
  return kOk;
}

// -------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string archs = "clements", grid, output;
  std::size_t n = 8, trials = 100, jobs = 1;
};

std::vector<ArchTag> parse_arch_list(const std::string& list) {
  std::vector<ArchTag> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) throw ParseError("empty entry in --archs");
    const ArchTag t = parse_arch_tag(item);
    if (t == ArchTag::custom) throw ParseError("--archs accepts clements and fldzhyan");
    out.push_back(t);
  }
  if (out.empty()) throw ParseError("--archs is empty");
  return out;
}

int cmd_sweep(const SweepArgs& a, const Globals& g, std::ostream& out, std::ostream&) {
  const std::vector<ArchTag> archs = parse_arch_list(a.archs);
  if (a.n < 2) throw ParseError("--n must be >= 2");
  if (a.trials == 0) throw ParseError("--trials must be >= 1");
  SweepConfig sc = load_sweep_config(a.grid);
  sc.grid.trials_per_point = a.trials;
  sc.grid.base_seed = g.seed_or(std::nullopt);
  sc.options.jobs = std::max<std::size_t>(1, a.jobs);
  const auto rows = compare_architectures(archs, a.n, sc.grid, sc.options);
  emit(a.output, out, [&](std::ostream& o) {
    o << csv_header_comment(sc.digest, sc.grid.base_seed) << '\n';
    write_sweep_csv(o, rows);
  });
  return kOk;
}

// ------------------------------------------------------------------- device

struct DeviceRunArgs {
  std::string script, config, output;
};

json energy_json(const EnergyLedger& l, std::uint64_t t_ps) {
  const EnergyReport e = energy_report(l, t_ps);
  return json{{"programming_j", e.programming_j}, {"static_hold_j", e.static_hold_j},
              {"detection_j", e.detection_j},     {"dma_j", e.dma_j},
              {"total_j", e.total_j},             {"wall_time_s", e.wall_time_s},
              {"average_power_w", e.average_power_w}};
}

int cmd_device_run(const DeviceRunArgs& a, const Globals& g, std::ostream& out, std::ostream&) {
  RunConfig cfg = load_run_config(a.config);
  const HostScript script = load_host_script(a.script);
  const std::uint64_t seed = g.seed_or(cfg.seed);
  cfg.device.detector.seed = seed;
  std::vector<std::uint32_t> image;
  if (cfg.host_image) image = read_memory_image(*cfg.host_image);
  if (4 * image.size() > cfg.device.host_bytes)
    throw ParseError("host image is larger than host_bytes");

  const RunResult r = run_device(cfg.device, image, script);
  fs::create_directories(a.output);
  const fs::path dir(a.output);
  emit((dir / "trace.jsonl").string(), out, [&](std::ostream& o) { o << r.trace.to_jsonl(); });
  write_memory_image((dir / "memory.bin").string(), r.host_memory);

  std::string outcome = "completed";
  if (r.timeout_hit) outcome = "hang";
  else if (r.trace.count("error")) outcome = "error";
  json j;
  j["header"] = header(cfg.digest, seed);
  j["outcome"] = outcome;
  j["weights"] = std::string(to_string(cfg.device.weights));
  j["total_time_ps"] = r.total_time_ps;
  j["commands_completed"] = r.commands_completed;
  j["irq_count"] = r.irq_count;
  j["dma_bytes_read"] = r.dma_bytes_read;
  j["dma_bytes_written"] = r.dma_bytes_written;
  j["hold_power_w"] = r.hold_power_w;
  j["hold_time_ps"] = r.hold_time_ps;
  j["reads"] = r.reads;
  j["trace_events"] = r.trace.events.size();
  j["trace_digest"] = hex64(r.trace.digest());
  j["energy"] = energy_json(r.ledger, r.total_time_ps);
  emit((dir / "report.json").string(), out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  out << "device run: " << outcome << " at " << r.total_time_ps << " ps, trace digest "
      << hex64(r.trace.digest()) << '\n';
  return kOk;
}

struct DevicePackArgs {
  std::string weights, inputs, output;
  std::uint32_t channels = 1;
  std::uint64_t timeout_ps = 1'000'000'000;
};

int cmd_device_pack(const DevicePackArgs& a, const Globals&, std::ostream& out,
                    std::ostream& err) {
  const CMatrix w = read_matrix_file(a.weights);
  const CMatrix x = read_matrix_file(a.inputs);
  if (w.rows() != w.cols()) throw ParseError("--weights must be square");
  if (x.rows() != w.rows()) throw ParseError("--inputs row count must match --weights");
  if (w.rows() > 64) throw ParseError("device cores are limited to 64 ports");
  if (a.timeout_ps == 0) throw ParseError("--timeout-ps must be > 0");
  const auto layout = MvmLayout::make(static_cast<std::uint32_t>(w.rows()),
                                      static_cast<std::uint32_t>(x.cols()), a.channels);
  auto clips = [](const CMatrix& m) {
    return std::any_of(m.values().begin(), m.values().end(), [](const Complex& z) {
      return std::abs(z.real()) >= 1.0 || std::abs(z.imag()) >= 1.0;
    });
  };
  if (clips(w) || clips(x))
    err << "pnsim: warning: values outside [-1, 1) saturate in Q1.15\n";
  fs::create_directories(a.output);
  const fs::path dir(a.output);
  write_memory_image((dir / "image.bin").string(), pack_host_image(layout, w, x));
  emit((dir / "script.txt").string(), out, [&](std::ostream& o) {
    o << "# " << layout.n << "x" << layout.n << " MVM over " << layout.m
      << " vector(s); outputs at 0x" << std::hex << layout.output_addr << std::dec << '\n';
    write_host_script(o, make_mvm_script(layout, a.timeout_ps));
  });
  emit((dir / "device.ini").string(), out, [&](std::ostream& o) {
    o << "[device]\nn_ports = " << layout.n << "\n\n[paths]\nhost_image = image.bin\n";
  });
  out << "packed " << layout.n << "x" << layout.n << " x " << layout.m << " into " << a.output
      << " (outputs at byte 0x" << std::hex << layout.output_addr << std::dec << ")\n";
  return kOk;
}

// ------------------------------------------------------------------- faults

struct CampaignArgs {
  std::string script, config, faults, output;
  std::size_t random = 0, jobs = 1;
  double tol = kDefaultFaultTolerance;
};

int cmd_campaign(const CampaignArgs& a, const Globals& g, std::ostream& out, std::ostream&) {
  RunConfig cfg = load_run_config(a.config);
  const HostScript script = load_host_script(a.script);
  const std::uint64_t seed = g.seed_or(cfg.seed);
  cfg.device.detector.seed = seed;
  if (!(a.tol >= 0.0)) throw ParseError("--tol must be >= 0");
  std::vector<std::uint32_t> image;
  if (cfg.host_image) image = read_memory_image(*cfg.host_image);
  if (4 * image.size() > cfg.device.host_bytes)
    throw ParseError("host image is larger than host_bytes");

  std::vector<FaultSpec> faults;
  if (!a.faults.empty()) {
    faults = load_fault_list(a.faults);
  } else {
    const RunResult gold = run_device(cfg.device, image, script);
    RandomFaultConfig rc;
    rc.count = a.random;
    rc.seed = seed;
    rc.spm_words = static_cast<std::uint32_t>(
        std::min<std::size_t>(std::max<std::size_t>(image.size(), 1), cfg.device.spm_bytes / 4));
    rc.phase_sites = Device(cfg.device).phase_fault_sites();
    rc.n_ports = cfg.device.n_ports;
    rc.pcm_levels = cfg.device.pcm.num_levels();
    rc.horizon_ps = gold.total_time_ps;
    faults = random_faults(rc);
  }
  try {
    Device probe(cfg.device);
    for (const auto& f : faults) inject(probe, f);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  const CampaignResult r = campaign(cfg.device, image, script, faults, a.tol, a.jobs);
  emit(a.output, out, [&](std::ostream& o) {
    o << csv_header_comment(cfg.digest, seed) << '\n';
    write_campaign_csv(o, r);
  });
  out << "faults: " << r.rows.size() << " Masked=" << r.histogram[0] << " SDC=" << r.histogram[1]
      << " Detected=" << r.histogram[2] << " Hang=" << r.histogram[3] << '\n';
  return kOk;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pnsim: photonic MVM accelerator simulator"};
  app.set_version_flag("--version", std::string("pnsim ") + kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global --seed may follow the subcommand
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every stochastic step (default: config seed, else 0)");

  std::function<int()> action;

  DecomposeArgs dec;
  auto* c_dec = app.add_subcommand("decompose", "Program a mesh for a target matrix");
  c_dec->add_option("--target", dec.target, "Target matrix file")->required();
  c_dec->add_option("--arch", dec.arch, "clements | fldzhyan")->capture_default_str();
  c_dec->add_option("-o,--output", dec.output, "Program bundle to write")->required();
  c_dec->add_option("--restarts", dec.restarts, "Fit restarts (fldzhyan)")->capture_default_str();
  c_dec->add_option("--max-iterations", dec.max_iterations, "Fit iterations per restart")
      ->capture_default_str();
  c_dec->callback([&] { action = [&] { return cmd_decompose(dec, g, out, err); }; });

  MvmArgs mvm;
  auto* c_mvm = app.add_subcommand("mvm", "Run input vectors through a program");
  c_mvm->add_option("--program", mvm.program, "Program bundle from decompose")->required();
  c_mvm->add_option("--input", mvm.input, "Input vector or n x m matrix file")->required();
  c_mvm->add_option("--imperfections", mvm.imperfections, "Config with an [imperfections] section");
  c_mvm->add_option("--detector", mvm.detector, "coherent | direct")->capture_default_str();
  c_mvm->add_option("-o,--output", mvm.output, "Output file (default stdout)");
  c_mvm->callback([&] { action = [&] { return cmd_mvm(mvm, g, out, err); }; });

  GemmArgs gemm;
  auto* c_gemm = app.add_subcommand("gemm", "Weight-stationary matrix-matrix product");
  c_gemm->add_option("--a", gemm.a, "Square weight matrix file")->required();
  c_gemm->add_option("--b", gemm.b, "Streamed matrix file")->required();
  c_gemm->add_option("--mode", gemm.mode, "tdm | wdm")->capture_default_str();
  c_gemm->add_option("--channels", gemm.channels, "WDM channels per slot")->capture_default_str();
  c_gemm->add_option("--detector", gemm.detector, "coherent | direct")->capture_default_str();
  c_gemm->add_option("--noise-sigma", gemm.noise_sigma, "Detector noise")->capture_default_str();
  c_gemm->add_flag("--oracle", gemm.oracle, "Report error against a direct matmul");
  c_gemm->add_option("--product", gemm.product, "Also write the product matrix here");
  c_gemm->add_option("-o,--output", gemm.output, "JSON report (default stdout)");
  c_gemm->callback([&] { action = [&] { return cmd_gemm(gemm, g, out, err); }; });

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "Monte Carlo robustness sweep");
  c_sw->add_option("--archs", sw.archs, "Comma-separated architectures")->capture_default_str();
  c_sw->add_option("--n", sw.n, "Mesh size")->capture_default_str();
  c_sw->add_option("--grid", sw.grid, "Grid file")->required();
  c_sw->add_option("--trials", sw.trials, "Trials per grid point")->capture_default_str();
  c_sw->add_option("--jobs", sw.jobs, "Worker threads")->capture_default_str();
  c_sw->add_option("-o,--output", sw.output, "CSV output")->required();
  c_sw->callback([&] { action = [&] { return cmd_sweep(sw, g, out, err); }; });

  auto* c_dev = app.add_subcommand("device", "Memory-mapped device model");
  c_dev->require_subcommand(1);
  DeviceRunArgs dr;
  auto* c_run = c_dev->add_subcommand("run", "Execute a host script");
  c_run->add_option("--script", dr.script, "Host script")->required();
  c_run->add_option("--config", dr.config, "Run config")->required();
  c_run->add_option("-o,--output", dr.output, "Output directory")->required();
  c_run->callback([&] { action = [&] { return cmd_device_run(dr, g, out, err); }; });
  DevicePackArgs dp;
  auto* c_pack = c_dev->add_subcommand("pack", "Build a host image and MVM script");
  c_pack->add_option("--weights", dp.weights, "Square weight matrix file")->required();
  c_pack->add_option("--inputs", dp.inputs, "n x m input matrix file")->required();
  c_pack->add_option("--channels", dp.channels, "CHANNELS register value")->capture_default_str();
  c_pack->add_option("--timeout-ps", dp.timeout_ps, "WAITIRQ timeout")->capture_default_str();
  c_pack->add_option("-o,--output", dp.output, "Output directory")->required();
  c_pack->callback([&] { action = [&] { return cmd_device_pack(dp, g, out, err); }; });

  auto* c_faults = app.add_subcommand("faults", "Fault injection");
  c_faults->require_subcommand(1);
  CampaignArgs fc;
  auto* c_camp = c_faults->add_subcommand("campaign", "Gold run plus one run per fault");
  c_camp->add_option("--script", fc.script, "Host script")->required();
  c_camp->add_option("--config", fc.config, "Run config")->required();
  auto* o_list = c_camp->add_option("--faults", fc.faults, "Fault list file");
  auto* o_rand = c_camp->add_option("--random", fc.random, "Sample N random faults");
  o_list->excludes(o_rand);
  c_camp->add_option("--tol", fc.tol, "Per-component tolerance")->capture_default_str();
  c_camp->add_option("--jobs", fc.jobs, "Worker threads")->capture_default_str();
  c_camp->add_option("-o,--output", fc.output, "CSV output")->required();
  c_camp->callback([&] {
    if (fc.faults.empty() && c_camp->count("--random") == 0)
      throw CLI::ValidationError("faults campaign", "one of --faults or --random is required");
    action = [&] { return cmd_campaign(fc, g, out, err); };
  });

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "pnsim " << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "pnsim: error: " << one_line(e.what()) << '\n';
    return kBadInput;
  }

  try {
    return action ? action() : kBadInput;
  } catch (const ParseError& e) {
    err << "pnsim: error: " << one_line(e.what()) << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "pnsim: error: " << one_line(e.what()) << '\n';
    return kRuntimeFailure;
  }
}

}  // namespace pnsim::cli
