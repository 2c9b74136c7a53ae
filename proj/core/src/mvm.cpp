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

#include "pnsim/mvm.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "pnsim/decompose.hpp"
#include "pnsim/error.hpp"
#include "pnsim/rng.hpp"

namespace pnsim {

EncodedFrame encode_channels(std::span<const CVector> xs, double full_scale) {
  if (!(full_scale > 0.0) || !std::isfinite(full_scale))
    throw Error("encode: full_scale must be positive and finite");
  if (xs.empty()) throw Error("encode: no input vectors");
  EncodedFrame frame;
  frame.full_scale = full_scale;
  for (const auto& x : xs) {
    if (x.dim() != xs.front().dim()) throw Error("encode: channel dimensions differ");
    CVector ch(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
      if (std::abs(x[i]) > full_scale) {
        std::ostringstream os;
        os << "encode: |x[" << i << "]| = " << std::abs(x[i]) << " exceeds full_scale "
           << full_scale << " (would clip)";
        throw Error(os.str());
      }
      ch[i] = x[i] / full_scale;
    }
    frame.channels.push_back(std::move(ch));
  }
  return frame;
}

EncodedFrame encode_vector(const CVector& x, double full_scale) {
  return encode_channels(std::span<const CVector>(&x, 1), full_scale);
}

CVector decode_vector(const CVector& channel, double full_scale) {
  CVector out = channel;
  for (auto& z : out) z *= full_scale;
  return out;
}

GeneralMatrixProgram synthesize_general_matrix(const CMatrix& a) {
  if (!a.is_square() || a.rows() == 0)
    throw Error("synthesize_general_matrix: matrix must be square");
  const std::size_t n = a.rows();
  Eigen::MatrixXcd m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = a(r, c);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv(0);
  if (!(sigma_max > 0.0)) throw Error("synthesize_general_matrix: zero matrix has no program");

  CMatrix u(n, n), vh(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      u(r, c) = svd.matrixU()(r, c);
      vh(r, c) = std::conj(svd.matrixV()(c, r));
    }
  }
  GeneralMatrixProgram g;
  g.left_program = decompose_clements(u);
  g.right_program = decompose_clements(vh);
  g.attenuations.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.attenuations[i] = std::clamp(sv(i) / sigma_max, 0.0, 1.0);
  g.global_scale = sigma_max;
  return g;
}

namespace {

void check_general(const GeneralMatrixProgram& g) {
  const std::size_t n = g.attenuations.size();
  if (n == 0 || g.left_program.output_phases.size() != n ||
      g.right_program.output_phases.size() != n)
    throw Error("general program: inconsistent sizes");
}

}  // namespace

CMatrix general_forward_matrix(const GeneralMatrixProgram& g, const ImperfectionSample* left_imp,
                               const ImperfectionSample* right_imp) {
  check_general(g);
  const std::size_t n = g.attenuations.size();
  const MeshTopology topo = build_clements(n);
  CMatrix right = forward_matrix(topo, g.right_program, right_imp);
  for (std::size_t r = 0; r < n; ++r)
    for (auto& z : right.row(r)) z *= g.attenuations[r] * g.global_scale;
  return matmul(forward_matrix(topo, g.left_program, left_imp), right);
}

GeneralMatrixProgram quantize_attenuations(const GeneralMatrixProgram& g, int num_levels) {
  if (num_levels < 2) throw Error("quantize_attenuations: num_levels must be >= 2");
  GeneralMatrixProgram out = g;
  const double top = num_levels - 1;
  for (auto& a : out.attenuations) {
    if (a <= 0.0) continue;
    const double level = std::max(1.0, std::round(a * top));
    a = level / top;
  }
  return out;
}

std::string_view to_string(DetectionMode m) noexcept {
  return m == DetectionMode::coherent ? "coherent" : "direct";
}

DetectionMode parse_detection_mode(std::string_view text) {
  if (text == "coherent") return DetectionMode::coherent;
  if (text == "direct") return DetectionMode::direct;
  throw ParseError("detector mode must be coherent or direct (got '" + std::string(text) + "')");
}

namespace {

PhaseProgram scale_phases(const PhaseProgram& p, double factor) {
  PhaseProgram out = p;
  for (auto& s : out.settings) s = MZISetting::wrapped(s.theta * factor, s.phi * factor);
  for (auto& ph : out.output_phases) ph = wrap_phase(ph * factor);
  return out;
}

double dispersion_factor(const std::optional<Dispersion>& d, std::size_t channel) {
  if (!d) return 1.0;
  const double lambda = d->lambda_ref_nm + static_cast<double>(channel) * d->channel_spacing_nm;
  return d->lambda_ref_nm / lambda;
}

// Detector stage: noise on the normalized optical readout, then rescaling.
CVector read_out(const CVector& optical, double scale, std::size_t channel,
                 const MvmOptions& opts) {
  const auto& det = opts.detector;
  const std::size_t n = optical.dim();
  CVector out(n);
  for (std::size_t port = 0; port < n; ++port) {
    const std::uint64_t idx = (static_cast<std::uint64_t>(channel) * n + port) * 2;
    Complex y = optical[port];
    if (det.mode == DetectionMode::coherent) {
      if (det.noise_sigma > 0.0) {
        y += Complex(det.noise_sigma * CounterRng::normal_at(det.seed, opts.slot, idx),
                     det.noise_sigma * CounterRng::normal_at(det.seed, opts.slot, idx + 1));
      }
      out[port] = y * scale;
    } else {
      double power = std::norm(y);
      if (det.noise_sigma > 0.0)
        power += det.noise_sigma * CounterRng::normal_at(det.seed, opts.slot, idx);
      out[port] = Complex(power * scale * scale, 0.0);
    }
  }
  return out;
}

void check_frame(const EncodedFrame& frame, std::size_t n) {
  if (frame.channels.empty()) throw Error("run_mvm: frame has no channels");
  for (const auto& ch : frame.channels) {
    if (ch.dim() != n) {
      std::ostringstream os;
      os << "run_mvm: channel dimension " << ch.dim() << " does not match " << n << " ports";
      throw Error(os.str());
    }
  }
}

}  // namespace

std::vector<CVector> run_mvm(const MeshTopology& t, const PhaseProgram& p,
                             const EncodedFrame& frame, const MvmOptions& opts) {
  check_program(t, p, opts.imperfections);
  check_frame(frame, t.n_ports());
  std::vector<CVector> out;
  out.reserve(frame.channels.size());
  for (std::size_t k = 0; k < frame.channels.size(); ++k) {
    const double factor = dispersion_factor(opts.dispersion, k);
    const CVector y = factor == 1.0
                          ? apply_mesh(t, p, frame.channels[k], opts.imperfections)
                          : apply_mesh(t, scale_phases(p, factor), frame.channels[k],
                                       opts.imperfections);
    out.push_back(read_out(y, frame.full_scale, k, opts));
  }
  return out;
}

std::vector<CVector> run_mvm(const GeneralMatrixProgram& g, const EncodedFrame& frame,
                             const MvmOptions& opts) {
  check_general(g);
  const std::size_t n = g.attenuations.size();
  const MeshTopology topo = build_clements(n);
  check_frame(frame, n);
  std::vector<CVector> out;
  out.reserve(frame.channels.size());
  for (std::size_t k = 0; k < frame.channels.size(); ++k) {
    const double factor = dispersion_factor(opts.dispersion, k);
    const PhaseProgram& right = g.right_program;
    const PhaseProgram& left = g.left_program;
    CVector y = factor == 1.0
                    ? apply_mesh(topo, right, frame.channels[k], opts.imperfections)
                    : apply_mesh(topo, scale_phases(right, factor), frame.channels[k],
                                 opts.imperfections);
    for (std::size_t i = 0; i < n; ++i) y[i] *= g.attenuations[i];
    y = factor == 1.0 ? apply_mesh(topo, left, y, opts.output_imperfections)
                      : apply_mesh(topo, scale_phases(left, factor), y, opts.output_imperfections);
    out.push_back(read_out(y, frame.full_scale * g.global_scale, k, opts));
  }
  return out;
}

PhotonicCore::PhotonicCore(std::size_t n_ports) : n_(n_ports) {
  if (n_ == 0) throw Error("PhotonicCore: n_ports must be >= 1");
}

void PhotonicCore::program(const CMatrix& weights) {
  if (weights.rows() != n_ || weights.cols() != n_) {
    std::ostringstream os;
    os << "PhotonicCore: weights are " << weights.rows() << "x" << weights.cols()
       << ", core is " << n_ << "x" << n_;
    throw Error(os.str());
  }
  program(synthesize_general_matrix(weights));
}

void PhotonicCore::program(GeneralMatrixProgram g) {
  check_general(g);
  if (g.attenuations.size() != n_) throw Error("PhotonicCore: program size mismatch");
  program_ = std::move(g);
  programmed_ = true;
  ++programming_events_;
}

std::vector<CVector> PhotonicCore::infer(const EncodedFrame& frame, const MvmOptions& opts) const {
  if (!programmed_) throw Error("PhotonicCore: no weights programmed");
  return run_mvm(program_, frame, opts);
}

std::string_view to_string(GemmMode m) noexcept { return m == GemmMode::tdm ? "tdm" : "wdm"; }

GemmMode parse_gemm_mode(std::string_view text) {
  if (text == "tdm") return GemmMode::tdm;
  if (text == "wdm") return GemmMode::wdm;
  throw ParseError("gemm mode must be tdm or wdm (got '" + std::string(text) + "')");
}

std::size_t gemm_slots(GemmMode mode, std::size_t columns, std::size_t channels) {
  if (mode == GemmMode::tdm || channels <= 1) return columns;
  return (columns + channels - 1) / channels;
}

GemmResult run_gemm(const CMatrix& a, const CMatrix& b, const GemmPlan& plan,
                    const DetectorConfig& det) {
  if (a.cols() != b.rows()) {
    std::ostringstream os;
    os << "run_gemm: dimension mismatch (" << a.rows() << "x" << a.cols() << " times "
       << b.rows() << "x" << b.cols() << ")";
    throw Error(os.str());
  }
  if (!a.is_square()) throw Error("run_gemm: weight matrix must be square");
  if (plan.channels == 0) throw Error("run_gemm: channels must be >= 1");

  PhotonicCore core(a.rows());
  core.program(a);

  double full_scale = 0.0;
  for (const auto& z : b.values()) full_scale = std::max(full_scale, std::abs(z));
  if (full_scale == 0.0) full_scale = 1.0;

  const std::size_t m = b.cols();
  const std::size_t per_frame = plan.mode == GemmMode::tdm ? 1 : plan.channels;
  GemmResult result;
  result.product = CMatrix(a.rows(), m);
  result.slots = gemm_slots(plan.mode, m, plan.channels);

  MvmOptions opts;
  opts.detector = det;
  opts.dispersion = plan.dispersion;
  for (std::size_t slot = 0; slot < result.slots; ++slot) {
    std::vector<CVector> columns;
    for (std::size_t j = slot * per_frame; j < std::min(m, (slot + 1) * per_frame); ++j)
      columns.push_back(b.column(j));
    opts.slot = slot;
    const auto outs = core.infer(encode_channels(columns, full_scale), opts);
    for (std::size_t k = 0; k < outs.size(); ++k)
      result.product.set_column(slot * per_frame + k, outs[k]);
  }
  result.programming_events = core.programming_events();
  return result;
}

GemmReport make_gemm_report(const CMatrix& a, const CMatrix& b, const GemmPlan& plan,
                            const GemmResult& r, bool oracle) {
  GemmReport rep;
  rep.rows = a.rows();
  rep.inner = a.cols();
  rep.cols = b.cols();
  rep.mode = plan.mode;
  rep.channels = plan.mode == GemmMode::tdm ? 1 : plan.channels;
  rep.slots = r.slots;
  rep.programming_events = r.programming_events;
  if (oracle) {
    const CMatrix ref = matmul(a, b);
    double worst = 0.0, sum = 0.0;
    for (std::size_t j = 0; j < ref.cols(); ++j) {
      const CVector want = ref.column(j), got = r.product.column(j);
      double num = 0.0;
      for (std::size_t i = 0; i < want.dim(); ++i) num += std::norm(got[i] - want[i]);
      const double den = want.norm();
      const double rel = den > 0.0 ? std::sqrt(num) / den : std::sqrt(num);
      worst = std::max(worst, rel);
      sum += rel;
    }
    rep.max_rel_error = worst;
    rep.mean_rel_error = ref.cols() ? sum / static_cast<double>(ref.cols()) : 0.0;
  }
  return rep;
}

namespace {

void expect(std::istream& in, std::string_view key) {
  std::string tok;
  if (!(in >> tok) || tok != key)
    throw ParseError("general program: expected '" + std::string(key) + "', got '" + tok + "'");
}

double finite(std::istream& in, std::string_view what) {
  std::string tok;
  if (!(in >> tok)) throw ParseError("general program: missing " + std::string(what));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || !std::isfinite(v))
    throw ParseError("general program: bad " + std::string(what) + " '" + tok + "'");
  return v;
}

}  // namespace

GeneralMatrixProgram read_general_program(std::istream& in) {
  GeneralMatrixProgram g;
  expect(in, "general");
  expect(in, "n");
  long long n = 0;
  if (!(in >> n) || n <= 0) throw ParseError("general program: bad n");
  expect(in, "global_scale");
  g.global_scale = finite(in, "global_scale");
  expect(in, "attenuations");
  long long count = 0;
  if (!(in >> count) || count != n) throw ParseError("general program: attenuation count != n");
  g.attenuations.resize(static_cast<std::size_t>(n));
  for (auto& a : g.attenuations) {
    a = finite(in, "attenuation");
    if (a < 0.0 || a > 1.0) throw ParseError("general program: attenuation outside [0, 1]");
  }
  expect(in, "right");
  g.right_program = read_program(in);
  expect(in, "left");
  g.left_program = read_program(in);
  const std::size_t expected = static_cast<std::size_t>(n) * (n - 1) / 2;
  for (const auto* p : {&g.right_program, &g.left_program})
    if (p->settings.size() != expected || p->output_phases.size() != static_cast<std::size_t>(n))
      throw ParseError("general program: mesh program does not match n");
  return g;
}

void write_general_program(std::ostream& out, const GeneralMatrixProgram& g) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "general\n"
      << "n " << g.attenuations.size() << '\n'
      << "global_scale " << g.global_scale << '\n'
      << "attenuations " << g.attenuations.size() << '\n';
  for (std::size_t i = 0; i < g.attenuations.size(); ++i)
    out << (i ? " " : "") << g.attenuations[i];
  out << "\nright\n";
  write_program(out, g.right_program);
  out << "left\n";
  write_program(out, g.left_program);
  out.precision(old);
}

}  // namespace pnsim
