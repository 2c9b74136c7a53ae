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

#include "pnsim/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "pnsim/error.hpp"

namespace pnsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Block {
  Complex a, b, c, d;  // [[a, b], [c, d]]
};

Block mzi_block(const MZISetting& s, const MZIImperfection* imp) {
  double theta = s.theta, phi = s.phi;
  double k1 = std::numbers::pi / 4, k2 = std::numbers::pi / 4;
  double t = 1.0;
  if (imp) {
    theta += imp->theta_offset;
    phi += imp->phi_offset;
    k1 += imp->coupler1_delta;
    k2 += imp->coupler2_delta;
    t = imp->transmission;
  }
  const Complex i1(0.0, 1.0);
  const Complex ep = std::polar(1.0, phi);
  const Complex et = std::polar(1.0, theta);
  const double c1 = std::cos(k1), s1 = std::sin(k1);
  const double c2 = std::cos(k2), s2 = std::sin(k2);
  // X = coupler(k1) * diag(e^{i phi}, 1)
  const Complex x00 = c1 * ep, x01 = i1 * s1;
  const Complex x10 = i1 * s1 * ep, x11 = c1;
  // Y = diag(e^{i theta}, 1) * X
  const Complex y00 = et * x00, y01 = et * x01;
  // Z = coupler(k2) * Y
  Block z;
  z.a = t * (c2 * y00 + i1 * s2 * x10);
  z.b = t * (c2 * y01 + i1 * s2 * x11);
  z.c = t * (i1 * s2 * y00 + c2 * x10);
  z.d = t * (i1 * s2 * y01 + c2 * x11);
  return z;
}

void check_sample(const MeshTopology& t, const ImperfectionSample& imp) {
  if (imp.mzi.size() != t.size() || imp.output_phase_offsets.size() != t.n_ports())
    throw Error("imperfection sample does not match topology");
  for (const auto& m : imp.mzi)
    if (!(m.transmission > 0.0 && m.transmission <= 1.0))
      throw Error("MZI transmission must lie in (0, 1]");
}

}  // namespace

double wrap_phase(double radians) noexcept {
  double w = std::fmod(radians, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

std::string_view to_string(ArchTag tag) noexcept {
  switch (tag) {
    case ArchTag::clements: return "clements";
    case ArchTag::fldzhyan: return "fldzhyan";
    case ArchTag::custom: return "custom";
  }
  return "custom";
}

ArchTag parse_arch_tag(std::string_view text) {
  if (text == "clements") return ArchTag::clements;
  if (text == "fldzhyan") return ArchTag::fldzhyan;
  if (text == "custom") return ArchTag::custom;
  throw ParseError("unknown architecture '" + std::string(text) + "'");
}

MeshTopology::MeshTopology(std::size_t n_ports, std::vector<MZIPlacement> placements,
                           ArchTag arch)
    : n_ports_(n_ports), placements_(std::move(placements)), arch_(arch) {
  if (n_ports_ == 0) throw Error("MeshTopology: n_ports must be >= 1");
  std::vector<std::size_t> port_layer(n_ports_, std::numeric_limits<std::size_t>::max());
  std::size_t current = 0;
  for (std::size_t i = 0; i < placements_.size(); ++i) {
    const auto& pl = placements_[i];
    if (pl.top_port + 1 >= n_ports_) {
      std::ostringstream os;
      os << "MeshTopology: placement " << i << " top_port " << pl.top_port
         << " out of range for " << n_ports_ << " ports";
      throw Error(os.str());
    }
    if (i == 0 ? pl.layer != 0 : (pl.layer != current && pl.layer != current + 1)) {
      std::ostringstream os;
      os << "MeshTopology: placement " << i << " breaks contiguous layer order";
      throw Error(os.str());
    }
    current = pl.layer;
    for (std::size_t p : {pl.top_port, pl.top_port + 1}) {
      if (port_layer[p] == pl.layer) {
        std::ostringstream os;
        os << "MeshTopology: port " << p << " used twice in layer " << pl.layer;
        throw Error(os.str());
      }
      port_layer[p] = pl.layer;
    }
  }
  num_layers_ = placements_.empty() ? 0 : current + 1;
}

MeshTopology MeshTopology::without_last_layer() const {
  std::vector<MZIPlacement> kept;
  for (const auto& p : placements_)
    if (p.layer + 1 < num_layers_) kept.push_back(p);
  return MeshTopology(n_ports_, std::move(kept), ArchTag::custom);
}

PhaseProgram PhaseProgram::zeros(const MeshTopology& t) {
  return {std::vector<MZISetting>(t.size()), std::vector<double>(t.n_ports(), 0.0)};
}

PhaseProgram PhaseProgram::bar(const MeshTopology& t) {
  return {std::vector<MZISetting>(t.size(), MZISetting{std::numbers::pi, 0.0}),
          std::vector<double>(t.n_ports(), 0.0)};
}

ImperfectionSample ImperfectionSample::ideal(const MeshTopology& t) {
  return {std::vector<MZIImperfection>(t.size()), std::vector<double>(t.n_ports(), 0.0)};
}

CMatrix mzi_transfer(const MZISetting& s, const MZIImperfection* imp) {
  const Block b = mzi_block(s, imp);
  return CMatrix{{b.a, b.b}, {b.c, b.d}};
}

namespace {

MeshTopology build_brick(std::size_t n, std::size_t first_parity, ArchTag tag) {
  if (n == 0) throw Error("mesh size must be >= 1");
  std::vector<MZIPlacement> placements;
  std::size_t layer = 0;
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t parity = (col + first_parity) % 2;
    bool any = false;
    for (std::size_t p = parity; p + 1 < n; p += 2) {
      placements.push_back({layer, p});
      any = true;
    }
    if (any) ++layer;
  }
  return MeshTopology(n, std::move(placements), tag);
}

}  // namespace

MeshTopology build_clements(std::size_t n) { return build_brick(n, 0, ArchTag::clements); }

MeshTopology build_fldzhyan(std::size_t n) {
  if (n < 2) throw Error("build_fldzhyan: n must be >= 2");
  return build_brick(n, 1, ArchTag::fldzhyan);
}

MeshTopology build_topology(ArchTag arch, std::size_t n) {
  switch (arch) {
    case ArchTag::clements: return build_clements(n);
    case ArchTag::fldzhyan: return build_fldzhyan(n);
    case ArchTag::custom: break;
  }
  throw Error("build_topology: custom meshes must be loaded from a topology file");
}

void check_program(const MeshTopology& t, const PhaseProgram& p,
                   const ImperfectionSample* imp) {
  if (p.settings.size() != t.size() || p.output_phases.size() != t.n_ports()) {
    std::ostringstream os;
    os << "phase program (" << p.settings.size() << " settings, "
       << p.output_phases.size() << " output phases) does not match topology ("
       << t.size() << " placements, " << t.n_ports() << " ports)";
    throw Error(os.str());
  }
  if (imp) check_sample(t, *imp);
}

CMatrix forward_matrix(const MeshTopology& t, const PhaseProgram& p,
                       const ImperfectionSample* imp) {
  check_program(t, p, imp);
  const std::size_t n = t.n_ports();
  CMatrix m = CMatrix::identity(n);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Block b = mzi_block(p.settings[k], imp ? &imp->mzi[k] : nullptr);
    const std::size_t r = t.placements()[k].top_port;
    auto top = m.row(r);
    auto bot = m.row(r + 1);
    for (std::size_t c = 0; c < n; ++c) {
      const Complex u = top[c], v = bot[c];
      top[c] = b.a * u + b.b * v;
      bot[c] = b.c * u + b.d * v;
    }
  }
  for (std::size_t r = 0; r < n; ++r) {
    const double ph = p.output_phases[r] + (imp ? imp->output_phase_offsets[r] : 0.0);
    const Complex e = std::polar(1.0, ph);
    for (auto& z : m.row(r)) z *= e;
  }
  return m;
}

CVector apply_mesh(const MeshTopology& t, const PhaseProgram& p, const CVector& x,
                   const ImperfectionSample* imp) {
  check_program(t, p, imp);
  if (x.dim() != t.n_ports()) {
    std::ostringstream os;
    os << "apply_mesh: input has dimension " << x.dim() << ", mesh has "
       << t.n_ports() << " ports";
    throw Error(os.str());
  }
  CVector y = x;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Block b = mzi_block(p.settings[k], imp ? &imp->mzi[k] : nullptr);
    const std::size_t r = t.placements()[k].top_port;
    const Complex u = y[r], v = y[r + 1];
    y[r] = b.a * u + b.b * v;
    y[r + 1] = b.c * u + b.d * v;
  }
  for (std::size_t r = 0; r < y.dim(); ++r) {
    const double ph = p.output_phases[r] + (imp ? imp->output_phase_offsets[r] : 0.0);
    y[r] *= std::polar(1.0, ph);
  }
  return y;
}

namespace {

void expect_keyword(std::istream& in, std::string_view key) {
  std::string tok;
  if (!(in >> tok) || tok != key)
    throw ParseError("expected '" + std::string(key) + "', got '" + tok + "'");
}

template <typename T>
T read_value(std::istream& in, std::string_view what) {
  T v{};
  if (!(in >> v)) throw ParseError("malformed or missing " + std::string(what));
  return v;
}

double read_finite(std::istream& in, std::string_view what) {
  std::string tok;
  if (!(in >> tok)) throw ParseError("missing " + std::string(what));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || !std::isfinite(v))
    throw ParseError("bad " + std::string(what) + " '" + tok + "'");
  return v;
}

std::size_t read_count(std::istream& in, std::string_view what) {
  const long long v = read_value<long long>(in, what);
  if (v < 0) throw ParseError("negative " + std::string(what));
  return static_cast<std::size_t>(v);
}

}  // namespace

MeshTopology read_topology(std::istream& in) {
  expect_keyword(in, "n_ports");
  const std::size_t n = read_count(in, "n_ports");
  expect_keyword(in, "arch_tag");
  const ArchTag tag = parse_arch_tag(read_value<std::string>(in, "arch_tag"));
  expect_keyword(in, "placements");
  const std::size_t count = read_count(in, "placement count");
  std::vector<MZIPlacement> placements(count);
  for (auto& p : placements) {
    p.layer = read_count(in, "layer");
    p.top_port = read_count(in, "top_port");
  }
  try {
    return MeshTopology(n, std::move(placements), tag);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

void write_topology(std::ostream& out, const MeshTopology& t) {
  out << "n_ports " << t.n_ports() << '\n'
      << "arch_tag " << to_string(t.arch()) << '\n'
      << "placements " << t.size() << '\n';
  for (const auto& p : t.placements()) out << p.layer << ' ' << p.top_port << '\n';
}

PhaseProgram read_program(std::istream& in) {
  PhaseProgram p;
  expect_keyword(in, "settings");
  p.settings.resize(read_count(in, "settings count"));
  for (auto& s : p.settings) {
    const double theta = read_finite(in, "theta");
    const double phi = read_finite(in, "phi");
    s = MZISetting::wrapped(theta, phi);
  }
  expect_keyword(in, "output_phases");
  p.output_phases.resize(read_count(in, "output phase count"));
  for (auto& ph : p.output_phases) ph = wrap_phase(read_finite(in, "output phase"));
  return p;
}

void write_program(std::ostream& out, const PhaseProgram& p) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "settings " << p.settings.size() << '\n';
  for (const auto& s : p.settings) out << s.theta << ' ' << s.phi << '\n';
  out << "output_phases " << p.output_phases.size() << '\n';
  for (std::size_t i = 0; i < p.output_phases.size(); ++i)
    out << (i ? " " : "") << p.output_phases[i];
  out << '\n';
  out.precision(old);
}

}  // namespace pnsim
