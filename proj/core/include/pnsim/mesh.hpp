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

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pnsim/linalg.hpp"

namespace pnsim {

/// Wraps any finite angle into [0, 2*pi).
double wrap_phase(double radians) noexcept;

/// Internal (theta) and external (phi) phase of one MZI, both in [0, 2*pi).
struct MZISetting {
  double theta = 0.0;
  double phi = 0.0;

  static MZISetting wrapped(double theta, double phi) noexcept {
    return {wrap_phase(theta), wrap_phase(phi)};
  }
  friend bool operator==(const MZISetting&, const MZISetting&) = default;
};

/// One MZI in column `layer`, coupling ports top_port and top_port + 1.
struct MZIPlacement {
  std::size_t layer = 0;
  std::size_t top_port = 0;
  friend bool operator==(const MZIPlacement&, const MZIPlacement&) = default;
};

enum class ArchTag { clements, fldzhyan, custom };

std::string_view to_string(ArchTag tag) noexcept;
ArchTag parse_arch_tag(std::string_view text);

/// Static arrangement of MZIs. Placements are kept in evaluation order
/// (non-decreasing layer); the constructor rejects overlapping placements
/// within a layer, gaps in the layer sequence and out-of-range ports.
class MeshTopology {
 public:
  MeshTopology(std::size_t n_ports, std::vector<MZIPlacement> placements,
               ArchTag arch = ArchTag::custom);

  std::size_t n_ports() const noexcept { return n_ports_; }
  const std::vector<MZIPlacement>& placements() const noexcept { return placements_; }
  std::size_t size() const noexcept { return placements_.size(); }
  std::size_t num_layers() const noexcept { return num_layers_; }
  ArchTag arch() const noexcept { return arch_; }

  /// Same topology with every placement in the final layer dropped.
  MeshTopology without_last_layer() const;

  friend bool operator==(const MeshTopology&, const MeshTopology&) = default;

 private:
  std::size_t n_ports_;
  std::vector<MZIPlacement> placements_;
  ArchTag arch_;
  std::size_t num_layers_ = 0;
};

/// The programmable phase state: one setting per placement plus the final
/// diagonal phase screen.
struct PhaseProgram {
  std::vector<MZISetting> settings;
  std::vector<double> output_phases;

  static PhaseProgram zeros(const MeshTopology& t);
  /// Every MZI in the bar state, output phases zero.
  static PhaseProgram bar(const MeshTopology& t);

  friend bool operator==(const PhaseProgram&, const PhaseProgram&) = default;
};

/// Fabrication/drift deviations of a single MZI.
struct MZIImperfection {
  double coupler1_delta = 0.0;  ///< added to the first coupler's pi/4 angle
  double coupler2_delta = 0.0;  ///< added to the second coupler's pi/4 angle
  double transmission = 1.0;    ///< field transmission, in (0, 1]
  double theta_offset = 0.0;
  double phi_offset = 0.0;
  friend bool operator==(const MZIImperfection&, const MZIImperfection&) = default;
};

struct ImperfectionSample {
  std::vector<MZIImperfection> mzi;
  std::vector<double> output_phase_offsets;

  static ImperfectionSample ideal(const MeshTopology& t);
  friend bool operator==(const ImperfectionSample&, const ImperfectionSample&) = default;
};

/// 2x2 transfer matrix
///   coupler(pi/4 + d2) * diag(e^{i theta}, 1) * coupler(pi/4 + d1) * diag(e^{i phi}, 1)
/// with coupler(k) = [[cos k, i sin k], [i sin k, cos k]], scaled by the
/// field transmission. theta = 0 is the cross state, theta = pi the bar state.
CMatrix mzi_transfer(const MZISetting& s, const MZIImperfection* imp = nullptr);

/// Rectangular mesh: layer l couples pairs whose top port has parity l % 2.
/// n(n-1)/2 MZIs; empty layers (n <= 2) are dropped.
MeshTopology build_clements(std::size_t n);

/// Layered mesh in the style of Fldzhyan et al.: MZI columns interleaved with
/// the parallel phase screens formed by the external phases. Layer l couples
/// pairs whose top port has parity (l + 1) % 2, i.e. the first mixing column
/// starts on the odd pairing. See docs/topologies.md.
MeshTopology build_fldzhyan(std::size_t n);

MeshTopology build_topology(ArchTag arch, std::size_t n);

/// Product of layer blocks followed by the output phase screen.
CMatrix forward_matrix(const MeshTopology& t, const PhaseProgram& p,
                       const ImperfectionSample* imp = nullptr);

/// forward_matrix(t, p, imp) * x, evaluated layer by layer.
CVector apply_mesh(const MeshTopology& t, const PhaseProgram& p, const CVector& x,
                   const ImperfectionSample* imp = nullptr);

/// Throws Error unless `p` (and `imp` when given) match `t`.
void check_program(const MeshTopology& t, const PhaseProgram& p,
                   const ImperfectionSample* imp = nullptr);

// Text formats. Topology:
//   n_ports <n>
//   arch_tag <clements|fldzhyan|custom>
//   placements <count>
//   <layer> <top_port>            (one line per placement)
// Program:
//   settings <count>
//   <theta> <phi>                 (one line per placement)
//   output_phases <n>
//   <phase> ...
MeshTopology read_topology(std::istream& in);
void write_topology(std::ostream& out, const MeshTopology& t);
PhaseProgram read_program(std::istream& in);
void write_program(std::ostream& out, const PhaseProgram& p);

}  // namespace pnsim
