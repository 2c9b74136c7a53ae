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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pnsim/linalg.hpp"
#include "pnsim/mesh.hpp"

namespace pnsim {

/// Optical input frame: one amplitude vector per wavelength channel, all
/// entries normalized by full_scale so that |x_i| <= 1.
struct EncodedFrame {
  std::vector<CVector> channels;
  double full_scale = 1.0;
};

/// Single-channel frame x / full_scale. Throws if full_scale would clip.
EncodedFrame encode_vector(const CVector& x, double full_scale);
/// One channel per vector, shared full_scale.
EncodedFrame encode_channels(std::span<const CVector> xs, double full_scale);
CVector decode_vector(const CVector& channel, double full_scale);

/// Arbitrary square matrix realized as global_scale * U * diag(att) * V^H,
/// with U and V^H each programmed onto a Clements mesh.
struct GeneralMatrixProgram {
  PhaseProgram left_program;   ///< U (output side)
  PhaseProgram right_program;  ///< V^H (input side, applied first)
  std::vector<double> attenuations;
  double global_scale = 1.0;
};

/// SVD synthesis. Throws Error for a zero or non-square matrix.
GeneralMatrixProgram synthesize_general_matrix(const CMatrix& a);

/// Matrix realized by a general program on build_clements(n) meshes.
CMatrix general_forward_matrix(const GeneralMatrixProgram& g,
                               const ImperfectionSample* left_imp = nullptr,
                               const ImperfectionSample* right_imp = nullptr);

/// Snap attenuations to the absorptive level grid {k / (L-1)}, keeping at
/// least level 1 for nonzero entries.
GeneralMatrixProgram quantize_attenuations(const GeneralMatrixProgram& g, int num_levels);

enum class DetectionMode { coherent, direct };

std::string_view to_string(DetectionMode m) noexcept;
DetectionMode parse_detection_mode(std::string_view text);

struct DetectorConfig {
  DetectionMode mode = DetectionMode::coherent;
  double noise_sigma = 0.0;  ///< additive Gaussian, per readout, in normalized units
  std::uint64_t seed = 0;
};

/// First-order chromatic model: channel k at lambda_ref + k * spacing sees
/// every programmed phase scaled by lambda_ref / lambda_k.
struct Dispersion {
  double lambda_ref_nm = 1550.0;
  double channel_spacing_nm = 0.8;
};

struct MvmOptions {
  DetectorConfig detector;
  /// Mesh imperfections (the V^H mesh for general programs).
  const ImperfectionSample* imperfections = nullptr;
  /// U-mesh imperfections; general programs only.
  const ImperfectionSample* output_imperfections = nullptr;
  std::optional<Dispersion> dispersion;
  /// Time-slot index; keys the detector noise stream with (channel, port).
  std::uint64_t slot = 0;
};

/// Runs every channel of `frame` through the mesh. Coherent readout returns
/// y * full_scale; direct readout returns |y * full_scale|^2 in the real part.
std::vector<CVector> run_mvm(const MeshTopology& t, const PhaseProgram& p,
                             const EncodedFrame& frame, const MvmOptions& opts = {});
/// General programs use build_clements(n) for both meshes and additionally
/// scale by global_scale.
std::vector<CVector> run_mvm(const GeneralMatrixProgram& g, const EncodedFrame& frame,
                             const MvmOptions& opts = {});

/// A weight-stationary photonic MVM core. Weights are programmed once and
/// reused for every frame; programming_events() counts programming calls.
class PhotonicCore {
 public:
  explicit PhotonicCore(std::size_t n_ports);

  void program(const CMatrix& weights);
  void program(GeneralMatrixProgram g);

  bool programmed() const noexcept { return programmed_; }
  std::size_t n_ports() const noexcept { return n_; }
  std::size_t programming_events() const noexcept { return programming_events_; }
  const GeneralMatrixProgram& current() const noexcept { return program_; }

  std::vector<CVector> infer(const EncodedFrame& frame, const MvmOptions& opts = {}) const;

 private:
  std::size_t n_;
  GeneralMatrixProgram program_;
  bool programmed_ = false;
  std::size_t programming_events_ = 0;
};

enum class GemmMode { tdm, wdm };

std::string_view to_string(GemmMode m) noexcept;
GemmMode parse_gemm_mode(std::string_view text);

struct GemmPlan {
  GemmMode mode = GemmMode::tdm;
  std::size_t channels = 1;  ///< WDM channels per frame; ignored for TDM
  std::optional<Dispersion> dispersion;
};

/// Optical slots needed to stream `columns` vectors: TDM uses one per
/// column, WDM ceil(columns / channels).
std::size_t gemm_slots(GemmMode mode, std::size_t columns, std::size_t channels);

struct GemmResult {
  CMatrix product;
  std::size_t slots = 0;
  std::size_t programming_events = 0;
};

/// a * b with `a` programmed once and the columns of `b` streamed through
/// the core. `a` must be square.
GemmResult run_gemm(const CMatrix& a, const CMatrix& b, const GemmPlan& plan,
                    const DetectorConfig& det = {});

struct GemmReport {
  std::size_t rows = 0, inner = 0, cols = 0;
  GemmMode mode = GemmMode::tdm;
  std::size_t channels = 1;
  std::size_t slots = 0;
  std::size_t programming_events = 0;
  std::optional<double> max_rel_error;   ///< per-column relative l2 vs matmul
  std::optional<double> mean_rel_error;
};

GemmReport make_gemm_report(const CMatrix& a, const CMatrix& b, const GemmPlan& plan,
                            const GemmResult& r, bool oracle);

// General program text format: "general", "n <n>", "global_scale <s>",
// "attenuations <n>" + values, then "right" + program, "left" + program.
GeneralMatrixProgram read_general_program(std::istream& in);
void write_general_program(std::ostream& out, const GeneralMatrixProgram& g);

}  // namespace pnsim
