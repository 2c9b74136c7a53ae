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

#include "pnsim/linalg.hpp"
#include "pnsim/mesh.hpp"

namespace pnsim {

/// Unitarity tolerance accepted by decompose_clements.
inline constexpr double kDecomposeUnitarityTol = 1e-8;

/// Analytic programming of build_clements(n) for a unitary target.
///
/// Elements below the anti-diagonal are nulled diagonal by diagonal,
/// alternating MZIs applied from the right (even diagonals) and inverse MZIs
/// applied from the left (odd diagonals). The left factors are then pushed
/// through the remaining diagonal so that every MZI ends up in the
/// mzi_transfer convention, with the diagonal becoming the output phase
/// screen. Throws Error (naming the residual) when `u` is not unitary within
/// kDecomposeUnitarityTol.
PhaseProgram decompose_clements(const CMatrix& u);

struct FitConfig {
  std::size_t max_iterations = 400;
  std::size_t restarts = 4;
  double tolerance = 1e-12;  ///< stop a restart once the residual is below this
  std::uint64_t seed = 0;
  std::size_t jobs = 1;      ///< restarts evaluated concurrently
};

struct FitResult {
  PhaseProgram program;
  double residual = 1.0;  ///< 1 - fidelity(forward_matrix(t, program), target)
  std::size_t best_restart = 0;
};

/// Numerical phase fitting for meshes without an analytic rule: BFGS on
/// central finite-difference gradients of the residual, with random restarts.
/// The lowest residual wins; ties go to the lowest restart index. The global
/// phase is absorbed into the output phases, so the returned program matches
/// the target elementwise, not only up to phase.
FitResult fit_phases(const MeshTopology& t, const CMatrix& target, const FitConfig& cfg);

}  // namespace pnsim
