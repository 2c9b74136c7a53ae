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

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "pnsim/mesh.hpp"
#include "pnsim/mvm.hpp"

namespace pnsim::cli {

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kBadInput = 2 };

/// Entry point shared by the binary and the tests. args[0] is the program
/// name. Reports go to files or `out`; diagnostics to `err`, one line each.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Output of `decompose`: either a unitary mesh program or a general
/// (SVD) program.
struct MeshBundle {
  MeshTopology topology;
  PhaseProgram program;
};
using ProgramBundle = std::variant<MeshBundle, GeneralMatrixProgram>;

// Bundle text: optional '#' comment lines, then either "mesh" followed by a
// topology and a program, or a general program.
ProgramBundle read_bundle(std::istream& in);
ProgramBundle load_bundle(const std::string& path);
void write_bundle(std::ostream& out, const ProgramBundle& b);

}  // namespace pnsim::cli
