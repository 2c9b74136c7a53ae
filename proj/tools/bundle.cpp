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

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "pnsim/error.hpp"

namespace pnsim::cli {

ProgramBundle read_bundle(std::istream& in) {
  std::string body, line;
  while (std::getline(in, line))
    if (line.empty() || line.front() != '#') body += line + '\n';
  std::istringstream ss(body);
  std::string kind;
  ss >> kind;
  if (kind == "mesh") {
    MeshTopology t = read_topology(ss);
    PhaseProgram p = read_program(ss);
    try {
      check_program(t, p);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(std::string("program bundle: ") + e.what());
    }
    return MeshBundle{std::move(t), std::move(p)};
  }
  if (kind == "general") {
    std::istringstream again(body);
    return read_general_program(again);
  }
  throw ParseError("program bundle: expected 'mesh' or 'general', got '" + kind + "'");
}

ProgramBundle load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open program '" + path + "'");
  return read_bundle(in);
}

void write_bundle(std::ostream& out, const ProgramBundle& b) {
  if (const auto* m = std::get_if<MeshBundle>(&b)) {
    out << "mesh\n";
    write_topology(out, m->topology);
    write_program(out, m->program);
  } else {
    write_general_program(out, std::get<GeneralMatrixProgram>(b));
  }
}

}  // namespace pnsim::cli
