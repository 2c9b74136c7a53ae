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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pnsim/device.hpp"
#include "pnsim/robustness.hpp"

namespace pnsim {

/// Sectioned key = value text. '#' and ';' start comments; keys before the
/// first section header belong to the unnamed top-level section "". Any
/// duplicate key or section is a ParseError.
struct IniDocument {
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
  };
  /// Sections in file order.
  std::vector<std::pair<std::string, std::vector<Entry>>> sections;

  static IniDocument parse(std::istream& in, const std::string& origin = "<config>");
  const std::vector<Entry>* section(const std::string& name) const;
};

/// Everything a run needs. See docs/config.md for the schema.
struct RunConfig {
  std::optional<std::uint64_t> seed;
  DeviceConfig device;
  ImperfectionSpec imperfections;
  std::optional<std::string> host_image;  ///< resolved path, checked to exist
  std::optional<std::string> script;      ///< resolved path, checked to exist
  std::uint64_t digest = 0;               ///< FNV-1a of the raw config text
};

/// Unknown sections or keys, bad values and missing referenced files are
/// ParseErrors. Relative paths resolve against `base_dir`.
RunConfig parse_run_config(std::istream& in, const std::string& base_dir = ".",
                           const std::string& origin = "<config>");
RunConfig load_run_config(const std::string& path);

struct SweepConfig {
  SweepGrid grid;
  McOptions options;
  std::uint64_t digest = 0;
};

/// Grid file: a [grid] section of comma-separated axis values (axes kept in
/// file order), optional [imperfections] base values for axes not swept,
/// optional [fit] with max_iterations, restarts, tolerance, probes.
SweepConfig parse_sweep_config(std::istream& in, const std::string& origin = "<grid>");
SweepConfig load_sweep_config(const std::string& path);

}  // namespace pnsim
