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

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pnsim/device.hpp"
#include "pnsim/error.hpp"

namespace pnsim {

namespace {

template <typename T>
T parse_number(const std::string& tok, int base, std::size_t line, const char* what) {
  std::string_view sv = tok;
  if (base == 16 && (sv.starts_with("0x") || sv.starts_with("0X"))) sv.remove_prefix(2);
  T v{};
  auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v, base);
  if (sv.empty() || ec != std::errc() || ptr != sv.data() + sv.size())
    throw ParseError("script line " + std::to_string(line) + ": bad " + what + " '" + tok + "'");
  return v;
}

}  // namespace

HostScript parse_host_script(std::istream& in) {
  HostScript s;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    auto expect = [&](std::size_t count) {
      if (tok.size() != count)
        throw ParseError("script line " + std::to_string(line) + ": " + tok[0] + " takes " +
                         std::to_string(count - 1) + " operand(s)");
    };
    auto hex32 = [&](std::size_t i, const char* what) {
      return parse_number<std::uint32_t>(tok[i], 16, line, what);
    };

    HostOp op;
    if (tok[0] == "W") {
      expect(3);
      op.kind = HostOp::Kind::write;
      op.offset = hex32(1, "offset");
      op.value = hex32(2, "value");
    } else if (tok[0] == "R") {
      expect(2);
      op.kind = HostOp::Kind::read;
      op.offset = hex32(1, "offset");
    } else if (tok[0] == "DMA") {
      expect(5);
      op.kind = HostOp::Kind::dma;
      op.dma.src = hex32(1, "src");
      op.dma.dst = hex32(2, "dst");
      op.dma.len = hex32(3, "len");
      if (tok[4] == "H2S") op.dma.direction = DmaDirection::host_to_spm;
      else if (tok[4] == "S2H") op.dma.direction = DmaDirection::spm_to_host;
      else throw ParseError("script line " + std::to_string(line) + ": direction must be H2S or S2H");
    } else if (tok[0] == "WAITIRQ" || tok[0] == "DELAY") {
      expect(2);
      op.kind = tok[0] == "DELAY" ? HostOp::Kind::delay : HostOp::Kind::wait_irq;
      op.ps = parse_number<std::uint64_t>(tok[1], 10, line, "time");
      if (op.kind == HostOp::Kind::wait_irq && op.ps == 0)
        throw ParseError("script line " + std::to_string(line) + ": WAITIRQ timeout must be > 0");
    } else {
      throw ParseError("script line " + std::to_string(line) + ": unknown transaction '" +
                       tok[0] + "'");
    }
    s.ops.push_back(op);
  }
  return s;
}

HostScript load_host_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open script '" + path + "'");
  return parse_host_script(in);
}

void write_host_script(std::ostream& out, const HostScript& s) {
  char buf[96];
  for (const auto& op : s.ops) {
    switch (op.kind) {
      case HostOp::Kind::write:
        std::snprintf(buf, sizeof buf, "W 0x%02x 0x%x", op.offset, op.value);
        break;
      case HostOp::Kind::read:
        std::snprintf(buf, sizeof buf, "R 0x%02x", op.offset);
        break;
      case HostOp::Kind::dma:
        std::snprintf(buf, sizeof buf, "DMA 0x%x 0x%x 0x%x %s", op.dma.src, op.dma.dst,
                      op.dma.len,
                      op.dma.direction == DmaDirection::host_to_spm ? "H2S" : "S2H");
        break;
      case HostOp::Kind::wait_irq:
        std::snprintf(buf, sizeof buf, "WAITIRQ %llu", static_cast<unsigned long long>(op.ps));
        break;
      case HostOp::Kind::delay:
        std::snprintf(buf, sizeof buf, "DELAY %llu", static_cast<unsigned long long>(op.ps));
        break;
    }
    out << buf << '\n';
  }
}

std::vector<std::uint32_t> read_memory_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open memory image '" + path + "'");
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (bytes.size() % 4) throw ParseError("memory image '" + path + "' is not a whole number of words");
  std::vector<std::uint32_t> words(bytes.size() / 4);
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::uint32_t w = 0;
    for (int b = 3; b >= 0; --b) w = (w << 8) | static_cast<unsigned char>(bytes[4 * i + b]);
    words[i] = w;
  }
  return words;
}

void write_memory_image(const std::string& path, std::span<const std::uint32_t> words) {
  std::string bytes(4 * words.size(), '\0');
  for (std::size_t i = 0; i < words.size(); ++i)
    for (int b = 0; b < 4; ++b) bytes[4 * i + b] = static_cast<char>((words[i] >> (8 * b)) & 0xffu);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write memory image '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing memory image '" + path + "'");
}

}  // namespace pnsim
