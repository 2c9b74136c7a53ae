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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "device_cases.hpp"
#include "pnsim/linalg.hpp"

namespace pnsim {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::path(PNSIM_TEST_TMP) / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "pnsim");
    out_.str({});
    err_.str({});
    return cli::run(args, out_, err_);
  }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  std::string write_matrix(const std::string& name, const CMatrix& m) const {
    write_matrix_file(path(name), m);
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, DecomposeThenMvmIsIdentity) {
  const auto target = write_matrix("eye.txt", CMatrix::identity(4));
  CMatrix e1(4, 1);
  e1(0, 0) = 1.0;
  const auto input = write_matrix("x.txt", e1);
  ASSERT_EQ(run({"decompose", "--target", target, "--arch", "clements", "-o", path("p.txt")}),
            cli::kOk)
      << err_.str();
  ASSERT_EQ(run({"mvm", "--program", path("p.txt"), "--input", input, "-o", path("y.txt")}),
            cli::kOk)
      << err_.str();
  EXPECT_LE(max_abs_diff(read_matrix_file(path("y.txt")), e1), 1e-9);
}

TEST_F(CliTest, FittedMeshReproducesTarget) {
  const CMatrix u = haar_random_unitary(3, 4);
  const auto target = write_matrix("u.txt", u);
  const auto input = write_matrix("x.txt", CMatrix::identity(3));
  ASSERT_EQ(run({"decompose", "--target", target, "--arch", "fldzhyan", "--restarts", "6", "-o",
                 path("p.txt")}),
            cli::kOk)
      << err_.str();
  ASSERT_EQ(run({"mvm", "--program", path("p.txt"), "--input", input, "-o", path("y.txt")}),
            cli::kOk);
  EXPECT_LE(max_abs_diff(read_matrix_file(path("y.txt")), u), 1e-4);
}

TEST_F(CliTest, GeneralMatrixThroughSvdBundle) {
  CMatrix a(3, 3);
  a(0, 0) = 0.5;
  a(1, 2) = Complex(0, 0.2);
  a(2, 1) = -1.5;
  const auto target = write_matrix("a.txt", a);
  const auto input = write_matrix("x.txt", CMatrix::identity(3));
  ASSERT_EQ(run({"decompose", "--target", target, "-o", path("p.txt")}), cli::kOk);
  ASSERT_EQ(run({"mvm", "--program", path("p.txt"), "--input", input, "-o", path("y.txt")}),
            cli::kOk);
  EXPECT_LE(max_abs_diff(read_matrix_file(path("y.txt")), a), 1e-9);
}

TEST_F(CliTest, SweepIsByteIdenticalUnderSeed) {
  const auto grid = write("grid.ini", "[grid]\nphase_sigma = 0, 0.1\n");
  for (const char* name : {"a.csv", "b.csv"})
    ASSERT_EQ(run({"sweep", "--grid", grid, "--n", "4", "--trials", "6", "--archs",
                   "clements", "--seed", "5", "-o", path(name)}),
              cli::kOk)
        << err_.str();
  const std::string a = slurp(path("a.csv"));
  EXPECT_EQ(a, slurp(path("b.csv")));
  EXPECT_EQ(a.rfind("# pnsim ", 0), 0u);
  EXPECT_NE(a.find("seed=5"), std::string::npos);
  EXPECT_NE(a.find("config_digest="), std::string::npos);
  ASSERT_EQ(run({"sweep", "--grid", grid, "--n", "4", "--trials", "6", "--archs", "clements",
                 "--seed", "6", "--jobs", "3", "-o", path("c.csv")}),
            cli::kOk);
  EXPECT_NE(a, slurp(path("c.csv")));
}

TEST_F(CliTest, DeviceRunMatchesLibrary) {
  const auto c = testing::make_case(8, 4, 12);
  const auto w = write_matrix("w.txt", c.weights);
  const auto x = write_matrix("x.txt", c.inputs);
  ASSERT_EQ(run({"device", "pack", "--weights", w, "--inputs", x, "-o", path("pkg")}), cli::kOk)
      << err_.str();
  ASSERT_EQ(run({"device", "run", "--script", path("pkg/script.txt"), "--config",
                 path("pkg/device.ini"), "-o", path("out")}),
            cli::kOk)
      << err_.str();
  const auto memory = read_memory_image(path("out/memory.bin"));
  const CMatrix got = unpack_outputs(c.layout, memory);
  EXPECT_LE(max_abs_diff(got, matmul(c.weights, c.inputs)), 1.0 / 16384.0);

  const std::string report = slurp(path("out/report.json"));
  for (const char* key : {"\"version\"", "\"config_digest\"", "\"seed\"", "\"trace_digest\"",
                          "\"completed\""})
    EXPECT_NE(report.find(key), std::string::npos) << key;
  EXPECT_FALSE(slurp(path("out/trace.jsonl")).empty());

  // Same inputs, same trace.
  ASSERT_EQ(run({"device", "run", "--script", path("pkg/script.txt"), "--config",
                 path("pkg/device.ini"), "-o", path("out2")}),
            cli::kOk);
  EXPECT_EQ(slurp(path("out/trace.jsonl")), slurp(path("out2/trace.jsonl")));
}

TEST_F(CliTest, CampaignIndependentOfJobs) {
  const auto c = testing::make_case(8, 2, 3);
  ASSERT_EQ(run({"device", "pack", "--weights", write_matrix("w.txt", c.weights), "--inputs",
                 write_matrix("x.txt", c.inputs), "-o", path("pkg")}),
            cli::kOk);
  for (const char* jobs : {"1", "4"})
    ASSERT_EQ(run({"faults", "campaign", "--script", path("pkg/script.txt"), "--config",
                   path("pkg/device.ini"), "--random", "60", "--seed", "8", "--jobs", jobs, "-o",
                   path(std::string("f") + jobs + ".csv")}),
              cli::kOk)
        << err_.str();
  const std::string a = slurp(path("f1.csv"));
  EXPECT_EQ(a, slurp(path("f4.csv")));
  EXPECT_NE(a.find("fault_id,target,kind,time_ps,outcome,first_div_ps"), std::string::npos);
  EXPECT_NE(out_.str().find("faults: 60"), std::string::npos);
}

TEST_F(CliTest, CampaignFromFaultList) {
  const auto c = testing::make_case(8, 1, 3);
  ASSERT_EQ(run({"device", "pack", "--weights", write_matrix("w.txt", c.weights), "--inputs",
                 write_matrix("x.txt", c.inputs), "-o", path("pkg")}),
            cli::kOk);
  const auto list = write("faults.txt", "P MMR 0x00 0 0 0\nT SPM 0x5 3 0\n");
  ASSERT_EQ(run({"faults", "campaign", "--script", path("pkg/script.txt"), "--config",
                 path("pkg/device.ini"), "--faults", list, "-o", path("f.csv")}),
            cli::kOk)
      << err_.str();
  const std::string csv = slurp(path("f.csv"));
  EXPECT_NE(csv.find(",Hang,"), std::string::npos);
  EXPECT_NE(csv.find(",Masked,"), std::string::npos);
}

TEST_F(CliTest, GemmReportsOneProgrammingEvent) {
  const CMatrix a = haar_random_unitary(4, 1), b = haar_random_unitary(4, 2);
  ASSERT_EQ(run({"gemm", "--a", write_matrix("a.txt", a), "--b", write_matrix("b.txt", b),
                 "--mode", "wdm", "--channels", "2", "--oracle", "--product", path("c.txt"),
                 "-o", path("r.json")}),
            cli::kOk)
      << err_.str();
  const std::string rep = slurp(path("r.json"));
  EXPECT_NE(rep.find("\"programming_events\": 1"), std::string::npos) << rep;
  EXPECT_LE(max_abs_diff(read_matrix_file(path("c.txt")), matmul(a, b)), 1e-9);
}

TEST_F(CliTest, ExitCodeContract) {
  const auto eye = write_matrix("eye.txt", CMatrix::identity(3));
  const auto junk = write("junk.txt", "2 2\n1 0 zero\n");
  const auto nan = write("nan.txt", "1 1\nnan 0\n");
  const auto nonunitary = write_matrix("a.txt", CMatrix{{1, 2}, {3, 4}});
  const auto bad_grid = write("grid.ini", "[grid]\ntemperature = 3\n");
  const auto script = write("s.txt", "JUMP 0\n");
  const auto cfg = write("c.ini", "[device]\nn_ports = 4\n");
  const auto good_script = write("ok.txt", "W 0x08 0x8\nW 0x00 0x5\nWAITIRQ 1000\n");

  struct Case {
    std::vector<std::string> args;
    int code;
  };
  const std::vector<Case> cases = {
      {{}, cli::kBadInput},
      {{"frobnicate"}, cli::kBadInput},
      {{"decompose", "--target", eye}, cli::kBadInput},
      {{"decompose", "--target", eye, "-o", path("p"), "--bogus"}, cli::kBadInput},
      {{"decompose", "--target", path("missing.txt"), "-o", path("p")}, cli::kBadInput},
      {{"decompose", "--target", junk, "-o", path("p")}, cli::kBadInput},
      {{"decompose", "--target", nan, "-o", path("p")}, cli::kBadInput},
      {{"decompose", "--target", eye, "--arch", "reck", "-o", path("p")}, cli::kBadInput},
      {{"decompose", "--target", nonunitary, "--arch", "fldzhyan", "-o", path("p")},
       cli::kBadInput},
      {{"mvm", "--program", junk, "--input", eye}, cli::kBadInput},
      {{"sweep", "--grid", bad_grid, "-o", path("s.csv")}, cli::kBadInput},
      {{"sweep", "--grid", bad_grid, "--n", "0", "-o", path("s.csv")}, cli::kBadInput},
      {{"device", "run", "--script", script, "--config", cfg, "-o", path("d")}, cli::kBadInput},
      {{"faults", "campaign", "--script", good_script, "--config", cfg, "-o", path("f.csv")},
       cli::kBadInput},
      // Well-formed inputs whose gold run errors out: a runtime failure.
      {{"faults", "campaign", "--script", good_script, "--config", cfg, "--random", "3", "-o",
        path("f.csv")},
       cli::kRuntimeFailure},
  };
  for (const auto& c : cases) {
    std::string joined;
    for (const auto& a : c.args) joined += a + " ";
    EXPECT_EQ(run(c.args), c.code) << joined << "\n" << err_.str();
    const std::string e = err_.str();
    EXPECT_EQ(e.rfind("pnsim: error: ", 0), 0u) << joined << "\n" << e;
    EXPECT_EQ(std::count(e.begin(), e.end(), '\n'), 1) << joined << "\n" << e;
  }
}

TEST_F(CliTest, HelpAndVersionSucceed) {
  EXPECT_EQ(run({"--help"}), cli::kOk);
  EXPECT_EQ(run({"--version"}), cli::kOk);
  EXPECT_NE(out_.str().find("0.1.0"), std::string::npos);
}

}  // namespace
}  // namespace pnsim
