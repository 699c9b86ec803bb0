#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "dmpfem/cli.hpp"

using namespace dmpfem;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("dmpfem_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load(const std::string& path) { return nlohmann::json::parse(slurp(path)); }

}  // namespace

TEST_CASE("mesh-gen") {
  TempDir tmp;
  auto r = run({"mesh-gen", "--square", "8x8", "--pattern", "right-diagonal", "-o", tmp / "mesh.json"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("128 cells") != std::string::npos);
  CHECK(r.out.find("non-obtuse") != std::string::npos);
  CHECK(load(tmp / "mesh.json")["cells"].size() == 128);

  r = run({"mesh-gen", "--square", "4x4", "--skew", "0.6"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find(", obtuse") != std::string::npos);

  r = run({"mesh-gen", "--cube", "2x2x2", "--vtk", tmp / "cube.vtk"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("48 cells") != std::string::npos);
  CHECK(r.out.find("non-obtuse") != std::string::npos);
  CHECK(slurp(tmp / "cube.vtk").find("SCALARS max_angle double 1") != std::string::npos);

  CHECK(run({"mesh-gen", "--square", "0x4"}).code == kExitUsage);
  CHECK(run({"mesh-gen", "--square", "8"}).code == kExitUsage);
  CHECK(run({"mesh-gen", "--square", "2x2", "--cube", "2x2x2"}).code == kExitUsage);
  CHECK(run({"mesh-gen", "--square", "2x2", "--pattern", "zigzag"}).code == kExitUsage);
  CHECK(run({"mesh-gen", "--square", "2x2", "--skew", "1.5"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("solve") {
  TempDir tmp;
  auto r = run({"solve", "--square", "8x8", "--f=-1", "-o", tmp / "poisson"});
  CHECK(r.code == kExitOk);
  auto doc = load(tmp / "poisson/result.json");
  CHECK(doc["result"]["converged"] == true);
  CHECK(doc["result"]["picard_iterations"] == 1);
  CHECK(doc["problem"]["preset"] == "poisson");
  CHECK(fs::exists(tmp / "poisson/solution.csv"));
  CHECK(fs::exists(tmp / "poisson/solution.vtk"));
  CHECK(fs::exists(tmp / "poisson/mesh.json"));

  r = run({"solve", "--square", "8x8", "--problem", "quasilinear-a", "--f=-1", "-o", tmp / "ql"});
  CHECK(r.code == kExitOk);
  doc = load(tmp / "ql/result.json");
  CHECK(doc["result"]["converged"] == true);
  CHECK(doc["result"]["picard_iterations"].get<int>() > 1);

  r = run({"solve", "--square", "8x8", "--picard-max-iter", "0", "-o", tmp / "bad"});
  CHECK(r.code == kExitPicardDiverged);
  CHECK(r.err.find("PicardDiverged") != std::string::npos);

  r = run({"solve", "--square", "24x24", "--f=-1", "--linear-method", "gmres", "--linear-max-iter", "1", "-o", tmp / "lin"});
  CHECK(r.code == kExitLinearDiverged);

  CHECK(run({"solve", "--square", "4x4", "--problem", "advection-diffusion", "--b", "1", "-o", tmp / "x"}).code ==
        kExitUsage);
  CHECK(run({"solve", "--square", "4x4", "--f", "sin(", "-o", tmp / "x"}).code == kExitUsage);
  CHECK(run({"solve", "--mesh", tmp / "missing.json", "-o", tmp / "x"}).code == kExitUsage);

  // problem file with the expression language
  {
    std::ofstream spec(tmp / "problem.json");
    spec << R"j({"preset": "custom", "a": "1 + 0.5*eta^2/(1+eta^2)", "b": ["0.5", "-0.5"], "c": "0",
                "f": "-2*x", "g": "x*y", "lambda": 1, "Lambda": 1.5})j";
  }
  r = run({"solve", "--square", "8x8", "--problem-file", tmp / "problem.json", "-o", tmp / "custom"});
  CHECK(r.code == kExitOk);
  doc = load(tmp / "custom/result.json");
  CHECK(doc["problem"]["preset"] == "custom");
  CHECK(doc["result"]["picard_iterations"].get<int>() > 1);
}

TEST_CASE("dmp-check") {
  TempDir tmp;
  auto r = run({"dmp-check", "--square", "8x8", "--f=-1", "--solve", "-o", tmp / "ok"});
  CHECK(r.code == kExitOk);
  auto cert = load(tmp / "ok/certificate.json");
  for (const char* key : {"k_star", "sup_uh", "theorem_3_2", "theorem_3_3", "assumption_a", "element_condition",
                          "edge_condition", "level_sets", "de_giorgi"}) {
    REQUIRE(cert.contains(key));
    CHECK(cert[key]["verdict"] == "pass");
  }
  CHECK(cert["seed"] == 1);
  CHECK(slurp(tmp / "ok/levelsets.csv").rfind("k,measure\n", 0) == 0);

  r = run({"dmp-check", "--square", "4x4", "--skew", "0.6", "--f=-1", "--solve", "--checks", "element", "-o", tmp / "obtuse"});
  CHECK(r.code == kExitCertificateFailed);
  cert = load(tmp / "obtuse/certificate.json");
  CHECK(cert["element_condition"]["verdict"] == "fail");
  CHECK(cert["element_condition"]["offending"].size() > 0);
  CHECK(cert["element_condition"]["offending"][0].contains("cell"));
  CHECK(cert["checks"] == nlohmann::json::array({"element"}));

  r = run({"dmp-check", "--square", "8x8", "--f", "1", "--solve", "--checks", "degiorgi", "-o", tmp / "dg"});
  CHECK(r.code == kExitOk);
  cert = load(tmp / "dg/certificate.json");
  CHECK(cert["de_giorgi"]["k_tau"].size() == 41);
  CHECK(cert["de_giorgi"]["verdict"] == "pass");
  CHECK(cert["theorem_3_3"]["verdict"] == "not-applicable");

  CHECK(run({"dmp-check", "--square", "4x4", "--checks", "bogus", "--solve", "-o", tmp / "x"}).code == kExitUsage);
  CHECK(run({"dmp-check", "--square", "4x4", "-o", tmp / "x"}).code == kExitUsage);
  CHECK(run({"dmp-check", "--square", "4x4", "--solve", "--p", "1.5", "-o", tmp / "x"}).code == kExitUsage);
  CHECK(run({"dmp-check", "--square", "4x4", "--solve", "--picard-max-iter", "0", "-o", tmp / "x"}).code ==
        kExitPicardDiverged);
}

TEST_CASE("determinism") {
  TempDir tmp;
  const std::vector<std::string> base = {"dmp-check", "--square", "8x8", "--problem", "quasilinear-a", "--f=-1",
                                         "--g", "0.5*x - y", "--solve", "--seed", "42"};
  auto with_out = [&](const std::string& dir) {
    std::vector<std::string> a = base;
    a.insert(a.begin() + 1, {"-o", tmp / dir});
    return a;
  };
  // --seed is a top-level option
  std::vector<std::string> first = with_out("a");
  first.erase(first.end() - 2, first.end());
  first.insert(first.begin(), {"--seed", "42"});
  std::vector<std::string> second = with_out("b");
  second.erase(second.end() - 2, second.end());
  second.insert(second.begin(), {"--seed", "42"});

  ::setenv("DMPFEM_THREADS", "1", 1);
  REQUIRE(run(first).code == kExitOk);
  ::setenv("DMPFEM_THREADS", "4", 1);
  REQUIRE(run(second).code == kExitOk);
  ::unsetenv("DMPFEM_THREADS");
  CHECK(slurp(tmp / "a/certificate.json") == slurp(tmp / "b/certificate.json"));
  CHECK(load(tmp / "a/certificate.json")["seed"] == 42);

  // solve then check equals check --solve
  REQUIRE(run({"--seed", "42", "solve", "--square", "8x8", "--problem", "quasilinear-a", "--f=-1", "--g", "0.5*x - y",
               "-o", tmp / "s"})
              .code == kExitOk);
  REQUIRE(run({"--seed", "42", "dmp-check", "--mesh", tmp / "s/mesh.json", "--problem", "quasilinear-a", "--f=-1",
               "--g", "0.5*x - y", "--solution", tmp / "s/solution.csv", "-o", tmp / "c"})
              .code == kExitOk);
  CHECK(slurp(tmp / "a/certificate.json") == slurp(tmp / "c/certificate.json"));
}

TEST_CASE("report") {
  TempDir tmp;
  std::vector<std::string> files;
  for (const char* n : {"16x16", "4x4", "8x8"}) {
    const std::string dir = tmp / n;
    REQUIRE(run({"dmp-check", "--square", n, "--f", "1", "--solve", "-o", dir}).code == kExitOk);
    files.push_back(dir + "/certificate.json");
  }
  REQUIRE(run({"dmp-check", "--square", "4x4", "--skew", "0.6", "--f=-1", "--solve", "-o", tmp / "obtuse"}).code ==
          kExitCertificateFailed);

  std::vector<std::string> args = {"report", "--csv", tmp / "table.csv"};
  args.insert(args.end(), files.begin(), files.end());
  args.push_back(tmp / "obtuse/certificate.json");
  const auto r = run(args);
  CHECK(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> rows;
  std::getline(lines, line);
  CHECK(line.rfind("h ", 0) == 0);
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].find("16x16") != std::string::npos);
  CHECK(rows[1].find("8x8") != std::string::npos);
  CHECK(rows[2].find("4x4/") != std::string::npos);
  CHECK(rows[3].find("obtuse") != std::string::npos);
  CHECK(rows[3].find("fail") != std::string::npos);
  CHECK(rows[0].find("fail") == std::string::npos);
  CHECK(slurp(tmp / "table.csv").rfind("file,h,max_angle", 0) == 0);

  CHECK(run({"report"}).code == kExitUsage);
  CHECK(run({"report", tmp / "nope.json"}).code == kExitUsage);
  {
    std::ofstream bad(tmp / "bad.json");
    bad << "{\"mesh\": 3}";
  }
  CHECK(run({"report", tmp / "bad.json"}).code == kExitUsage);
}
