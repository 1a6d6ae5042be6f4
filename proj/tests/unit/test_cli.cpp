#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "../../tools/cli.hpp"
#include "phasesep/error.hpp"
#include "phasesep/io.hpp"

namespace fs = std::filesystem;
using namespace phasesep;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "phasesep");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("phasesep_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config parser") {
  const auto m = cli::parse_config("# header\nd = 2\n  R=16   # radius\n\nntheta = 512\n");
  CHECK(m.size() == 3);
  CHECK(m.at("d") == "2");
  CHECK(m.at("R") == "16");
  CHECK(m.at("ntheta") == "512");
  CHECK_THROWS_AS(cli::parse_config("d 2\n"), InvalidArgument);
  CHECK_THROWS_AS(cli::parse_config("d = 2\nd = 3\n"), InvalidArgument);
}

TEST_CASE("version flag") {
  const Outcome o = invoke({"--version"});
  CHECK(o.code == 0);
  CHECK(o.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("invalid configurations exit with code 2") {
  const fs::path dir = scratch("invalid");
  CHECK(invoke({"disk", "--d", "2", "--R", "4", "--nr", "16", "--ntheta", "510", "--out", dir.string()}).code ==
        cli::kInvalidConfig);
  fs::create_directories(dir);
  std::ofstream(dir / "bad.cfg") << "d = 1\nno_such_key = 3\n";
  CHECK(invoke({"disk", "--config", (dir / "bad.cfg").string(), "--out", dir.string()}).code == cli::kInvalidConfig);
  CHECK(invoke({"nonsense"}).code == cli::kInvalidConfig);
  fs::remove_all(dir);
}

TEST_CASE("a small disk run writes its outputs deterministically") {
  const fs::path a = scratch("disk_a");
  const fs::path b = scratch("disk_b");
  const std::vector<std::string> args = {"disk", "--d", "1", "--R", "8", "--nr", "64", "--ntheta", "64"};
  auto with_out = [&](const fs::path& p) {
    auto v = args;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  const Outcome first = invoke(with_out(a));
  REQUIRE(first.code == cli::kPassed);
  CHECK(first.out.find("FAIL") == std::string::npos);
  for (const char* f : {"config.txt", "VERSION", "report.json", "energy.csv", "fields.psfld", "trace.csv"}) {
    CHECK(fs::exists(a / f));
  }
  CHECK(slurp(a / "config.txt").find("R=8") != std::string::npos);
  CHECK(read_json(a / "report.json")["passed"] == true);
  CHECK(read_psfld1(a / "fields.psfld").grid.rings() == 64);

  REQUIRE(invoke(with_out(b)).code == cli::kPassed);
  for (const char* f : {"energy.csv", "fields.psfld", "trace.csv", "report.json"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }

  const Outcome again = invoke({"almgren", "--input", (a / "fields.psfld").string(), "--out", (b / "almgren").string()});
  CHECK(again.code == cli::kPassed);
  CHECK(fs::exists(b / "almgren" / "trace.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("flags override the config file") {
  const fs::path dir = scratch("override");
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "d = 1\nR = 8\nnr = 32\nntheta = 64\n";
  const Outcome o = invoke({"disk", "--config", (dir / "run.cfg").string(), "--nr", "16", "--out", (dir / "out").string()});
  CHECK(o.code == cli::kPassed);
  const std::string cfg = slurp(dir / "out" / "config.txt");
  CHECK(cfg.find("nr=16") != std::string::npos);
  CHECK(cfg.find("ntheta=64") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("small stability run") {
  const fs::path dir = scratch("stability");
  const Outcome o = invoke({"stability", "--background", "zero", "--radii", "2.5,5", "--grid_radius", "5", "--nr",
                            "64", "--ntheta", "128", "--out", dir.string()});
  CHECK(o.code == cli::kPassed);
  CHECK(fs::exists(dir / "stability.csv"));
  fs::remove_all(dir);
}

TEST_CASE("failing checks exit with code 1") {
  const fs::path dir = scratch("failing");
  const Outcome o = invoke({"profile", "--N_low", "0.99999", "--out", dir.string()});
  CHECK(o.code == cli::kChecksFailed);
  CHECK(o.out.find("FAIL") != std::string::npos);
  CHECK(read_json(dir / "report.json")["passed"] == false);
  fs::remove_all(dir);
}
