#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "phasesep/error.hpp"
#include "phasesep/io.hpp"

using namespace phasesep;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("phasesep_io_" + name);
  fs::remove_all(p);
  return p;
}

FieldSet random_fields(const DiskGrid& g, Degree d, int k) {
  FieldSet f(g, d, k);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (auto& c : f.components) {
    for (auto& x : c) x = u(rng);
  }
  return f;
}

std::int64_t read_i64(const std::string& s, std::size_t at) {
  std::int64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | static_cast<unsigned char>(s[at + b]);
  return v;
}

}  // namespace

TEST_CASE("PSFLD1 round trip is bitwise") {
  const DiskGrid g(3.5, 12, 24);
  const FieldSet f = random_fields(g, Degree::from_twice(3), 3);
  const FieldSet back = decode_psfld1(encode_psfld1(f));
  CHECK(back.grid == g);
  CHECK(back.degree == f.degree);
  REQUIRE(back.k() == 3);
  for (int c = 0; c < 3; ++c) {
    CHECK(std::memcmp(back.components[c].data(), f.components[c].data(),
                      f.components[c].size() * sizeof(double)) == 0);
  }
}

TEST_CASE("PSFLD1 header layout") {
  const DiskGrid g(2.0, 4, 8);
  const std::string bytes = encode_psfld1(random_fields(g, Degree::integer(1), 2));
  CHECK(bytes.substr(0, 6) == "PSFLD1");
  CHECK(read_i64(bytes, 6) == 2);
  CHECK(read_i64(bytes, 14) == 4);
  CHECK(read_i64(bytes, 22) == 8);
  CHECK(bytes.size() == 6 + 5 * 8 + 2 * 5 * 8 * 8);
}

TEST_CASE("malformed dumps are rejected") {
  const DiskGrid g(2.0, 4, 8);
  const std::string good = encode_psfld1(random_fields(g, Degree::integer(1), 2));

  std::string magic = good;
  magic[0] = 'X';
  CHECK_THROWS_AS(decode_psfld1(magic), FormatError);
  CHECK_THROWS_AS(decode_psfld1(good.substr(0, good.size() - 1)), FormatError);
  CHECK_THROWS_AS(decode_psfld1(good.substr(0, 20)), FormatError);

  std::string center = good;
  center[6 + 40 + 8] ^= 1;
  CHECK_THROWS_AS(decode_psfld1(center), FormatError);
}

TEST_CASE("files go through a temporary and leave nothing behind") {
  const fs::path dir = scratch_dir("atomic");
  const fs::path file = dir / "nested" / "fields.psfld";
  const DiskGrid g(2.0, 4, 8);
  const FieldSet f = random_fields(g, Degree::integer(1), 2);
  write_psfld1(file, f);
  write_psfld1(file, f);
  CHECK(fs::exists(file));
  CHECK_FALSE(fs::exists(file.string() + ".tmp"));
  CHECK(read_psfld1(file).components == f.components);
  CHECK_THROWS_AS(read_psfld1(dir / "missing.psfld"), FormatError);
  fs::remove_all(dir);
}

TEST_CASE("CSV uses shortest round-trip numbers") {
  const std::string s = format_csv({"r", "N"}, {{0.1, 1.0}, {2.5, 1.0 / 3.0}});
  CHECK(s == "r,N\n0.1,1\n2.5,0.3333333333333333\n");
  std::istringstream in(s);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);
  CHECK(std::stod(line.substr(4)) == 1.0 / 3.0);
}

TEST_CASE("report JSON carries every check") {
  Report r;
  r.title = "demo";
  r.add({"a", true, 0.5, 1.0, "first"});
  r.add({"b", false, 2.0, 1.0, ""});
  r.metrics["slope"] = -0.25;
  const nlohmann::json j = report_json(r);
  CHECK(j["title"] == "demo");
  CHECK(j["passed"] == false);
  REQUIRE(j["checks"].size() == 2);
  CHECK(j["checks"][0]["name"] == "a");
  CHECK(j["checks"][1]["value"].get<double>() == 2.0);
  CHECK(j["metrics"]["slope"].get<double>() == -0.25);

  const fs::path dir = scratch_dir("json");
  write_json(dir / "report.json", j);
  CHECK(read_json(dir / "report.json") == j);
  fs::remove_all(dir);
}
