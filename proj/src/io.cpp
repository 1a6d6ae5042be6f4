#include "phasesep/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "phasesep/error.hpp"

namespace phasesep {

namespace {

constexpr char kMagic[] = "PSFLD1";
constexpr std::size_t kMagicSize = 6;

void put_u64(std::string& out, std::uint64_t x) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((x >> (8 * b)) & 0xffu));
}

std::uint64_t get_u64(const std::string& in, std::size_t& pos) {
  if (pos + 8 > in.size()) throw FormatError("PSFLD1: truncated data");
  std::uint64_t x = 0;
  for (int b = 0; b < 8; ++b) {
    x |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
  }
  pos += 8;
  return x;
}

std::string format_number(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string encode_psfld1(const FieldSet& f) {
  const DiskGrid& g = f.grid;
  std::string out(kMagic, kMagicSize);
  put_u64(out, static_cast<std::uint64_t>(f.k()));
  put_u64(out, static_cast<std::uint64_t>(g.rings()));
  put_u64(out, static_cast<std::uint64_t>(g.angles()));
  put_u64(out, std::bit_cast<std::uint64_t>(g.radius()));
  put_u64(out, std::bit_cast<std::uint64_t>(f.degree.value()));
  for (const auto& c : f.components) {
    for (int j = 0; j < g.angles(); ++j) put_u64(out, std::bit_cast<std::uint64_t>(c[0]));
    for (std::size_t p = 1; p < g.node_count(); ++p) put_u64(out, std::bit_cast<std::uint64_t>(c[p]));
  }
  return out;
}

FieldSet decode_psfld1(const std::string& bytes) {
  if (bytes.size() < kMagicSize || bytes.compare(0, kMagicSize, kMagic) != 0) {
    throw FormatError("PSFLD1: bad magic");
  }
  std::size_t pos = kMagicSize;
  const auto k = static_cast<std::int64_t>(get_u64(bytes, pos));
  const auto n_r = static_cast<std::int64_t>(get_u64(bytes, pos));
  const auto n_theta = static_cast<std::int64_t>(get_u64(bytes, pos));
  const double R = std::bit_cast<double>(get_u64(bytes, pos));
  const double d = std::bit_cast<double>(get_u64(bytes, pos));
  if (k < 1 || k > 64 || n_r < 1 || n_theta < 1 || n_r > (1 << 20) || n_theta > (1 << 20)) {
    throw FormatError("PSFLD1: implausible header");
  }
  if (!(R > 0.0) || !std::isfinite(d) || std::abs(2.0 * d - std::round(2.0 * d)) > 0.0) {
    throw FormatError("PSFLD1: bad radius or degree");
  }
  const std::size_t expected =
      pos + static_cast<std::size_t>(k) * static_cast<std::size_t>(n_r + 1) * n_theta * 8;
  if (bytes.size() != expected) throw FormatError("PSFLD1: size does not match the header");

  DiskGrid grid(R, static_cast<int>(n_r), static_cast<int>(n_theta));
  FieldSet f(grid, Degree::from_value(d), static_cast<int>(k));
  for (auto& c : f.components) {
    const double center = std::bit_cast<double>(get_u64(bytes, pos));
    for (int j = 1; j < n_theta; ++j) {
      if (get_u64(bytes, pos) != std::bit_cast<std::uint64_t>(center)) {
        throw FormatError("PSFLD1: center ring is not constant");
      }
    }
    c[0] = center;
    for (std::size_t p = 1; p < grid.node_count(); ++p) c[p] = std::bit_cast<double>(get_u64(bytes, pos));
  }
  return f;
}

void write_psfld1(const std::filesystem::path& path, const FieldSet& f) {
  atomic_write(path, encode_psfld1(f));
}

FieldSet read_psfld1(const std::filesystem::path& path) { return decode_psfld1(slurp(path)); }

std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    require(row.size() == header.size(), "CSV row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  atomic_write(path, format_csv(header, rows));
}

nlohmann::json report_json(const Report& r) {
  nlohmann::json j;
  j["title"] = r.title;
  j["passed"] = r.passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"value", c.value},
                           {"limit", c.limit},
                           {"detail", c.detail}});
  }
  j["metrics"] = nlohmann::json::object();
  for (const auto& [k, v] : r.metrics) j["metrics"][k] = v;
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  atomic_write(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace phasesep
