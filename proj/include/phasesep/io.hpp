#pragma once

// On-disk formats. PSFLD1 field dumps: the 6 magic bytes "PSFLD1", then
// little-endian int64 k, n_r, n_theta, float64 R and d, then k blocks of
// (n_r+1)*n_theta float64 in ring-major order with ring 0 holding the
// center value repeated n_theta times.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasesep/field.hpp"
#include "phasesep/report.hpp"

namespace phasesep {

// Writes `path.tmp` and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string encode_psfld1(const FieldSet& f);
// Throws FormatError on a bad magic, truncated data or a non-constant
// center ring.
FieldSet decode_psfld1(const std::string& bytes);
void write_psfld1(const std::filesystem::path& path, const FieldSet& f);
FieldSet read_psfld1(const std::filesystem::path& path);

// Header row plus one line per row, numbers in shortest round-trip form.
std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

nlohmann::json report_json(const Report& r);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace phasesep
