#pragma once

// Output files: CSV time series (one header line), columnar snapshot text,
// JSON metadata, and SHA-256 content checksums. Floats carry 17 significant
// digits so values round-trip exactly.

#include "flyatom/config.hpp"
#include "flyatom/observables.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace flyatom {

std::string format_double(double v);

/// Lower-case hex SHA-256 of a file's contents; throws IoError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

struct OutputFile {
    std::string path; ///< relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

/// Checksums a file already written below `root`.
OutputFile inventory_entry(const std::filesystem::path& root, const std::filesystem::path& file);

/// Writes text atomically (temporary file, then rename); throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Header "step,t,<columns...>", one row per record.
std::string time_series_csv(const std::vector<TimeSeriesRecord>& records, const std::vector<std::string>& columns);

/// Header "x re_g0 im_g0 re_e0 im_e0 ...", one row per grid point.
std::string snapshot_text(const WavepacketState& state, const Grid& grid, const HilbertDims& dims);

/// Reads back a CSV written by time_series_csv (header plus rows of numbers).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

} // namespace flyatom
