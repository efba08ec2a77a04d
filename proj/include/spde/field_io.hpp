#pragma once

#include <filesystem>
#include <string>

#include "spde/simulator.hpp"

namespace spde {

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// Writes text atomically enough for batch use (write then close); throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

inline constexpr const char* kSiteSliceFile = "field_sites.csv";
inline constexpr const char* kRowSliceFile = "field_rows.csv";

/// Writes field_sites.csv and field_rows.csv into dir. Each file starts with a
/// '#' metadata line (slice kind, N, M, T), then a header row naming the
/// columns (i, t, then the y value of every column).
void write_field_observations(const FieldObservations& obs, const std::filesystem::path& dir);

/// Reads the pair written by write_field_observations; throws IoError on
/// malformed or inconsistent files.
FieldObservations read_field_observations(const std::filesystem::path& dir);

}  // namespace spde
