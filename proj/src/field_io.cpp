#include "spde/field_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "spde/errors.hpp"

namespace spde {

namespace fs = std::filesystem;

std::string format_double(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

void write_text_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << contents;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

double parse_double(std::string_view token, const fs::path& file) {
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw IoError("bad number '" + std::string(token) + "' in " + file.string());
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

struct Table {
    std::map<std::string, std::string, std::less<>> meta;
    std::vector<double> header_y;
    std::vector<long> index;
    std::vector<std::vector<double>> rows;
};

std::string write_table(std::string_view kind, const FieldObservations& obs,
                        std::span<const double> columns_y, const std::vector<long>& times,
                        auto&& value_at) {
    std::string out;
    out += "# slice=" + std::string(kind) + " N=" + std::to_string(obs.N) +
           " M=" + std::to_string(obs.M) + " T=" + format_double(obs.T) + "\n";
    out += "i,t";
    for (double y : columns_y) out += "," + format_double(y);
    out += "\n";
    const double dt = obs.T / static_cast<double>(obs.N);
    for (std::size_t r = 0; r < times.size(); ++r) {
        out += std::to_string(times[r]) + "," + format_double(static_cast<double>(times[r]) * dt);
        for (std::size_t c = 0; c < columns_y.size(); ++c) out += "," + format_double(value_at(r, c));
        out += "\n";
    }
    return out;
}

Table read_table(const fs::path& file, std::string_view expected_kind) {
    std::istringstream in(read_text_file(file));
    Table table;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
        throw IoError("missing metadata line in " + file.string());
    }
    for (auto token : split(std::string_view(line).substr(2), ' ')) {
        const auto eq = token.find('=');
        if (eq == std::string_view::npos) continue;
        table.meta.emplace(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
    }
    if (table.meta["slice"] != expected_kind) {
        throw IoError(file.string() + " is not a " + std::string(expected_kind) + " slice");
    }
    if (!std::getline(in, line)) throw IoError("missing header row in " + file.string());
    const auto header = split(line, ',');
    if (header.size() < 2 || header[0] != "i" || header[1] != "t") {
        throw IoError("unexpected header in " + file.string());
    }
    for (std::size_t c = 2; c < header.size(); ++c) table.header_y.push_back(parse_double(header[c], file));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != header.size()) throw IoError("ragged row in " + file.string());
        table.index.push_back(static_cast<long>(parse_double(fields[0], file)));
        std::vector<double> row;
        row.reserve(fields.size() - 2);
        for (std::size_t c = 2; c < fields.size(); ++c) row.push_back(parse_double(fields[c], file));
        table.rows.push_back(std::move(row));
    }
    return table;
}

long meta_long(const Table& t, const char* key, const fs::path& file) {
    const auto it = t.meta.find(key);
    if (it == t.meta.end()) throw IoError(std::string("metadata key ") + key + " missing in " + file.string());
    return static_cast<long>(parse_double(it->second, file));
}

}  // namespace

void write_field_observations(const FieldObservations& obs, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    std::vector<long> all_times(static_cast<std::size_t>(obs.N + 1));
    for (long i = 0; i <= obs.N; ++i) all_times[i] = i;
    const auto cols = static_cast<std::size_t>(obs.N + 1);
    write_text_file(dir / kSiteSliceFile,
                    write_table("site_columns", obs, obs.sites, all_times,
                                [&](std::size_t r, std::size_t c) {
                                    return obs.site_values[c * cols + r];
                                }));

    std::vector<double> lattice(static_cast<std::size_t>(obs.M));
    for (long j = 1; j <= obs.M; ++j) lattice[j - 1] = static_cast<double>(j) / static_cast<double>(obs.M);
    const auto M = static_cast<std::size_t>(obs.M);
    write_text_file(dir / kRowSliceFile,
                    write_table("time_rows", obs, lattice, obs.row_time_index,
                                [&](std::size_t r, std::size_t c) { return obs.row_values[r * M + c]; }));
}

FieldObservations read_field_observations(const fs::path& dir) {
    const auto site_file = dir / kSiteSliceFile;
    const auto row_file = dir / kRowSliceFile;
    const Table sites = read_table(site_file, "site_columns");
    const Table rows = read_table(row_file, "time_rows");

    FieldObservations obs;
    obs.N = meta_long(sites, "N", site_file);
    obs.M = meta_long(sites, "M", site_file);
    obs.T = parse_double(sites.meta.at("T"), site_file);
    if (meta_long(rows, "N", row_file) != obs.N || meta_long(rows, "M", row_file) != obs.M) {
        throw IoError("site and row slices disagree on the grid");
    }
    if (static_cast<long>(sites.rows.size()) != obs.N + 1) {
        throw IoError("site slice must hold N + 1 time points");
    }
    for (std::size_t i = 0; i < sites.index.size(); ++i) {
        if (sites.index[i] != static_cast<long>(i)) throw IoError("site slice time index out of order");
    }
    if (static_cast<long>(rows.header_y.size()) != obs.M) throw IoError("row slice must have M columns");

    obs.sites = sites.header_y;
    const auto cols = static_cast<std::size_t>(obs.N + 1);
    obs.site_values.assign(obs.sites.size() * cols, 0.0);
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = 0; j < obs.sites.size(); ++j) obs.site_values[j * cols + i] = sites.rows[i][j];
    }
    obs.row_time_index = rows.index;
    for (const auto& r : rows.rows) obs.row_values.insert(obs.row_values.end(), r.begin(), r.end());
    return obs;
}

}  // namespace spde
