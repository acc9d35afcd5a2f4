// output.hpp — Plain-text data tables, heatmaps and the JSON run manifest
//
// Tables are whitespace-delimited with a `#` header naming every column and its unit and
// carrying the config hash. Heatmaps list both axis vectors in the header and store values
// row-major, one y row per line. Numbers use the shortest round-trip representation, so equal
// inputs give byte-identical files.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sitqd {

struct Column {
    std::string name;
    std::string unit;
};

std::string format_double(double v);

struct TableHeader {
    std::string title;
    std::string config_hash;
    std::vector<std::string> notes;  // extra `# ` lines
};

// rows[r][c]; throws std::invalid_argument if a row length differs from the column count.
void write_table(const std::filesystem::path& path, const TableHeader& header,
                 const std::vector<Column>& columns, const std::vector<std::vector<double>>& rows);

struct Heatmap {
    Column x;                   // columns of the grid
    std::vector<double> x_axis;
    Column y;                   // rows of the grid
    std::vector<double> y_axis;
    Column value;
    std::vector<double> values;  // row-major, y_axis.size() x x_axis.size()
};

void write_heatmap(const std::filesystem::path& path, const TableHeader& header, const Heatmap& map);

struct RunManifest {
    std::string command;           // "run", "preset fig6", ...
    std::string config_hash;
    std::string version;
    double wall_seconds{0.0};
    double validity_metric{0.0};
    std::vector<std::string> warnings;
    std::vector<std::string> files;
    std::vector<std::pair<std::string, double>> metrics;  // named scalar results
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

const char* library_version() noexcept;

} // namespace sitqd
