// output.cpp — Deterministic text writers and the manifest

#include "sitqd/output.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#ifndef SITQD_VERSION
#define SITQD_VERSION "0.0.0"
#endif

namespace sitqd {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

void write_header(std::ostream& out, const TableHeader& header) {
    out << "# " << header.title << '\n';
    out << "# config_hash: " << header.config_hash << '\n';
    out << "# sitqd " << library_version() << '\n';
    for (const auto& note : header.notes) {
        out << "# " << note << '\n';
    }
}

std::string label(const Column& c) { return c.unit.empty() ? c.name : c.name + "[" + c.unit + "]"; }

} // namespace

const char* library_version() noexcept { return SITQD_VERSION; }

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_table(const std::filesystem::path& path, const TableHeader& header,
                 const std::vector<Column>& columns, const std::vector<std::vector<double>>& rows) {
    for (const auto& row : rows) {
        if (row.size() != columns.size()) {
            throw std::invalid_argument("write_table: row length differs from column count");
        }
    }
    auto out = open_for_write(path);
    write_header(out, header);
    out << "# columns:";
    for (const auto& c : columns) {
        out << ' ' << label(c);
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i == 0 ? "" : " ") << format_double(row[i]);
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

void write_heatmap(const std::filesystem::path& path, const TableHeader& header, const Heatmap& map) {
    if (map.values.size() != map.x_axis.size() * map.y_axis.size()) {
        throw std::invalid_argument("write_heatmap: value count differs from axis sizes");
    }
    auto out = open_for_write(path);
    write_header(out, header);
    out << "# value: " << label(map.value) << " (row-major, one row per y)\n";
    out << "# x_axis " << label(map.x) << ':';
    for (double x : map.x_axis) {
        out << ' ' << format_double(x);
    }
    out << '\n';
    out << "# y_axis " << label(map.y) << ':';
    for (double y : map.y_axis) {
        out << ' ' << format_double(y);
    }
    out << '\n';
    const std::size_t nx = map.x_axis.size();
    for (std::size_t r = 0; r < map.y_axis.size(); ++r) {
        for (std::size_t c = 0; c < nx; ++c) {
            out << (c == 0 ? "" : " ") << format_double(map.values[r * nx + c]);
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["command"] = manifest.command;
    j["config_hash"] = manifest.config_hash;
    j["version"] = manifest.version.empty() ? std::string(library_version()) : manifest.version;
    j["wall_seconds"] = manifest.wall_seconds;
    j["polaron_validity_metric"] = manifest.validity_metric;
    j["warnings"] = manifest.warnings;
    j["files"] = manifest.files;
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    for (const auto& [name, value] : manifest.metrics) {
        metrics[name] = value;
    }
    j["metrics"] = metrics;
    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
}

} // namespace sitqd
