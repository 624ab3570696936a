#include <gpreli/csv.hpp>

#include <gpreli/error.hpp>

#include <charconv>
#include <fstream>
#include <system_error>

namespace gpreli {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc()) {
        throw numeric_error("format_double: conversion failed");
    }
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw io_error("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

} // namespace

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out = open_for_write(path);
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j > 0) out << ',';
        out << header[j];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) out << ',';
            out << row[j];
        }
        out << '\n';
    }
    if (!out) {
        throw io_error("write failed for '" + path.string() + "'");
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out = open_for_write(path);
    out << text;
    if (!out) {
        throw io_error("write failed for '" + path.string() + "'");
    }
}

} // namespace gpreli
