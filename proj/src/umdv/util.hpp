// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace umdv {

namespace fs = std::filesystem;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Parse failure carrying a source position (1-based; 0 = unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0, int column = 0)
        : Error(format_message(what, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format_message(const std::string& what, int line, int column);

    int line_;
    int column_;
};

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Split on a single delimiter character; empty fields preserved.
std::vector<std::string> split(std::string_view s, char delim);

/// Split on runs of whitespace; no empty fields.
std::vector<std::string> split_ws(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view content);

/// RFC 3339 UTC timestamp, second resolution ("2018-04-01T12:00:00Z").
std::string format_rfc3339(std::chrono::system_clock::time_point tp);
std::string now_rfc3339();

/// Filename-safe UTC stamp ("20180401T120000Z").
std::string now_compact_utc();

}  // namespace umdv
