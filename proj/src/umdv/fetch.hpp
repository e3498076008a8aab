// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>

namespace umdv {

// Retrieves the body behind a URL.  Supports http://, https://, file://
// and bare filesystem paths.  Throws Error on any failure (non-2xx,
// unreachable host, missing file).
std::string fetch_url(const std::string& url, int timeout_s = 30);

// Joins a relative path onto a base URL or directory and fetches it.
std::string fetch_relative(const std::string& base, const std::string& rel, int timeout_s = 30);

bool is_url(const std::string& s);

// Decompresses a gzip (or zlib) byte stream.
std::string gunzip(const std::string& data);

// Compresses into gzip format.
std::string gzip(const std::string& data);

std::string sha256_hex(const std::string& data);

}  // namespace umdv
