// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/fetch.hpp"

#include "umdv/util.hpp"

#include <httplib.h>
#include <openssl/evp.h>
#include <zlib.h>

#include <array>
#include <cstring>

namespace umdv {

bool is_url(const std::string& s) {
    return starts_with(s, "http://") || starts_with(s, "https://") || starts_with(s, "file://");
}

namespace {

// Splits "http://host:port/path" into scheme://host:port and /path.
std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw Error("not a URL: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string fetch_http(const std::string& url, int timeout_s) {
    auto [origin, path] = split_url(url);
    httplib::Client cli(origin);
    cli.set_connection_timeout(timeout_s, 0);
    cli.set_read_timeout(timeout_s, 0);
    cli.set_follow_location(true);
    cli.enable_server_certificate_verification(false);
    auto res = cli.Get(path);
    if (!res)
        throw Error("fetch failed for " + url + ": " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw Error("fetch failed for " + url + ": HTTP " + std::to_string(res->status));
    return res->body;
}

}  // namespace

std::string fetch_url(const std::string& url, int timeout_s) {
    if (starts_with(url, "http://") || starts_with(url, "https://"))
        return fetch_http(url, timeout_s);
    std::string path = url;
    if (starts_with(path, "file://"))
        path = path.substr(7);
    return read_file(path);
}

std::string fetch_relative(const std::string& base, const std::string& rel, int timeout_s) {
    if (is_url(base)) {
        std::string joined = base;
        if (!joined.empty() && joined.back() == '/')
            joined.pop_back();
        std::string tail = rel;
        if (!tail.empty() && tail.front() == '/')
            tail = tail.substr(1);
        return fetch_url(joined + "/" + tail, timeout_s);
    }
    return read_file(fs::path(base) / rel);
}

std::string gunzip(const std::string& data) {
    z_stream strm{};
    // 15 | 32 lets zlib auto-detect gzip and zlib headers.
    if (inflateInit2(&strm, 15 | 32) != Z_OK)
        throw Error("inflateInit2 failed");

    std::string out;
    std::array<unsigned char, 64 * 1024> buf;
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    strm.avail_in = static_cast<uInt>(data.size());

    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        strm.next_out = buf.data();
        strm.avail_out = static_cast<uInt>(buf.size());
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&strm);
            throw Error("gzip decompression failed (zlib rc " + std::to_string(rc) + ")");
        }
        out.append(reinterpret_cast<char*>(buf.data()), buf.size() - strm.avail_out);
        if (rc == Z_OK && strm.avail_in == 0 && strm.avail_out != 0) {
            inflateEnd(&strm);
            throw Error("gzip stream truncated");
        }
    }
    inflateEnd(&strm);
    return out;
}

std::string gzip(const std::string& data) {
    z_stream strm{};
    // 15 + 16 selects a gzip header.
    if (deflateInit2(&strm, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                     Z_DEFAULT_STRATEGY) != Z_OK)
        throw Error("deflateInit2 failed");

    std::string out;
    std::array<unsigned char, 64 * 1024> buf;
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    strm.avail_in = static_cast<uInt>(data.size());

    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        strm.next_out = buf.data();
        strm.avail_out = static_cast<uInt>(buf.size());
        rc = deflate(&strm, Z_FINISH);
        if (rc != Z_OK && rc != Z_STREAM_END && rc != Z_BUF_ERROR) {
            deflateEnd(&strm);
            throw Error("gzip compression failed (zlib rc " + std::to_string(rc) + ")");
        }
        out.append(reinterpret_cast<char*>(buf.data()), buf.size() - strm.avail_out);
    }
    deflateEnd(&strm);
    return out;
}

std::string sha256_hex(const std::string& data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr))
        throw Error("EVP_Digest failed");
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

}  // namespace umdv
