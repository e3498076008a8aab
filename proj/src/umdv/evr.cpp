// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/evr.hpp"

#include <cstdlib>

#include "umdv/util.hpp"

namespace umdv {

namespace {

// ASCII-only classification; the version grammars are byte-oriented.
bool is_digit(char c) {
    return c >= '0' && c <= '9';
}
bool is_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_alnum(char c) {
    return is_digit(c) || is_alpha(c);
}

int sign(long v) {
    return v < 0 ? -1 : (v > 0 ? 1 : 0);
}

}  // namespace

std::string to_string(Flavor f) {
    return f == Flavor::Rpm ? "rpm" : "deb";
}

Flavor flavor_from_string(std::string_view s) {
    std::string v = to_lower(s);
    if (v == "rpm")
        return Flavor::Rpm;
    if (v == "deb")
        return Flavor::Deb;
    throw Error("unknown repository flavor: " + std::string(s));
}

std::string format_evr(const Evr& evr) {
    std::string out;
    if (evr.epoch != 0)
        out += std::to_string(evr.epoch) + ":";
    out += evr.version;
    if (!evr.release.empty())
        out += "-" + evr.release;
    return out;
}

Evr parse_evr(std::string_view s) {
    Evr evr;
    size_t colon = s.find(':');
    if (colon != std::string_view::npos) {
        bool numeric = colon > 0;
        for (size_t i = 0; i < colon; ++i)
            numeric = numeric && is_digit(s[i]);
        if (numeric) {
            evr.epoch = std::strtol(std::string(s.substr(0, colon)).c_str(), nullptr, 10);
            s.remove_prefix(colon + 1);
        }
    }
    size_t dash = s.rfind('-');
    if (dash != std::string_view::npos) {
        evr.release = std::string(s.substr(dash + 1));
        s = s.substr(0, dash);
    }
    evr.version = std::string(s);
    return evr;
}

int rpm_segment_compare(std::string_view a, std::string_view b) {
    if (a == b)
        return 0;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        while (i < a.size() && !is_alnum(a[i]) && a[i] != '~' && a[i] != '^')
            ++i;
        while (j < b.size() && !is_alnum(b[j]) && b[j] != '~' && b[j] != '^')
            ++j;
        char ca = i < a.size() ? a[i] : '\0';
        char cb = j < b.size() ? b[j] : '\0';

        // tilde sorts before everything else, including the end of string
        if (ca == '~' || cb == '~') {
            if (ca != '~')
                return 1;
            if (cb != '~')
                return -1;
            ++i, ++j;
            continue;
        }
        // caret: like tilde, except end of string sorts lower
        if (ca == '^' || cb == '^') {
            if (ca == '\0')
                return -1;
            if (cb == '\0')
                return 1;
            if (ca != '^')
                return 1;
            if (cb != '^')
                return -1;
            ++i, ++j;
            continue;
        }
        if (ca == '\0' || cb == '\0')
            break;

        size_t si = i, sj = j;
        bool numeric = is_digit(ca);
        if (numeric) {
            while (i < a.size() && is_digit(a[i]))
                ++i;
            while (j < b.size() && is_digit(b[j]))
                ++j;
        } else {
            while (i < a.size() && is_alpha(a[i]))
                ++i;
            while (j < b.size() && is_alpha(b[j]))
                ++j;
        }
        std::string_view seg_a = a.substr(si, i - si);
        std::string_view seg_b = b.substr(sj, j - sj);
        if (seg_a.empty())
            return -1;
        // mixed segment types: the numeric one is newer
        if (seg_b.empty())
            return numeric ? 1 : -1;
        if (numeric) {
            while (!seg_a.empty() && seg_a.front() == '0')
                seg_a.remove_prefix(1);
            while (!seg_b.empty() && seg_b.front() == '0')
                seg_b.remove_prefix(1);
            if (seg_a.size() != seg_b.size())
                return seg_a.size() > seg_b.size() ? 1 : -1;
        }
        int rc = seg_a.compare(seg_b);
        if (rc != 0)
            return rc < 0 ? -1 : 1;
    }
    if (i >= a.size() && j >= b.size())
        return 0;
    return i >= a.size() ? -1 : 1;
}

namespace {

// Character weight for the Debian non-digit comparison: tilde lowest,
// letters before every other character, end of string before non-letters.
int deb_order(char c) {
    if (c == '~')
        return -1;
    if (c == '\0' || is_digit(c))
        return 0;
    if (is_alpha(c))
        return c;
    return static_cast<unsigned char>(c) + 256;
}

}  // namespace

int deb_segment_compare(std::string_view a, std::string_view b) {
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        while ((i < a.size() && !is_digit(a[i])) || (j < b.size() && !is_digit(b[j]))) {
            int wa = deb_order(i < a.size() ? a[i] : '\0');
            int wb = deb_order(j < b.size() ? b[j] : '\0');
            if (wa != wb)
                return wa < wb ? -1 : 1;
            ++i, ++j;
        }
        while (i < a.size() && a[i] == '0')
            ++i;
        while (j < b.size() && b[j] == '0')
            ++j;
        int first_diff = 0;
        while (i < a.size() && j < b.size() && is_digit(a[i]) && is_digit(b[j])) {
            if (first_diff == 0)
                first_diff = a[i] - b[j];
            ++i, ++j;
        }
        if (i < a.size() && is_digit(a[i]))
            return 1;
        if (j < b.size() && is_digit(b[j]))
            return -1;
        if (first_diff != 0)
            return first_diff < 0 ? -1 : 1;
    }
    return 0;
}

int compare_versions_rpm(const Evr& a, const Evr& b) {
    if (a.epoch != b.epoch)
        return sign(a.epoch - b.epoch);
    int rc = rpm_segment_compare(a.version, b.version);
    if (rc != 0)
        return rc;
    return rpm_segment_compare(a.release, b.release);
}

int compare_versions_deb(const Evr& a, const Evr& b) {
    if (a.epoch != b.epoch)
        return sign(a.epoch - b.epoch);
    int rc = deb_segment_compare(a.version, b.version);
    if (rc != 0)
        return rc;
    return deb_segment_compare(a.release, b.release);
}

int compare_evr(const Evr& a, const Evr& b, Flavor flavor) {
    return flavor == Flavor::Rpm ? compare_versions_rpm(a, b) : compare_versions_deb(a, b);
}

int compare_evr_for_match(const Evr& provided, const Evr& required, Flavor flavor) {
    if (flavor == Flavor::Deb)
        return compare_versions_deb(provided, required);
    if (provided.epoch != required.epoch)
        return sign(provided.epoch - required.epoch);
    int rc = rpm_segment_compare(provided.version, required.version);
    if (rc != 0)
        return rc;
    // Releases take part only when both sides carry one.
    if (provided.release.empty() || required.release.empty())
        return 0;
    return rpm_segment_compare(provided.release, required.release);
}

}  // namespace umdv
