// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/ldif.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <sstream>

#include "umdv/util.hpp"

namespace umdv {

namespace {

bool iequals(const std::string& a, const std::string& b) {
    if (a.size() != b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

std::string base64_encode(const std::string& data) {
    std::string out((data.size() + 2) / 3 * 4 + 1, '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                            reinterpret_cast<const unsigned char*>(data.data()),
                            static_cast<int>(data.size()));
    out.resize(n);
    return out;
}

std::string base64_decode(const std::string& text, int line) {
    if (text.size() % 4 != 0)
        throw ParseError("base64 value has invalid length", line);
    std::string out(text.size() / 4 * 3, '\0');
    int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                            reinterpret_cast<const unsigned char*>(text.data()),
                            static_cast<int>(text.size()));
    if (n < 0)
        throw ParseError("invalid base64 value", line);
    // EVP_DecodeBlock writes NUL bytes for '=' padding; trim them off.
    size_t pad = 0;
    for (auto it = text.rbegin(); it != text.rend() && *it == '='; ++it)
        ++pad;
    out.resize(static_cast<size_t>(n) - pad);
    return out;
}

// A value is safe to emit verbatim if it is ASCII, has no leading
// space/colon/'<', and contains no control characters.
bool safe_verbatim(const std::string& v) {
    if (v.empty())
        return true;
    if (v.front() == ' ' || v.front() == ':' || v.front() == '<')
        return false;
    if (v.back() == ' ')
        return false;
    for (unsigned char c : v)
        if (c < 0x20 || c >= 0x7f)
            return false;
    return true;
}

}  // namespace

std::vector<std::string> LdifEntry::values(const std::string& name) const {
    std::vector<std::string> out;
    for (const auto& [attr, value] : attributes)
        if (iequals(attr, name))
            out.push_back(value);
    return out;
}

LdifDocument parse_ldif(const std::string& text) {
    // Unfold: a line starting with one space continues the previous line.
    std::vector<std::pair<std::string, int>> logical;  // (line, first lineno)
    {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (!line.empty() && line.front() == ' ') {
                if (logical.empty())
                    throw ParseError("continuation line with nothing to continue", lineno);
                logical.back().first += line.substr(1);
                continue;
            }
            logical.emplace_back(line, lineno);
        }
    }

    LdifDocument doc;
    LdifEntry current;
    bool in_entry = false;
    bool seen_any = false;

    auto flush = [&](int line) {
        if (!in_entry)
            return;
        if (current.dn.empty())
            throw ParseError("entry without dn", line);
        doc.entries.push_back(std::move(current));
        current = LdifEntry{};
        in_entry = false;
    };

    for (const auto& [line, lineno] : logical) {
        if (line.empty()) {
            flush(lineno);
            continue;
        }
        if (line.front() == '#')
            continue;

        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError("line without attribute separator: '" + line + "'", lineno);
        std::string name = trim(line.substr(0, colon));
        if (name.empty())
            throw ParseError("empty attribute name", lineno);

        std::string value;
        if (colon + 1 < line.size() && line[colon + 1] == ':') {
            value = base64_decode(trim(line.substr(colon + 2)), lineno);
        } else if (colon + 1 < line.size() && line[colon + 1] == '<') {
            throw ParseError("URL-valued attributes are not supported", lineno);
        } else {
            value = trim(line.substr(colon + 1));
        }

        if (iequals(name, "version") && !in_entry && !seen_any)
            continue;  // optional "version: 1" header
        if (iequals(name, "changetype"))
            throw ParseError("change records are not supported", lineno);

        seen_any = true;
        if (iequals(name, "dn")) {
            if (in_entry)
                throw ParseError("dn inside an entry (missing blank separator?)", lineno);
            in_entry = true;
            current.dn = value;
            continue;
        }
        if (!in_entry)
            throw ParseError("attribute before any dn", lineno);
        current.attributes.emplace_back(std::move(name), std::move(value));
    }
    flush(0);
    return doc;
}

std::string serialize_ldif(const LdifDocument& doc) {
    std::ostringstream out;
    bool first = true;
    for (const auto& entry : doc.entries) {
        if (!first)
            out << "\n";
        first = false;
        if (safe_verbatim(entry.dn))
            out << "dn: " << entry.dn << "\n";
        else
            out << "dn:: " << base64_encode(entry.dn) << "\n";
        for (const auto& [name, value] : entry.attributes) {
            if (safe_verbatim(value))
                out << name << ": " << value << "\n";
            else
                out << name << ":: " << base64_encode(value) << "\n";
        }
    }
    return out.str();
}

}  // namespace umdv
