// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/security.hpp"

#include <httplib.h>

#include <fstream>
#include <sstream>

#include "umdv/certs.hpp"

namespace umdv {

std::string to_string(FindingKind kind) {
    return kind == FindingKind::WorldWritable ? "world-writable" : "readable-secret";
}

namespace {

std::string octal_mode(fs::perms p) {
    std::ostringstream out;
    out << '0' << std::oct << (static_cast<unsigned>(p) & 07777);
    return out.str();
}

template <typename Visit>
void walk(const fs::path& dir, Visit&& visit, std::vector<std::string>* notes) {
    std::error_code ec;
    fs::directory_iterator it(dir, ec);
    if (ec) {
        if (notes)
            notes->push_back("unreadable: " + dir.string() + " (" + ec.message() + ")");
        return;
    }
    for (const auto& entry : it) {
        std::error_code sec;
        fs::file_status st = entry.symlink_status(sec);
        if (sec || fs::is_symlink(st))
            continue;
        visit(entry.path(), st);
        if (fs::is_directory(st))
            walk(entry.path(), visit, notes);
    }
}

bool has(fs::perms p, fs::perms bit) { return (p & bit) != fs::perms::none; }

}  // namespace

std::vector<ScanFinding> scan_world_writable(const std::vector<fs::path>& roots,
                                             std::vector<std::string>* notes) {
    std::vector<ScanFinding> findings;
    for (const auto& root : roots) {
        if (!fs::exists(root)) {
            if (notes)
                notes->push_back("missing root: " + root.string());
            continue;
        }
        walk(root,
             [&](const fs::path& path, fs::file_status st) {
                 if (!has(st.permissions(), fs::perms::others_write))
                     return;
                 if (fs::is_directory(st) && has(st.permissions(), fs::perms::sticky_bit))
                     return;
                 if (!fs::is_directory(st) && !fs::is_regular_file(st))
                     return;
                 findings.push_back({path, FindingKind::WorldWritable,
                                     std::string(fs::is_directory(st) ? "directory" : "file") +
                                         " mode " + octal_mode(st.permissions())});
             },
             notes);
    }
    return findings;
}

const std::vector<std::regex>& default_secret_patterns() {
    static const std::vector<std::regex> patterns = {
        std::regex(R"(((password|passwd|secret)\s*[=:])\s*\S+)", std::regex::icase),
    };
    return patterns;
}

std::vector<ScanFinding> scan_readable_secrets(const std::vector<fs::path>& roots,
                                               const std::vector<std::regex>& patterns,
                                               std::vector<std::string>* notes) {
    std::vector<ScanFinding> findings;
    for (const auto& root : roots) {
        if (!fs::exists(root)) {
            if (notes)
                notes->push_back("missing root: " + root.string());
            continue;
        }
        walk(root,
             [&](const fs::path& path, fs::file_status st) {
                 if (!fs::is_regular_file(st) ||
                     !has(st.permissions(), fs::perms::others_read))
                     return;

                 std::ifstream in(path, std::ios::binary);
                 if (!in) {
                     if (notes)
                         notes->push_back("unreadable: " + path.string());
                     return;
                 }
                 std::string head(8192, '\0');
                 in.read(head.data(), static_cast<std::streamsize>(head.size()));
                 head.resize(static_cast<size_t>(in.gcount()));
                 if (head.find('\0') != std::string::npos) {
                     if (notes)
                         notes->push_back("binary skipped: " + path.string());
                     return;
                 }
                 in.clear();
                 in.seekg(0);

                 std::string line;
                 for (int lineno = 1; std::getline(in, line); ++lineno) {
                     std::smatch m;
                     for (const auto& pattern : patterns) {
                         if (!std::regex_search(line, m, pattern))
                             continue;
                         // Cite the key, never the value.
                         findings.push_back({path, FindingKind::ReadableSecret,
                                             "line " + std::to_string(lineno) + ": '" +
                                                 trim(m[1].str()) + "' carries a value"});
                         return;
                     }
                 }
             },
             notes);
    }
    return findings;
}

fs::path dump_findings(const std::vector<ScanFinding>& findings, const fs::path& dir,
                       const std::string& name) {
    std::ostringstream out;
    for (const auto& f : findings)
        out << to_string(f.kind) << '\t' << f.path.string() << '\t' << f.detail << '\n';
    fs::path target = dir / name;
    write_file(target, out.str());
    return target;
}

CheckResult check_license(const DeploymentOutcome& outcome) {
    CheckResult result;
    result.check_id = "QC_DOC_5";

    if (outcome.installed_packages.empty()) {
        result.status = CheckStatus::NotApplicable;
        result.detail = "no installed packages to examine";
        return result;
    }

    auto has_doc_license = [&](const std::string& name) {
        fs::path doc_root = outcome.install_root / "usr" / "share" / "doc";
        std::error_code ec;
        for (fs::directory_iterator it(doc_root, ec), end; !ec && it != end;
             it.increment(ec)) {
            if (!starts_with(it->path().filename().string(), name))
                continue;
            std::error_code iec;
            for (fs::directory_iterator fit(it->path(), iec), fend; !iec && fit != fend;
                 fit.increment(iec)) {
                std::string fname = to_lower(fit->path().filename().string());
                if (starts_with(fname, "license") || starts_with(fname, "copying"))
                    return true;
            }
        }
        return false;
    };

    std::vector<std::string> offenders;
    for (const auto& pkg : outcome.installed_packages) {
        if (!pkg.license.empty() || has_doc_license(pkg.name))
            continue;
        offenders.push_back(pkg.name);
    }

    if (offenders.empty()) {
        result.status = CheckStatus::Ok;
        result.detail = std::to_string(outcome.installed_packages.size()) +
                        " packages carry license information";
    } else {
        result.status = CheckStatus::Fail;
        result.detail = "missing license: " + join(offenders, ", ");
    }
    return result;
}

CheckResult check_support_channel(const std::string& url, int timeout_s) {
    CheckResult result;
    result.check_id = "QC_SUPPORT_1";

    if (url.empty()) {
        result.status = CheckStatus::NotApplicable;
        result.detail = "no support channel configured";
        return result;
    }

    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        result.status = CheckStatus::Fail;
        result.detail = "not a URL: " + url;
        return result;
    }
    auto path_start = url.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    client.set_connection_timeout(timeout_s, 0);
    client.set_read_timeout(timeout_s, 0);

    auto res = client.Get(path);
    if (!res) {
        result.status = CheckStatus::Fail;
        result.detail = "unreachable: " + httplib::to_string(res.error());
        return result;
    }
    if (res->status >= 200 && res->status < 400) {
        result.status = CheckStatus::Ok;
        result.detail = url + " answered with status " + std::to_string(res->status);
    } else {
        result.status = CheckStatus::Fail;
        result.detail = url + " answered with status " + std::to_string(res->status);
    }
    return result;
}

std::pair<CheckResult, CheckResult> check_tls_support(const std::string& host, int port,
                                                      const fs::path& ca_cert) {
    CheckResult sec1;
    sec1.check_id = "QC_SEC_1";
    CheckResult sec2;
    sec2.check_id = "QC_SEC_2";

    TlsProbeResult probe = probe_tls(host, port, ca_cert);
    if (!probe.connected) {
        sec1.status = CheckStatus::Fail;
        sec1.detail = probe.error;
        sec2.status = CheckStatus::Fail;
        sec2.detail = "no TLS endpoint to examine: " + probe.error;
        return {sec1, sec2};
    }

    if (probe.chain_valid) {
        sec1.status = CheckStatus::Ok;
        sec1.detail = "certificate chain verified for " + probe.leaf_subject;
    } else {
        sec1.status = CheckStatus::Fail;
        sec1.detail = probe.error;
    }

    if (probe.digest_sha2) {
        sec2.status = CheckStatus::Ok;
        sec2.detail = "signature digest " + probe.digest_name;
    } else {
        sec2.status = CheckStatus::Fail;
        sec2.detail = "signature digest outside the SHA-2 family: " + probe.digest_name;
    }
    return {sec1, sec2};
}

}  // namespace umdv
