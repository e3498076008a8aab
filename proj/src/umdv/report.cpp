// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/report.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace umdv {

namespace {

using ordered_json = nlohmann::ordered_json;

CheckStatus status_from_string(const std::string& s) {
    if (s == "OK")
        return CheckStatus::Ok;
    if (s == "WARNING")
        return CheckStatus::Warning;
    if (s == "FAIL")
        return CheckStatus::Fail;
    if (s == "NA")
        return CheckStatus::NotApplicable;
    throw ParseError("unknown check status: '" + s + "'");
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "OK")
        return Verdict::Ok;
    if (s == "WARNING")
        return Verdict::Warning;
    if (s == "FAIL")
        return Verdict::Fail;
    throw ParseError("unknown verdict: '" + s + "'");
}

std::string render_text(const ValidationReport& r) {
    std::ostringstream out;
    out << "umd-verify report\n";
    out << "product:      " << r.product << "\n";
    out << "release:      " << r.release << "\n";
    out << "os:           " << r.os << "\n";
    out << "mode:         " << to_string(r.mode) << "\n";
    out << "repositories: " << join(r.repositories, ", ") << "\n";
    out << "started:      " << r.started << "\n";
    out << "finished:     " << r.finished << "\n\n";

    for (const auto& result : r.results) {
        std::ostringstream duration;
        duration << std::fixed << std::setprecision(2) << result.duration_s << "s";
        out << std::left << std::setw(14) << result.check_id << std::setw(9)
            << to_string(result.status) << std::right << std::setw(8) << duration.str()
            << "  " << result.detail << "\n";
    }

    out << "\nVERDICT: " << to_string(r.verdict) << "\n";
    return out.str();
}

std::string render_json(const ValidationReport& r) {
    ordered_json doc;
    doc["schema_version"] = r.schema_version;
    doc["product"] = r.product;
    doc["release"] = r.release;
    doc["os"] = r.os;
    doc["repositories"] = r.repositories;
    doc["started"] = r.started;
    doc["finished"] = r.finished;
    doc["mode"] = to_string(r.mode);
    doc["results"] = ordered_json::array();
    for (const auto& result : r.results) {
        ordered_json item;
        item["id"] = result.check_id;
        item["status"] = to_string(result.status);
        item["critical"] = find_check(result.check_id).critical;
        item["duration_s"] = result.duration_s;
        item["detail"] = result.detail;
        item["artifacts"] = result.artifacts;
        doc["results"].push_back(std::move(item));
    }
    doc["verdict"] = to_string(r.verdict);
    return doc.dump(2) + "\n";
}

}  // namespace

std::string render_report(const ValidationReport& report, ReportFormat format) {
    return format == ReportFormat::Text ? render_text(report) : render_json(report);
}

ValidationReport parse_report_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid report JSON: ") + e.what());
    }

    ValidationReport report;
    report.schema_version = doc.at("schema_version").get<std::string>();
    report.product = doc.at("product").get<std::string>();
    report.release = doc.at("release").get<std::string>();
    report.os = doc.at("os").get<std::string>();
    report.repositories = doc.at("repositories").get<std::vector<std::string>>();
    report.started = doc.at("started").get<std::string>();
    report.finished = doc.at("finished").get<std::string>();
    report.mode = run_mode_from_string(doc.at("mode").get<std::string>());
    for (const auto& item : doc.at("results")) {
        CheckResult result;
        result.check_id = item.at("id").get<std::string>();
        result.status = status_from_string(item.at("status").get<std::string>());
        result.duration_s = item.at("duration_s").get<double>();
        result.detail = item.at("detail").get<std::string>();
        result.artifacts = item.at("artifacts").get<std::vector<std::string>>();
        report.results.push_back(std::move(result));
    }
    report.verdict = verdict_from_string(doc.at("verdict").get<std::string>());
    return report;
}

std::vector<fs::path> write_report(const ValidationReport& report,
                                   const fs::path& report_dir) {
    std::string stem = report.product + "-" + report.release + "-" + report.os + "-" +
                       now_compact_utc();
    fs::path text_path = report_dir / (stem + ".txt");
    fs::path json_path = report_dir / (stem + ".json");
    write_file(text_path, render_report(report, ReportFormat::Text));
    write_file(json_path, render_report(report, ReportFormat::Json));
    return {text_path, json_path};
}

int exit_code_for(Verdict verdict) {
    switch (verdict) {
        case Verdict::Ok:
            return 0;
        case Verdict::Warning:
            return 1;
        case Verdict::Fail:
            return 2;
    }
    return 2;
}

std::string render_rc_summary(const RcSummary& summary, ReportFormat format) {
    std::string flavor = summary.flavor == Flavor::Rpm ? "rpm" : "deb";

    if (format == ReportFormat::Json) {
        ordered_json doc;
        doc["flavor"] = flavor;
        doc["candidate"] = summary.candidate;
        doc["base_repos"] = summary.base_repos;
        doc["package_count"] = summary.package_count;
        doc["fetch_errors"] = summary.fetch_errors;
        doc["unmet"] = ordered_json::array();
        for (const auto& u : summary.unmet) {
            ordered_json item;
            item["requiring"] = u.requiring;
            item["requires"] = to_string(u.constraint);
            doc["unmet"].push_back(std::move(item));
        }
        doc["ok"] = summary.ok();
        return doc.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "rc-check (" << flavor << ")\n";
    out << "candidate: " << summary.candidate << "\n";
    for (const auto& base : summary.base_repos)
        out << "base:      " << base << "\n";
    if (!summary.fetch_errors.empty()) {
        for (const auto& err : summary.fetch_errors)
            out << "repository unavailable: " << err << "\n";
        out << "RESULT: FAIL (repositories unavailable, closure not evaluated)\n";
        return out.str();
    }
    out << "packages:  " << summary.package_count << "\n";
    if (summary.unmet.empty()) {
        out << "RESULT: OK (dependency closure complete)\n";
    } else {
        for (const auto& u : summary.unmet)
            out << "unmet: " << u.requiring << " requires " << to_string(u.constraint)
                << "\n";
        out << "RESULT: FAIL (" << summary.unmet.size() << " unmet dependencies)\n";
    }
    return out.str();
}

}  // namespace umdv
