// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "umdverify.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

[[noreturn]] void die(const std::string& msg) {
    std::fprintf(stderr, "umd-verify: %s\n", msg.c_str());
    std::exit(kExitInternal);
}

// Adopt a string from the C API; dies when the call failed.
std::string take(char* s) {
    if (!s)
        die(umdv_last_error());
    std::string out = s;
    umdv_string_free(s);
    return out;
}

using RunHandle = std::unique_ptr<umdv_run, decltype(&umdv_run_free)>;
using ReportHandle = std::unique_ptr<umdv_report, decltype(&umdv_report_free)>;
using RcHandle = std::unique_ptr<umdv_rc_summary, decltype(&umdv_rc_free)>;

struct ValidateOptions {
    std::string product;
    std::string release;
    std::string os;
    std::vector<std::string> repositories;
    std::string mode = "mock";
    std::string workdir = "./umdv_work";
    std::string report_dir;  // default <workdir>/reports
    std::string format = "text";
    int timeout = 0;  // seconds; 0 keeps the engine default
    std::string tests_file;
    std::string products_dir = "./products";
};

struct RcOptions {
    std::string flavor;
    std::string candidate;
    std::vector<std::string> bases;
    std::string format = "text";
    int timeout = 30;
};

fs::path resolve_product(const std::string& product, const fs::path& products_dir) {
    fs::path direct(product);
    if (fs::is_regular_file(direct))
        return direct;
    fs::path named = products_dir / (product + ".yaml");
    if (fs::is_regular_file(named))
        return named;
    die("no product definition for '" + product + "' (looked for " + named.string() + ")");
}

int run_validate(const ValidateOptions& o) {
    fs::path product_file = resolve_product(o.product, o.products_dir);
    RunHandle run(umdv_run_new(product_file.string().c_str()), umdv_run_free);
    if (!run)
        die(umdv_last_error());

    auto set = [&](const char* key, const std::string& value) {
        if (!value.empty() && umdv_run_set(run.get(), key, value.c_str()) != UMDV_OK)
            die(umdv_last_error());
    };
    set("release", o.release);
    set("os", o.os);
    set("mode", o.mode);
    set("workdir", o.workdir);
    set("tests_file", o.tests_file);
    if (o.timeout > 0)
        set("timeout", std::to_string(o.timeout));
    for (const auto& url : o.repositories)
        if (umdv_run_add_repository(run.get(), url.c_str()) != UMDV_OK)
            die(umdv_last_error());

    ReportHandle report(umdv_validate(run.get()), umdv_report_free);
    if (!report)
        die(umdv_last_error());

    std::string report_dir =
        o.report_dir.empty() ? (fs::path(o.workdir) / "reports").string() : o.report_dir;
    if (umdv_report_write(report.get(), report_dir.c_str()) != UMDV_OK)
        die(umdv_last_error());

    if (o.format == "text" || o.format == "both")
        std::fputs(take(umdv_report_render(report.get(), "text")).c_str(), stdout);
    if (o.format == "json" || o.format == "both")
        std::fputs(take(umdv_report_render(report.get(), "json")).c_str(), stdout);

    return umdv_report_exit_code(report.get());
}

int run_rc_check(const RcOptions& o) {
    std::vector<const char*> bases;
    bases.reserve(o.bases.size());
    for (const auto& b : o.bases)
        bases.push_back(b.c_str());

    RcHandle summary(umdv_rc_check(o.flavor.c_str(), o.candidate.c_str(), bases.data(),
                                   bases.size(), o.timeout),
                     umdv_rc_free);
    if (!summary)
        die(umdv_last_error());

    std::fputs(take(umdv_rc_render(summary.get(), o.format.c_str())).c_str(), stdout);
    return umdv_rc_ok(summary.get()) ? 0 : 2;
}

int run_list_products(const fs::path& products_dir) {
    if (!fs::is_directory(products_dir))
        die("no products directory: " + products_dir.string());

    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& entry : fs::directory_iterator(products_dir)) {
        if (entry.path().extension() != ".yaml")
            continue;
        char* info = umdv_product_info(entry.path().string().c_str());
        if (!info) {
            std::fprintf(stderr, "umd-verify: skipping %s: %s\n",
                         entry.path().string().c_str(), umdv_last_error());
            continue;
        }
        std::string line = info;
        umdv_string_free(info);
        auto tab = line.find('\t');
        rows.emplace_back(line.substr(0, tab),
                          tab == std::string::npos ? "" : line.substr(tab + 1));
    }
    std::sort(rows.begin(), rows.end());

    size_t width = 0;
    for (const auto& [name, doc] : rows)
        width = std::max(width, name.size());
    for (const auto& [name, doc] : rows)
        std::printf("%-*s  %s\n", static_cast<int>(width), name.c_str(), doc.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("umd-verify ") + umdv_version() +
                 ": validation gate for middleware product releases"};
    app.require_subcommand(1);

    ValidateOptions vo;
    CLI::App* validate = app.add_subcommand(
        "validate", "Run the quality-criteria workflow for one product");
    validate->add_option("--product", vo.product, "Product name or definition file")
        ->required();
    validate->add_option("--release", vo.release, "Release under verification")->required();
    validate->add_option("--os", vo.os, "Target OS label, e.g. centos7 or ubuntu22")
        ->required();
    validate->add_option("--repository", vo.repositories,
                         "Repository URL; first is the candidate, rest are production");
    validate->add_option("--mode", vo.mode, "Run mode")
        ->check(CLI::IsMember({"live", "mock"}))
        ->capture_default_str();
    validate->add_option("--workdir", vo.workdir, "Scratch directory")
        ->capture_default_str();
    validate->add_option("--report-dir", vo.report_dir,
                         "Report directory (default <workdir>/reports)");
    validate->add_option("--format", vo.format, "Stdout report format")
        ->check(CLI::IsMember({"text", "json", "both"}))
        ->capture_default_str();
    validate->add_option("--timeout", vo.timeout, "Per-check timeout in seconds")
        ->check(CLI::PositiveNumber);
    validate->add_option("--tests-file", vo.tests_file, "Product test-definition file");
    validate->add_option("--products-dir", vo.products_dir, "Product definition directory")
        ->capture_default_str();

    RcOptions ro;
    CLI::App* rc = app.add_subcommand(
        "rc-check", "Dependency-closure check of a candidate repository");
    rc->add_option("--flavor", ro.flavor, "Package flavor")
        ->check(CLI::IsMember({"rpm", "deb"}))
        ->required();
    rc->add_option("--candidate", ro.candidate, "Candidate repository URL")->required();
    rc->add_option("--base", ro.bases, "Base/production repository URL")->required();
    rc->add_option("--format", ro.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    rc->add_option("--timeout", ro.timeout, "Fetch timeout in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::string products_dir = "./products";
    CLI::App* list = app.add_subcommand("list-products", "List known product definitions");
    list->add_option("--products-dir", products_dir, "Product definition directory")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (validate->parsed())
            return run_validate(vo);
        if (rc->parsed())
            return run_rc_check(ro);
        return run_list_products(products_dir);
    } catch (const std::exception& e) {
        die(e.what());
    }
}
