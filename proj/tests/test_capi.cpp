// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include <doctest.h>

#include <memory>
#include <string>

#include "support/testutil.hpp"
#include "umdv/rpmrepo.hpp"
#include "umdverify.h"

using namespace umdv;
using testutil::TempDir;

namespace {

struct Freed {
    void operator()(char* s) const { umdv_string_free(s); }
};
using CStr = std::unique_ptr<char, Freed>;

fs::path write_mock_product(const fs::path& dir) {
    write_file(dir / "widget.manifest",
               "package: widget 0 1.0 1 x86_64 license=Apache-2.0\n"
               "exit: 0\n");
    write_file(dir / "widget.yaml",
               "name: widget\n"
               "doc: Mock widget product.\n"
               "cfgtool:\n"
               "  type: mock\n"
               "  manifest: widget.manifest\n");
    return dir / "widget.yaml";
}

Package capi_package(const std::string& name, const std::string& evr) {
    Package p;
    p.name = name;
    p.evr = parse_evr(evr);
    p.arch = "x86_64";
    p.provides.push_back(self_provide(p));
    return p;
}

}  // namespace

TEST_CASE("version and error channel") {
    REQUIRE(umdv_version() != nullptr);
    CHECK(std::string(umdv_version()) == "1.0.0");
    CHECK(umdv_last_error() != nullptr);
}

TEST_CASE("run construction errors") {
    CHECK(umdv_run_new(nullptr) == nullptr);
    CHECK(std::string(umdv_last_error()) == "product_file is NULL");

    CHECK(umdv_run_new("/no/such/product.yaml") == nullptr);
    CHECK(std::string(umdv_last_error()).find("/no/such/product.yaml") != std::string::npos);

    TempDir tmp;
    write_file(tmp / "broken.yaml", "name: widget\n");
    CHECK(umdv_run_new((tmp / "broken.yaml").string().c_str()) == nullptr);
    CHECK(std::string(umdv_last_error()) == "product definition requires a cfgtool section");
}

TEST_CASE("run settings") {
    TempDir tmp;
    fs::path product = write_mock_product(tmp.path());
    umdv_run* run = umdv_run_new(product.string().c_str());
    REQUIRE(run != nullptr);

    CHECK(umdv_run_set(run, "release", "4") == UMDV_OK);
    CHECK(umdv_run_set(run, "os", "centos7") == UMDV_OK);
    CHECK(umdv_run_set(run, "mode", "mock") == UMDV_OK);
    CHECK(umdv_run_set(run, "timeout", "30") == UMDV_OK);

    CHECK(umdv_run_set(run, "color", "red") == UMDV_ERR_ARGUMENT);
    CHECK(std::string(umdv_last_error()) == "unknown run setting: 'color'");
    CHECK(umdv_run_set(run, "timeout", "12x") == UMDV_ERR_ARGUMENT);
    CHECK(std::string(umdv_last_error()) == "invalid timeout: '12x'");
    CHECK(umdv_run_set(run, "timeout", "-5") == UMDV_ERR_ARGUMENT);
    CHECK(umdv_run_set(run, "mode", "dry") == UMDV_ERR_ARGUMENT);
    CHECK(umdv_run_set(run, nullptr, "x") == UMDV_ERR_ARGUMENT);
    CHECK(umdv_run_set(nullptr, "os", "x") == UMDV_ERR_ARGUMENT);

    CHECK(umdv_run_add_repository(run, "") == UMDV_ERR_ARGUMENT);
    CHECK(umdv_run_add_repository(run, "file:///repo") == UMDV_OK);

    umdv_run_free(run);
}

TEST_CASE("full mock validation through the C interface") {
    TempDir tmp;
    fs::path product = write_mock_product(tmp.path());
    umdv_run* run = umdv_run_new(product.string().c_str());
    REQUIRE(run != nullptr);
    REQUIRE(umdv_run_set(run, "release", "4") == UMDV_OK);
    REQUIRE(umdv_run_set(run, "os", "centos7") == UMDV_OK);
    REQUIRE(umdv_run_set(run, "mode", "mock") == UMDV_OK);
    REQUIRE(umdv_run_set(run, "workdir", (tmp / "work").string().c_str()) == UMDV_OK);

    umdv_report* report = umdv_validate(run);
    REQUIRE(report != nullptr);
    CHECK(std::string(umdv_report_verdict(report)) == "OK");
    CHECK(umdv_report_exit_code(report) == 0);

    CStr text(umdv_report_render(report, "text"));
    REQUIRE(text);
    CHECK(std::string(text.get()).find("VERDICT: OK\n") != std::string::npos);
    CStr json(umdv_report_render(report, "json"));
    REQUIRE(json);
    CHECK(std::string(json.get()).find("\"verdict\": \"OK\"") != std::string::npos);
    CHECK(umdv_report_render(report, "xml") == nullptr);
    CHECK(std::string(umdv_last_error()) == "unknown report format: 'xml'");

    fs::path report_dir = tmp / "reports";
    CHECK(umdv_report_write(report, report_dir.string().c_str()) == UMDV_OK);
    int files = 0;
    for (const auto& entry : fs::directory_iterator(report_dir)) {
        (void)entry;
        ++files;
    }
    CHECK(files == 2);

    umdv_report_free(report);
    umdv_run_free(run);
}

TEST_CASE("validation configuration errors surface through last_error") {
    TempDir tmp;
    write_file(tmp / "widget.manifest", "package: widget 0 1.0 1 x86_64\nexit: 0\n");
    write_file(tmp / "widget.yaml",
               "name: widget\n"
               "cfgtool:\n"
               "  type: mock\n"
               "  manifest: widget.manifest\n"
               "qc_specific_id: widget\n");
    umdv_run* run = umdv_run_new((tmp / "widget.yaml").string().c_str());
    REQUIRE(run != nullptr);
    REQUIRE(umdv_run_set(run, "workdir", (tmp / "work").string().c_str()) == UMDV_OK);

    CHECK(umdv_validate(run) == nullptr);
    CHECK(std::string(umdv_last_error()) ==
          "product declares test suite 'widget' but no test-definition file was given");
    CHECK(umdv_validate(nullptr) == nullptr);
    umdv_run_free(run);
}

TEST_CASE("rc-check through the C interface") {
    TempDir tmp;
    fs::path cand_dir = tmp / "cand";
    fs::path base_dir = tmp / "base";

    Package widget = capi_package("widget", "2.0-1");
    Requirement req;
    req.alternatives.push_back(VersionConstraint{"libfoo", Relation::GE, parse_evr("1.0")});
    widget.requirements.push_back(req);
    write_rpm_repo(cand_dir, {widget});
    write_rpm_repo(base_dir, {capi_package("libfoo", "1.2-1")});

    std::string cand = cand_dir.string();
    std::string base = base_dir.string();
    const char* bases[] = {base.c_str()};

    SUBCASE("clean closure") {
        umdv_rc_summary* summary = umdv_rc_check("rpm", cand.c_str(), bases, 1, 30);
        REQUIRE(summary != nullptr);
        CHECK(umdv_rc_ok(summary) == 1);
        CHECK(umdv_rc_unmet_count(summary) == 0);
        CStr text(umdv_rc_render(summary, "text"));
        REQUIRE(text);
        CHECK(std::string(text.get()).find("RESULT: OK (dependency closure complete)") !=
              std::string::npos);
        CHECK(umdv_rc_render(summary, "yaml") == nullptr);
        umdv_rc_free(summary);
    }

    SUBCASE("unmet dependency") {
        umdv_rc_summary* summary = umdv_rc_check("rpm", cand.c_str(), nullptr, 0, 30);
        REQUIRE(summary != nullptr);
        CHECK(umdv_rc_ok(summary) == 0);
        CHECK(umdv_rc_unmet_count(summary) == 1);
        CStr text(umdv_rc_render(summary, "text"));
        CHECK(std::string(text.get()).find("unmet: widget-2.0-1.x86_64 requires libfoo >= 1.0") !=
              std::string::npos);
        umdv_rc_free(summary);
    }

    SUBCASE("unavailable repository") {
        std::string missing = (tmp / "missing").string();
        umdv_rc_summary* summary = umdv_rc_check("rpm", missing.c_str(), bases, 1, 30);
        REQUIRE(summary != nullptr);
        CHECK(umdv_rc_ok(summary) == 0);
        CStr text(umdv_rc_render(summary, "text"));
        CHECK(std::string(text.get()).find("repository unavailable: ") != std::string::npos);
        umdv_rc_free(summary);
    }

    SUBCASE("argument errors") {
        CHECK(umdv_rc_check("apt", cand.c_str(), bases, 1, 30) == nullptr);
        CHECK(std::string(umdv_last_error()) == "unknown repository flavor: apt");
        CHECK(umdv_rc_check(nullptr, cand.c_str(), bases, 1, 30) == nullptr);
        CHECK(umdv_rc_check("rpm", cand.c_str(), nullptr, 2, 30) == nullptr);
    }
}

TEST_CASE("product info") {
    TempDir tmp;
    fs::path product = write_mock_product(tmp.path());
    CStr info(umdv_product_info(product.string().c_str()));
    REQUIRE(info);
    CHECK(std::string(info.get()) == "widget\tMock widget product.");

    CHECK(umdv_product_info((tmp / "absent.yaml").string().c_str()) == nullptr);
    CHECK(umdv_product_info(nullptr) == nullptr);
}
