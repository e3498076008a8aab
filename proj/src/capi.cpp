// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdverify.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "umdv/closure.hpp"
#include "umdv/pipeline.hpp"
#include "umdv/product.hpp"
#include "umdv/report.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

struct umdv_run {
    umdv::ProductSpec spec;
    umdv::RunContext ctx;
};

struct umdv_report {
    umdv::ValidationReport report;
    std::string verdict;  // stable storage for umdv_report_verdict
};

struct umdv_rc_summary {
    umdv::RcSummary summary;
};

extern "C" {

const char* umdv_version(void) { return UMDV_VERSION_STRING; }

const char* umdv_last_error(void) { return g_last_error.c_str(); }

umdv_run* umdv_run_new(const char* product_file) {
    if (!product_file) {
        set_error("product_file is NULL");
        return nullptr;
    }
    try {
        auto run = std::make_unique<umdv_run>();
        run->spec = umdv::load_product_spec(product_file);
        return run.release();
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

void umdv_run_free(umdv_run* run) { delete run; }

int umdv_run_set(umdv_run* run, const char* key, const char* value) {
    if (!run || !key || !value) {
        set_error("umdv_run_set: NULL argument");
        return UMDV_ERR_ARGUMENT;
    }
    try {
        std::string k = key;
        if (k == "release") {
            run->ctx.release = value;
        } else if (k == "os") {
            run->ctx.os = value;
        } else if (k == "mode") {
            run->ctx.mode = umdv::run_mode_from_string(value);
        } else if (k == "workdir") {
            run->ctx.workdir = value;
        } else if (k == "timeout") {
            size_t pos = 0;
            long seconds = std::stol(value, &pos);
            if (pos != std::strlen(value) || seconds <= 0)
                throw umdv::Error(std::string("invalid timeout: '") + value + "'");
            run->ctx.timeout_per_check = std::chrono::seconds(seconds);
        } else if (k == "tests_file") {
            run->ctx.tests_file = value;
        } else {
            throw umdv::Error("unknown run setting: '" + k + "'");
        }
        return UMDV_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return UMDV_ERR_ARGUMENT;
    }
}

int umdv_run_add_repository(umdv_run* run, const char* url) {
    if (!run || !url || !*url) {
        set_error("umdv_run_add_repository: NULL or empty argument");
        return UMDV_ERR_ARGUMENT;
    }
    run->ctx.repositories.emplace_back(url);
    return UMDV_OK;
}

umdv_report* umdv_validate(umdv_run* run) {
    if (!run) {
        set_error("umdv_validate: NULL run");
        return nullptr;
    }
    try {
        auto out = std::make_unique<umdv_report>();
        out->report = umdv::run_validation(run->spec, run->ctx);
        out->verdict = umdv::to_string(out->report.verdict);
        return out.release();
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

void umdv_report_free(umdv_report* report) { delete report; }

const char* umdv_report_verdict(const umdv_report* report) {
    return report ? report->verdict.c_str() : "";
}

int umdv_report_exit_code(const umdv_report* report) {
    return report ? umdv::exit_code_for(report->report.verdict) : UMDV_ERR_ARGUMENT;
}

char* umdv_report_render(const umdv_report* report, const char* format) {
    if (!report || !format) {
        set_error("umdv_report_render: NULL argument");
        return nullptr;
    }
    std::string f = format;
    if (f != "text" && f != "json") {
        set_error("unknown report format: '" + f + "'");
        return nullptr;
    }
    return dup_string(umdv::render_report(
        report->report,
        f == "text" ? umdv::ReportFormat::Text : umdv::ReportFormat::Json));
}

int umdv_report_write(const umdv_report* report, const char* dir) {
    if (!report || !dir) {
        set_error("umdv_report_write: NULL argument");
        return UMDV_ERR_ARGUMENT;
    }
    try {
        umdv::write_report(report->report, dir);
        return UMDV_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return UMDV_ERR_RUNTIME;
    }
}

void umdv_string_free(char* s) { std::free(s); }

umdv_rc_summary* umdv_rc_check(const char* flavor, const char* candidate_url,
                               const char* const* base_urls, size_t n_bases, int timeout_s) {
    if (!flavor || !candidate_url || (n_bases > 0 && !base_urls)) {
        set_error("umdv_rc_check: NULL argument");
        return nullptr;
    }
    try {
        std::vector<std::string> bases;
        for (size_t i = 0; i < n_bases; ++i) {
            if (!base_urls[i])
                throw umdv::Error("umdv_rc_check: NULL base URL");
            bases.emplace_back(base_urls[i]);
        }
        auto out = std::make_unique<umdv_rc_summary>();
        out->summary = umdv::rc_check(candidate_url, bases,
                                      umdv::flavor_from_string(flavor), timeout_s);
        return out.release();
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

void umdv_rc_free(umdv_rc_summary* summary) { delete summary; }

int umdv_rc_ok(const umdv_rc_summary* summary) {
    return summary && summary->summary.ok() ? 1 : 0;
}

size_t umdv_rc_unmet_count(const umdv_rc_summary* summary) {
    return summary ? summary->summary.unmet.size() : 0;
}

char* umdv_rc_render(const umdv_rc_summary* summary, const char* format) {
    if (!summary || !format) {
        set_error("umdv_rc_render: NULL argument");
        return nullptr;
    }
    std::string f = format;
    if (f != "text" && f != "json") {
        set_error("unknown summary format: '" + f + "'");
        return nullptr;
    }
    return dup_string(umdv::render_rc_summary(
        summary->summary,
        f == "text" ? umdv::ReportFormat::Text : umdv::ReportFormat::Json));
}

char* umdv_product_info(const char* product_file) {
    if (!product_file) {
        set_error("umdv_product_info: NULL argument");
        return nullptr;
    }
    try {
        umdv::ProductSpec spec = umdv::load_product_spec(product_file);
        return dup_string(spec.name + "\t" + spec.doc);
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

}  // extern "C"
