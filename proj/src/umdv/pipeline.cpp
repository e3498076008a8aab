// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include "umdv/certs.hpp"
#include "umdv/closure.hpp"
#include "umdv/deploy.hpp"
#include "umdv/functest.hpp"
#include "umdv/infomodel.hpp"
#include "umdv/proc.hpp"
#include "umdv/security.hpp"

namespace umdv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string excerpt(const std::string& text, size_t limit = 300) {
    std::string t = trim(text);
    std::replace(t.begin(), t.end(), '\n', ' ');
    if (t.size() > limit)
        t = t.substr(0, limit) + "...";
    return t;
}

/// Run one check body under a wall clock. Exceptions become FAIL results
/// so a single broken probe cannot abort the whole pipeline.
template <typename Fn>
CheckResult timed_check(const std::string& id, Fn&& body) {
    auto start = Clock::now();
    CheckResult result;
    try {
        result = body();
    } catch (const std::exception& e) {
        result = {};
        result.status = CheckStatus::Fail;
        result.detail = e.what();
    }
    result.check_id = id;
    result.duration_s = seconds_since(start);
    return result;
}

CheckResult not_applicable(const std::string& id, const std::string& why) {
    CheckResult r;
    r.check_id = id;
    r.status = CheckStatus::NotApplicable;
    r.detail = why;
    return r;
}

CheckResult skipped(const std::string& id, const std::string& failed_id) {
    return not_applicable(id, "skipped: critical failure in earlier block (" + failed_id +
                                  " failed)");
}

/// Id of the first critical FAIL in the block, or "".
std::string critical_failure(const std::vector<CheckResult>& block) {
    for (const auto& r : block)
        if (r.status == CheckStatus::Fail && find_check(r.check_id).critical)
            return r.check_id;
    return {};
}

struct HookOutcome {
    bool ok = true;
    std::string detail;
};

HookOutcome run_hook(const std::string& hook, const char* label, const ProductSpec& spec,
                     const RunContext& ctx) {
    HookOutcome out;
    if (hook.empty())
        return out;
    fs::path script = spec.resolve(hook);
    if (!fs::exists(script)) {
        out.ok = false;
        out.detail = std::string(label) + " hook not found: " + script.string();
        return out;
    }
    RunOptions opts;
    opts.cwd = ctx.workdir;
    opts.env = ctx.environment;
    opts.timeout = ctx.timeout_per_check;
    RunResult res = run_process({script.string()}, opts);
    if (res.timed_out) {
        out.ok = false;
        out.detail = std::string(label) + " hook timed out";
    } else if (res.exit_code != 0) {
        out.ok = false;
        out.detail = std::string(label) + " hook failed (exit " +
                     std::to_string(res.exit_code) + "): " + excerpt(res.output);
    }
    return out;
}

/// Pluggable-slot checks (QC_SEC_3/4, QC_MON_1, QC_ACC_1): run the
/// configured script, or NotApplicable when the slot is empty.
CheckResult run_external_check(const std::string& id, const ProductSpec& spec,
                               const RunContext& ctx) {
    auto it = spec.external_checks.find(id);
    if (it == spec.external_checks.end())
        return not_applicable(id, "no external check configured");
    return timed_check(id, [&] {
        CheckResult r;
        fs::path script = spec.resolve(it->second);
        if (!fs::exists(script)) {
            r.status = CheckStatus::Fail;
            r.detail = "external check script not found: " + script.string();
            return r;
        }
        RunOptions opts;
        opts.cwd = ctx.workdir;
        opts.env = ctx.environment;
        opts.timeout = ctx.timeout_per_check;
        RunResult res = run_process({script.string()}, opts);
        if (res.timed_out) {
            r.status = CheckStatus::Fail;
            r.detail = "external check timed out after " +
                       std::to_string(ctx.timeout_per_check.count()) + " s";
        } else if (res.exit_code == 0) {
            r.status = CheckStatus::Ok;
            r.detail = "external check passed: " + script.filename().string();
        } else {
            r.status = CheckStatus::Fail;
            r.detail = "external check exit " + std::to_string(res.exit_code) + ": " +
                       excerpt(res.output);
        }
        return r;
    });
}

}  // namespace

ValidationReport run_validation(const ProductSpec& spec, const RunContext& base_ctx) {
    RunContext ctx = base_ctx;
    ctx.workdir = fs::absolute(ctx.workdir);
    std::error_code ec;
    fs::create_directories(ctx.workdir, ec);
    if (ec)
        throw Error("cannot create workdir " + ctx.workdir.string() + ": " + ec.message());

    // Environment exported to every hook, external check and test.
    ctx.environment.clear();
    ctx.environment.emplace_back("UMD_RELEASE", ctx.release);
    ctx.environment.emplace_back("UMD_OS", ctx.os);
    ctx.environment.emplace_back("UMD_REPOSITORIES", join(ctx.repositories, ","));
    ctx.environment.emplace_back("UMD_WORKDIR", ctx.workdir.string());
    for (const auto& [key, value] : spec.extra_vars)
        ctx.environment.emplace_back(key, value);

    // Configuration problems surface before any check runs.
    TestSuite suite;
    if (!spec.qc_specific_id.empty()) {
        if (ctx.tests_file.empty())
            throw Error("product declares test suite '" + spec.qc_specific_id +
                        "' but no test-definition file was given");
        suite = load_test_definitions(ctx.tests_file, spec.qc_specific_id);
    }

    std::string started = now_rfc3339();

    CertAuthority ca;
    HostCert host_cert;
    if (spec.need_cert) {
        ca = create_ca(ctx.workdir);
        host_cert = issue_host_cert(ca, "localhost");
    }

    Flavor flavor = flavor_for_os(ctx.os);
    int fetch_timeout = static_cast<int>(ctx.timeout_per_check.count());
    std::string candidate_url = ctx.repositories.empty() ? "" : ctx.repositories.front();
    std::vector<std::string> base_urls;
    if (ctx.repositories.size() > 1)
        base_urls.assign(ctx.repositories.begin() + 1, ctx.repositories.end());

    // Repository metadata is shared by QC_DIST_1 and QC_UPGRADE_1.
    RepoIndex candidate;
    std::vector<RepoIndex> bases;
    bool repos_fetched = false;
    std::string fetch_error;
    double fetch_duration = 0.0;
    if (!candidate_url.empty()) {
        auto t0 = Clock::now();
        try {
            candidate = fetch_repo_metadata(candidate_url, flavor, fetch_timeout);
            for (const auto& url : base_urls)
                bases.push_back(fetch_repo_metadata(url, flavor, fetch_timeout));
            repos_fetched = true;
        } catch (const std::exception& e) {
            fetch_error = e.what();
        }
        fetch_duration = seconds_since(t0);
    }

    // Block 1: installation.
    DeploymentOutcome outcome;
    outcome.install_root = ctx.workdir / "install_root";
    std::vector<CheckResult> block1;

    CheckResult dist = timed_check("QC_DIST_1", [&] {
        CheckResult r;
        HookOutcome pre = run_hook(spec.hooks.pre_config, "pre-config", spec, ctx);
        if (!pre.ok) {
            r.status = CheckStatus::Fail;
            r.detail = pre.detail;
            return r;
        }
        PreparedEnvironment env = prepare_environment(spec, ctx);
        outcome = execute_deployment(env, ctx);
        HookOutcome post = run_hook(spec.hooks.post_config, "post-config", spec, ctx);
        if (!post.ok) {
            r.status = CheckStatus::Fail;
            r.detail = post.detail;
            r.artifacts.push_back(outcome.log_path.string());
            return r;
        }
        if (candidate_url.empty()) {
            r.artifacts.push_back(outcome.log_path.string());
            if (outcome.exit_status == 0) {
                r.status = CheckStatus::Ok;
                r.detail = "deployment succeeded; no candidate repository configured, "
                           "dependency closure not evaluated";
            } else {
                r.status = CheckStatus::Fail;
                r.detail = "deployment failed with exit status " +
                           std::to_string(outcome.exit_status);
            }
            return r;
        }
        if (!repos_fetched) {
            r.status = CheckStatus::Fail;
            r.detail = "repository unavailable: " + fetch_error;
            return r;
        }
        return check_binary_distribution(outcome, candidate, bases);
    });
    dist.duration_s += fetch_duration;
    block1.push_back(std::move(dist));

    block1.push_back(timed_check("QC_UPGRADE_1", [&] {
        CheckResult r;
        if (base_urls.empty())
            return not_applicable("QC_UPGRADE_1", "no production repository configured");
        if (!repos_fetched) {
            r.status = CheckStatus::Fail;
            r.detail = "repository unavailable: " + fetch_error;
            return r;
        }
        return check_upgrade(merge_indexes(bases, flavor), candidate);
    }));

    std::string failed_id = critical_failure(block1);

    // Block 2: security and operations.
    static const std::vector<std::string> block2_ids = {
        "QC_DOC_5", "QC_SEC_1", "QC_SEC_2", "QC_SEC_3",   "QC_SEC_4",
        "QC_SEC_5", "QC_SEC_6", "QC_MON_1", "QC_ACC_1", "QC_SUPPORT_1"};
    std::vector<CheckResult> block2;
    if (!failed_id.empty()) {
        for (const auto& id : block2_ids)
            block2.push_back(skipped(id, failed_id));
    } else {
        block2.push_back(timed_check("QC_DOC_5", [&] { return check_license(outcome); }));

        if (!spec.need_cert) {
            block2.push_back(
                not_applicable("QC_SEC_1", "product does not require certificates"));
            block2.push_back(
                not_applicable("QC_SEC_2", "product does not require certificates"));
        } else {
            auto t0 = Clock::now();
            CheckResult sec1;
            CheckResult sec2;
            try {
                TlsResponder responder(host_cert.cert_path, host_cert.key_path);
                std::tie(sec1, sec2) =
                    check_tls_support("127.0.0.1", responder.port(), ca.cert_path);
                responder.stop();
            } catch (const std::exception& e) {
                sec1.check_id = "QC_SEC_1";
                sec1.status = CheckStatus::Fail;
                sec1.detail = e.what();
                sec2.check_id = "QC_SEC_2";
                sec2.status = CheckStatus::Fail;
                sec2.detail = std::string("no TLS endpoint to examine: ") + e.what();
            }
            double elapsed = seconds_since(t0);
            sec1.duration_s = elapsed;
            sec2.duration_s = elapsed;
            sec1.artifacts.push_back(ca.cert_path.string());
            sec1.artifacts.push_back(host_cert.cert_path.string());
            block2.push_back(std::move(sec1));
            block2.push_back(std::move(sec2));
        }

        block2.push_back(run_external_check("QC_SEC_3", spec, ctx));
        block2.push_back(run_external_check("QC_SEC_4", spec, ctx));

        std::vector<fs::path> scan_roots = {outcome.install_root};
        for (const auto& extra : spec.scan_paths)
            scan_roots.push_back(spec.resolve(extra));

        block2.push_back(timed_check("QC_SEC_5", [&] {
            CheckResult r;
            std::vector<std::string> notes;
            auto findings = scan_world_writable(scan_roots, &notes);
            r.artifacts.push_back(
                dump_findings(findings, ctx.workdir / "findings", "world_writable.txt")
                    .string());
            if (findings.empty()) {
                r.status = CheckStatus::Ok;
                r.detail = "no world writable files under " +
                           std::to_string(scan_roots.size()) + " roots";
            } else {
                r.status = CheckStatus::Fail;
                r.detail = std::to_string(findings.size()) +
                           " world writable paths, first: " +
                           findings.front().path.string();
            }
            if (!notes.empty())
                r.detail += " (" + std::to_string(notes.size()) + " paths skipped)";
            return r;
        }));

        block2.push_back(timed_check("QC_SEC_6", [&] {
            CheckResult r;
            std::vector<std::string> notes;
            auto findings = scan_readable_secrets(scan_roots, default_secret_patterns(),
                                                  &notes);
            r.artifacts.push_back(
                dump_findings(findings, ctx.workdir / "findings", "readable_secrets.txt")
                    .string());
            if (findings.empty()) {
                r.status = CheckStatus::Ok;
                r.detail = "no credential material in world readable files under " +
                           std::to_string(scan_roots.size()) + " roots";
            } else {
                r.status = CheckStatus::Fail;
                r.detail = std::to_string(findings.size()) +
                           " world readable files carry credential material, first: " +
                           findings.front().path.string();
            }
            if (!notes.empty())
                r.detail += " (" + std::to_string(notes.size()) + " paths skipped)";
            return r;
        }));

        block2.push_back(run_external_check("QC_MON_1", spec, ctx));
        block2.push_back(run_external_check("QC_ACC_1", spec, ctx));

        block2.push_back(timed_check(
            "QC_SUPPORT_1", [&] { return check_support_channel(spec.support_url); }));
    }

    if (failed_id.empty())
        failed_id = critical_failure(block2);

    // Block 3: information model.
    std::vector<CheckResult> block3;
    if (!failed_id.empty()) {
        for (const auto& id : {"QC_INFO_1", "QC_INFO_2", "QC_INFO_3"})
            block3.push_back(skipped(id, failed_id));
    } else if (!spec.has_infomodel) {
        for (const auto& id : {"QC_INFO_1", "QC_INFO_2", "QC_INFO_3"})
            block3.push_back(not_applicable(id, "product publishes no information model"));
    } else {
        InfoEndpoint endpoint{spec.infomodel.host, spec.infomodel.port,
                              spec.infomodel.base_dn, spec.infomodel.fetch_command};
        fs::path published = ctx.workdir / "infomodel" / "published.ldif";
        LdifDocument document;
        std::string info_error;
        try {
            std::string raw = fetch_info_raw(endpoint, ctx);
            write_file(published, raw);
            document = parse_ldif(raw);
        } catch (const std::exception& e) {
            info_error = e.what();
        }

        const auto& declared = spec.infomodel.flavors;
        auto has_flavor = [&](const char* name) {
            return std::find(declared.begin(), declared.end(), name) != declared.end();
        };

        auto schema_check = [&](const std::string& id, const char* schema_name,
                                const char* schema_label, const std::string& validator) {
            if (!has_flavor(schema_name))
                return not_applicable(id, std::string(schema_label) +
                                              " not declared by the product");
            CheckResult r = timed_check(id, [&] {
                CheckResult inner;
                if (!info_error.empty()) {
                    inner.status = CheckStatus::Fail;
                    inner.detail = "information model unavailable: " + info_error;
                    return inner;
                }
                if (!validator.empty())
                    return run_external_validator(id, validator, published, ctx);
                inner.status = CheckStatus::Ok;
                inner.detail = "built-in well-formedness check passed (" +
                               std::to_string(document.entries.size()) + " entries)";
                return inner;
            });
            if (fs::exists(published))
                r.artifacts.push_back(published.string());
            return r;
        };

        block3.push_back(schema_check("QC_INFO_1", "glue1", "GLUE schema 1.3",
                                      spec.infomodel.validator_glue1));
        block3.push_back(schema_check("QC_INFO_2", "glue2", "GLUE schema 2.0",
                                      spec.infomodel.validator_glue2));

        block3.push_back(timed_check("QC_INFO_3", [&] {
            CheckResult r;
            if (!info_error.empty()) {
                r.status = CheckStatus::Fail;
                r.detail = "information model unavailable: " + info_error;
                return r;
            }
            return check_middleware_version(document, outcome.installed_packages,
                                            spec.infomodel.version_attribute);
        }));
    }

    if (failed_id.empty())
        failed_id = critical_failure(block3);

    // Block 4: product specific QC.
    std::vector<CheckResult> block4;
    if (!failed_id.empty()) {
        for (const auto& id : {"QC_FUNC_1", "QC_FUNC_2"})
            block4.push_back(skipped(id, failed_id));
    } else if (spec.qc_specific_id.empty()) {
        for (const auto& id : {"QC_FUNC_1", "QC_FUNC_2"})
            block4.push_back(not_applicable(id, "no product specific test suite declared"));
    } else {
        auto [func1, func2] =
            run_suite(suite, fs::absolute(ctx.tests_file).parent_path(), ctx);
        block4.push_back(std::move(func1));
        block4.push_back(std::move(func2));
    }

    ValidationReport report;
    report.product = spec.name;
    report.release = ctx.release;
    report.os = ctx.os;
    report.repositories = ctx.repositories;
    report.started = started;
    report.mode = ctx.mode;
    for (auto* block : {&block1, &block2, &block3, &block4})
        for (auto& result : *block)
            report.results.push_back(std::move(result));
    report.verdict = aggregate_verdict(report.results);
    report.finished = now_rfc3339();
    return report;
}

}  // namespace umdv
