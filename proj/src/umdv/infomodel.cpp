// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/infomodel.hpp"

#include "umdv/proc.hpp"

namespace umdv {

std::string expand_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& vars) {
    std::string out;
    size_t pos = 0;
    while (pos < tmpl.size()) {
        auto open = tmpl.find('{', pos);
        if (open == std::string::npos) {
            out += tmpl.substr(pos);
            break;
        }
        auto close = tmpl.find('}', open);
        if (close == std::string::npos) {
            out += tmpl.substr(pos);
            break;
        }
        out += tmpl.substr(pos, open - pos);
        std::string key = tmpl.substr(open + 1, close - open - 1);
        auto it = vars.find(key);
        if (it != vars.end())
            out += it->second;
        else
            out += tmpl.substr(open, close - open + 1);
        pos = close + 1;
    }
    return out;
}

std::string fetch_info_raw(const InfoEndpoint& endpoint, const RunContext& ctx) {
    std::string tmpl = endpoint.fetch_command;
    if (tmpl.empty())
        tmpl = "ldapsearch -x -LLL -h {host} -p {port} -b {base_dn}";

    std::map<std::string, std::string> vars = {
        {"host", endpoint.host},
        {"port", std::to_string(endpoint.port)},
        {"base_dn", endpoint.base_dn},
    };
    std::vector<std::string> argv = split_ws(expand_template(tmpl, vars));
    if (argv.empty())
        throw Error("infomodel fetch command is empty");

    RunOptions opts;
    opts.env = ctx.environment;
    opts.timeout = ctx.timeout_per_check;
    RunResult res = run_process(argv, opts);
    if (res.timed_out)
        throw Error("infomodel fetch timed out: " + join(argv, " "));
    if (res.exit_code != 0)
        throw Error("infomodel fetch failed (exit " + std::to_string(res.exit_code) + "): " +
                    res.output);
    if (trim(res.output).empty())
        throw Error("no published information");
    return res.output;
}

LdifDocument fetch_info(const InfoEndpoint& endpoint, const RunContext& ctx) {
    LdifDocument doc = parse_ldif(fetch_info_raw(endpoint, ctx));
    if (doc.entries.empty())
        throw Error("no published information");
    return doc;
}

CheckResult run_external_validator(const std::string& check_id, const std::string& command,
                                   const fs::path& document_path, const RunContext& ctx) {
    CheckResult result;
    result.check_id = check_id;

    std::map<std::string, std::string> vars = {{"document", document_path.string()}};
    std::vector<std::string> argv = split_ws(expand_template(command, vars));
    if (argv.empty() || !command_exists(argv[0])) {
        result.status = CheckStatus::Fail;
        result.detail = "validator unavailable: " + (argv.empty() ? command : argv[0]);
        return result;
    }

    RunOptions opts;
    opts.env = ctx.environment;
    opts.timeout = ctx.timeout_per_check;
    RunResult res = run_process(argv, opts);
    result.duration_s = res.duration_s;
    if (res.timed_out) {
        result.status = CheckStatus::Fail;
        result.detail = "validator timeout after " + std::to_string(ctx.timeout_per_check.count()) +
                        " s";
    } else if (res.exit_code == 0) {
        result.status = CheckStatus::Ok;
        result.detail = "validator passed";
    } else {
        result.status = CheckStatus::Fail;
        result.detail = "validator exit " + std::to_string(res.exit_code) + ": " +
                        trim(res.output);
    }
    return result;
}

CheckResult check_middleware_version(const LdifDocument& document,
                                     const std::vector<Package>& installed,
                                     const std::string& version_attribute) {
    CheckResult result;
    result.check_id = "QC_INFO_3";

    static const std::string prefix = "MiddlewareVersion=";
    std::vector<std::string> published;
    for (const auto& entry : document.entries) {
        for (const auto& value : entry.values(version_attribute)) {
            if (starts_with(value, prefix))
                published.push_back(value.substr(prefix.size()));
            else
                published.push_back(value);
        }
    }
    if (published.empty()) {
        result.status = CheckStatus::Fail;
        result.detail = "version not published (no " + version_attribute + " attribute)";
        return result;
    }

    for (const auto& version : published) {
        for (const auto& pkg : installed) {
            if (pkg.evr.version == version) {
                result.status = CheckStatus::Ok;
                result.detail = "published version " + version + " matches " + pkg.identity();
                return result;
            }
        }
    }

    std::vector<std::string> have;
    for (const auto& pkg : installed)
        have.push_back(pkg.name + "-" + pkg.evr.version);
    result.status = CheckStatus::Fail;
    result.detail = "published version " + join(published, ", ") +
                    " does not match installed packages (" + join(have, ", ") + ")";
    return result;
}

}  // namespace umdv
