// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/functest.hpp"

#include <yaml-cpp/yaml.h>

#include "umdv/proc.hpp"

namespace umdv {

namespace {

std::vector<TestDefinition> parse_category(const YAML::Node& node, const std::string& where) {
    std::vector<TestDefinition> out;
    if (!node)
        return out;
    if (!node.IsSequence())
        throw ParseError(where + " must be a list", node.Mark().line + 1,
                         node.Mark().column + 1);
    for (const auto& item : node) {
        if (!item.IsMap())
            throw ParseError(where + " entries must be mappings", item.Mark().line + 1,
                             item.Mark().column + 1);
        TestDefinition def;
        if (!item["test"] || !item["test"].IsScalar() || item["test"].as<std::string>().empty())
            throw ParseError(where + " entry is missing a test path", item.Mark().line + 1,
                             item.Mark().column + 1);
        def.test = item["test"].as<std::string>();
        if (item["description"])
            def.description = item["description"].as<std::string>();
        if (item["args"])
            def.args = item["args"].as<std::string>();
        if (item["timeout"])
            def.timeout = std::chrono::seconds(item["timeout"].as<long>());
        out.push_back(std::move(def));
    }
    return out;
}

}  // namespace

TestSuite load_test_definitions(const fs::path& path, const std::string& id) {
    YAML::Node root;
    try {
        root = YAML::Load(read_file(path));
    } catch (const YAML::ParserException& e) {
        throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
    }
    if (!root.IsMap())
        throw ParseError("test definitions must be a mapping of product ids");

    if (!root[id]) {
        std::vector<std::string> known;
        for (const auto& kv : root)
            known.push_back(kv.first.as<std::string>());
        throw Error("no test suite '" + id + "' in " + path.string() + " (known ids: " +
                    (known.empty() ? "none" : join(known, ", ")) + ")");
    }

    const YAML::Node& node = root[id];
    if (!node.IsMap())
        throw ParseError("suite '" + id + "' must be a mapping", node.Mark().line + 1,
                         node.Mark().column + 1);

    TestSuite suite;
    suite.id = id;
    try {
        suite.qc_func_1 = parse_category(node["qc_func_1"], id + ".qc_func_1");
        suite.qc_func_2 = parse_category(node["qc_func_2"], id + ".qc_func_2");
    } catch (const YAML::Exception& e) {
        throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
    }
    if (!node["qc_func_1"] && !node["qc_func_2"])
        throw ParseError("suite '" + id + "' declares neither qc_func_1 nor qc_func_2",
                         node.Mark().line + 1, node.Mark().column + 1);
    return suite;
}

TestOutcome execute_test(const TestDefinition& def, const fs::path& suite_root,
                         const RunContext& ctx, const fs::path& log_path) {
    TestOutcome outcome;
    outcome.def = def;
    outcome.log_path = log_path;

    fs::path script = fs::path(def.test).is_absolute() ? fs::path(def.test)
                                                       : suite_root / def.test;
    if (!fs::exists(script)) {
        outcome.exit_status = -1;
        outcome.output = "not found: " + script.string();
        write_file(log_path, outcome.output + "\n");
        return outcome;
    }

    std::vector<std::string> argv;
    argv.push_back(script.string());
    for (const auto& arg : split_ws(def.args))
        argv.push_back(arg);

    RunOptions opts;
    opts.cwd = suite_root;
    opts.env = ctx.environment;
    opts.timeout = def.timeout.value_or(ctx.timeout_per_check);
    RunResult res = run_process(argv, opts);

    outcome.exit_status = res.exit_code;
    outcome.timed_out = res.timed_out;
    outcome.output = res.output;
    outcome.duration_s = res.duration_s;
    write_file(log_path, res.output);
    return outcome;
}

namespace {

CheckResult summarize(const std::string& check_id, const std::vector<TestOutcome>& outcomes,
                      size_t declared) {
    CheckResult result;
    result.check_id = check_id;
    if (declared == 0) {
        result.status = CheckStatus::NotApplicable;
        result.detail = "no tests declared";
        return result;
    }

    size_t passed = 0;
    std::vector<std::string> failures;
    for (const auto& o : outcomes) {
        result.duration_s += o.duration_s;
        result.artifacts.push_back(o.log_path.string());
        if (o.passed()) {
            ++passed;
        } else if (o.timed_out) {
            failures.push_back(o.def.test + " (timeout)");
        } else if (o.exit_status < 0) {
            failures.push_back(o.def.test + " (not found)");
        } else {
            failures.push_back(o.def.test + " (exit " + std::to_string(o.exit_status) + ")");
        }
    }
    if (failures.empty()) {
        result.status = CheckStatus::Ok;
        result.detail = std::to_string(passed) + "/" + std::to_string(outcomes.size()) +
                        " tests passed";
    } else {
        result.status = CheckStatus::Fail;
        result.detail = "failed: " + join(failures, ", ");
    }
    return result;
}

}  // namespace

std::pair<CheckResult, CheckResult> run_suite(const TestSuite& suite, const fs::path& suite_root,
                                              const RunContext& ctx) {
    fs::path log_dir = ctx.workdir / "tests" / suite.id;
    fs::create_directories(log_dir);

    size_t n = 0;
    auto run_category = [&](const std::vector<TestDefinition>& defs) {
        std::vector<TestOutcome> outcomes;
        for (const auto& def : defs) {
            ++n;
            outcomes.push_back(
                execute_test(def, suite_root, ctx, log_dir / (std::to_string(n) + ".log")));
        }
        return outcomes;
    };

    // Categories are independent: qc_func_2 runs regardless of qc_func_1.
    std::vector<TestOutcome> first = run_category(suite.qc_func_1);
    std::vector<TestOutcome> second = run_category(suite.qc_func_2);
    return {summarize("QC_FUNC_1", first, suite.qc_func_1.size()),
            summarize("QC_FUNC_2", second, suite.qc_func_2.size())};
}

}  // namespace umdv
