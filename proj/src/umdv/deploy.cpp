// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/deploy.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "umdv/closure.hpp"
#include "umdv/proc.hpp"

namespace umdv {

namespace {

long parse_long(const std::string& s, const std::string& what, int line) {
    try {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("invalid " + what + ": '" + s + "'", line);
    }
}

MockManifest::FileEntry parse_file_entry(const std::string& rest, const fs::path& base_dir,
                                         int line) {
    // path mode content-ref; content-ref is the remainder of the line.
    auto fields = split_ws(rest);
    if (fields.size() < 3)
        throw ParseError("file directive needs path, mode and content", line);

    MockManifest::FileEntry entry;
    entry.path = fields[0];
    if (entry.path.empty() || entry.path.front() != '/')
        throw ParseError("file path must be absolute: '" + entry.path + "'", line);

    try {
        size_t pos = 0;
        entry.mode = static_cast<unsigned int>(std::stoul(fields[1], &pos, 8));
        if (pos != fields[1].size() || entry.mode > 07777)
            throw std::invalid_argument(fields[1]);
    } catch (const std::exception&) {
        throw ParseError("invalid file mode: '" + fields[1] + "'", line);
    }

    // Content starts right after the mode token; preserve inner spacing.
    auto mode_pos = rest.find(fields[1], rest.find(fields[0]) + fields[0].size());
    std::string ref = trim(rest.substr(mode_pos + fields[1].size()));
    if (starts_with(ref, "content:")) {
        entry.content = ref.substr(8);
    } else if (starts_with(ref, "@")) {
        entry.content = read_file(base_dir / ref.substr(1));
    } else {
        throw ParseError("file content must be 'content:<text>' or '@path': '" + ref + "'",
                         line);
    }
    return entry;
}

Package parse_package_entry(const std::string& rest, int line) {
    auto fields = split_ws(rest);
    if (fields.size() < 5)
        throw ParseError("package directive needs name, epoch, version, release and arch",
                         line);

    Package pkg;
    pkg.name = fields[0];
    pkg.evr.epoch = parse_long(fields[1], "epoch", line);
    pkg.evr.version = fields[2];
    pkg.evr.release = fields[3] == "-" ? "" : fields[3];
    pkg.arch = fields[4];
    for (size_t i = 5; i < fields.size(); ++i) {
        if (starts_with(fields[i], "license=")) {
            // A license may contain spaces; take everything after "license=".
            auto at = rest.find("license=");
            pkg.license = trim(rest.substr(at + 8));
            break;
        }
        throw ParseError("unknown package attribute: '" + fields[i] + "'", line);
    }
    pkg.provides.push_back(self_provide(pkg));
    return pkg;
}

}  // namespace

MockManifest parse_mock_manifest(const std::string& text, const fs::path& base_dir) {
    MockManifest manifest;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_exit = false;

    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#')
            continue;

        auto colon = stripped.find(':');
        if (colon == std::string::npos)
            throw ParseError("malformed manifest line: '" + stripped + "'", lineno);
        std::string directive = stripped.substr(0, colon);
        std::string rest = trim(stripped.substr(colon + 1));

        if (directive == "package") {
            manifest.packages.push_back(parse_package_entry(rest, lineno));
        } else if (directive == "file") {
            manifest.files.push_back(parse_file_entry(rest, base_dir, lineno));
        } else if (directive == "exit") {
            if (have_exit)
                throw ParseError("duplicate exit directive", lineno);
            manifest.exit_code = static_cast<int>(parse_long(rest, "exit code", lineno));
            have_exit = true;
        } else {
            throw ParseError("unknown manifest directive: '" + directive + "'", lineno);
        }
    }
    return manifest;
}

std::vector<std::string> backend_command(const BackendConfig& backend, const ProductSpec& spec,
                                         const RunContext& ctx) {
    if (std::holds_alternative<PuppetBackend>(backend)) {
        const auto& b = std::get<PuppetBackend>(backend);
        return {"puppet", "apply", spec.resolve(b.manifest).string(), "--modulepath",
                (ctx.workdir / "deploy" / "modules").string(), "--detailed-exitcodes"};
    }
    if (std::holds_alternative<AnsibleBackend>(backend)) {
        const auto& b = std::get<AnsibleBackend>(backend);
        std::vector<std::string> cmd = {"ansible-playbook", "-i", "localhost,", "-c", "local",
                                        (ctx.workdir / "deploy" / "site.yml").string()};
        if (!b.tags.empty()) {
            cmd.push_back("--tags");
            cmd.push_back(join(b.tags, ","));
        }
        cmd.push_back("-e");
        cmd.push_back("@" + (ctx.workdir / "deploy" / "params.yaml").string());
        return cmd;
    }
    return {};
}

namespace {

// Parameter file consumed by Live backends; mirrors extra_vars order.
void write_params_file(const fs::path& path, const ProductSpec& spec) {
    std::ostringstream out;
    for (const auto& [key, value] : spec.extra_vars)
        out << key << ": \"" << value << "\"\n";
    if (std::holds_alternative<AnsibleBackend>(spec.backend)) {
        for (const auto& [key, value] : std::get<AnsibleBackend>(spec.backend).extra_vars)
            out << key << ": \"" << value << "\"\n";
    }
    write_file(path, out.str());
}

void write_ansible_playbook(const fs::path& path, const AnsibleBackend& b) {
    std::ostringstream out;
    out << "- hosts: localhost\n";
    out << "  roles:\n";
    out << "    - role: " << (b.role.empty() ? "unnamed" : b.role) << "\n";
    write_file(path, out.str());
}

void fetch_git_sources(const std::vector<std::pair<std::string, std::string>>& sources,
                       const fs::path& dest_dir, const RunContext& ctx) {
    fs::create_directories(dest_dir);
    for (const auto& [url, branch] : sources) {
        std::string name = fs::path(url).stem().string();
        RunOptions opts;
        opts.timeout = ctx.timeout_per_check;
        RunResult res = run_process({"git", "clone", "--depth", "1", "--branch", branch, url,
                                     (dest_dir / name).string()},
                                    opts);
        if (res.exit_code != 0)
            throw Error("cannot fetch " + url + " (branch " + branch + "): " +
                        trim(res.output));
    }
}

}  // namespace

PreparedEnvironment prepare_environment(const ProductSpec& spec, const RunContext& ctx) {
    PreparedEnvironment env;
    env.backend = spec.backend;
    env.deploy_dir = ctx.workdir / "deploy";
    env.log_path = env.deploy_dir / "deploy.log";
    env.install_root = ctx.workdir / "install_root";
    fs::create_directories(env.deploy_dir);
    fs::create_directories(env.install_root);

    write_params_file(env.deploy_dir / "params.yaml", spec);

    if (std::holds_alternative<MockBackend>(spec.backend)) {
        const auto& b = std::get<MockBackend>(spec.backend);
        fs::path manifest_path = spec.resolve(b.outcome_manifest);
        if (!fs::exists(manifest_path))
            throw Error("mock outcome manifest not found: " + manifest_path.string());
        env.manifest = parse_mock_manifest(read_file(manifest_path),
                                           manifest_path.parent_path());
        return env;
    }

    if (ctx.mode == RunMode::Mock)
        throw Error("mode=mock requires a mock cfgtool (live backends install packages)");

    if (std::holds_alternative<PuppetBackend>(spec.backend)) {
        const auto& b = std::get<PuppetBackend>(spec.backend);
        if (!command_exists("puppet"))
            throw Error("backend unavailable: puppet not found in PATH");
        fetch_git_sources(b.modules, env.deploy_dir / "modules", ctx);
        fs::path hiera_dir = env.deploy_dir / "hieradata";
        fs::create_directories(hiera_dir);
        for (const auto& file : b.hiera_data) {
            fs::path src = spec.resolve(file);
            if (fs::exists(src))
                fs::copy_file(src, hiera_dir / src.filename(),
                              fs::copy_options::overwrite_existing);
        }
    } else {
        const auto& b = std::get<AnsibleBackend>(spec.backend);
        if (!command_exists("ansible-playbook"))
            throw Error("backend unavailable: ansible-playbook not found in PATH");
        if (!b.role.empty())
            fetch_git_sources({{b.role, b.checkout.empty() ? "master" : b.checkout}},
                              env.deploy_dir / "roles", ctx);
        write_ansible_playbook(env.deploy_dir / "site.yml", b);
    }

    env.command = backend_command(spec.backend, spec, ctx);
    return env;
}

DeploymentOutcome execute_deployment(const PreparedEnvironment& env, const RunContext& ctx) {
    DeploymentOutcome outcome;
    outcome.log_path = env.log_path;
    outcome.install_root = env.install_root;

    if (env.manifest) {
        const MockManifest& manifest = *env.manifest;
        std::ostringstream log;
        log << "mock deployment\n";
        for (const auto& entry : manifest.files) {
            fs::path target = env.install_root / entry.path.substr(1);
            write_file(target, entry.content);
            fs::permissions(target, static_cast<fs::perms>(entry.mode));
            log << "file " << target.string() << " mode " << std::oct << entry.mode << std::dec
                << "\n";
        }
        for (const auto& pkg : manifest.packages)
            log << "package " << pkg.identity() << "\n";
        log << "exit " << manifest.exit_code << "\n";
        write_file(env.log_path, log.str());

        if (manifest.exit_code == 0 && manifest.packages.empty())
            throw Error("manifest declares no packages");
        outcome.exit_status = manifest.exit_code;
        outcome.installed_packages = manifest.packages;
        return outcome;
    }

    RunOptions opts;
    opts.cwd = env.deploy_dir;
    opts.env = ctx.environment;
    opts.timeout = ctx.timeout_per_check;
    RunResult res = run_process(env.command, opts);
    // The invocation and its output are logged verbatim.
    write_file(env.log_path, join(env.command, " ") + "\n\n" + res.output);

    outcome.exit_status = res.timed_out ? -1 : res.exit_code;
    // Puppet's --detailed-exitcodes: 2 means "changes applied successfully".
    if (std::holds_alternative<PuppetBackend>(env.backend) && outcome.exit_status == 2)
        outcome.exit_status = 0;
    if (outcome.exit_status == 0)
        outcome.installed_packages =
            query_installed_packages(flavor_for_os(ctx.os));
    return outcome;
}

std::vector<Package> query_installed_packages(Flavor flavor) {
    std::vector<std::string> argv;
    if (flavor == Flavor::Rpm)
        argv = {"rpm", "-qa", "--qf",
                "%{NAME}\\t%{EPOCHNUM}\\t%{VERSION}\\t%{RELEASE}\\t%{ARCH}\\t%{LICENSE}\\n"};
    else
        argv = {"dpkg-query", "-W", "-f", "${Package}\\t${Version}\\t${Architecture}\\t\\n"};

    RunResult res = run_process(argv);
    if (res.exit_code != 0)
        throw Error("cannot query installed packages: " + trim(res.output));

    std::vector<Package> packages;
    std::istringstream in(res.output);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        auto fields = split(line, '\t');
        Package pkg;
        if (flavor == Flavor::Rpm) {
            if (fields.size() < 5)
                continue;
            pkg.name = fields[0];
            pkg.evr.epoch = fields[1] == "(none)" ? 0 : std::stol(fields[1]);
            pkg.evr.version = fields[2];
            pkg.evr.release = fields[3];
            pkg.arch = fields[4];
            if (fields.size() > 5)
                pkg.license = fields[5];
        } else {
            if (fields.size() < 3)
                continue;
            pkg.name = fields[0];
            pkg.evr = parse_evr(fields[1]);
            pkg.arch = fields[2];
        }
        pkg.provides.push_back(self_provide(pkg));
        packages.push_back(std::move(pkg));
    }
    return packages;
}

CheckResult check_binary_distribution(const DeploymentOutcome& outcome,
                                      const RepoIndex& candidate,
                                      const std::vector<RepoIndex>& base_repos) {
    CheckResult result;
    result.check_id = "QC_DIST_1";
    result.artifacts.push_back(outcome.log_path.string());

    if (outcome.exit_status != 0) {
        result.status = CheckStatus::Fail;
        result.detail = "deployment failed with exit status " +
                        std::to_string(outcome.exit_status);
        return result;
    }
    if (candidate.packages.empty()) {
        result.status = CheckStatus::Fail;
        result.detail = "no candidate packages found in " + candidate.base_url;
        return result;
    }

    std::vector<UnmetDependency> unmet = compute_closure(candidate, base_repos);
    if (unmet.empty()) {
        result.status = CheckStatus::Ok;
        result.detail = std::to_string(candidate.packages.size()) +
                        " candidate packages installable, dependency closure clean";
    } else {
        std::vector<std::string> items;
        for (const auto& u : unmet)
            items.push_back(u.requiring + " requires " + to_string(u.constraint));
        result.status = CheckStatus::Fail;
        result.detail = std::to_string(unmet.size()) + " unmet: " + join(items, "; ");
    }
    return result;
}

CheckResult check_upgrade(const RepoIndex& production, const RepoIndex& candidate) {
    CheckResult result;
    result.check_id = "QC_UPGRADE_1";

    // Highest EVR per name on both sides.
    auto best = [&](const RepoIndex& repo) {
        std::map<std::string, Evr> out;
        for (const auto& pkg : repo.packages) {
            auto it = out.find(pkg.name);
            if (it == out.end() || compare_evr(it->second, pkg.evr, repo.flavor) < 0)
                out[pkg.name] = pkg.evr;
        }
        return out;
    };
    std::map<std::string, Evr> prod = best(production);
    std::map<std::string, Evr> cand = best(candidate);

    size_t shared = 0;
    std::vector<std::string> downgrades;
    for (const auto& [name, cand_evr] : cand) {
        auto it = prod.find(name);
        if (it == prod.end())
            continue;  // new package, nothing to upgrade
        ++shared;
        if (compare_evr(cand_evr, it->second, candidate.flavor) < 0)
            downgrades.push_back("downgrade: " + name + " (" + format_evr(cand_evr) + " < " +
                                 format_evr(it->second) + ")");
    }

    if (shared == 0) {
        result.status = CheckStatus::NotApplicable;
        result.detail = "no previously released version of any candidate package";
    } else if (downgrades.empty()) {
        result.status = CheckStatus::Ok;
        result.detail = std::to_string(shared) + " shared packages upgrade cleanly";
    } else {
        result.status = CheckStatus::Fail;
        result.detail = join(downgrades, "; ");
    }
    return result;
}

}  // namespace umdv
