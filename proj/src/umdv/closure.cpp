// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/closure.hpp"

#include <algorithm>
#include <future>
#include <unordered_map>

#include "umdv/debrepo.hpp"
#include "umdv/rpmrepo.hpp"
#include "umdv/util.hpp"

namespace umdv {

std::string to_string(Relation r) {
    switch (r) {
        case Relation::Any: return "";
        case Relation::LT: return "<";
        case Relation::LE: return "<=";
        case Relation::EQ: return "=";
        case Relation::GE: return ">=";
        case Relation::GT: return ">";
    }
    return "";
}

std::string to_string(const VersionConstraint& c) {
    if (c.relation == Relation::Any || !c.evr)
        return c.name;
    return c.name + " " + to_string(c.relation) + " " + format_evr(*c.evr);
}

VersionConstraint self_provide(const Package& pkg) {
    return VersionConstraint{pkg.name, Relation::EQ, pkg.evr};
}

bool satisfies(const VersionConstraint& provided, const VersionConstraint& required,
               Flavor flavor) {
    if (provided.name != required.name)
        return false;
    if (required.relation == Relation::Any || !required.evr)
        return true;
    if (provided.relation == Relation::Any || !provided.evr)
        return flavor == Flavor::Rpm;

    bool p_lt = provided.relation == Relation::LT || provided.relation == Relation::LE;
    bool p_gt = provided.relation == Relation::GT || provided.relation == Relation::GE;
    bool p_eq = provided.relation == Relation::EQ || provided.relation == Relation::LE ||
                provided.relation == Relation::GE;
    bool r_lt = required.relation == Relation::LT || required.relation == Relation::LE;
    bool r_gt = required.relation == Relation::GT || required.relation == Relation::GE;
    bool r_eq = required.relation == Relation::EQ || required.relation == Relation::LE ||
                required.relation == Relation::GE;

    int sense = compare_evr_for_match(*provided.evr, *required.evr, flavor);
    if (sense < 0)
        return p_gt || r_lt;
    if (sense > 0)
        return p_lt || r_gt;
    return (p_eq && r_eq) || (p_lt && r_lt) || (p_gt && r_gt);
}

bool arch_compatible(const std::string& requiring_arch, const std::string& providing_arch) {
    if (providing_arch.empty() || requiring_arch.empty())
        return true;
    if (providing_arch == "noarch" || providing_arch == "all")
        return true;
    if (requiring_arch == "noarch" || requiring_arch == "all")
        return true;
    return providing_arch == requiring_arch;
}

RepoIndex merge_indexes(const std::vector<RepoIndex>& repos, Flavor flavor) {
    RepoIndex merged;
    merged.flavor = flavor;
    for (const auto& repo : repos) {
        if (repo.flavor != flavor)
            throw Error("flavor mismatch: repository " + repo.base_url + " is " +
                        to_string(repo.flavor) + ", expected " + to_string(flavor));
        merged.packages.insert(merged.packages.end(), repo.packages.begin(),
                               repo.packages.end());
    }
    return merged;
}

namespace {

// Name-indexed view over the union, so the closure scan does not rescan
// every package for every requirement.
struct ProviderIndex {
    Flavor flavor;
    std::unordered_map<std::string, std::vector<std::pair<const Package*, const VersionConstraint*>>>
        by_capability;
    std::unordered_map<std::string, std::vector<const Package*>> by_file;

    explicit ProviderIndex(const std::vector<const Package*>& all, Flavor f) : flavor(f) {
        for (const Package* pkg : all) {
            for (const auto& prov : pkg->provides)
                by_capability[prov.name].emplace_back(pkg, &prov);
            for (const auto& path : pkg->file_list)
                by_file[path].push_back(pkg);
        }
    }

    bool satisfied(const Package& requirer, const VersionConstraint& want) const {
        if (!want.name.empty() && want.name.front() == '/') {
            auto it = by_file.find(want.name);
            if (it != by_file.end()) {
                for (const Package* p : it->second)
                    if (arch_compatible(requirer.arch, p->arch))
                        return true;
            }
            // fall through: explicit provides may also carry path names
        }
        auto it = by_capability.find(want.name);
        if (it == by_capability.end())
            return false;
        for (const auto& [pkg, prov] : it->second) {
            if (!arch_compatible(requirer.arch, pkg->arch))
                continue;
            if (satisfies(*prov, want, flavor))
                return true;
        }
        return false;
    }
};

}  // namespace

std::vector<UnmetDependency> compute_closure(const RepoIndex& candidate,
                                             const std::vector<RepoIndex>& base_repos) {
    std::vector<const Package*> all;
    std::vector<std::string> repo_urls;
    repo_urls.push_back(candidate.base_url);
    for (const auto& pkg : candidate.packages)
        all.push_back(&pkg);
    for (const auto& repo : base_repos) {
        if (repo.flavor != candidate.flavor)
            throw Error("flavor mismatch: repository " + repo.base_url + " is " +
                        to_string(repo.flavor) + ", expected " + to_string(candidate.flavor));
        repo_urls.push_back(repo.base_url);
        for (const auto& pkg : repo.packages)
            all.push_back(&pkg);
    }

    ProviderIndex index(all, candidate.flavor);

    std::vector<std::pair<std::string, UnmetDependency>> keyed;
    for (const Package* pkg : all) {
        for (const auto& req : pkg->requirements) {
            bool ok = false;
            for (const auto& alt : req.alternatives) {
                if (index.satisfied(*pkg, alt)) {
                    ok = true;
                    break;
                }
            }
            if (!ok && !req.alternatives.empty())
                keyed.emplace_back(pkg->name,
                                   UnmetDependency{pkg->identity(), req.alternatives.front(),
                                                   repo_urls});
        }
    }

    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first, a.second.constraint.name, a.second.requiring) <
               std::tie(b.first, b.second.constraint.name, b.second.requiring);
    });
    std::vector<UnmetDependency> unmet;
    unmet.reserve(keyed.size());
    for (auto& [_, dep] : keyed)
        unmet.push_back(std::move(dep));
    unmet.erase(std::unique(unmet.begin(), unmet.end(),
                            [](const UnmetDependency& a, const UnmetDependency& b) {
                                return a.requiring == b.requiring &&
                                       a.constraint == b.constraint;
                            }),
                unmet.end());
    return unmet;
}

RepoIndex fetch_repo_metadata(const std::string& url, Flavor flavor, int timeout_s) {
    return flavor == Flavor::Rpm ? load_rpm_repo(url, timeout_s) : load_deb_repo(url, timeout_s);
}

RcSummary rc_check(const std::string& candidate_url, const std::vector<std::string>& base_urls,
                   Flavor flavor, int timeout_s) {
    RcSummary summary;
    summary.flavor = flavor;
    summary.candidate = candidate_url;
    summary.base_repos = base_urls;

    std::vector<std::string> urls;
    urls.push_back(candidate_url);
    urls.insert(urls.end(), base_urls.begin(), base_urls.end());

    std::vector<std::future<RepoIndex>> futures;
    futures.reserve(urls.size());
    for (const std::string& url : urls)
        futures.push_back(std::async(std::launch::async, [url, flavor, timeout_s] {
            return fetch_repo_metadata(url, flavor, timeout_s);
        }));

    std::vector<RepoIndex> indexes;
    for (std::size_t i = 0; i < futures.size(); ++i) {
        try {
            indexes.push_back(futures[i].get());
        } catch (const std::exception& e) {
            summary.fetch_errors.push_back(urls[i] + ": " + e.what());
        }
    }
    // Fail closed: a closure over a partial union would report spurious
    // unmet entries (or hide real ones).
    if (!summary.fetch_errors.empty())
        return summary;

    RepoIndex candidate = std::move(indexes.front());
    std::vector<RepoIndex> bases(std::make_move_iterator(indexes.begin() + 1),
                                 std::make_move_iterator(indexes.end()));
    summary.package_count = candidate.packages.size();
    for (const auto& idx : bases)
        summary.package_count += idx.packages.size();
    summary.unmet = compute_closure(candidate, bases);
    return summary;
}

}  // namespace umdv
