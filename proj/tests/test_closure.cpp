// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "support/testutil.hpp"
#include "umdv/closure.hpp"
#include "umdv/rpmrepo.hpp"

using namespace umdv;
using testutil::TempDir;

namespace {

Package mk(std::string name, const std::string& evr, std::string arch = "x86_64") {
    Package p;
    p.name = std::move(name);
    p.evr = parse_evr(evr);
    p.arch = std::move(arch);
    p.provides.push_back(self_provide(p));
    return p;
}

VersionConstraint want(std::string name, Relation rel = Relation::Any,
                       const std::string& evr = "") {
    VersionConstraint c;
    c.name = std::move(name);
    c.relation = rel;
    if (rel != Relation::Any)
        c.evr = parse_evr(evr);
    return c;
}

void require(Package& p, VersionConstraint c) {
    p.requirements.push_back(Requirement{{std::move(c)}});
}

void require_alt(Package& p, std::vector<VersionConstraint> alts) {
    p.requirements.push_back(Requirement{std::move(alts)});
}

using UnmetKey = std::pair<std::string, std::string>;  // (requiring, constraint)

std::vector<UnmetKey> keys_of(const std::vector<UnmetDependency>& unmet) {
    std::vector<UnmetKey> out;
    for (const auto& u : unmet)
        out.emplace_back(u.requiring, to_string(u.constraint));
    return out;
}

// Brute-force double-loop reference: no indexes, no early exits beyond the
// semantics themselves.
std::vector<UnmetKey> naive_unmet(const RepoIndex& candidate,
                                  const std::vector<RepoIndex>& bases) {
    std::vector<const Package*> all;
    for (const auto& p : candidate.packages)
        all.push_back(&p);
    for (const auto& repo : bases)
        for (const auto& p : repo.packages)
            all.push_back(&p);

    auto alt_satisfied = [&](const Package& requirer, const VersionConstraint& alt) {
        for (const Package* q : all) {
            if (!arch_compatible(requirer.arch, q->arch))
                continue;
            if (!alt.name.empty() && alt.name.front() == '/')
                if (std::find(q->file_list.begin(), q->file_list.end(), alt.name) !=
                    q->file_list.end())
                    return true;
            for (const auto& prov : q->provides)
                if (satisfies(prov, alt, candidate.flavor))
                    return true;
        }
        return false;
    };

    std::set<UnmetKey> out;
    for (const Package* pkg : all) {
        for (const auto& req : pkg->requirements) {
            bool ok = false;
            for (const auto& alt : req.alternatives)
                if (alt_satisfied(*pkg, alt))
                    ok = true;
            if (!ok && !req.alternatives.empty())
                out.emplace(pkg->identity(), to_string(req.alternatives.front()));
        }
    }
    return {out.begin(), out.end()};
}

void check_against_naive(const RepoIndex& candidate, const std::vector<RepoIndex>& bases) {
    auto got = keys_of(compute_closure(candidate, bases));
    auto expected = naive_unmet(candidate, bases);
    std::sort(got.begin(), got.end());  // key order differs from report order
    CHECK(got == expected);
}

// Fixture with exactly k seeded unmet dependencies among otherwise
// satisfiable packages.
void seeded_fixture(int k, uint64_t seed) {
    std::mt19937_64 rng(seed);
    RepoIndex base;
    base.flavor = Flavor::Rpm;
    base.base_url = "base";
    for (int i = 0; i < 10; ++i) {
        Package p = mk("libfoo" + std::to_string(i),
                       std::to_string(1 + rng() % 5) + ".0-" + std::to_string(1 + rng() % 9));
        VersionConstraint cap;
        cap.name = "cap" + std::to_string(i);
        cap.relation = Relation::EQ;
        cap.evr = p.evr;
        p.provides.push_back(cap);
        base.packages.push_back(std::move(p));
    }

    RepoIndex candidate;
    candidate.flavor = Flavor::Rpm;
    candidate.base_url = "candidate";
    for (int i = 0; i < 15; ++i) {
        Package p = mk("app" + std::to_string(i), std::to_string(1 + rng() % 9) + ".2-1");
        int wants = 1 + static_cast<int>(rng() % 3);
        for (int w = 0; w < wants; ++w)
            require(p, want("cap" + std::to_string(rng() % 10)));
        candidate.packages.push_back(std::move(p));
    }

    std::set<UnmetKey> expected;
    for (int m = 0; m < k; ++m) {
        size_t victim = rng() % candidate.packages.size();
        Package& p = candidate.packages[victim];
        std::string missing = "missing" + std::to_string(m);
        require(p, want(missing));
        expected.emplace(p.identity(), missing);
    }

    auto got = keys_of(compute_closure(candidate, {base}));
    CHECK(got.size() == static_cast<size_t>(k));
    std::vector<UnmetKey> got_sorted = got;
    std::sort(got_sorted.begin(), got_sorted.end());
    CHECK(got_sorted == std::vector<UnmetKey>(expected.begin(), expected.end()));
    check_against_naive(candidate, {base});

    // Adding the providing packages drains the unmet set to zero.
    RepoIndex fixes;
    fixes.flavor = Flavor::Rpm;
    fixes.base_url = "fixes";
    for (int m = 0; m < k; ++m)
        fixes.packages.push_back(mk("missing" + std::to_string(m), "1.0-1"));
    CHECK(compute_closure(candidate, {base, fixes}).empty());
}

}  // namespace

TEST_CASE("closure: seeded unmet counts are exact") {
    seeded_fixture(0, 101);
    seeded_fixture(1, 202);
    seeded_fixture(5, 303);
}

TEST_CASE("closure: deb alternatives and virtual provides") {
    RepoIndex base;
    base.flavor = Flavor::Deb;
    base.base_url = "base";
    base.packages.push_back(mk("exim4", "4.96-1", "amd64"));
    base.packages.back().provides.push_back(want("mail-transport-agent"));
    base.packages.push_back(mk("wget", "1.21-2", "amd64"));

    RepoIndex candidate;
    candidate.flavor = Flavor::Deb;
    candidate.base_url = "candidate";

    Package ok_alt = mk("fetcher", "1.0-1", "amd64");
    require_alt(ok_alt, {want("curl"), want("wget")});  // only wget exists
    candidate.packages.push_back(ok_alt);

    Package bad_alt = mk("mailer", "2.0-1", "amd64");
    require_alt(bad_alt, {want("nope1"), want("nope2")});
    candidate.packages.push_back(bad_alt);

    Package uses_virtual = mk("notifier", "0.5-1", "amd64");
    require(uses_virtual, want("mail-transport-agent"));  // plain virtual: satisfied
    candidate.packages.push_back(uses_virtual);

    Package wants_versioned = mk("strict-notifier", "0.6-1", "amd64");
    // Versioned requirement against an unversioned virtual provide: unmet.
    require(wants_versioned, want("mail-transport-agent", Relation::GE, "1.0"));
    candidate.packages.push_back(wants_versioned);

    auto got = keys_of(compute_closure(candidate, {base}));
    std::vector<UnmetKey> expected = {
        {"mailer-2.0-1.amd64", "nope1"},
        {"strict-notifier-0.6-1.amd64", "mail-transport-agent >= 1.0"},
    };
    CHECK(got == expected);
    check_against_naive(candidate, {base});

    // A versioned provide and a first-alternative provider fix both.
    RepoIndex fixes;
    fixes.flavor = Flavor::Deb;
    fixes.base_url = "fixes";
    fixes.packages.push_back(mk("nope1", "1.0-1", "amd64"));
    Package postfix = mk("postfix", "3.6-1", "amd64");
    postfix.provides.push_back(want("mail-transport-agent", Relation::EQ, "2.0"));
    fixes.packages.push_back(postfix);
    CHECK(compute_closure(candidate, {base, fixes}).empty());
}

TEST_CASE("closure: file-form requirements consult the file lists") {
    RepoIndex base;
    base.flavor = Flavor::Rpm;
    base.base_url = "base";
    Package tools = mk("tools", "1.0-1");
    tools.file_list.push_back("/usr/bin/tool");
    base.packages.push_back(tools);

    RepoIndex candidate;
    candidate.flavor = Flavor::Rpm;
    candidate.base_url = "candidate";
    Package user = mk("user", "1.0-1");
    require(user, want("/usr/bin/tool"));
    require(user, want("/usr/bin/other"));
    candidate.packages.push_back(user);

    auto got = keys_of(compute_closure(candidate, {base}));
    CHECK(got == std::vector<UnmetKey>{{"user-1.0-1.x86_64", "/usr/bin/other"}});
    check_against_naive(candidate, {base});

    // A path published as an explicit provide also counts.
    Package shim = mk("shim", "1.0-1");
    shim.provides.push_back(want("/usr/bin/other"));
    base.packages.push_back(shim);
    CHECK(compute_closure(candidate, {base}).empty());
}

TEST_CASE("closure: architecture compatibility") {
    RepoIndex base;
    base.flavor = Flavor::Rpm;
    base.base_url = "base";
    base.packages.push_back(mk("lib32", "1.0-1", "i686"));
    base.packages.back().provides.push_back(want("libcap"));

    RepoIndex candidate;
    candidate.flavor = Flavor::Rpm;
    candidate.base_url = "candidate";
    Package app = mk("app", "1.0-1", "x86_64");
    require(app, want("libcap"));
    candidate.packages.push_back(app);

    CHECK(compute_closure(candidate, {base}).size() == 1);
    check_against_naive(candidate, {base});

    // noarch providers satisfy any architecture.
    base.packages.push_back(mk("shim", "1.0-1", "noarch"));
    base.packages.back().provides.push_back(want("libcap"));
    CHECK(compute_closure(candidate, {base}).empty());

    // noarch requirers accept arch-specific providers.
    Package script = mk("script", "1.0-1", "noarch");
    require(script, want("app"));
    candidate.packages.push_back(script);
    CHECK(compute_closure(candidate, {base}).empty());

    CHECK(arch_compatible("noarch", "x86_64"));
    CHECK(arch_compatible("all", "amd64"));
    CHECK_FALSE(arch_compatible("i686", "x86_64"));
}

TEST_CASE("closure: duplicates collapse and order is stable") {
    RepoIndex candidate;
    candidate.flavor = Flavor::Rpm;
    candidate.base_url = "candidate";

    Package b = mk("beta", "1.0-1");
    require(b, want("zzz"));
    require(b, want("zzz"));  // duplicate requirement
    require(b, want("aaa"));
    candidate.packages.push_back(b);

    Package a = mk("alpha", "1.0-1");
    require(a, want("mmm"));
    candidate.packages.push_back(a);

    auto got = keys_of(compute_closure(candidate, {}));
    std::vector<UnmetKey> expected = {
        {"alpha-1.0-1.x86_64", "mmm"},
        {"beta-1.0-1.x86_64", "aaa"},
        {"beta-1.0-1.x86_64", "zzz"},
    };
    CHECK(got == expected);
}

TEST_CASE("closure: base repository requirements count too") {
    RepoIndex base;
    base.flavor = Flavor::Rpm;
    base.base_url = "base";
    Package broken = mk("broken", "1.0-1");
    require(broken, want("gone"));
    base.packages.push_back(broken);

    RepoIndex candidate;
    candidate.flavor = Flavor::Rpm;
    candidate.base_url = "candidate";
    candidate.packages.push_back(mk("fine", "1.0-1"));

    auto got = keys_of(compute_closure(candidate, {base}));
    CHECK(got == std::vector<UnmetKey>{{"broken-1.0-1.x86_64", "gone"}});
}

TEST_CASE("merge_indexes rejects mixed flavors") {
    RepoIndex rpm;
    rpm.flavor = Flavor::Rpm;
    RepoIndex deb;
    deb.flavor = Flavor::Deb;
    CHECK_THROWS_AS(merge_indexes({rpm, deb}, Flavor::Rpm), Error);
    CHECK_THROWS_AS(compute_closure(rpm, {deb}), Error);
}

TEST_CASE("rc_check fails closed on unavailable repositories") {
    TempDir tmp;
    write_rpm_repo(tmp / "cand", {mk("app", "1.0-1")});

    RcSummary bad = rc_check((tmp / "cand").string(), {(tmp / "nonexistent").string()},
                             Flavor::Rpm, 5);
    CHECK_FALSE(bad.ok());
    CHECK(bad.fetch_errors.size() == 1);
    CHECK(bad.fetch_errors.front().find("not a repository") != std::string::npos);
    CHECK(bad.unmet.empty());  // closure never ran
    CHECK(bad.package_count == 0);
}

TEST_CASE("rc_check computes the closure over fetched repositories") {
    TempDir tmp;
    Package app = mk("app", "1.0-1");
    require(app, want("libfoo"));
    write_rpm_repo(tmp / "cand", {app});

    Package lib = mk("libfoo", "2.0-1");
    write_rpm_repo(tmp / "base", {lib});

    RcSummary good =
        rc_check((tmp / "cand").string(), {(tmp / "base").string()}, Flavor::Rpm, 5);
    CHECK(good.ok());
    CHECK(good.package_count == 2);
    CHECK(good.unmet.empty());

    RcSummary alone = rc_check((tmp / "cand").string(), {}, Flavor::Rpm, 5);
    CHECK_FALSE(alone.ok());
    REQUIRE(alone.unmet.size() == 1);
    CHECK(alone.unmet.front().requiring == "app-1.0-1.x86_64");
    CHECK(to_string(alone.unmet.front().constraint) == "libfoo");
}
