// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "support/testutil.hpp"
#include "umdv/security.hpp"

using namespace umdv;
using testutil::TempDir;

namespace {

void place(const fs::path& path, const std::string& content, unsigned mode) {
    write_file(path, content);
    fs::permissions(path, static_cast<fs::perms>(mode));
}

fs::path make_dir(const fs::path& path, unsigned mode) {
    fs::create_directories(path);
    fs::permissions(path, static_cast<fs::perms>(mode));
    return path;
}

std::set<std::string> paths_of(const std::vector<ScanFinding>& findings) {
    std::set<std::string> out;
    for (const auto& f : findings)
        out.insert(f.path.string());
    return out;
}

struct SeededTree {
    std::set<std::string> world_writable;
    std::set<std::string> secrets;
};

// A tree with exactly k world-writable nodes and m world-readable secret
// files, padded with decoys that must never be reported.
SeededTree build_tree(const fs::path& root, int k, int m, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<fs::path> parents;
    for (int d = 0; d < 4; ++d)
        parents.push_back(make_dir(root / ("branch" + std::to_string(d)), 0755));
    parents.push_back(make_dir(root / "branch0" / "nested", 0755));
    std::uniform_int_distribution<size_t> pick(0, parents.size() - 1);

    SeededTree tree;
    for (int i = 0; i < k; ++i) {
        const fs::path& parent = parents[pick(rng)];
        if (i % 3 == 2) {
            fs::path dir = make_dir(parent / ("open-dir" + std::to_string(i)), 0777);
            tree.world_writable.insert(dir.string());
        } else {
            fs::path file = parent / ("open-file" + std::to_string(i));
            place(file, "payload\n", i % 2 ? 0666 : 0646);
            tree.world_writable.insert(file.string());
        }
    }
    for (int i = 0; i < m; ++i) {
        fs::path file = parents[pick(rng)] / ("conf" + std::to_string(i) + ".cfg");
        place(file, "user = svc\npassword = value" + std::to_string(i) + "\n", 0644);
        tree.secrets.insert(file.string());
    }

    // Decoys: clean files, a non-world-readable secret, a binary "secret".
    for (int i = 0; i < 6; ++i)
        place(parents[pick(rng)] / ("plain" + std::to_string(i)), "nothing here\n", 0644);
    place(root / "branch1" / "private.cfg", "password = hidden\n", 0600);
    std::string blob("BIN\0password = blob\n", 20);
    place(root / "branch2" / "image.bin", blob, 0644);
    return tree;
}

}  // namespace

TEST_CASE("world-writable scan finds exactly the planted nodes") {
    for (auto [k, m, seed] : {std::tuple<int, int, unsigned>{0, 0, 11},
                              {1, 1, 22},
                              {7, 5, 33},
                              {20, 20, 44}}) {
        TempDir tmp;
        SeededTree tree = build_tree(tmp.path(), k, m, seed);
        CAPTURE(k);
        CAPTURE(m);

        auto ww = scan_world_writable({tmp.path()});
        CHECK(ww.size() == static_cast<size_t>(k));
        CHECK(paths_of(ww) == tree.world_writable);

        auto secrets = scan_readable_secrets({tmp.path()});
        CHECK(secrets.size() == static_cast<size_t>(m));
        CHECK(paths_of(secrets) == tree.secrets);
    }
}

TEST_CASE("finding details name the mode, never file contents") {
    TempDir tmp;
    place(tmp / "loose", "x\n", 0666);
    make_dir(tmp / "open", 0777);

    auto ww = scan_world_writable({tmp.path()});
    REQUIRE(ww.size() == 2);
    for (const auto& f : ww) {
        CHECK(f.kind == FindingKind::WorldWritable);
        if (f.path.filename() == "loose")
            CHECK(f.detail == "file mode 0666");
        else
            CHECK(f.detail == "directory mode 0777");
    }

    place(tmp / "svc.cfg", "user = svc\npassword = hunter2\n", 0644);
    auto secrets = scan_readable_secrets({tmp.path()});
    REQUIRE(secrets.size() == 1);
    CHECK(secrets[0].kind == FindingKind::ReadableSecret);
    CHECK(secrets[0].detail == "line 2: 'password =' carries a value");
    CHECK(secrets[0].detail.find("hunter2") == std::string::npos);
}

TEST_CASE("sticky directories are exempt, their contents are not") {
    TempDir tmp;
    fs::path spool = make_dir(tmp / "spool", 01777);
    place(spool / "dropped", "x\n", 0666);

    auto ww = scan_world_writable({tmp.path()});
    REQUIRE(ww.size() == 1);
    CHECK(ww[0].path == spool / "dropped");
}

TEST_CASE("symlinks are never followed or reported") {
    TempDir outside;
    place(outside / "target", "x\n", 0666);

    TempDir tmp;
    fs::create_symlink(outside / "target", tmp / "link");
    CHECK(scan_world_writable({tmp.path()}).empty());

    place(outside / "secret.cfg", "password: x\n", 0644);
    fs::create_symlink(outside / "secret.cfg", tmp / "secret-link");
    CHECK(scan_readable_secrets({tmp.path()}).empty());
}

TEST_CASE("secret scan edge cases") {
    TempDir tmp;

    // Separator required: a bare mention is not a finding.
    place(tmp / "doc.txt", "choose a strong password please\n", 0644);
    // Key variants all match, case-insensitively.
    place(tmp / "a.cfg", "PASSWD: swordfish\n", 0644);
    place(tmp / "b.cfg", "Secret=value\n", 0644);
    // One finding per file even with several hits.
    place(tmp / "c.cfg", "password = one\npassword = two\n", 0644);
    // No value after the separator: not a finding.
    place(tmp / "d.cfg", "password =\n", 0644);

    std::vector<std::string> notes;
    auto secrets = scan_readable_secrets({tmp.path()}, default_secret_patterns(), &notes);
    const std::set<std::string> expected = {(tmp / "a.cfg").string(), (tmp / "b.cfg").string(),
                                            (tmp / "c.cfg").string()};
    CHECK(paths_of(secrets) == expected);
    for (const auto& f : secrets)
        if (f.path.filename() == "c.cfg")
            CHECK(f.detail == "line 1: 'password =' carries a value");

    // Binary files are noted, not scanned.
    std::string blob("ELF\0password = x\n", 17);
    place(tmp / "bin", blob, 0644);
    notes.clear();
    secrets = scan_readable_secrets({tmp.path()}, default_secret_patterns(), &notes);
    CHECK(paths_of(secrets).count((tmp / "bin").string()) == 0);
    bool noted = false;
    for (const auto& n : notes)
        if (n == "binary skipped: " + (tmp / "bin").string())
            noted = true;
    CHECK(noted);
}

TEST_CASE("missing roots are noted") {
    TempDir tmp;
    std::vector<std::string> notes;
    auto ww = scan_world_writable({tmp / "nope"}, &notes);
    CHECK(ww.empty());
    REQUIRE(notes.size() == 1);
    CHECK(notes[0] == "missing root: " + (tmp / "nope").string());
}

TEST_CASE("dump_findings writes one line per finding") {
    TempDir tmp;
    std::vector<ScanFinding> findings = {
        {"/r/a", FindingKind::WorldWritable, "file mode 0666"},
        {"/r/b.cfg", FindingKind::ReadableSecret, "line 1: 'password =' carries a value"},
    };
    fs::path out = dump_findings(findings, tmp.path(), "sec5.txt");
    CHECK(out == tmp / "sec5.txt");
    CHECK(read_file(out) ==
          "world-writable\t/r/a\tfile mode 0666\n"
          "readable-secret\t/r/b.cfg\tline 1: 'password =' carries a value\n");
}

TEST_CASE("license check") {
    TempDir tmp;
    DeploymentOutcome outcome;
    outcome.install_root = tmp / "root";
    fs::create_directories(outcome.install_root);

    SUBCASE("no packages") {
        CheckResult r = check_license(outcome);
        CHECK(r.check_id == "QC_DOC_5");
        CHECK(r.status == CheckStatus::NotApplicable);
        CHECK(r.detail == "no installed packages to examine");
    }

    SUBCASE("metadata license suffices") {
        Package pkg;
        pkg.name = "widget";
        pkg.evr = parse_evr("1.0-1");
        pkg.license = "Apache-2.0";
        outcome.installed_packages.push_back(pkg);
        CheckResult r = check_license(outcome);
        CHECK(r.status == CheckStatus::Ok);
        CHECK(r.detail == "1 packages carry license information");
    }

    SUBCASE("doc-directory license file suffices") {
        Package pkg;
        pkg.name = "widget";
        pkg.evr = parse_evr("1.0-1");
        outcome.installed_packages.push_back(pkg);
        fs::path doc = outcome.install_root / "usr/share/doc/widget-1.0";
        fs::create_directories(doc);
        write_file(doc / "COPYING.gz", "stub");
        CheckResult r = check_license(outcome);
        CHECK(r.status == CheckStatus::Ok);
    }

    SUBCASE("offenders are listed in package order") {
        for (const char* name : {"alpha", "beta", "gamma"}) {
            Package pkg;
            pkg.name = name;
            pkg.evr = parse_evr("1.0-1");
            outcome.installed_packages.push_back(pkg);
        }
        outcome.installed_packages[1].license = "MIT";
        CheckResult r = check_license(outcome);
        CHECK(r.status == CheckStatus::Fail);
        CHECK(r.detail == "missing license: alpha, gamma");
    }
}

TEST_CASE("support channel check") {
    SUBCASE("unconfigured") {
        CheckResult r = check_support_channel("");
        CHECK(r.check_id == "QC_SUPPORT_1");
        CHECK(r.status == CheckStatus::NotApplicable);
        CHECK(r.detail == "no support channel configured");
    }

    SUBCASE("not a URL") {
        CheckResult r = check_support_channel("ggus.example.org");
        CHECK(r.status == CheckStatus::Fail);
        CHECK(r.detail == "not a URL: ggus.example.org");
    }

    SUBCASE("statuses") {
        httplib::Server server;
        server.Get("/ticket", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("tracker", "text/plain");
        });
        server.Get("/moved", [](const httplib::Request&, httplib::Response& res) {
            res.set_redirect("/ticket");
        });
        server.Get("/gone", [](const httplib::Request&, httplib::Response& res) {
            res.status = 500;
            res.set_content("down", "text/plain");
        });
        int port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        std::thread thread([&] { server.listen_after_bind(); });
        server.wait_until_ready();

        std::string base = "http://127.0.0.1:" + std::to_string(port);

        CheckResult ok = check_support_channel(base + "/ticket");
        CHECK(ok.status == CheckStatus::Ok);
        CHECK(ok.detail == base + "/ticket answered with status 200");

        CheckResult redirect = check_support_channel(base + "/moved");
        CHECK(redirect.status == CheckStatus::Ok);

        CheckResult broken = check_support_channel(base + "/gone");
        CHECK(broken.status == CheckStatus::Fail);
        CHECK(broken.detail == base + "/gone answered with status 500");

        server.stop();
        thread.join();
    }

    SUBCASE("unreachable") {
        CheckResult r = check_support_channel("http://127.0.0.1:1/ticket", 2);
        CHECK(r.status == CheckStatus::Fail);
        CHECK(r.detail.find("unreachable:") == 0);
    }
}
