// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include <doctest.h>

#include <string>
#include <vector>

#include "support/testutil.hpp"
#include "umdv/infomodel.hpp"
#include "umdv/ldif.hpp"

using namespace umdv;
using testutil::TempDir;

TEST_CASE("ldif parsing basics") {
    const std::string text =
        "version: 1\n"
        "# a comment line\n"
        "dn: GLUE2ServiceID=svc1,o=glue\n"
        "objectClass: GLUE2Service\n"
        "GLUE2ServiceID: svc1\n"
        "\n"
        "dn: GLUE2EndpointID=ep1,o=glue\n"
        "objectClass: GLUE2Endpoint\n"
        "GLUE2EndpointInterfaceName: org.ldap\n";

    LdifDocument doc = parse_ldif(text);
    REQUIRE(doc.entries.size() == 2);
    CHECK(doc.entries[0].dn == "GLUE2ServiceID=svc1,o=glue");
    REQUIRE(doc.entries[0].attributes.size() == 2);
    CHECK(doc.entries[0].attributes[0].first == "objectClass");
    CHECK(doc.entries[0].attributes[0].second == "GLUE2Service");
    CHECK(doc.entries[1].dn == "GLUE2EndpointID=ep1,o=glue");
    CHECK(doc.entries[1].values("objectclass") ==
          std::vector<std::string>{"GLUE2Endpoint"});  // case-insensitive lookup
}

TEST_CASE("ldif line folding") {
    const std::string text =
        "dn: o=glue\n"
        "description: a value that continues\n"
        "  across two folded lines\n";
    LdifDocument doc = parse_ldif(text);
    REQUIRE(doc.entries.size() == 1);
    // The fold strips exactly one leading space from the continuation.
    CHECK(doc.entries[0].values("description") ==
          std::vector<std::string>{"a value that continues across two folded lines"});
}

TEST_CASE("ldif base64 values") {
    // "GLUE2 / multi line" base64-encoded.
    const std::string text =
        "dn: o=glue\n"
        "note:: R0xVRTIgLyBtdWx0aSBsaW5l\n";
    LdifDocument doc = parse_ldif(text);
    CHECK(doc.entries[0].values("note") == std::vector<std::string>{"GLUE2 / multi line"});

    CHECK_THROWS_WITH_AS(parse_ldif("dn: o=glue\nnote:: abc\n"),
                         doctest::Contains("base64"), ParseError);
    CHECK_THROWS_WITH_AS(parse_ldif("dn: o=glue\nnote:: !!!!\n"),
                         doctest::Contains("invalid base64"), ParseError);
}

TEST_CASE("ldif repeated attributes keep order") {
    const std::string text =
        "dn: o=glue\n"
        "member: alpha\n"
        "member: beta\n"
        "member: gamma\n";
    LdifDocument doc = parse_ldif(text);
    const std::vector<std::string> expected = {"alpha", "beta", "gamma"};
    CHECK(doc.entries[0].values("member") == expected);
}

TEST_CASE("ldif errors") {
    CHECK_THROWS_WITH_AS(parse_ldif("dn: o=glue\nchangetype: modify\n"),
                         doctest::Contains("change records are not supported"), ParseError);
    CHECK_THROWS_WITH_AS(parse_ldif("objectClass: Thing\n"),
                         doctest::Contains("attribute before any dn"), ParseError);
    CHECK_THROWS_WITH_AS(parse_ldif("dn: o=glue\nref:< file:///etc/passwd\n"),
                         doctest::Contains("URL-valued attributes"), ParseError);
    CHECK_THROWS_WITH_AS(parse_ldif("dn: o=a\ndn: o=b\n"),
                         doctest::Contains("dn inside an entry"), ParseError);
    CHECK_THROWS_WITH_AS(parse_ldif("dn:\nx: y\n"), doctest::Contains("entry without dn"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse_ldif("dn: o=glue\nnot a pair\n"),
                         doctest::Contains("line without attribute separator"), ParseError);
    CHECK_THROWS_WITH_AS(parse_ldif(" leading fold\n"),
                         doctest::Contains("continuation line with nothing to continue"),
                         ParseError);
}

TEST_CASE("ldif serialize and reparse round trip") {
    LdifDocument doc;
    LdifEntry entry;
    entry.dn = "GLUE2ServiceID=svc1,o=glue";
    entry.attributes = {
        {"objectClass", "GLUE2Service"},
        {"GLUE2ServiceType", "org.cloud.info"},
        {"note", " leading space forces base64"},
        {"colon", ":starts with colon"},
        {"unicode", "caf\xc3\xa9"},
        {"empty", ""},
    };
    doc.entries.push_back(entry);
    LdifEntry second;
    second.dn = "o=glue";
    second.attributes = {{"objectClass", "organization"}};
    doc.entries.push_back(second);

    std::string text = serialize_ldif(doc);
    // Unsafe values are emitted base64; safe ones verbatim.
    CHECK(text.find("note:: ") != std::string::npos);
    CHECK(text.find("colon:: ") != std::string::npos);
    CHECK(text.find("unicode:: ") != std::string::npos);
    CHECK(text.find("objectClass: GLUE2Service\n") != std::string::npos);

    LdifDocument reparsed = parse_ldif(text);
    CHECK(reparsed == doc);
}

TEST_CASE("template expansion") {
    std::map<std::string, std::string> vars = {{"host", "bdii.site"}, {"port", "2170"}};
    CHECK(expand_template("ldapsearch -h {host} -p {port}", vars) ==
          "ldapsearch -h bdii.site -p 2170");
    // Unknown placeholders stay verbatim; stray braces survive.
    CHECK(expand_template("{host} {unknown} {", vars) == "bdii.site {unknown} {");
    CHECK(expand_template("", vars).empty());
}

TEST_CASE("fetch_info runs the configured command") {
    TempDir tmp;
    write_file(tmp / "published.ldif",
               "dn: o=glue\n"
               "objectClass: organization\n");

    InfoEndpoint endpoint;
    endpoint.base_dn = "o=glue";
    endpoint.fetch_command = "cat " + (tmp / "published.ldif").string();
    RunContext ctx;
    ctx.workdir = tmp / "work";

    LdifDocument doc = fetch_info(endpoint, ctx);
    REQUIRE(doc.entries.size() == 1);
    CHECK(doc.entries[0].dn == "o=glue");
}

TEST_CASE("fetch_info failure modes") {
    TempDir tmp;
    RunContext ctx;
    ctx.workdir = tmp / "work";

    InfoEndpoint endpoint;
    endpoint.fetch_command = "cat " + (tmp / "missing.ldif").string();
    CHECK_THROWS_WITH_AS(fetch_info(endpoint, ctx), doctest::Contains("infomodel fetch failed"),
                         Error);

    write_file(tmp / "empty.ldif", "\n");
    endpoint.fetch_command = "cat " + (tmp / "empty.ldif").string();
    CHECK_THROWS_WITH_AS(fetch_info(endpoint, ctx),
                         doctest::Contains("no published information"), Error);
}

TEST_CASE("external validator outcomes") {
    TempDir tmp;
    RunContext ctx;
    ctx.workdir = tmp / "work";
    write_file(tmp / "doc.ldif", "dn: o=glue\n");

    fs::path pass = testutil::write_script(tmp / "pass.sh", "#!/bin/sh\nexit 0\n");
    CheckResult ok = run_external_validator("QC_INFO_2", pass.string() + " {document}",
                                            tmp / "doc.ldif", ctx);
    CHECK(ok.check_id == "QC_INFO_2");
    CHECK(ok.status == CheckStatus::Ok);
    CHECK(ok.detail == "validator passed");

    fs::path fail = testutil::write_script(tmp / "fail.sh",
                                           "#!/bin/sh\necho schema violation at $1\nexit 3\n");
    CheckResult bad = run_external_validator("QC_INFO_1", fail.string() + " {document}",
                                             tmp / "doc.ldif", ctx);
    CHECK(bad.status == CheckStatus::Fail);
    CHECK(bad.detail ==
          "validator exit 3: schema violation at " + (tmp / "doc.ldif").string());

    CheckResult missing = run_external_validator("QC_INFO_2", "/no/such/validator {document}",
                                                 tmp / "doc.ldif", ctx);
    CHECK(missing.status == CheckStatus::Fail);
    CHECK(missing.detail == "validator unavailable: /no/such/validator");
}

TEST_CASE("middleware version check") {
    auto installed = [] {
        std::vector<Package> pkgs;
        Package p;
        p.name = "cloud-info-provider";
        p.evr = parse_evr("0.9.1-1");
        p.arch = "noarch";
        pkgs.push_back(p);
        return pkgs;
    }();

    SUBCASE("match on plain value") {
        LdifDocument doc = parse_ldif(
            "dn: o=glue\n"
            "GLUE2EntityOtherInfo: 0.9.1\n");
        CheckResult r = check_middleware_version(doc, installed, "GLUE2EntityOtherInfo");
        CHECK(r.check_id == "QC_INFO_3");
        CHECK(r.status == CheckStatus::Ok);
        CHECK(r.detail == "published version 0.9.1 matches cloud-info-provider-0.9.1-1.noarch");
    }

    SUBCASE("MiddlewareVersion= prefix is stripped") {
        LdifDocument doc = parse_ldif(
            "dn: o=glue\n"
            "GLUE2EntityOtherInfo: MiddlewareVersion=0.9.1\n");
        CheckResult r = check_middleware_version(doc, installed, "GLUE2EntityOtherInfo");
        CHECK(r.status == CheckStatus::Ok);
    }

    SUBCASE("mismatch lists both sides") {
        LdifDocument doc = parse_ldif(
            "dn: o=glue\n"
            "GLUE2EntityOtherInfo: 0.8.0\n");
        CheckResult r = check_middleware_version(doc, installed, "GLUE2EntityOtherInfo");
        CHECK(r.status == CheckStatus::Fail);
        CHECK(r.detail ==
              "published version 0.8.0 does not match installed packages "
              "(cloud-info-provider-0.9.1)");
    }

    SUBCASE("attribute absent") {
        LdifDocument doc = parse_ldif("dn: o=glue\nobjectClass: organization\n");
        CheckResult r = check_middleware_version(doc, installed, "GLUE2EntityOtherInfo");
        CHECK(r.status == CheckStatus::Fail);
        CHECK(r.detail == "version not published (no GLUE2EntityOtherInfo attribute)");
    }
}
