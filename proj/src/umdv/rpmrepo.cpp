// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/rpmrepo.hpp"

#include "umdv/fetch.hpp"
#include "umdv/util.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <sstream>

namespace umdv {

namespace pt = boost::property_tree;

namespace {

Relation relation_from_flags(const std::string& flags) {
    if (flags.empty()) return Relation::Any;
    if (flags == "EQ") return Relation::EQ;
    if (flags == "LT") return Relation::LT;
    if (flags == "LE") return Relation::LE;
    if (flags == "GT") return Relation::GT;
    if (flags == "GE") return Relation::GE;
    throw ParseError("unknown rpm dependency flags: " + flags);
}

const char* flags_from_relation(Relation rel) {
    switch (rel) {
    case Relation::LT: return "LT";
    case Relation::LE: return "LE";
    case Relation::EQ: return "EQ";
    case Relation::GE: return "GE";
    case Relation::GT: return "GT";
    default: return "";
    }
}

VersionConstraint parse_entry(const pt::ptree& entry) {
    VersionConstraint c;
    c.name = entry.get<std::string>("<xmlattr>.name");
    std::string flags = entry.get<std::string>("<xmlattr>.flags", "");
    c.relation = relation_from_flags(flags);
    if (c.relation != Relation::Any) {
        Evr evr;
        evr.epoch = entry.get<long>("<xmlattr>.epoch", 0);
        evr.version = entry.get<std::string>("<xmlattr>.ver", "");
        evr.release = entry.get<std::string>("<xmlattr>.rel", "");
        c.evr = evr;
    }
    return c;
}

pt::ptree parse_xml(const std::string& xml) {
    std::istringstream in(xml);
    pt::ptree tree;
    try {
        pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(std::string("XML parse error: ") + e.message(),
                         static_cast<int>(e.line()));
    }
    return tree;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

void write_entry(std::ostringstream& out, const VersionConstraint& c) {
    out << "      <rpm:entry name=\"" << xml_escape(c.name) << "\"";
    if (c.relation != Relation::Any && c.evr) {
        out << " flags=\"" << flags_from_relation(c.relation) << "\""
            << " epoch=\"" << c.evr->epoch << "\""
            << " ver=\"" << xml_escape(c.evr->version) << "\"";
        if (!c.evr->release.empty())
            out << " rel=\"" << xml_escape(c.evr->release) << "\"";
    }
    out << "/>\n";
}

}  // namespace

std::map<std::string, RepomdEntry> parse_repomd(const std::string& xml) {
    pt::ptree tree = parse_xml(xml);
    auto repomd = tree.get_child_optional("repomd");
    if (!repomd)
        throw ParseError("repomd.xml: missing <repomd> root");

    std::map<std::string, RepomdEntry> entries;
    for (const auto& [key, node] : *repomd) {
        if (key != "data")
            continue;
        std::string type = node.get<std::string>("<xmlattr>.type", "");
        RepomdEntry entry;
        entry.location = node.get<std::string>("location.<xmlattr>.href", "");
        if (auto cks = node.get_child_optional("checksum")) {
            entry.checksum_type = cks->get<std::string>("<xmlattr>.type", "");
            entry.checksum_hex = to_lower(trim(cks->get_value<std::string>()));
        }
        if (!type.empty())
            entries[type] = std::move(entry);
    }
    return entries;
}

std::vector<Package> parse_primary(const std::string& xml) {
    pt::ptree tree = parse_xml(xml);
    auto metadata = tree.get_child_optional("metadata");
    if (!metadata)
        throw ParseError("primary.xml: missing <metadata> root");

    std::vector<Package> packages;
    for (const auto& [key, node] : *metadata) {
        if (key != "package")
            continue;
        Package pkg;
        pkg.name = node.get<std::string>("name");
        pkg.arch = node.get<std::string>("arch", "");
        pkg.evr.epoch = node.get<long>("version.<xmlattr>.epoch", 0);
        pkg.evr.version = node.get<std::string>("version.<xmlattr>.ver", "");
        pkg.evr.release = node.get<std::string>("version.<xmlattr>.rel", "");

        if (auto format = node.get_child_optional("format")) {
            pkg.license = format->get<std::string>("rpm:license", "");
            if (auto provides = format->get_child_optional("rpm:provides")) {
                for (const auto& [ekey, entry] : *provides)
                    if (ekey == "rpm:entry")
                        pkg.provides.push_back(parse_entry(entry));
            }
            if (auto requires_node = format->get_child_optional("rpm:requires")) {
                for (const auto& [ekey, entry] : *requires_node)
                    if (ekey == "rpm:entry")
                        pkg.requirements.push_back(Requirement{{parse_entry(entry)}});
            }
            for (const auto& [fkey, fnode] : *format)
                if (fkey == "file")
                    pkg.file_list.push_back(fnode.get_value<std::string>());
        }

        bool has_self = false;
        for (const auto& p : pkg.provides)
            if (p.name == pkg.name && p.relation == Relation::EQ && p.evr == pkg.evr)
                has_self = true;
        if (!has_self)
            pkg.provides.push_back(self_provide(pkg));

        packages.push_back(std::move(pkg));
    }
    return packages;
}

RepoIndex load_rpm_repo(const std::string& base, int timeout_s) {
    std::string repomd;
    try {
        repomd = fetch_relative(base, "repodata/repomd.xml", timeout_s);
    } catch (const Error& e) {
        throw Error("not a repository: no repomd.xml under " + base + " (" + e.what() + ")");
    }
    auto entries = parse_repomd(repomd);
    auto it = entries.find("primary");
    if (it == entries.end())
        throw Error("repomd.xml at " + base + " has no primary metadata");
    const RepomdEntry& entry = it->second;
    if (entry.location.empty())
        throw Error("repomd.xml at " + base + ": primary entry has no location");

    std::string data = fetch_relative(base, entry.location, timeout_s);
    if (!entry.checksum_hex.empty()) {
        if (entry.checksum_type != "sha256")
            throw Error("unsupported repomd checksum type: " + entry.checksum_type);
        std::string actual = sha256_hex(data);
        if (actual != entry.checksum_hex)
            throw Error("checksum mismatch for " + entry.location + ": expected " +
                        entry.checksum_hex + ", got " + actual);
    }
    if (ends_with(entry.location, ".gz"))
        data = gunzip(data);

    RepoIndex index;
    index.flavor = Flavor::Rpm;
    index.base_url = base;
    index.packages = parse_primary(data);
    index.fetched_at = now_rfc3339();
    return index;
}

void write_rpm_repo(const fs::path& dir, const std::vector<Package>& packages) {
    std::ostringstream primary;
    primary << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<metadata xmlns=\"http://linux.duke.edu/metadata/common\""
            << " xmlns:rpm=\"http://linux.duke.edu/metadata/rpm\""
            << " packages=\"" << packages.size() << "\">\n";
    for (const Package& pkg : packages) {
        primary << "<package type=\"rpm\">\n"
                << "  <name>" << xml_escape(pkg.name) << "</name>\n"
                << "  <arch>" << xml_escape(pkg.arch) << "</arch>\n"
                << "  <version epoch=\"" << pkg.evr.epoch << "\" ver=\""
                << xml_escape(pkg.evr.version) << "\" rel=\"" << xml_escape(pkg.evr.release)
                << "\"/>\n"
                << "  <location href=\"Packages/" << xml_escape(pkg.identity()) << ".rpm\"/>\n"
                << "  <format>\n"
                << "    <rpm:license>" << xml_escape(pkg.license) << "</rpm:license>\n";
        primary << "    <rpm:provides>\n";
        bool wrote_self = false;
        for (const auto& p : pkg.provides) {
            write_entry(primary, p);
            if (p.name == pkg.name && p.relation == Relation::EQ && p.evr == pkg.evr)
                wrote_self = true;
        }
        if (!wrote_self)
            write_entry(primary, self_provide(pkg));
        primary << "    </rpm:provides>\n";
        if (!pkg.requirements.empty()) {
            primary << "    <rpm:requires>\n";
            for (const auto& req : pkg.requirements)
                for (const auto& alt : req.alternatives)
                    write_entry(primary, alt);
            primary << "    </rpm:requires>\n";
        }
        for (const auto& file : pkg.file_list)
            primary << "    <file>" << xml_escape(file) << "</file>\n";
        primary << "  </format>\n"
                << "</package>\n";
    }
    primary << "</metadata>\n";

    std::string xml = primary.str();
    std::string gz = gzip(xml);
    std::string gz_sum = sha256_hex(gz);
    std::string open_sum = sha256_hex(xml);
    std::string href = "repodata/" + gz_sum + "-primary.xml.gz";

    write_file(dir / href, gz);

    std::ostringstream repomd;
    repomd << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           << "<repomd xmlns=\"http://linux.duke.edu/metadata/repo\""
           << " xmlns:rpm=\"http://linux.duke.edu/metadata/rpm\">\n"
           << "  <revision>1</revision>\n"
           << "  <data type=\"primary\">\n"
           << "    <checksum type=\"sha256\">" << gz_sum << "</checksum>\n"
           << "    <open-checksum type=\"sha256\">" << open_sum << "</open-checksum>\n"
           << "    <location href=\"" << href << "\"/>\n"
           << "    <size>" << gz.size() << "</size>\n"
           << "    <open-size>" << xml.size() << "</open-size>\n"
           << "  </data>\n"
           << "</repomd>\n";
    write_file(dir / "repodata" / "repomd.xml", repomd.str());
}

}  // namespace umdv
