// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/debrepo.hpp"

#include <sstream>

#include "umdv/fetch.hpp"

namespace umdv {

namespace {

// "<<" "<=" "=" ">=" ">>"; bare "<" and ">" are historical spellings of
// the inclusive forms.
Relation relation_from_op(const std::string& op, int line) {
    if (op == "<<") return Relation::LT;
    if (op == "<=" || op == "<") return Relation::LE;
    if (op == "=") return Relation::EQ;
    if (op == ">=" || op == ">") return Relation::GE;
    if (op == ">>") return Relation::GT;
    throw ParseError("unknown version relation '" + op + "'", line);
}

std::string op_from_relation(Relation rel) {
    switch (rel) {
    case Relation::LT: return "<<";
    case Relation::LE: return "<=";
    case Relation::EQ: return "=";
    case Relation::GE: return ">=";
    case Relation::GT: return ">>";
    default: return "";
    }
}

// One term: "name", "name:any", "name (>= 1.2-3)".
VersionConstraint parse_term(const std::string& term, int line) {
    VersionConstraint c;
    std::string t = trim(term);
    if (t.empty())
        throw ParseError("empty dependency term", line);

    auto paren = t.find('(');
    std::string name_part = trim(paren == std::string::npos ? t : t.substr(0, paren));
    // Strip a multiarch qualifier; names themselves never contain ':'.
    auto colon = name_part.find(':');
    if (colon != std::string::npos)
        name_part = name_part.substr(0, colon);
    if (name_part.empty())
        throw ParseError("dependency term without a package name: '" + t + "'", line);
    c.name = name_part;

    if (paren != std::string::npos) {
        auto close = t.find(')', paren);
        if (close == std::string::npos)
            throw ParseError("unterminated version restriction: '" + t + "'", line);
        std::string inner = trim(t.substr(paren + 1, close - paren - 1));
        size_t i = 0;
        while (i < inner.size() && (inner[i] == '<' || inner[i] == '>' || inner[i] == '='))
            ++i;
        std::string op = inner.substr(0, i);
        std::string ver = trim(inner.substr(i));
        if (op.empty() || ver.empty())
            throw ParseError("malformed version restriction: '" + inner + "'", line);
        c.relation = relation_from_op(op, line);
        c.evr = parse_evr(ver);
    }
    return c;
}

std::vector<Requirement> parse_relations(const std::string& field, int line) {
    std::vector<Requirement> out;
    for (const std::string& group : split(field, ',')) {
        if (trim(group).empty())
            continue;
        Requirement req;
        for (const std::string& alt : split(group, '|'))
            req.alternatives.push_back(parse_term(alt, line));
        out.push_back(std::move(req));
    }
    return out;
}

}  // namespace

std::vector<Requirement> parse_deb_relations(const std::string& field) {
    return parse_relations(field, 0);
}

std::vector<Package> parse_packages(const std::string& text) {
    std::vector<Package> packages;

    // Field name -> (value, line of the field) for the current stanza.
    std::vector<std::tuple<std::string, std::string, int>> fields;
    int lineno = 0;

    auto flush = [&]() {
        if (fields.empty())
            return;
        Package pkg;
        std::vector<Requirement> depends;
        bool has_name = false, has_version = false;
        int stanza_line = std::get<2>(fields.front());
        for (const auto& [key, value, fline] : fields) {
            if (key == "Package") {
                pkg.name = value;
                has_name = true;
            } else if (key == "Version") {
                pkg.evr = parse_evr(value);
                has_version = true;
            } else if (key == "Architecture") {
                pkg.arch = value;
            } else if (key == "Provides") {
                for (const auto& req : parse_relations(value, fline))
                    for (const auto& alt : req.alternatives)
                        pkg.provides.push_back(alt);
            } else if (key == "Depends" || key == "Pre-Depends") {
                for (auto& req : parse_relations(value, fline))
                    depends.push_back(std::move(req));
            }
            // Recommends/Suggests and the rest do not gate anything.
        }
        if (!has_name)
            throw ParseError("stanza without Package field", stanza_line);
        if (!has_version)
            throw ParseError("stanza for '" + pkg.name + "' without Version field", stanza_line);
        pkg.requirements = std::move(depends);
        pkg.provides.push_back(self_provide(pkg));
        packages.push_back(std::move(pkg));
        fields.clear();
    };

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty()) {
            flush();
            continue;
        }
        if (line[0] == ' ' || line[0] == '\t') {
            // Continuation of the previous field.
            if (fields.empty())
                throw ParseError("continuation line outside a stanza", lineno);
            std::get<1>(fields.back()) += " " + trim(line);
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError("malformed control line: '" + line + "'", lineno);
        fields.emplace_back(trim(line.substr(0, colon)), trim(line.substr(colon + 1)), lineno);
    }
    flush();
    return packages;
}

RepoIndex load_deb_repo(const std::string& base, int timeout_s) {
    std::string text;
    try {
        text = gunzip(fetch_url(is_url(base) ? base + "/Packages.gz"
                                             : (fs::path(base) / "Packages.gz").string(),
                                timeout_s));
    } catch (const Error&) {
        try {
            text = fetch_relative(base, "Packages", timeout_s);
        } catch (const Error&) {
            throw Error("not a repository: no Packages index under " + base);
        }
    }

    RepoIndex index;
    index.flavor = Flavor::Deb;
    index.base_url = base;
    index.packages = parse_packages(text);
    index.fetched_at = now_rfc3339();
    return index;
}

void write_deb_index(const fs::path& dir, const std::vector<Package>& packages) {
    std::ostringstream out;
    for (const Package& pkg : packages) {
        out << "Package: " << pkg.name << "\n";
        out << "Version: " << format_evr(pkg.evr) << "\n";
        if (!pkg.arch.empty())
            out << "Architecture: " << pkg.arch << "\n";

        VersionConstraint self = self_provide(pkg);
        std::vector<std::string> provides;
        for (const auto& p : pkg.provides) {
            if (p == self)
                continue;  // implicit, never listed
            if (p.relation == Relation::Any)
                provides.push_back(p.name);
            else
                provides.push_back(p.name + " (" + op_from_relation(p.relation) + " " +
                                   format_evr(*p.evr) + ")");
        }
        if (!provides.empty())
            out << "Provides: " << join(provides, ", ") << "\n";

        std::vector<std::string> depends;
        for (const auto& req : pkg.requirements) {
            std::vector<std::string> alts;
            for (const auto& alt : req.alternatives) {
                if (alt.relation == Relation::Any)
                    alts.push_back(alt.name);
                else
                    alts.push_back(alt.name + " (" + op_from_relation(alt.relation) + " " +
                                   format_evr(*alt.evr) + ")");
            }
            depends.push_back(join(alts, " | "));
        }
        if (!depends.empty())
            out << "Depends: " << join(depends, ", ") << "\n";

        out << "Filename: pool/main/" << pkg.name << "_" << format_evr(pkg.evr) << "_"
            << (pkg.arch.empty() ? "all" : pkg.arch) << ".deb\n";
        out << "Description: fixture entry for " << pkg.name << "\n";
        out << "\n";
    }

    std::string text = out.str();
    write_file(dir / "Packages", text);
    write_file(dir / "Packages.gz", gzip(text));
}

}  // namespace umdv
