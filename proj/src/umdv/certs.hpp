// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <memory>
#include <string>
#include <utility>

#include "umdv/util.hpp"

namespace umdv {

struct CertAuthority {
    std::string subject;  // distinguished name
    fs::path cert_path;
    fs::path key_path;
};

struct HostCert {
    std::string hostname;
    fs::path cert_path;
    fs::path key_path;
};

/// Generate a self-signed CA (RSA-2048, CA:TRUE, 7-day validity) under
/// <workdir>/certs/. digest is "sha256" by default; "sha1" exists only to
/// build negative fixtures.
CertAuthority create_ca(const fs::path& workdir, const std::string& digest = "sha256");

/// Issue a leaf certificate for hostname (SAN included), signed by ca.
HostCert issue_host_cert(const CertAuthority& ca, const std::string& hostname,
                         const std::string& digest = "sha256");

struct TlsProbeResult {
    bool connected = false;
    bool chain_valid = false;   // validates against the given CA
    bool digest_sha2 = false;   // leaf signature digest family
    std::string digest_name;
    std::string leaf_subject;
    std::string error;          // handshake/validation failure cause
};

/// TLS handshake against host:port; the presented chain is captured
/// without verification, then validated manually against ca_cert.
TlsProbeResult probe_tls(const std::string& host, int port, const fs::path& ca_cert,
                         int timeout_s = 10);

/// Signature digest of a PEM certificate: (short name, SHA-2 family).
/// Reads the file directly, no handshake involved.
std::pair<std::string, bool> certificate_digest(const fs::path& cert_path);

/// Minimal loopback TLS acceptor, used for Mock-mode self-probes and
/// fixtures. Listens on an ephemeral 127.0.0.1 port until stopped.
class TlsResponder {
public:
    TlsResponder(const fs::path& cert_path, const fs::path& key_path);
    ~TlsResponder();

    TlsResponder(const TlsResponder&) = delete;
    TlsResponder& operator=(const TlsResponder&) = delete;

    int port() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace umdv
