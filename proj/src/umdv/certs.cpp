// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/certs.hpp"

#include <httplib.h>
#include <netdb.h>
#include <openssl/err.h>
#include <openssl/evp.h>
#include <openssl/pem.h>
#include <openssl/rand.h>
#include <openssl/ssl.h>
#include <openssl/x509v3.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <thread>

namespace umdv {

namespace {

template <typename T, void (*Free)(T*)>
struct OsslDeleter {
    void operator()(T* p) const {
        if (p)
            Free(p);
    }
};

using X509Ptr = std::unique_ptr<X509, OsslDeleter<X509, X509_free>>;
using PkeyPtr = std::unique_ptr<EVP_PKEY, OsslDeleter<EVP_PKEY, EVP_PKEY_free>>;
using BioPtr = std::unique_ptr<BIO, OsslDeleter<BIO, BIO_free_all>>;

std::string ossl_error() {
    char buf[256];
    unsigned long err = ERR_get_error();
    if (err == 0)
        return "unknown OpenSSL error";
    ERR_error_string_n(err, buf, sizeof(buf));
    ERR_clear_error();
    return buf;
}

const EVP_MD* digest_by_name(const std::string& digest) {
    const EVP_MD* md = EVP_get_digestbyname(digest.c_str());
    if (!md)
        throw Error("unknown digest: " + digest);
    return md;
}

PkeyPtr generate_rsa_key() {
    PkeyPtr key(EVP_RSA_gen(2048));
    if (!key)
        throw Error("RSA key generation failed: " + ossl_error());
    return key;
}

void set_random_serial(X509* x) {
    unsigned char bytes[8];
    if (RAND_bytes(bytes, sizeof(bytes)) != 1)
        throw Error("RAND_bytes failed: " + ossl_error());
    bytes[0] &= 0x7f;  // keep the serial positive
    BIGNUM* bn = BN_bin2bn(bytes, sizeof(bytes), nullptr);
    BN_to_ASN1_INTEGER(bn, X509_get_serialNumber(x));
    BN_free(bn);
}

void add_name_entry(X509_NAME* name, const char* field, const std::string& value) {
    X509_NAME_add_entry_by_txt(name, field, MBSTRING_ASC,
                               reinterpret_cast<const unsigned char*>(value.c_str()), -1, -1, 0);
}

void add_extension(X509* subject, X509* issuer, int nid, const std::string& value) {
    X509V3_CTX ctx;
    X509V3_set_ctx_nodb(&ctx);
    X509V3_set_ctx(&ctx, issuer, subject, nullptr, nullptr, 0);
    X509_EXTENSION* ext = X509V3_EXT_conf_nid(nullptr, &ctx, nid, value.c_str());
    if (!ext)
        throw Error("extension " + std::to_string(nid) + "=" + value + ": " + ossl_error());
    X509_add_ext(subject, ext, -1);
    X509_EXTENSION_free(ext);
}

void write_pem_cert(const fs::path& path, X509* x) {
    BioPtr bio(BIO_new_file(path.c_str(), "w"));
    if (!bio || PEM_write_bio_X509(bio.get(), x) != 1)
        throw Error("cannot write certificate " + path.string());
}

void write_pem_key(const fs::path& path, EVP_PKEY* key) {
    BioPtr bio(BIO_new_file(path.c_str(), "w"));
    if (!bio ||
        PEM_write_bio_PrivateKey(bio.get(), key, nullptr, nullptr, 0, nullptr, nullptr) != 1)
        throw Error("cannot write key " + path.string());
    fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write);
}

X509Ptr read_pem_cert(const fs::path& path) {
    BioPtr bio(BIO_new_file(path.c_str(), "r"));
    if (!bio)
        throw Error("cannot open " + path.string());
    X509Ptr x(PEM_read_bio_X509(bio.get(), nullptr, nullptr, nullptr));
    if (!x)
        throw Error("not a PEM certificate: " + path.string());
    return x;
}

PkeyPtr read_pem_key(const fs::path& path) {
    BioPtr bio(BIO_new_file(path.c_str(), "r"));
    if (!bio)
        throw Error("cannot open " + path.string());
    PkeyPtr key(PEM_read_bio_PrivateKey(bio.get(), nullptr, nullptr, nullptr));
    if (!key)
        throw Error("not a PEM private key: " + path.string());
    return key;
}

std::string name_oneline(X509_NAME* name) {
    char buf[512];
    X509_NAME_oneline(name, buf, sizeof(buf));
    return buf;
}

bool valid_hostname(const std::string& hostname) {
    if (hostname.empty() || hostname.size() > 253)
        return false;
    if (hostname.front() == '.' || hostname.front() == '-' || hostname.back() == '.' ||
        hostname.back() == '-')
        return false;
    for (char c : hostname) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '.' || c == '-';
        if (!ok)
            return false;
    }
    return true;
}

bool is_sha2_nid(int nid) {
    return nid == NID_sha224 || nid == NID_sha256 || nid == NID_sha384 || nid == NID_sha512 ||
           nid == NID_sha512_224 || nid == NID_sha512_256;
}

}  // namespace

CertAuthority create_ca(const fs::path& workdir, const std::string& digest) {
    fs::path dir = workdir / "certs";
    fs::create_directories(dir);

    PkeyPtr key = generate_rsa_key();
    X509Ptr x(X509_new());
    X509_set_version(x.get(), 2);
    set_random_serial(x.get());
    X509_gmtime_adj(X509_getm_notBefore(x.get()), -3600);
    X509_gmtime_adj(X509_getm_notAfter(x.get()), 7 * 24 * 3600);

    X509_NAME* name = X509_get_subject_name(x.get());
    add_name_entry(name, "O", "umd-verify");
    add_name_entry(name, "CN", "umd-verify test CA");
    X509_set_issuer_name(x.get(), name);
    X509_set_pubkey(x.get(), key.get());

    add_extension(x.get(), x.get(), NID_basic_constraints, "critical,CA:TRUE");
    add_extension(x.get(), x.get(), NID_key_usage, "critical,keyCertSign,cRLSign");
    add_extension(x.get(), x.get(), NID_subject_key_identifier, "hash");

    if (X509_sign(x.get(), key.get(), digest_by_name(digest)) == 0)
        throw Error("CA signing failed: " + ossl_error());

    CertAuthority ca;
    ca.subject = name_oneline(name);
    ca.cert_path = dir / "ca.pem";
    ca.key_path = dir / "ca.key";
    write_pem_cert(ca.cert_path, x.get());
    write_pem_key(ca.key_path, key.get());
    return ca;
}

HostCert issue_host_cert(const CertAuthority& ca, const std::string& hostname,
                         const std::string& digest) {
    if (!valid_hostname(hostname))
        throw Error("invalid hostname: '" + hostname + "'");

    X509Ptr ca_cert = read_pem_cert(ca.cert_path);
    PkeyPtr ca_key = read_pem_key(ca.key_path);

    PkeyPtr key = generate_rsa_key();
    X509Ptr x(X509_new());
    X509_set_version(x.get(), 2);
    set_random_serial(x.get());
    X509_gmtime_adj(X509_getm_notBefore(x.get()), -3600);
    X509_gmtime_adj(X509_getm_notAfter(x.get()), 7 * 24 * 3600);

    X509_NAME* name = X509_get_subject_name(x.get());
    add_name_entry(name, "O", "umd-verify");
    add_name_entry(name, "CN", hostname);
    X509_set_issuer_name(x.get(), X509_get_subject_name(ca_cert.get()));
    X509_set_pubkey(x.get(), key.get());

    add_extension(x.get(), ca_cert.get(), NID_basic_constraints, "critical,CA:FALSE");
    add_extension(x.get(), ca_cert.get(), NID_key_usage,
                  "critical,digitalSignature,keyEncipherment");
    add_extension(x.get(), ca_cert.get(), NID_ext_key_usage, "serverAuth");
    add_extension(x.get(), ca_cert.get(), NID_subject_alt_name, "DNS:" + hostname);

    if (X509_sign(x.get(), ca_key.get(), digest_by_name(digest)) == 0)
        throw Error("certificate signing failed: " + ossl_error());

    HostCert cert;
    cert.hostname = hostname;
    cert.cert_path = ca.cert_path.parent_path() / ("host-" + hostname + ".pem");
    cert.key_path = ca.cert_path.parent_path() / ("host-" + hostname + ".key");
    write_pem_cert(cert.cert_path, x.get());
    write_pem_key(cert.key_path, key.get());
    return cert;
}

std::pair<std::string, bool> certificate_digest(const fs::path& cert_path) {
    X509Ptr cert = read_pem_cert(cert_path);
    int mdnid = 0;
    if (X509_get_signature_info(cert.get(), &mdnid, nullptr, nullptr, nullptr) != 1)
        throw Error("cannot determine signature digest of " + cert_path.string());
    return {OBJ_nid2sn(mdnid), is_sha2_nid(mdnid)};
}

TlsProbeResult probe_tls(const std::string& host, int port, const fs::path& ca_cert,
                         int timeout_s) {
    TlsProbeResult result;

    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* addrs = nullptr;
    int rc = getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &addrs);
    if (rc != 0) {
        result.error = std::string("cannot resolve ") + host + ": " + gai_strerror(rc);
        return result;
    }

    int fd = -1;
    for (addrinfo* ai = addrs; ai; ai = ai->ai_next) {
        fd = socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0)
            continue;
        timeval tv{timeout_s, 0};
        setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
        setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
        if (connect(fd, ai->ai_addr, ai->ai_addrlen) == 0)
            break;
        close(fd);
        fd = -1;
    }
    freeaddrinfo(addrs);
    if (fd < 0) {
        result.error = "connection refused: " + host + ":" + std::to_string(port);
        return result;
    }

    SSL_CTX* ctx = SSL_CTX_new(TLS_client_method());
    SSL* ssl = SSL_new(ctx);
    // No verification during the handshake: the chain is captured as
    // presented and validated manually below, so the probe can report
    // exactly which step failed.
    SSL_set_verify(ssl, SSL_VERIFY_NONE, nullptr);
    SSL_set_tlsext_host_name(ssl, host.c_str());
    SSL_set_fd(ssl, fd);

    if (SSL_connect(ssl) != 1) {
        result.error = "TLS handshake failed: " + ossl_error();
        SSL_free(ssl);
        SSL_CTX_free(ctx);
        close(fd);
        return result;
    }
    result.connected = true;

    X509Ptr leaf(SSL_get1_peer_certificate(ssl));
    if (!leaf) {
        result.error = "peer presented no certificate";
    } else {
        result.leaf_subject = name_oneline(X509_get_subject_name(leaf.get()));

        int mdnid = 0;
        if (X509_get_signature_info(leaf.get(), &mdnid, nullptr, nullptr, nullptr) == 1) {
            result.digest_name = OBJ_nid2sn(mdnid);
            result.digest_sha2 = is_sha2_nid(mdnid);
        }

        try {
            X509Ptr anchor = read_pem_cert(ca_cert);
            X509_STORE* store = X509_STORE_new();
            X509_STORE_add_cert(store, anchor.get());
            X509_STORE_CTX* vctx = X509_STORE_CTX_new();
            X509_STORE_CTX_init(vctx, store, leaf.get(), SSL_get_peer_cert_chain(ssl));
            if (X509_verify_cert(vctx) == 1) {
                result.chain_valid = true;
            } else {
                result.error = std::string("chain validation failed: ") +
                               X509_verify_cert_error_string(X509_STORE_CTX_get_error(vctx));
            }
            X509_STORE_CTX_free(vctx);
            X509_STORE_free(store);
        } catch (const Error& e) {
            result.error = e.what();
        }
    }

    SSL_shutdown(ssl);
    SSL_free(ssl);
    SSL_CTX_free(ctx);
    close(fd);
    return result;
}

struct TlsResponder::Impl {
    httplib::SSLServer server;
    std::thread thread;
    int port = 0;

    Impl(const fs::path& cert, const fs::path& key)
        : server(cert.c_str(), key.c_str()) {}
};

TlsResponder::TlsResponder(const fs::path& cert_path, const fs::path& key_path)
    : impl_(std::make_unique<Impl>(cert_path, key_path)) {
    if (!impl_->server.is_valid())
        throw Error("cannot initialize TLS responder with " + cert_path.string());
    impl_->server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });
    impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    if (impl_->port <= 0)
        throw Error("TLS responder cannot bind a loopback port");
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

TlsResponder::~TlsResponder() {
    stop();
}

int TlsResponder::port() const {
    return impl_->port;
}

void TlsResponder::stop() {
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

}  // namespace umdv
