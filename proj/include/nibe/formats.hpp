#pragma once

// On-disk formats (params / master / key / envelope), the KEM-DEM hybrid
// wrapper for arbitrary payloads, and the backend factory used when parsing
// self-describing files.
//
// All multi-byte integers are big-endian.  Common header:
//   magic(4) version(1) backend_id(1) n(2) ell(2) hash_id(1)

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <vector>

#include "nibe/group.hpp"
#include "nibe/hashes.hpp"
#include "nibe/ibe.hpp"

#ifdef NIBE_HAVE_BLS381
#include "nibe/bls381.hpp"
#endif

namespace nibe {

inline constexpr std::array<unsigned char, 4> kMagicParams{'N', 'I', 'B', 'E'};
inline constexpr std::array<unsigned char, 4> kMagicKey{'N', 'I', 'B', 'K'};
inline constexpr std::array<unsigned char, 4> kMagicEnvelope{'N', 'I', 'B', 'C'};
inline constexpr std::array<unsigned char, 4> kMagicMaster{'N', 'I', 'B', 'M'};
inline constexpr unsigned char kFormatVersion = 0x01;

// Toy prime used by the CLI: 2^61 - 1, large enough for the ell = 32
// profiles while still fitting the 8-byte toy wire format.
inline const Int& cli_toy_prime() {
    static const Int p = (Int(1) << 61) - 1;
    return p;
}

inline std::unique_ptr<BilinearGroup> make_backend(BackendId id) {
    switch (id) {
        case BackendId::Toy:
            return std::make_unique<ToyGroup>(cli_toy_prime());
        case BackendId::Curve:
#ifdef NIBE_HAVE_BLS381
            return std::make_unique<Bls381Group>();
#else
            throw Unsupported("curve backend not built into this binary");
#endif
    }
    throw FormatError("unknown backend id");
}

// ------------------------------------------------------------- buffers ----

class ByteWriter {
  public:
    void u8(unsigned char v) { buf_.push_back(v); }
    void u16be(std::uint16_t v) {
        buf_.push_back(static_cast<unsigned char>(v >> 8));
        buf_.push_back(static_cast<unsigned char>(v));
    }
    void u32be(std::uint32_t v) {
        for (int s = 24; s >= 0; s -= 8) buf_.push_back(static_cast<unsigned char>(v >> s));
    }
    void bytes(std::span<const unsigned char> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
    std::vector<unsigned char> take() { return std::move(buf_); }

  private:
    std::vector<unsigned char> buf_;
};

class ByteReader {
  public:
    explicit ByteReader(std::span<const unsigned char> data) : data_(data) {}

    unsigned char u8() { return take(1)[0]; }
    std::uint16_t u16be() {
        auto b = take(2);
        return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
    }
    std::uint32_t u32be() {
        auto b = take(4);
        return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
               (std::uint32_t(b[2]) << 8) | b[3];
    }
    std::span<const unsigned char> take(std::size_t len) {
        if (data_.size() - pos_ < len) throw FormatError("truncated file");
        auto out = data_.subspan(pos_, len);
        pos_ += len;
        return out;
    }
    std::span<const unsigned char> rest() { return take(data_.size() - pos_); }
    bool done() const { return pos_ == data_.size(); }
    void expect_done() const {
        if (!done()) throw FormatError("trailing bytes after end of structure");
    }

  private:
    std::span<const unsigned char> data_;
    std::size_t pos_ = 0;
};

// -------------------------------------------------------------- header ----

struct FileHeader {
    BackendId backend_id;
    SchemeConfig config;
};

inline void write_header(ByteWriter& w, const std::array<unsigned char, 4>& magic,
                         BackendId backend, const SchemeConfig& config) {
    w.bytes(magic);
    w.u8(kFormatVersion);
    w.u8(static_cast<unsigned char>(backend));
    w.u16be(static_cast<std::uint16_t>(config.n));
    w.u16be(static_cast<std::uint16_t>(config.ell));
    w.u8(static_cast<unsigned char>(config.hash_id));
}

inline FileHeader read_header(ByteReader& r, const std::array<unsigned char, 4>& magic) {
    auto m = r.take(4);
    if (!std::equal(m.begin(), m.end(), magic.begin())) throw FormatError("bad magic");
    if (r.u8() != kFormatVersion) throw FormatError("unknown format version");
    unsigned char backend = r.u8();
    if (backend != static_cast<unsigned char>(BackendId::Toy) &&
        backend != static_cast<unsigned char>(BackendId::Curve))
        throw FormatError("unknown backend id");
    FileHeader h;
    h.backend_id = static_cast<BackendId>(backend);
    h.config.n = r.u16be();
    h.config.ell = r.u16be();
    unsigned char hash = r.u8();
    if (hash != static_cast<unsigned char>(HashId::Sha256)) throw FormatError("unknown hash id");
    h.config.hash_id = static_cast<HashId>(hash);
    if (h.config.n == 0 || h.config.ell == 0) throw FormatError("invalid n/ell in header");
    return h;
}

// -------------------------------------------------------------- params ----

inline std::size_t params_file_size(const GroupDescriptor& d, const SchemeConfig& c) {
    return 11 + (c.n + 4) * d.source_element_len + d.target_element_len;
}

inline std::vector<unsigned char> serialize_params(const PublicParams& pp) {
    ByteWriter w;
    write_header(w, kMagicParams, pp.group->descriptor().backend_id, pp.config);
    w.bytes(pp.g.bytes);
    w.bytes(pp.g1.bytes);
    w.bytes(pp.g2.bytes);
    w.bytes(pp.u_prime.bytes);
    for (const auto& u : pp.u) w.bytes(u.bytes);
    w.bytes(pair_g1_g2(pp).bytes);
    return w.take();
}

struct LoadedParams {
    std::unique_ptr<BilinearGroup> group;
    PublicParams params;
};

inline LoadedParams parse_params(std::span<const unsigned char> data) {
    ByteReader r(data);
    FileHeader h = read_header(r, kMagicParams);
    LoadedParams lp;
    lp.group = make_backend(h.backend_id);
    const auto& desc = lp.group->descriptor();
    h.config.validate(desc);
    auto src = [&] { return lp.group->deserialize_source(r.take(desc.source_element_len)); };
    lp.params.group = lp.group.get();
    lp.params.config = h.config;
    lp.params.g = src();
    lp.params.g1 = src();
    lp.params.g2 = src();
    lp.params.u_prime = src();
    lp.params.u.reserve(h.config.n);
    for (std::uint32_t i = 0; i < h.config.n; ++i) lp.params.u.push_back(src());
    lp.params.pair_g1_g2 = lp.group->deserialize_target(r.take(desc.target_element_len));
    r.expect_done();
    if (*lp.params.pair_g1_g2 != lp.group->pair(lp.params.g1, lp.params.g2))
        throw FormatError("cached pairing value does not match g1, g2");
    return lp;
}

// -------------------------------------------------------------- master ----

inline std::vector<unsigned char> serialize_master(const PublicParams& pp,
                                                   const MasterSecret& master) {
    const auto& desc = pp.group->descriptor();
    ByteWriter w;
    write_header(w, kMagicMaster, desc.backend_id, pp.config);
    w.bytes(master.g2_alpha.bytes);
    w.u8(master.alpha ? 0x01 : 0x00);
    if (master.alpha) w.bytes(int_to_be(master.alpha->value, desc.scalar_len));
    return w.take();
}

inline MasterSecret parse_master(std::span<const unsigned char> data, const PublicParams& pp) {
    const auto& desc = pp.group->descriptor();
    ByteReader r(data);
    FileHeader h = read_header(r, kMagicMaster);
    if (h.backend_id != desc.backend_id || h.config.n != pp.config.n ||
        h.config.ell != pp.config.ell)
        throw FormatError("master file does not match the public parameters");
    MasterSecret master;
    master.g2_alpha = pp.group->deserialize_source(r.take(desc.source_element_len));
    unsigned char flag = r.u8();
    if (flag == 0x01) {
        Int a = int_from_be(r.take(desc.scalar_len));
        if (a >= desc.p) throw FormatError("master scalar out of range");
        master.alpha = Scalar{a};
    } else if (flag != 0x00) {
        throw FormatError("unknown master flag");
    }
    r.expect_done();
    if (master.alpha && pp.group->exp(pp.g, *master.alpha) != pp.g1)
        throw FormatError("retained alpha inconsistent with g1");
    return master;
}

// ----------------------------------------------------------------- key ----

struct StoredKey {
    std::vector<unsigned char> identity_bytes;
    PrivateKey key;
};

inline std::vector<unsigned char> serialize_key(const PublicParams& pp, const StoredKey& sk) {
    ByteWriter w;
    write_header(w, kMagicKey, pp.group->descriptor().backend_id, pp.config);
    w.u32be(static_cast<std::uint32_t>(sk.identity_bytes.size()));
    w.bytes(sk.identity_bytes);
    w.bytes(sk.key.d1.bytes);
    w.bytes(sk.key.d2.bytes);
    return w.take();
}

// Rejects keys that fail the public pairing well-formedness relation.
inline StoredKey parse_key(std::span<const unsigned char> data, const PublicParams& pp) {
    const auto& desc = pp.group->descriptor();
    ByteReader r(data);
    FileHeader h = read_header(r, kMagicKey);
    if (h.backend_id != desc.backend_id || h.config.n != pp.config.n ||
        h.config.ell != pp.config.ell)
        throw FormatError("key file does not match the public parameters");
    StoredKey sk;
    std::uint32_t idlen = r.u32be();
    auto id = r.take(idlen);
    sk.identity_bytes.assign(id.begin(), id.end());
    sk.key.d1 = pp.group->deserialize_source(r.take(desc.source_element_len));
    sk.key.d2 = pp.group->deserialize_source(r.take(desc.source_element_len));
    r.expect_done();
    sk.key.identity = encode_identity(sk.identity_bytes, pp.config);
    if (!key_is_wellformed(pp, sk.key)) throw FormatError("private key fails pairing check");
    return sk;
}

// ------------------------------------------------------------ envelope ----

struct Envelope {
    DemId dem_id = DemId::Aes256Gcm;
    Ciphertext kem;  // IBE encryption of the KEM group element
    std::array<unsigned char, kDemNonceLen> nonce{};
    std::vector<unsigned char> sealed;  // DEM ciphertext || tag
};

inline std::vector<unsigned char> serialize_envelope(const PublicParams& pp,
                                                     const Envelope& env) {
    ByteWriter w;
    write_header(w, kMagicEnvelope, pp.group->descriptor().backend_id, pp.config);
    w.u8(static_cast<unsigned char>(env.dem_id));
    w.bytes(env.kem.c1.bytes);
    w.bytes(env.kem.c2.bytes);
    w.bytes(env.kem.c3.bytes);
    w.bytes(env.nonce);
    w.bytes(env.sealed);
    return w.take();
}

inline Envelope parse_envelope(std::span<const unsigned char> data, const PublicParams& pp) {
    const auto& desc = pp.group->descriptor();
    ByteReader r(data);
    FileHeader h = read_header(r, kMagicEnvelope);
    if (h.backend_id != desc.backend_id || h.config.n != pp.config.n ||
        h.config.ell != pp.config.ell)
        throw FormatError("envelope does not match the public parameters");
    Envelope env;
    unsigned char dem = r.u8();
    if (dem != static_cast<unsigned char>(DemId::Aes256Gcm))
        throw FormatError("unknown dem algorithm id");
    env.dem_id = static_cast<DemId>(dem);
    env.kem.c1 = pp.group->deserialize_target(r.take(desc.target_element_len));
    env.kem.c2 = pp.group->deserialize_source(r.take(desc.source_element_len));
    env.kem.c3 = pp.group->deserialize_source(r.take(desc.source_element_len));
    auto nonce = r.take(kDemNonceLen);
    std::copy(nonce.begin(), nonce.end(), env.nonce.begin());
    auto sealed = r.rest();
    if (sealed.size() < kDemTagLen) throw FormatError("dem payload shorter than tag");
    env.sealed.assign(sealed.begin(), sealed.end());
    return env;
}

// ------------------------------------------------------------- KEM-DEM ----

inline constexpr std::string_view kKdfLabel = "NIBE-KDF-v1";

inline std::array<unsigned char, 32> derive_dem_key(const TargetElement& M) {
    return sha256_labeled(kKdfLabel, M.bytes);
}

inline Envelope kem_dem_encrypt(const PublicParams& pp, const EncodedIdentity& v,
                                std::span<const unsigned char> payload, RandomSource& rng) {
    Envelope env;
    TargetElement M = pp.group->random_target(rng);
    auto key = derive_dem_key(M);
    env.kem = encrypt(pp, v, M, rng);
    rng.fill(env.nonce.data(), env.nonce.size());
    env.sealed = dem_seal(key, env.nonce, payload);
    return env;
}

// Throws TagMismatch (and releases nothing) when the key does not match.
inline std::vector<unsigned char> kem_dem_decrypt(const PublicParams& pp, const PrivateKey& key,
                                                  const Envelope& env) {
    TargetElement M = decrypt(pp, key, env.kem);
    auto dem_key = derive_dem_key(M);
    return dem_open(dem_key, env.nonce, env.sealed);
}

// ------------------------------------------------------------ file I/O ----

inline std::vector<unsigned char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return data;
}

// Write to a temp file in the same directory, then rename; a failed command
// never leaves a partial output behind.
inline void write_file_atomic(const std::filesystem::path& path,
                              std::span<const unsigned char> data, bool restrict_perms = false) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(data.data()),
                  static_cast<std::streamsize>(data.size()));
        if (!out) throw Error("short write to " + tmp.string());
    }
    if (restrict_perms)
        std::filesystem::permissions(tmp, std::filesystem::perms::owner_read |
                                              std::filesystem::perms::owner_write);
    std::filesystem::rename(tmp, path);
}

}  // namespace nibe
