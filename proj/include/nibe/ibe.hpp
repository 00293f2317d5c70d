#pragma once

// The four scheme algorithms: Setup, Keygen, Encrypt, Decrypt, plus the
// identity-encoding layer.  Identities are hashed and split into n blocks of
// ell bits each; the public vector U has one element per block, so growing
// ell shrinks the public parameters by the same factor.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nibe/group.hpp"
#include "nibe/hashes.hpp"

namespace nibe {

struct SchemeConfig {
    std::uint32_t n = 8;     // block count
    std::uint32_t ell = 32;  // bits per block
    HashId hash_id = HashId::Sha256;

    std::uint32_t n_prime() const { return n * ell; }

    void validate(const GroupDescriptor& desc) const {
        if (n == 0 || ell == 0) throw InvalidConfig("n and ell must be positive");
        if (hash_id != HashId::Sha256) throw InvalidConfig("unknown hash id");
        if (n_prime() > 256) throw InvalidConfig("n*ell exceeds the hash output length");
        std::size_t pbits = mpz_sizeinbase(desc.p.get_mpz_t(), 2);
        // Keeps block values and their sums far from wrapping mod p, so
        // blocks act as plain integer exponents.
        if (pbits < 3 || ell >= pbits - 2)
            throw InvalidConfig("ell too large for the group order");
    }
};

struct EncodedIdentity {
    std::vector<std::uint32_t> v;  // n blocks, each < 2^ell, v[0] most significant
    friend bool operator==(const EncodedIdentity&, const EncodedIdentity&) = default;
};

// First n*ell bits of the digest, big-endian, chopped into ell-bit blocks.
inline EncodedIdentity split_digest(std::span<const unsigned char> digest,
                                    const SchemeConfig& config) {
    if (digest.size() * 8 < config.n_prime())
        throw InvalidConfig("digest shorter than n*ell bits");
    EncodedIdentity id;
    id.v.reserve(config.n);
    std::size_t bit = 0;
    for (std::uint32_t i = 0; i < config.n; ++i) {
        std::uint64_t block = 0;
        for (std::uint32_t j = 0; j < config.ell; ++j, ++bit)
            block = (block << 1) | ((digest[bit / 8] >> (7 - bit % 8)) & 1);
        id.v.push_back(static_cast<std::uint32_t>(block));
    }
    return id;
}

inline EncodedIdentity encode_identity(std::span<const unsigned char> id_bytes,
                                       const SchemeConfig& config) {
    return split_digest(sha256(id_bytes), config);
}

inline EncodedIdentity encode_identity(std::string_view id, const SchemeConfig& config) {
    return encode_identity(
        std::span(reinterpret_cast<const unsigned char*>(id.data()), id.size()), config);
}

struct PublicParams {
    const BilinearGroup* group = nullptr;
    SchemeConfig config;
    SourceElement g;
    SourceElement g1;  // g^alpha
    SourceElement g2;
    SourceElement u_prime;
    std::vector<SourceElement> u;  // n elements
    std::optional<TargetElement> pair_g1_g2;

    std::size_t logical_element_count() const { return 4 + u.size(); }

    void check_identity(const EncodedIdentity& v) const {
        if (v.v.size() != config.n) throw InvalidConfig("identity block count mismatch");
        for (std::uint32_t b : v.v)
            if (config.ell < 32 && (b >> config.ell) != 0)
                throw InvalidConfig("identity block exceeds 2^ell");
    }
};

struct MasterSecret {
    SourceElement g2_alpha;
    std::optional<Scalar> alpha;  // retained only in test-oracle mode
};

struct PrivateKey {
    SourceElement d1;  // g2^alpha * (u' prod u_i^{v_i})^r
    SourceElement d2;  // g^r
    EncodedIdentity identity;
};

struct Ciphertext {
    TargetElement c1;  // e(g1,g2)^t * m
    SourceElement c2;  // g^t
    SourceElement c3;  // (u' prod u_i^{v_i})^t
};

// u' * prod u_i^{v_i}
inline SourceElement hash_product(const PublicParams& params, const EncodedIdentity& v) {
    params.check_identity(v);
    std::vector<Scalar> exps;
    exps.reserve(v.v.size());
    for (std::uint32_t b : v.v) exps.push_back(Scalar{Int(b)});
    return params.group->mul(params.u_prime, params.group->multi_exp(params.u, exps));
}

struct SetupResult {
    PublicParams params;
    MasterSecret master;
};

inline SetupResult setup(const BilinearGroup& group, const SchemeConfig& config,
                         RandomSource& rng, bool oracle_mode = false) {
    config.validate(group.descriptor());
    PublicParams pp;
    pp.group = &group;
    pp.config = config;
    pp.g = group.generator();
    Scalar alpha = group.random_scalar(rng);
    pp.g1 = group.exp(pp.g, alpha);
    pp.g2 = group.random_source(rng);
    pp.u_prime = group.random_source(rng);
    pp.u.reserve(config.n);
    for (std::uint32_t i = 0; i < config.n; ++i) pp.u.push_back(group.random_source(rng));
    pp.pair_g1_g2 = group.pair(pp.g1, pp.g2);
    MasterSecret master{group.exp(pp.g2, alpha),
                        oracle_mode ? std::optional<Scalar>(alpha) : std::nullopt};
    return SetupResult{std::move(pp), std::move(master)};
}

inline PublicParams precompute_pair(PublicParams params) {
    if (!params.pair_g1_g2) params.pair_g1_g2 = params.group->pair(params.g1, params.g2);
    return params;
}

inline TargetElement pair_g1_g2(const PublicParams& params) {
    if (params.pair_g1_g2) return *params.pair_g1_g2;
    return params.group->pair(params.g1, params.g2);
}

inline PrivateKey keygen_with_r(const PublicParams& params, const MasterSecret& master,
                                const EncodedIdentity& v, const Scalar& r) {
    const BilinearGroup& G = *params.group;
    SourceElement hp = hash_product(params, v);
    return PrivateKey{G.mul(master.g2_alpha, G.exp(hp, r)), G.exp(params.g, r), v};
}

inline PrivateKey keygen(const PublicParams& params, const MasterSecret& master,
                         const EncodedIdentity& v, RandomSource& rng) {
    return keygen_with_r(params, master, v, params.group->random_scalar(rng));
}

// Publicly checkable well-formedness: e(d1, g) == e(g1, g2) * e(H(v), d2).
inline bool key_is_wellformed(const PublicParams& params, const PrivateKey& key) {
    const BilinearGroup& G = *params.group;
    TargetElement lhs = G.pair(key.d1, params.g);
    TargetElement rhs =
        G.mul_target(pair_g1_g2(params), G.pair(hash_product(params, key.identity), key.d2));
    return lhs == rhs;
}

inline Ciphertext encrypt_with_t(const PublicParams& params, const EncodedIdentity& v,
                                 const TargetElement& m, const Scalar& t) {
    const BilinearGroup& G = *params.group;
    return Ciphertext{G.mul_target(G.exp_target(pair_g1_g2(params), t), m),
                      G.exp(params.g, t), G.exp(hash_product(params, v), t)};
}

inline Ciphertext encrypt(const PublicParams& params, const EncodedIdentity& v,
                          const TargetElement& m, RandomSource& rng) {
    return encrypt_with_t(params, v, m, params.group->random_scalar(rng));
}

// c1 * e(d2, c3) / e(c2, d1)
inline TargetElement decrypt(const PublicParams& params, const PrivateKey& key,
                             const Ciphertext& ct) {
    const BilinearGroup& G = *params.group;
    TargetElement num = G.pair(key.d2, ct.c3);
    TargetElement den = G.pair(ct.c2, key.d1);
    return G.mul_target(ct.c1, G.mul_target(num, G.inv_target(den)));
}

}  // namespace nibe
