// Curve-backend checks are few and small: the backend delegates to a
// well-reviewed pairing implementation, so what needs testing is the
// symmetric-interface adapter and the serialization contract.

#ifdef NIBE_HAVE_BLS381

#include <catch2/catch_amalgamated.hpp>

#include "nibe/bls381.hpp"
#include "nibe/ibe.hpp"

using namespace nibe;

static const Bls381Group& curve() {
    static Bls381Group G;
    return G;
}

TEST_CASE("bls12-381 descriptor") {
    const auto& d = curve().descriptor();
    CHECK(d.backend_id == BackendId::Curve);
    CHECK(mpz_sizeinbase(d.p.get_mpz_t(), 2) == 255);
    CHECK(d.source_element_len == 144);
    CHECK(d.target_element_len == 576);
    CHECK(mpz_probab_prime_p(d.p.get_mpz_t(), 25) != 0);
}

TEST_CASE("bls12-381 bilinearity and non-degeneracy") {
    const auto& G = curve();
    SourceElement g = G.generator();
    CHECK(G.pair(g, g) != G.target_identity());
    CHECK(G.pair(g, G.identity()) == G.target_identity());
    SeededRng rng(11);
    TargetElement e_gg = G.pair(g, g);
    for (int i = 0; i < 10; ++i) {
        Scalar a = G.random_scalar(rng), b = G.random_scalar(rng);
        CHECK(G.pair(G.exp(g, a), G.exp(g, b)) ==
              G.exp_target(e_gg, G.reduce(a.value * b.value)));
    }
}

TEST_CASE("bls12-381 group laws") {
    const auto& G = curve();
    SeededRng rng(12);
    SourceElement a = G.random_source(rng), b = G.random_source(rng);
    CHECK(G.mul(a, b) == G.mul(b, a));
    CHECK(G.mul(a, G.inv(a)) == G.identity());
    CHECK(G.exp(a, Scalar{0}) == G.identity());
    CHECK(G.exp(a, Scalar{1}) == a);
    TargetElement t = G.random_target(rng);
    CHECK(G.mul_target(t, G.inv_target(t)) == G.target_identity());
}

TEST_CASE("bls12-381 serialization round trip and rejection") {
    const auto& G = curve();
    SeededRng rng(13);
    for (int i = 0; i < 5; ++i) {
        SourceElement x = G.random_source(rng);
        CHECK(G.deserialize_source(x.bytes) == x);
        TargetElement t = G.random_target(rng);
        CHECK(G.deserialize_target(t.bytes) == t);
    }

    std::vector<unsigned char> short_bytes(10, 0);
    CHECK_THROWS_AS(G.deserialize_source(short_bytes), WrongLength);
    CHECK_THROWS_AS(G.deserialize_target(short_bytes), WrongLength);

    std::vector<unsigned char> garbage(G.descriptor().source_element_len, 0xFF);
    CHECK_THROWS_AS(G.deserialize_source(garbage), NotCanonical);

    // Valid components with mismatched discrete logs must be rejected: the
    // mirrored format promises one exponent across both halves.
    SourceElement x = G.random_source(rng), y = G.random_source(rng);
    std::vector<unsigned char> spliced(x.bytes.begin(), x.bytes.begin() + 48);
    spliced.insert(spliced.end(), y.bytes.begin() + 48, y.bytes.end());
    CHECK_THROWS_AS(G.deserialize_source(spliced), NotCanonical);

    std::vector<unsigned char> bad_target(G.descriptor().target_element_len, 0x5A);
    CHECK_THROWS_AS(G.deserialize_target(bad_target), NotCanonical);
}

TEST_CASE("dlog oracle is refused on the curve backend") {
    const auto& G = curve();
    CHECK_THROWS_AS(G.toy_dlog(G.generator()), Unsupported);
}

TEST_CASE("scheme round trips on the curve backend") {
    const auto& G = curve();
    SchemeConfig config{8, 32, HashId::Sha256};
    SeededRng rng(14);
    auto [params, master] = setup(G, config, rng);
    for (int i = 0; i < 3; ++i) {
        EncodedIdentity v = encode_identity("user" + std::to_string(i) + "@example.com", config);
        TargetElement m = G.random_target(rng);
        PrivateKey key = keygen(params, master, v, rng);
        CHECK(key_is_wellformed(params, key));
        CHECK(decrypt(params, key, encrypt(params, v, m, rng)) == m);
    }
}

#endif  // NIBE_HAVE_BLS381
