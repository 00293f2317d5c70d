#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "nibe/errors.hpp"
#include "nibe/rng.hpp"

namespace nibe {

using Int = mpz_class;

enum class BackendId : std::uint8_t { Toy = 0x01, Curve = 0x02 };

struct GroupDescriptor {
    BackendId backend_id;
    Int p;  // common prime order of the source and target groups
    std::size_t source_element_len;
    std::size_t target_element_len;
    std::size_t scalar_len;
};

// Value in [0, p), reduced on construction by the owning backend.
struct Scalar {
    Int value;
    friend bool operator==(const Scalar& a, const Scalar& b) { return a.value == b.value; }
};

// Elements are stored in canonical serialized form, so equality is byte
// equality and serialization is a copy.
struct SourceElement {
    std::vector<unsigned char> bytes;
    friend bool operator==(const SourceElement&, const SourceElement&) = default;
};

struct TargetElement {
    std::vector<unsigned char> bytes;
    friend bool operator==(const TargetElement&, const TargetElement&) = default;
};

inline Int int_from_be(std::span<const unsigned char> bytes) {
    Int v;
    mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    return v;
}

inline std::vector<unsigned char> int_to_be(const Int& v, std::size_t len) {
    std::vector<unsigned char> out(len, 0);
    std::size_t count = 0;
    if (v != 0) {
        std::size_t need = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
        if (need > len) throw Error("integer does not fit declared width");
        mpz_export(out.data() + (len - need), &count, 1, 1, 1, 0, v.get_mpz_t());
    }
    return out;
}

// Symmetric bilinear group e : G x G -> G1, both of prime order p.
class BilinearGroup {
  public:
    virtual ~BilinearGroup() = default;

    virtual const GroupDescriptor& descriptor() const = 0;

    virtual SourceElement generator() const = 0;
    virtual SourceElement identity() const = 0;
    virtual SourceElement mul(const SourceElement& a, const SourceElement& b) const = 0;
    virtual SourceElement inv(const SourceElement& a) const = 0;
    virtual SourceElement exp(const SourceElement& base, const Scalar& e) const = 0;

    // Product of base_i^{e_i}; one "exponentiation equivalent" in operation
    // accounting no matter how many bases.
    virtual SourceElement multi_exp(std::span<const SourceElement> bases,
                                    std::span<const Scalar> exps) const {
        if (bases.size() != exps.size()) throw Error("multi_exp: size mismatch");
        SourceElement acc = identity();
        for (std::size_t i = 0; i < bases.size(); ++i) acc = mul(acc, exp(bases[i], exps[i]));
        return acc;
    }

    virtual TargetElement pair(const SourceElement& a, const SourceElement& b) const = 0;

    virtual TargetElement target_identity() const = 0;
    virtual TargetElement mul_target(const TargetElement& a, const TargetElement& b) const = 0;
    virtual TargetElement inv_target(const TargetElement& a) const = 0;
    virtual TargetElement exp_target(const TargetElement& base, const Scalar& e) const = 0;

    Scalar reduce(const Int& v) const {
        Int r = v % descriptor().p;
        if (r < 0) r += descriptor().p;
        return Scalar{r};
    }

    // Uniform scalar by rejection sampling; no modular-reduction bias.
    Scalar random_scalar(RandomSource& rng) const {
        const Int& p = descriptor().p;
        std::size_t bits = mpz_sizeinbase(p.get_mpz_t(), 2);
        std::size_t len = (bits + 7) / 8;
        unsigned topmask = (bits % 8 == 0) ? 0xFF : ((1u << (bits % 8)) - 1);
        std::vector<unsigned char> buf(len);
        for (;;) {
            rng.fill(buf.data(), buf.size());
            buf[0] &= static_cast<unsigned char>(topmask);
            Int v = int_from_be(buf);
            if (v < p) return Scalar{v};
        }
    }

    SourceElement random_source(RandomSource& rng) const {
        return exp(generator(), random_scalar(rng));
    }

    TargetElement random_target(RandomSource& rng) const {
        return exp_target(pair(generator(), generator()), random_scalar(rng));
    }

    virtual SourceElement deserialize_source(std::span<const unsigned char> bytes) const = 0;
    virtual TargetElement deserialize_target(std::span<const unsigned char> bytes) const = 0;

    // Discrete log of x base g.  Test oracle; only the toy backend answers.
    virtual Scalar toy_dlog(const SourceElement&) const {
        throw Unsupported("dlog oracle: not a transparent backend");
    }
    virtual Scalar toy_dlog_target(const TargetElement&) const {
        throw Unsupported("dlog oracle: not a transparent backend");
    }
};

// Intentionally insecure backend: G = G1 = (Z_p, +), generator 1,
// "exponentiation" is multiplication mod p and the pairing is the product of
// exponents.  Every paper identity holds and discrete log is the identity
// map, so tests can build perfect adversaries and check exponent-level
// equalities exactly.
class ToyGroup final : public BilinearGroup {
  public:
    static constexpr std::size_t kElementLen = 8;

    explicit ToyGroup(Int p = 1009)
        : desc_{BackendId::Toy, std::move(p), kElementLen, kElementLen, kElementLen} {
        if (mpz_probab_prime_p(desc_.p.get_mpz_t(), 40) == 0)
            throw InvalidConfig("toy group order must be prime");
        if (mpz_sizeinbase(desc_.p.get_mpz_t(), 2) > 64)
            throw InvalidConfig("toy group order must fit 8 bytes");
    }

    const GroupDescriptor& descriptor() const override { return desc_; }

    SourceElement generator() const override { return make_source(1); }
    SourceElement identity() const override { return make_source(0); }

    SourceElement mul(const SourceElement& a, const SourceElement& b) const override {
        return make_source((value(a) + value(b)) % desc_.p);
    }
    SourceElement inv(const SourceElement& a) const override {
        return make_source((desc_.p - value(a)) % desc_.p);
    }
    SourceElement exp(const SourceElement& base, const Scalar& e) const override {
        return make_source((value(base) * e.value) % desc_.p);
    }

    TargetElement pair(const SourceElement& a, const SourceElement& b) const override {
        return TargetElement{make_source((value(a) * value(b)) % desc_.p).bytes};
    }

    TargetElement target_identity() const override { return TargetElement{identity().bytes}; }
    TargetElement mul_target(const TargetElement& a, const TargetElement& b) const override {
        return TargetElement{mul(as_source(a), as_source(b)).bytes};
    }
    TargetElement inv_target(const TargetElement& a) const override {
        return TargetElement{inv(as_source(a)).bytes};
    }
    TargetElement exp_target(const TargetElement& base, const Scalar& e) const override {
        return TargetElement{exp(as_source(base), e).bytes};
    }

    SourceElement deserialize_source(std::span<const unsigned char> bytes) const override {
        return SourceElement{check(bytes)};
    }
    TargetElement deserialize_target(std::span<const unsigned char> bytes) const override {
        return TargetElement{check(bytes)};
    }

    Scalar toy_dlog(const SourceElement& x) const override { return Scalar{value(x)}; }
    Scalar toy_dlog_target(const TargetElement& x) const override {
        return Scalar{int_from_be(x.bytes)};
    }

  private:
    SourceElement make_source(const Int& v) const {
        return SourceElement{int_to_be(v, kElementLen)};
    }
    static Int value(const SourceElement& a) { return int_from_be(a.bytes); }
    static SourceElement as_source(const TargetElement& a) { return SourceElement{a.bytes}; }

    std::vector<unsigned char> check(std::span<const unsigned char> bytes) const {
        if (bytes.size() != kElementLen)
            throw WrongLength("toy element must be exactly 8 bytes");
        Int v = int_from_be(bytes);
        if (v >= desc_.p) throw NotCanonical("toy element value not reduced mod p");
        return {bytes.begin(), bytes.end()};
    }

    GroupDescriptor desc_;
};

}  // namespace nibe
