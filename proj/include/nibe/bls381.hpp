#pragma once

// BLS12-381 backend behind the symmetric-pairing interface.
//
// The scheme assumes a symmetric pairing e : G x G -> G1; BLS12-381 is
// asymmetric, so a logical source element mirrors one discrete log across
// both curve groups: it stores (g1^x, g2^x) and pair(a, b) pairs a's first
// component with b's second.  Element counts in the public parameters are
// unchanged; byte sizes double, and the size report shows both figures.
//
// The curve arithmetic itself comes from the arkworks implementation,
// linked as a static library with a small C ABI (see rust/bls381).

#include <cstdint>
#include <memory>

#include "nibe/group.hpp"

extern "C" {
std::size_t nibe_bls381_source_len();
std::size_t nibe_bls381_target_len();
std::size_t nibe_bls381_scalar_len();
void nibe_bls381_order(unsigned char* out);
int nibe_bls381_generator(unsigned char* out);
int nibe_bls381_identity(unsigned char* out);
int nibe_bls381_mul(const unsigned char* a, const unsigned char* b, unsigned char* out);
int nibe_bls381_neg(const unsigned char* a, unsigned char* out);
int nibe_bls381_exp(const unsigned char* a, const unsigned char* scalar, unsigned char* out);
int nibe_bls381_validate(const unsigned char* a);
int nibe_bls381_pair(const unsigned char* a, const unsigned char* b, unsigned char* out);
int nibe_bls381_gt_identity(unsigned char* out);
int nibe_bls381_gt_mul(const unsigned char* a, const unsigned char* b, unsigned char* out);
int nibe_bls381_gt_inv(const unsigned char* a, unsigned char* out);
int nibe_bls381_gt_exp(const unsigned char* a, const unsigned char* scalar, unsigned char* out);
int nibe_bls381_gt_validate(const unsigned char* a);
}

namespace nibe {

class Bls381Group final : public BilinearGroup {
  public:
    Bls381Group() {
        std::vector<unsigned char> order(nibe_bls381_scalar_len());
        nibe_bls381_order(order.data());
        desc_ = GroupDescriptor{BackendId::Curve, int_from_be(order),
                                nibe_bls381_source_len(), nibe_bls381_target_len(),
                                nibe_bls381_scalar_len()};
    }

    const GroupDescriptor& descriptor() const override { return desc_; }

    SourceElement generator() const override {
        SourceElement e{alloc_source()};
        call(nibe_bls381_generator(e.bytes.data()));
        return e;
    }
    SourceElement identity() const override {
        SourceElement e{alloc_source()};
        call(nibe_bls381_identity(e.bytes.data()));
        return e;
    }
    SourceElement mul(const SourceElement& a, const SourceElement& b) const override {
        SourceElement e{alloc_source()};
        call(nibe_bls381_mul(a.bytes.data(), b.bytes.data(), e.bytes.data()));
        return e;
    }
    SourceElement inv(const SourceElement& a) const override {
        SourceElement e{alloc_source()};
        call(nibe_bls381_neg(a.bytes.data(), e.bytes.data()));
        return e;
    }
    SourceElement exp(const SourceElement& base, const Scalar& ex) const override {
        SourceElement e{alloc_source()};
        call(nibe_bls381_exp(base.bytes.data(), scalar_bytes(ex).data(), e.bytes.data()));
        return e;
    }

    TargetElement pair(const SourceElement& a, const SourceElement& b) const override {
        TargetElement e{alloc_target()};
        call(nibe_bls381_pair(a.bytes.data(), b.bytes.data(), e.bytes.data()));
        return e;
    }

    TargetElement target_identity() const override {
        TargetElement e{alloc_target()};
        call(nibe_bls381_gt_identity(e.bytes.data()));
        return e;
    }
    TargetElement mul_target(const TargetElement& a, const TargetElement& b) const override {
        TargetElement e{alloc_target()};
        call(nibe_bls381_gt_mul(a.bytes.data(), b.bytes.data(), e.bytes.data()));
        return e;
    }
    TargetElement inv_target(const TargetElement& a) const override {
        TargetElement e{alloc_target()};
        call(nibe_bls381_gt_inv(a.bytes.data(), e.bytes.data()));
        return e;
    }
    TargetElement exp_target(const TargetElement& base, const Scalar& ex) const override {
        TargetElement e{alloc_target()};
        call(nibe_bls381_gt_exp(base.bytes.data(), scalar_bytes(ex).data(), e.bytes.data()));
        return e;
    }

    SourceElement deserialize_source(std::span<const unsigned char> bytes) const override {
        if (bytes.size() != desc_.source_element_len)
            throw WrongLength("curve source element has wrong length");
        int rc = nibe_bls381_validate(bytes.data());
        if (rc != 0) throw NotCanonical("bytes are not a valid mirrored curve element");
        return SourceElement{{bytes.begin(), bytes.end()}};
    }
    TargetElement deserialize_target(std::span<const unsigned char> bytes) const override {
        if (bytes.size() != desc_.target_element_len)
            throw WrongLength("curve target element has wrong length");
        int rc = nibe_bls381_gt_validate(bytes.data());
        if (rc != 0) throw NotCanonical("bytes are not a valid target-group element");
        return TargetElement{{bytes.begin(), bytes.end()}};
    }

  private:
    std::vector<unsigned char> alloc_source() const {
        return std::vector<unsigned char>(desc_.source_element_len);
    }
    std::vector<unsigned char> alloc_target() const {
        return std::vector<unsigned char>(desc_.target_element_len);
    }
    std::vector<unsigned char> scalar_bytes(const Scalar& s) const {
        return int_to_be(s.value, desc_.scalar_len);
    }
    static void call(int rc) {
        if (rc != 0) throw Error("curve backend rejected an internal element");
    }

    GroupDescriptor desc_;
};

}  // namespace nibe
