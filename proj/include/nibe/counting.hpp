#pragma once

#include <cstddef>

#include "nibe/group.hpp"

namespace nibe {

struct OpCounts {
    std::size_t pairings = 0;
    std::size_t source_exps = 0;  // multi_exp counts as one exponentiation equivalent
    std::size_t target_exps = 0;
    std::size_t source_muls = 0;
    std::size_t target_muls = 0;
    std::size_t source_invs = 0;
    std::size_t target_invs = 0;

    void reset() { *this = OpCounts{}; }
};

// Decorator that forwards to a real backend while tallying group operations.
// Used to check the paper's operation-count claims for encrypt/decrypt.
class CountingGroup final : public BilinearGroup {
  public:
    explicit CountingGroup(const BilinearGroup& inner) : inner_(inner) {}

    OpCounts& counts() const { return counts_; }

    const GroupDescriptor& descriptor() const override { return inner_.descriptor(); }

    SourceElement generator() const override { return inner_.generator(); }
    SourceElement identity() const override { return inner_.identity(); }

    SourceElement mul(const SourceElement& a, const SourceElement& b) const override {
        ++counts_.source_muls;
        return inner_.mul(a, b);
    }
    SourceElement inv(const SourceElement& a) const override {
        ++counts_.source_invs;
        return inner_.inv(a);
    }
    SourceElement exp(const SourceElement& base, const Scalar& e) const override {
        ++counts_.source_exps;
        return inner_.exp(base, e);
    }
    SourceElement multi_exp(std::span<const SourceElement> bases,
                            std::span<const Scalar> exps) const override {
        ++counts_.source_exps;
        return inner_.multi_exp(bases, exps);
    }

    TargetElement pair(const SourceElement& a, const SourceElement& b) const override {
        ++counts_.pairings;
        return inner_.pair(a, b);
    }

    TargetElement target_identity() const override { return inner_.target_identity(); }
    TargetElement mul_target(const TargetElement& a, const TargetElement& b) const override {
        ++counts_.target_muls;
        return inner_.mul_target(a, b);
    }
    TargetElement inv_target(const TargetElement& a) const override {
        ++counts_.target_invs;
        return inner_.inv_target(a);
    }
    TargetElement exp_target(const TargetElement& base, const Scalar& e) const override {
        ++counts_.target_exps;
        return inner_.exp_target(base, e);
    }

    SourceElement deserialize_source(std::span<const unsigned char> b) const override {
        return inner_.deserialize_source(b);
    }
    TargetElement deserialize_target(std::span<const unsigned char> b) const override {
        return inner_.deserialize_target(b);
    }

    Scalar toy_dlog(const SourceElement& x) const override { return inner_.toy_dlog(x); }
    Scalar toy_dlog_target(const TargetElement& x) const override {
        return inner_.toy_dlog_target(x);
    }

  private:
    const BilinearGroup& inner_;
    mutable OpCounts counts_;
};

}  // namespace nibe
