#pragma once

#include <cstdint>
#include <cstring>
#include <random>

#include <openssl/rand.h>

#include "nibe/errors.hpp"

namespace nibe {

// Byte-stream randomness source.  The only mutable object in the library;
// every randomized operation takes one explicitly, so callers control
// determinism (tests, the analyze command) and thread ownership.
class RandomSource {
  public:
    virtual ~RandomSource() = default;
    virtual void fill(unsigned char* out, std::size_t len) = 0;

    std::uint64_t next_u64() {
        unsigned char buf[8];
        fill(buf, sizeof buf);
        std::uint64_t v = 0;
        for (unsigned char b : buf) v = (v << 8) | b;
        return v;
    }

    // Uniform in [0, bound) by rejection from the smallest power of two >= bound.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw Error("below: zero bound");
        if (bound == 1) return 0;
        int bits = 64 - __builtin_clzll(bound - 1);
        std::uint64_t mask = (bits == 64) ? ~0ull : ((1ull << bits) - 1);
        for (;;) {
            std::uint64_t v = next_u64() & mask;
            if (v < bound) return v;
        }
    }

    bool coin() { return (next_u64() & 1) != 0; }
};

// Deterministic source for tests and seeded analysis runs.
class SeededRng final : public RandomSource {
  public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    void fill(unsigned char* out, std::size_t len) override {
        while (len >= 8) {
            std::uint64_t v = gen_();
            std::memcpy(out, &v, 8);
            out += 8;
            len -= 8;
        }
        if (len > 0) {
            std::uint64_t v = gen_();
            std::memcpy(out, &v, len);
        }
    }

  private:
    std::mt19937_64 gen_;
};

// OS-backed source for production key material.
class SystemRng final : public RandomSource {
  public:
    void fill(unsigned char* out, std::size_t len) override {
        if (RAND_bytes(out, static_cast<int>(len)) != 1)
            throw RngFailure("system randomness unavailable");
    }
};

}  // namespace nibe
