#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "nibe/errors.hpp"

namespace nibe {

enum class HashId : std::uint8_t { Sha256 = 0x01 };

inline std::array<unsigned char, 32> sha256(std::span<const unsigned char> data) {
    std::array<unsigned char, 32> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != 32)
        throw Error("sha256 failed");
    return out;
}

inline std::array<unsigned char, 32> sha256_labeled(std::string_view label,
                                                    std::span<const unsigned char> data) {
    std::vector<unsigned char> buf(label.begin(), label.end());
    buf.insert(buf.end(), data.begin(), data.end());
    return sha256(buf);
}

// --- DEM: nonce-based authenticated encryption, 256-bit key, 128-bit tag ---

enum class DemId : std::uint8_t { Aes256Gcm = 0x01 };

inline constexpr std::size_t kDemNonceLen = 12;
inline constexpr std::size_t kDemTagLen = 16;

// Output is ciphertext || tag.
inline std::vector<unsigned char> dem_seal(std::span<const unsigned char, 32> key,
                                           std::span<const unsigned char, kDemNonceLen> nonce,
                                           std::span<const unsigned char> plaintext) {
    std::vector<unsigned char> out(plaintext.size() + kDemTagLen);
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    if (!ctx) throw Error("cipher ctx alloc failed");
    int outl = 0;
    int ok = EVP_EncryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) &&
             EVP_EncryptUpdate(ctx, out.data(), &outl, plaintext.data(),
                               static_cast<int>(plaintext.size()));
    int total = outl;
    ok = ok && EVP_EncryptFinal_ex(ctx, out.data() + total, &outl);
    total += outl;
    ok = ok && EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_GET_TAG, kDemTagLen,
                                   out.data() + plaintext.size());
    EVP_CIPHER_CTX_free(ctx);
    if (!ok || total != static_cast<int>(plaintext.size())) throw Error("dem seal failed");
    return out;
}

// Verifies the tag before returning any plaintext.
inline std::vector<unsigned char> dem_open(std::span<const unsigned char, 32> key,
                                           std::span<const unsigned char, kDemNonceLen> nonce,
                                           std::span<const unsigned char> sealed) {
    if (sealed.size() < kDemTagLen) throw FormatError("dem payload shorter than tag");
    std::size_t ctlen = sealed.size() - kDemTagLen;
    std::vector<unsigned char> out(ctlen);
    std::vector<unsigned char> tag(sealed.begin() + ctlen, sealed.end());
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    if (!ctx) throw Error("cipher ctx alloc failed");
    int outl = 0;
    int ok = EVP_DecryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) &&
             EVP_DecryptUpdate(ctx, out.data(), &outl, sealed.data(), static_cast<int>(ctlen)) &&
             EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_SET_TAG, kDemTagLen, tag.data());
    int total = outl;
    int fin = ok ? EVP_DecryptFinal_ex(ctx, out.data() + total, &outl) : 0;
    EVP_CIPHER_CTX_free(ctx);
    if (fin != 1) throw TagMismatch("authentication tag does not verify");
    return out;
}

}  // namespace nibe
