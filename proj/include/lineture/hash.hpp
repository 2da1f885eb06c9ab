#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

namespace lineture {

using Bytes = std::vector<uint8_t>;
using Hash256 = std::array<uint8_t, 32>;

inline std::span<const uint8_t> as_bytes(std::string_view s) {
    return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

namespace detail {

inline void evp_digest(const EVP_MD* md, std::span<const std::span<const uint8_t>> parts,
                       uint8_t* out, size_t out_len, bool xof) {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) {
        throw std::runtime_error("hash: EVP_MD_CTX_new failed");
    }
    bool ok = EVP_DigestInit_ex(ctx, md, nullptr) == 1;
    for (auto part : parts) {
        if (!part.empty()) {
            ok = ok && EVP_DigestUpdate(ctx, part.data(), part.size()) == 1;
        }
    }
    if (xof) {
        ok = ok && EVP_DigestFinalXOF(ctx, out, out_len) == 1;
    } else {
        unsigned int n = 0;
        ok = ok && EVP_DigestFinal_ex(ctx, out, &n) == 1 && n == out_len;
    }
    EVP_MD_CTX_free(ctx);
    if (!ok) {
        throw std::runtime_error("hash: EVP digest failed");
    }
}

} // namespace detail

inline Hash256 sha3_256(std::initializer_list<std::span<const uint8_t>> parts) {
    Hash256 out{};
    std::vector<std::span<const uint8_t>> v(parts.begin(), parts.end());
    detail::evp_digest(EVP_sha3_256(), v, out.data(), out.size(), false);
    return out;
}

inline Hash256 sha3_256(std::span<const uint8_t> data) {
    return sha3_256({data});
}

/// SHAKE-256 extendable-output stream. Absorb any number of parts, then read
/// bytes in arbitrary increments; output equals the one-shot XOF of the
/// concatenated input. Reading locks the input.
class Shake256 {
public:
    Shake256() = default;

    void absorb(std::span<const uint8_t> data) {
        if (locked_) {
            throw std::logic_error("Shake256: absorb after read");
        }
        input_.insert(input_.end(), data.begin(), data.end());
    }

    void absorb(std::string_view text) { absorb(as_bytes(text)); }

    void read(std::span<uint8_t> out) {
        locked_ = true;
        size_t need = cursor_ + out.size();
        if (cache_.size() < need) {
            // OpenSSL 3.0 has no incremental squeeze; re-derive a longer
            // prefix (geometric growth keeps total work linear).
            size_t grow = std::max<size_t>({need, cache_.size() * 2, 136});
            cache_.resize(grow);
            std::array<std::span<const uint8_t>, 1> parts{std::span<const uint8_t>(input_)};
            detail::evp_digest(EVP_shake256(), parts, cache_.data(), cache_.size(), true);
        }
        std::copy_n(cache_.begin() + static_cast<ptrdiff_t>(cursor_), out.size(), out.begin());
        cursor_ = need;
    }

    Bytes read(size_t n) {
        Bytes out(n);
        read(std::span<uint8_t>(out));
        return out;
    }

private:
    Bytes input_;
    Bytes cache_;
    size_t cursor_ = 0;
    bool locked_ = false;
};

inline std::string to_hex(std::span<const uint8_t> data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2);
    for (uint8_t b : data) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0x0f]);
    }
    return s;
}

inline Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) {
        throw std::invalid_argument("from_hex: odd-length input");
    }
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            throw std::invalid_argument("from_hex: invalid digit");
        }
        out[i] = static_cast<uint8_t>(hi << 4 | lo);
    }
    return out;
}

} // namespace lineture
