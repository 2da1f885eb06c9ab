#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "signcore.hpp"

namespace lineture {

class CodecError : public std::runtime_error {
public:
    enum class Kind { Malformed, Truncated };

    CodecError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}

    Kind kind;
};

namespace wire {

inline constexpr std::array<uint8_t, 4> magic{'L', 'N', 'T', 'R'};
inline constexpr uint8_t version = 0x01;
inline constexpr size_t header_size = 10;
inline constexpr size_t seed_size = 32;

enum class Kind : uint8_t { PrivateKey = 0x01, PublicKey = 0x02, Signature = 0x03 };

} // namespace wire

/// Exact serialized payload sizes (rows padded to whole bytes). For
/// byte-aligned widths these equal the closed forms 2lm^2q/8, lm/8, tqm^2/8
/// and 32t.
struct PayloadSizes {
    size_t share_bytes;   // private key share vector
    size_t public_bytes;  // public key blocks
    size_t word_bytes;    // signature words
    size_t session_bytes; // signature session keys
    size_t binder_bytes;  // signature binders

    size_t signature_total() const { return word_bytes + session_bytes + binder_bytes; }
};

inline PayloadSizes payload_sizes(const Params& p) {
    size_t m_row = (size_t(p.m) + 7) / 8;       // one m-bit row
    size_t block_row = (size_t(p.m) * p.q + 7) / 8; // one mq-bit row
    PayloadSizes s{};
    s.share_bytes = size_t(p.l) * 2 * p.m * block_row;
    s.public_bytes = s.share_bytes;
    s.word_bytes = size_t(p.l) * m_row;
    s.session_bytes = size_t(p.t) * p.m * p.q * m_row;
    s.binder_bytes = size_t(p.t) * 32;
    return s;
}

namespace detail {

inline void append_header(Bytes& out, wire::Kind kind, const Params& p) {
    out.insert(out.end(), wire::magic.begin(), wire::magic.end());
    out.push_back(wire::version);
    out.push_back(static_cast<uint8_t>(kind));
    out.push_back(static_cast<uint8_t>(p.m));
    out.push_back(static_cast<uint8_t>(p.l));
    out.push_back(static_cast<uint8_t>(p.q));
    out.push_back(static_cast<uint8_t>(p.t));
}

inline Params parse_header(std::span<const uint8_t> in, wire::Kind expected) {
    if (in.size() < wire::header_size) {
        throw CodecError(CodecError::Kind::Truncated, "codec: input shorter than header");
    }
    if (!std::equal(wire::magic.begin(), wire::magic.end(), in.begin())) {
        throw CodecError(CodecError::Kind::Malformed, "codec: bad magic");
    }
    if (in[4] != wire::version) {
        throw CodecError(CodecError::Kind::Malformed, "codec: unsupported version");
    }
    if (in[5] != static_cast<uint8_t>(expected)) {
        throw CodecError(CodecError::Kind::Malformed, "codec: unexpected payload kind");
    }
    Params p{in[6], in[7], in[8], in[9]};
    try {
        p.check();
    } catch (const std::exception& e) {
        throw CodecError(CodecError::Kind::Malformed, std::string("codec: bad parameters: ") + e.what());
    }
    return p;
}

inline void append_matrix(Bytes& out, const BitMatrix& m) {
    for (size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row_bytes(r);
        out.insert(out.end(), row.begin(), row.end());
    }
}

/// Cursor-based reader over the payload; length was validated up front.
struct Reader {
    std::span<const uint8_t> in;
    size_t pos = 0;

    std::span<const uint8_t> take(size_t n) {
        auto s = in.subspan(pos, n);
        pos += n;
        return s;
    }

    BitMatrix matrix(size_t rows, size_t cols) {
        BitMatrix m(rows, cols);
        for (size_t r = 0; r < rows; ++r) {
            m.load_row_bytes(r, take(m.row_stride()));
        }
        return m;
    }
};

inline void check_length(std::span<const uint8_t> in, size_t expected_payload) {
    if (in.size() != wire::header_size + expected_payload) {
        throw CodecError(CodecError::Kind::Truncated, "codec: payload length mismatch");
    }
}

} // namespace detail

/// Private key wire form: header, 32-byte master seed, then the share blocks
/// row-major. The seed alone reproduces the key; the shares are stored anyway
/// so decoding can cross-check them against the re-derivation.
inline Bytes encode_private(const PrivateKey& sk) {
    Bytes out;
    const PayloadSizes sz = payload_sizes(sk.params);
    out.reserve(wire::header_size + wire::seed_size + sz.share_bytes);
    detail::append_header(out, wire::Kind::PrivateKey, sk.params);
    out.insert(out.end(), sk.seed.begin(), sk.seed.end());
    for (const auto& share : sk.shares) {
        detail::append_matrix(out, share);
    }
    return out;
}

inline PrivateKey decode_private(std::span<const uint8_t> in) {
    Params p = detail::parse_header(in, wire::Kind::PrivateKey);
    detail::check_length(in, wire::seed_size + payload_sizes(p).share_bytes);
    std::array<uint8_t, 32> seed{};
    std::copy_n(in.begin() + wire::header_size, wire::seed_size, seed.begin());
    PrivateKey sk = generate_private_key(seed, p);
    Bytes reencoded = encode_private(sk);
    if (!std::equal(reencoded.begin(), reencoded.end(), in.begin())) {
        throw CodecError(CodecError::Kind::Malformed,
                         "codec: share payload does not match seed derivation");
    }
    return sk;
}

inline Bytes encode_public(const PublicKey& pk) {
    Bytes out;
    out.reserve(wire::header_size + payload_sizes(pk.params).public_bytes);
    detail::append_header(out, wire::Kind::PublicKey, pk.params);
    for (const auto& block : pk.blocks) {
        detail::append_matrix(out, block);
    }
    return out;
}

inline PublicKey decode_public(std::span<const uint8_t> in) {
    Params p = detail::parse_header(in, wire::Kind::PublicKey);
    detail::check_length(in, payload_sizes(p).public_bytes);
    detail::Reader rd{in.subspan(wire::header_size)};
    PublicKey pk;
    pk.params = p;
    pk.blocks.reserve(p.l);
    for (unsigned i = 0; i < p.l; ++i) {
        pk.blocks.push_back(rd.matrix(2 * size_t(p.m), size_t(p.m) * p.q));
    }
    return pk;
}

/// Signature wire form: header, the l words (each ceil(m/8) bytes,
/// MSB-first), the t session keys row-major, then the t binders.
inline Bytes encode_signature(const Params& p, const Signature& sig) {
    const PayloadSizes sz = payload_sizes(p);
    Bytes out;
    out.reserve(wire::header_size + sz.signature_total());
    detail::append_header(out, wire::Kind::Signature, p);
    size_t m_row = (size_t(p.m) + 7) / 8;
    for (uint16_t w : sig.words) {
        uint32_t shifted = uint32_t(w) << (m_row * 8 - p.m);
        for (size_t b = 0; b < m_row; ++b) {
            out.push_back(static_cast<uint8_t>(shifted >> ((m_row - 1 - b) * 8)));
        }
    }
    for (const auto& key : sig.session_keys) {
        detail::append_matrix(out, key);
    }
    for (const auto& binder : sig.binders) {
        out.insert(out.end(), binder.begin(), binder.end());
    }
    return out;
}

inline std::pair<Params, Signature> decode_signature(std::span<const uint8_t> in) {
    Params p = detail::parse_header(in, wire::Kind::Signature);
    const PayloadSizes sz = payload_sizes(p);
    detail::check_length(in, sz.signature_total());
    detail::Reader rd{in.subspan(wire::header_size)};
    Signature sig;
    size_t m_row = (size_t(p.m) + 7) / 8;
    sig.words.resize(p.l);
    for (unsigned i = 0; i < p.l; ++i) {
        auto bytes = rd.take(m_row);
        uint32_t w = 0;
        for (uint8_t b : bytes) {
            w = w << 8 | b;
        }
        w >>= m_row * 8 - p.m;
        sig.words[i] = static_cast<uint16_t>(w);
    }
    sig.session_keys.reserve(p.t);
    for (unsigned v = 0; v < p.t; ++v) {
        sig.session_keys.push_back(rd.matrix(size_t(p.m) * p.q, p.m));
    }
    sig.binders.resize(p.t);
    for (unsigned v = 0; v < p.t; ++v) {
        auto bytes = rd.take(32);
        std::copy(bytes.begin(), bytes.end(), sig.binders[v].begin());
    }
    return {p, std::move(sig)};
}

struct Preset {
    std::string_view name;
    Params params;
};

inline constexpr std::array<Preset, 3> presets{{
    {"lineture128", {8, 8, 3, 3}},
    {"lineture192", {8, 8, 3, 4}},
    {"lineture256", {8, 8, 3, 5}},
}};

inline std::optional<Params> find_preset(std::string_view name) {
    for (const auto& pr : presets) {
        if (pr.name == name) {
            return pr.params;
        }
    }
    return std::nullopt;
}

} // namespace lineture
