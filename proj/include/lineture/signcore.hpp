#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "keyforge.hpp"

namespace lineture {

/// Message digest as l words of m bits: the tagged SHAKE-256 output read as a
/// contiguous MSB-first bit string.
inline std::vector<uint16_t> derive_words(std::span<const uint8_t> msg, const Params& p) {
    size_t nbytes = (size_t(p.l) * p.m + 7) / 8;
    Shake256 x;
    x.absorb("LNTR-MSG");
    x.absorb(msg);
    Bytes buf = x.read(nbytes);
    std::vector<uint16_t> words(p.l);
    size_t bitpos = 0;
    for (unsigned i = 0; i < p.l; ++i) {
        uint32_t w = 0;
        for (unsigned b = 0; b < p.m; ++b, ++bitpos) {
            w = w << 1 | ((buf[bitpos >> 3] >> (7 - (bitpos & 7))) & 1);
        }
        words[i] = static_cast<uint16_t>(w);
    }
    return words;
}

/// Session block roles: the lead block is bound to the identity hash and must
/// be nonsingular; the tail block is bound to a per-key binder hash.
enum class BlockRole { Lead, Tail };

inline BitMatrix derive_block(std::span<const uint8_t, 32> h, BlockRole role, unsigned m) {
    ByteStream stream =
        ByteStream::seeded(role == BlockRole::Lead ? "LNTR-W1" : "LNTR-WQ", h);
    return sample_matrix(stream, m, m, role == BlockRole::Lead);
}

/// A 32-byte binder and its message binding h = SHA3-256(binder || msg).
struct HashBinding {
    Hash256 binder{};
    Hash256 digest{};
};

inline HashBinding bind_message(std::span<const uint8_t, 32> binder,
                                std::span<const uint8_t> msg) {
    HashBinding hb;
    std::copy(binder.begin(), binder.end(), hb.binder.begin());
    hb.digest = sha3_256({binder, msg});
    return hb;
}

/// Per-signature session matrix: q blocks of m x m. Block 0 is the lead
/// (identity-bound), block q-1 the tail (binder-bound); middle blocks are the
/// unique ones satisfying mid_scale_j * block_j = lead_bind_j * lead +
/// tail_bind_j * tail, which is what makes the shared secret independent of
/// the tail.
struct SessionMatrix {
    std::vector<BitMatrix> blocks;
    Hash256 lead_hash{};
    Hash256 tail_hash{};
};

inline SessionMatrix build_session(const Hash256& tail_hash, const Hash256& lead_hash,
                                   const ShareParams& sp, const Params& p) {
    SessionMatrix e;
    e.lead_hash = lead_hash;
    e.tail_hash = tail_hash;
    e.blocks.resize(p.q);
    e.blocks[0] = derive_block(lead_hash, BlockRole::Lead, p.m);
    e.blocks[p.q - 1] = derive_block(tail_hash, BlockRole::Tail, p.m);
    for (unsigned j = 1; j + 1 < p.q; ++j) {
        e.blocks[j] = multiply(sp.mid_scale_inv[j - 1],
                               multiply(sp.lead_bind[j - 1], e.blocks[0]) +
                                   multiply(sp.tail_bind[j - 1], e.blocks[p.q - 1]));
    }
    return e;
}

/// Vertical stack of the session blocks, mq x m. This is the form every
/// secret reconstruction multiplies by.
inline BitMatrix stack_blocks(const SessionMatrix& e) {
    return vstack(e.blocks);
}

/// Public per-signature key: the master inverse applied to the stacked
/// session matrix. Its bottom m rows always equal the tail block, which is
/// what verification checks against the binder hash.
struct SessionKey {
    BitMatrix matrix; // mq x m

    BitMatrix tail_block(unsigned m) const {
        return matrix.submatrix(matrix.rows() - m, 0, m, m);
    }
};

inline SessionKey derive_session_key(const MasterMatrix& master, const SessionMatrix& e) {
    return {multiply(master.inverse, stack_blocks(e))};
}

/// The shared secret: l substitution blocks with their inverse tables. Empty
/// when any block fails to be a permutation (never for honest inputs with a
/// nonsingular lead block).
struct SharedSecret {
    std::vector<BitMatrix> blocks; // [l] 2m x m
    std::vector<PermutationTable> tables;
};

inline std::optional<SharedSecret> make_shared_secret(std::vector<BitMatrix> blocks,
                                                      unsigned m) {
    SharedSecret s;
    s.tables.reserve(blocks.size());
    for (const auto& b : blocks) {
        PermutationTable t = permutation_table(Factorization(m, b));
        if (!t.bijective) {
            return std::nullopt;
        }
        s.tables.push_back(std::move(t));
    }
    s.blocks = std::move(blocks);
    return s;
}

inline std::optional<SharedSecret> shared_secret_from_private(
    const std::vector<BitMatrix>& shares, const SessionMatrix& e, unsigned m) {
    BitMatrix stacked = stack_blocks(e);
    std::vector<BitMatrix> blocks;
    blocks.reserve(shares.size());
    for (const auto& share : shares) {
        blocks.push_back(multiply(share, stacked));
    }
    return make_shared_secret(std::move(blocks), m);
}

inline std::optional<SharedSecret> shared_secret_from_public(
    const std::vector<BitMatrix>& pub_blocks, const SessionKey& key, unsigned m) {
    std::vector<BitMatrix> blocks;
    blocks.reserve(pub_blocks.size());
    for (const auto& b : pub_blocks) {
        blocks.push_back(multiply(b, key.matrix));
    }
    return make_shared_secret(std::move(blocks), m);
}

struct Signature {
    std::vector<uint16_t> words;          // [l] inverse-substitution words, m bits each
    std::vector<BitMatrix> session_keys;  // [t] mq x m
    std::vector<Hash256> binders;         // [t]
};

/// Sign: draw the identity binder and t session binders from the rng stream
/// (32 bytes each, identity first), build one session key per binder, invert
/// the shared secret of the first session on the digest words.
inline Signature sign(const PrivateKey& sk, std::span<const uint8_t> msg, ByteStream& rng) {
    const Params& p = sk.params;
    Hash256 id_binder{};
    rng.fill(id_binder);
    HashBinding id = bind_message(id_binder, msg);

    Signature sig;
    sig.binders.resize(p.t);
    sig.session_keys.reserve(p.t);
    std::optional<SessionMatrix> first_session;
    for (unsigned v = 0; v < p.t; ++v) {
        rng.fill(sig.binders[v]);
        HashBinding hb = bind_message(sig.binders[v], msg);
        SessionMatrix e = build_session(hb.digest, id.digest, sk.factors, p);
        sig.session_keys.push_back(derive_session_key(sk.master, e).matrix);
        if (v == 0) {
            first_session = std::move(e);
        }
    }
    auto secret = shared_secret_from_private(sk.shares, *first_session, p.m);
    if (!secret) {
        throw std::logic_error("sign: shared secret lost bijectivity (corrupted key)");
    }
    std::vector<uint16_t> y = derive_words(msg, p);
    sig.words.resize(p.l);
    for (unsigned i = 0; i < p.l; ++i) {
        sig.words[i] = static_cast<uint16_t>(secret->tables[i].inverse[y[i]]);
    }
    return sig;
}

enum class VerifyStatus { Accept, BlockMismatch, WordMismatch, Malformed };

inline std::string_view to_string(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::Accept: return "accept";
        case VerifyStatus::BlockMismatch: return "reject: session tail block mismatch";
        case VerifyStatus::WordMismatch: return "reject: digest word mismatch";
        case VerifyStatus::Malformed: return "malformed signature";
    }
    return "unknown";
}

/// Verify: every session key's bottom block must re-derive from its binder,
/// and every session key must map the public evaluation of the signature
/// words back to the message digest.
inline VerifyStatus verify(const PublicKey& pk, std::span<const uint8_t> msg,
                           const Signature& sig) {
    const Params& p = pk.params;
    size_t mq = size_t(p.m) * p.q;
    if (sig.words.size() != p.l || sig.session_keys.size() != p.t ||
        sig.binders.size() != p.t) {
        return VerifyStatus::Malformed;
    }
    for (uint16_t w : sig.words) {
        if (w >= (1u << p.m)) {
            return VerifyStatus::Malformed;
        }
    }
    for (const auto& key : sig.session_keys) {
        if (key.rows() != mq || key.cols() != p.m) {
            return VerifyStatus::Malformed;
        }
    }
    for (unsigned v = 0; v < p.t; ++v) {
        Hash256 h = sha3_256({sig.binders[v], msg});
        BitMatrix tail = derive_block(h, BlockRole::Tail, p.m);
        if (sig.session_keys[v].submatrix(mq - p.m, 0, p.m, p.m) != tail) {
            return VerifyStatus::BlockMismatch;
        }
    }
    std::vector<uint16_t> y = derive_words(msg, p);
    for (unsigned i = 0; i < p.l; ++i) {
        uint64_t u = Factorization(p.m, pk.blocks[i]).eval(sig.words[i]);
        for (unsigned v = 0; v < p.t; ++v) {
            if (row_times_matrix(u, mq, sig.session_keys[v]) != y[i]) {
                return VerifyStatus::WordMismatch;
            }
        }
    }
    return VerifyStatus::Accept;
}

} // namespace lineture
