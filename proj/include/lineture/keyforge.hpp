#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "factorgroup.hpp"

namespace lineture {

/// General parameters: word width m, digest word count l, session block count
/// q, session key count t.
struct Params {
    unsigned m = 8;
    unsigned l = 8;
    unsigned q = 3;
    unsigned t = 3;

    friend bool operator==(const Params&, const Params&) = default;

    /// Shape requirements for building keys at all. t plays no part in key
    /// material, so it is not constrained here.
    void check_structural() const {
        FieldSpec::for_width(m); // throws for unsupported widths
        if (q < 3) {
            throw std::invalid_argument("Params: q must be at least 3 (no middle session blocks otherwise)");
        }
        if (l < 1 || l > 255 || q > 255 || t > 255) {
            throw std::invalid_argument("Params: l, q, t must fit one byte and l >= 1");
        }
        if (m * q > 64) {
            throw std::length_error("Params: m*q above the 64-bit word capacity");
        }
    }

    /// Full parameter contract, enforced at the public API and wire boundary:
    /// structural shape plus t >= 2 and the identity-check reliability bound
    /// 2l >= tq.
    void check() const {
        check_structural();
        if (t < 2) {
            throw std::invalid_argument("Params: t must be at least 2");
        }
        if (2 * l < t * q) {
            throw std::invalid_argument("Params: l must be at least t*q/2");
        }
    }
};

/// Per-object deterministic stream: SHAKE-256 over the domain tag, the object
/// name, its one-byte indices, and the 32-byte master seed.
inline ByteStream subseed_stream(std::span<const uint8_t, 32> seed, std::string_view name,
                                 std::initializer_list<unsigned> indices = {}) {
    Shake256 x;
    x.absorb("LNTR-SEED-");
    x.absorb(name);
    for (unsigned idx : indices) {
        uint8_t b = static_cast<uint8_t>(idx);
        x.absorb({&b, 1});
    }
    x.absorb(std::span<const uint8_t>(seed));
    return ByteStream(std::move(x));
}

/// Long-term master matrix: a nonsingular core of side m(q-1) embedded block
/// diagonally with an m x m identity corner. The inverse shares the shape, so
/// it is cached at generation.
struct MasterMatrix {
    BitMatrix matrix;  // mq x mq
    BitMatrix core;    // m(q-1) x m(q-1), nonsingular
    BitMatrix inverse; // mq x mq
};

inline MasterMatrix generate_master(ByteStream& stream, unsigned m, unsigned q) {
    if (m < 1 || q < 2) {
        throw std::invalid_argument("generate_master: need m >= 1 and q >= 2");
    }
    size_t side = size_t(m) * (q - 1);
    MasterMatrix out;
    out.core = sample_matrix(stream, side, side, true);
    auto embed = [&](const BitMatrix& top_left) {
        BitMatrix full = BitMatrix::identity(size_t(m) * q);
        for (size_t r = 0; r < side; ++r) {
            for (size_t c = 0; c < side; ++c) {
                full.set(r, c, top_left.get(r, c));
            }
        }
        return full;
    };
    out.matrix = embed(out.core);
    out.inverse = embed(*out.core.inverted());
    return out;
}

/// Duplicate each row of an m x m matrix onto a row pair: rows 2k and 2k+1 of
/// the result both equal row k of the input.
inline BitMatrix row_doubled(const BitMatrix& mat) {
    BitMatrix out(2 * mat.rows(), mat.cols());
    for (size_t k = 0; k < mat.rows(); ++k) {
        out.load_row_bytes(2 * k, mat.row_bytes(k));
        out.load_row_bytes(2 * k + 1, mat.row_bytes(k));
    }
    return out;
}

/// Everything behind the private share vector. Each share i combines a
/// bijective lead factor, a per-share row offset, and q-2 random mix factors;
/// the bind/scale matrices are shared across shares and later reproduce the
/// middle session blocks.
struct ShareParams {
    std::vector<MaskingParams> lead_masks;   // [l] recipe behind each lead factor
    std::vector<BitMatrix> lead;             // [l] 2m x m, bijective as a factorization
    std::vector<std::vector<BitMatrix>> mix; // [l][q-2] 2m x m, uniform random
    std::vector<BitMatrix> offsets;          // [l] m x m, broadcast onto row pairs
    std::vector<BitMatrix> lead_bind;        // [q-2] m x m
    std::vector<BitMatrix> tail_bind;        // [q-2] m x m
    std::vector<BitMatrix> mid_scale;        // [q-2] m x m, nonsingular
    std::vector<BitMatrix> mid_scale_inv;    // [q-2]
};

/// Assemble one share from its factors: the lead column absorbs the offset
/// and the lead-bound mixes, middle columns are scaled mixes, and the tail
/// column is the tail-bound mix sum.
inline BitMatrix assemble_share(const ShareParams& sp, const Params& p, size_t i) {
    unsigned mids = p.q - 2;
    std::vector<BitMatrix> cols;
    cols.reserve(p.q);
    BitMatrix first = sp.lead[i] + row_doubled(sp.offsets[i]);
    for (unsigned j = 0; j < mids; ++j) {
        first = first + multiply(sp.mix[i][j], sp.lead_bind[j]);
    }
    cols.push_back(std::move(first));
    for (unsigned j = 0; j < mids; ++j) {
        cols.push_back(multiply(sp.mix[i][j], sp.mid_scale[j]));
    }
    BitMatrix last(2 * size_t(p.m), p.m);
    for (unsigned j = 0; j < mids; ++j) {
        last = last + multiply(sp.mix[i][j], sp.tail_bind[j]);
    }
    cols.push_back(std::move(last));
    return hconcat(cols);
}

inline std::pair<ShareParams, std::vector<BitMatrix>> generate_shares(
    std::span<const uint8_t, 32> seed, const Params& p) {
    p.check_structural();
    unsigned m = p.m;
    ShareParams sp;
    sp.lead_masks.reserve(p.l);
    sp.lead.reserve(p.l);
    sp.mix.resize(p.l);
    sp.offsets.reserve(p.l);
    Factorization plain = Factorization::simple(m);
    for (unsigned i = 1; i <= p.l; ++i) {
        ByteStream ms = subseed_stream(seed, "R", {i, 1});
        MaskingParams mp = MaskingParams::sample(ms, m, false);
        sp.lead.push_back(mask(plain, mp, false).matrix());
        sp.lead_masks.push_back(std::move(mp));
        for (unsigned j = 2; j <= p.q - 1; ++j) {
            ByteStream rs = subseed_stream(seed, "R", {i, j});
            sp.mix[i - 1].push_back(sample_matrix(rs, 2 * size_t(m), m));
        }
        ByteStream ts = subseed_stream(seed, "tau", {i});
        sp.offsets.push_back(sample_matrix(ts, m, m));
    }
    for (unsigned j = 2; j <= p.q - 1; ++j) {
        ByteStream ds = subseed_stream(seed, "delta", {j});
        sp.lead_bind.push_back(sample_matrix(ds, m, m));
        ByteStream ls = subseed_stream(seed, "lambda", {j});
        sp.tail_bind.push_back(sample_matrix(ls, m, m));
        ByteStream gs = subseed_stream(seed, "gamma", {j});
        BitMatrix g = sample_matrix(gs, m, m, true);
        sp.mid_scale_inv.push_back(*g.inverted());
        sp.mid_scale.push_back(std::move(g));
    }
    std::vector<BitMatrix> shares;
    shares.reserve(p.l);
    for (size_t i = 0; i < p.l; ++i) {
        shares.push_back(assemble_share(sp, p, i));
    }
    return {std::move(sp), std::move(shares)};
}

struct PrivateKey {
    Params params;
    std::array<uint8_t, 32> seed{};
    MasterMatrix master;
    ShareParams factors;
    std::vector<BitMatrix> shares; // [l] 2m x mq
};

struct PublicKey {
    Params params;
    std::vector<BitMatrix> blocks; // [l] 2m x mq
};

inline PrivateKey generate_private_key(std::span<const uint8_t, 32> seed, const Params& p) {
    p.check_structural();
    PrivateKey sk;
    sk.params = p;
    std::copy(seed.begin(), seed.end(), sk.seed.begin());
    ByteStream os = subseed_stream(seed, "omega1");
    sk.master = generate_master(os, p.m, p.q);
    auto [factors, shares] = generate_shares(seed, p);
    sk.factors = std::move(factors);
    sk.shares = std::move(shares);
    return sk;
}

inline PublicKey derive_public_key(const PrivateKey& sk) {
    PublicKey pk;
    pk.params = sk.params;
    pk.blocks.reserve(sk.shares.size());
    for (const auto& share : sk.shares) {
        pk.blocks.push_back(multiply(share, sk.master.matrix));
    }
    return pk;
}

} // namespace lineture
