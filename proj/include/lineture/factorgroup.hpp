#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bitlin.hpp"

namespace lineture {

/// F(2^m) with a fixed reduction polynomial per supported width. Bit i of a
/// word is the coefficient of x^i, so the leftmost matrix column carries the
/// top coefficient.
struct FieldSpec {
    unsigned m = 0;
    uint32_t modulus = 0;

    static bool is_irreducible(uint32_t poly) {
        auto degree = [](uint32_t v) { return unsigned(std::bit_width(v)) - 1; };
        if (poly == 0 || degree(poly) < 1) {
            return false;
        }
        auto poly_mod = [&degree](uint32_t a, uint32_t b) {
            while (a != 0 && degree(a) >= degree(b)) {
                a ^= b << (degree(a) - degree(b));
            }
            return a;
        };
        for (unsigned d = 1; d <= degree(poly) / 2; ++d) {
            for (uint32_t f = 1u << d; f < (2u << d); ++f) {
                if (poly_mod(poly, f) == 0) {
                    return false;
                }
            }
        }
        return true;
    }

    /// Supported widths are 2, 4, 6, 8 and 16; anything else throws.
    static const FieldSpec& for_width(unsigned m) {
        static const std::vector<FieldSpec> table = [] {
            std::vector<FieldSpec> t = {
                {2, 0b111},                // x^2 + x + 1
                {4, 0b10011},              // x^4 + x + 1
                {6, 0b1000011},            // x^6 + x + 1
                {8, 0b100011011},          // x^8 + x^4 + x^3 + x + 1
                {16, 0b10001000000001011}, // x^16 + x^12 + x^3 + x + 1
            };
            for (const auto& f : t) {
                if (!is_irreducible(f.modulus)) {
                    throw std::logic_error("FieldSpec: reducible modulus in table");
                }
            }
            return t;
        }();
        for (const auto& f : table) {
            if (f.m == m) {
                return f;
            }
        }
        throw std::invalid_argument("FieldSpec: unsupported word width");
    }

    uint32_t mul(uint32_t a, uint32_t b) const {
        uint32_t acc = 0;
        while (b != 0) {
            if (b & 1) {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if (a & (1u << m)) {
                a ^= modulus;
            }
        }
        return acc;
    }

    uint32_t pow(uint32_t a, uint64_t e) const {
        uint32_t acc = 1;
        while (e != 0) {
            if (e & 1) {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        return acc;
    }

    uint32_t inv(uint32_t a) const {
        if (a == 0) {
            throw std::domain_error("FieldSpec::inv: zero has no inverse");
        }
        return pow(a, (uint64_t(1) << m) - 2);
    }
};

/// Factorization of the 2-group of order 2^m: m blocks of two basis rows,
/// stored as a 2m x width matrix (rows 2k and 2k+1 form block k). Evaluating
/// at an m-bit word selects one row per block by the matching input bit and
/// XORs the selection. Width is m for substitutions and mq when a key block
/// is viewed the same way.
class Factorization {
public:
    Factorization(unsigned m, BitMatrix mat) : m_(m), mat_(std::move(mat)) {
        if (m_ == 0 || mat_.rows() != 2 * size_t(m_)) {
            throw std::invalid_argument("Factorization: matrix must have 2m rows");
        }
        if (mat_.cols() > 64) {
            throw std::length_error("Factorization: width above 64");
        }
    }

    /// The trivial factorization: block k is [0; e_k], so eval is the
    /// identity on m-bit words.
    static Factorization simple(unsigned m) {
        BitMatrix mat(2 * size_t(m), m);
        for (unsigned k = 0; k < m; ++k) {
            mat.set(2 * k + 1, k, true);
        }
        return Factorization(m, std::move(mat));
    }

    unsigned m() const { return m_; }
    unsigned width() const { return static_cast<unsigned>(mat_.cols()); }
    const BitMatrix& matrix() const { return mat_; }

    uint64_t eval(uint64_t x) const {
        uint64_t acc = 0;
        for (unsigned k = 0; k < m_; ++k) {
            unsigned bit = (x >> (m_ - 1 - k)) & 1;
            acc ^= mat_.row_word(2 * k + bit);
        }
        return acc;
    }

private:
    unsigned m_ = 0;
    BitMatrix mat_;
};

/// The secret transformation chain hiding a factorization, applied in order:
/// per-block row swaps, block permutation, additive per-block masks, field
/// scaling, a right matrix factor, and (optionally) per-block row offsets
/// broadcast onto both rows.
struct MaskingParams {
    std::vector<uint8_t> row_swaps;   // one flag per block
    std::vector<unsigned> block_perm; // target block k takes source block_perm[k]
    BitMatrix additive_masks;         // m x m, row j added to both rows of block j
    uint32_t field_scale = 1;         // nonzero element of F(2^m)
    BitMatrix right_factor;           // m x m nonsingular
    BitMatrix row_offsets;            // m x m, row j added to both rows of block j

    static MaskingParams identity(unsigned m) {
        MaskingParams p;
        p.row_swaps.assign(m, 0);
        p.block_perm.resize(m);
        for (unsigned k = 0; k < m; ++k) {
            p.block_perm[k] = k;
        }
        p.additive_masks = BitMatrix(m, m);
        p.field_scale = 1;
        p.right_factor = BitMatrix::identity(m);
        p.row_offsets = BitMatrix(m, m);
        return p;
    }

    /// Deterministic draw: swap flags, a Fisher-Yates block permutation,
    /// additive masks, a nonzero field element, a nonsingular right factor
    /// and (optionally) row offsets, in that order.
    static MaskingParams sample(ByteStream& stream, unsigned m, bool with_offsets) {
        MaskingParams p;
        BitMatrix flags = sample_matrix(stream, 1, m);
        p.row_swaps.resize(m);
        for (unsigned k = 0; k < m; ++k) {
            p.row_swaps[k] = flags.get(0, k);
        }
        p.block_perm.resize(m);
        for (unsigned k = 0; k < m; ++k) {
            p.block_perm[k] = k;
        }
        for (unsigned k = m; k > 1; --k) {
            unsigned j = stream.next_below(k);
            std::swap(p.block_perm[k - 1], p.block_perm[j]);
        }
        p.additive_masks = sample_matrix(stream, m, m);
        do {
            p.field_scale = static_cast<uint32_t>(sample_matrix(stream, 1, m).row_word(0));
        } while (p.field_scale == 0);
        p.right_factor = sample_matrix(stream, m, m, true);
        p.row_offsets = with_offsets ? sample_matrix(stream, m, m) : BitMatrix(m, m);
        return p;
    }

    void validate(unsigned m) const {
        if (row_swaps.size() != m || block_perm.size() != m) {
            throw std::invalid_argument("MaskingParams: wrong block count");
        }
        std::vector<uint8_t> seen(m, 0);
        for (unsigned idx : block_perm) {
            if (idx >= m || seen[idx]) {
                throw std::invalid_argument("MaskingParams: block_perm is not a permutation");
            }
            seen[idx] = 1;
        }
        if (field_scale == 0 || field_scale >= (1u << m)) {
            throw std::invalid_argument("MaskingParams: field_scale out of range");
        }
        auto square_m = [m](const BitMatrix& mat) {
            return mat.rows() == m && mat.cols() == m;
        };
        if (!square_m(additive_masks) || !square_m(right_factor) || !square_m(row_offsets)) {
            throw std::invalid_argument("MaskingParams: matrix shape mismatch");
        }
        if (!right_factor.inverted().has_value()) {
            throw std::invalid_argument("MaskingParams: right_factor is singular");
        }
    }
};

/// Swaps and block permutation only — the bookkeeping view the structural
/// inverse reads bits from.
inline Factorization swap_permute_base(const Factorization& f, const MaskingParams& p) {
    unsigned m = f.m();
    if (f.width() != m) {
        throw std::invalid_argument("swap_permute_base: width must equal word width");
    }
    BitMatrix g(2 * size_t(m), m);
    for (unsigned k = 0; k < m; ++k) {
        unsigned src = p.block_perm[k];
        unsigned sw = p.row_swaps[src] ? 1 : 0;
        for (unsigned b = 0; b < 2; ++b) {
            g.xor_row(2 * k + b, f.matrix(), 2 * src + (b ^ sw));
        }
    }
    return Factorization(m, std::move(g));
}

inline Factorization mask(const Factorization& f, const MaskingParams& p, bool with_offsets) {
    unsigned m = f.m();
    p.validate(m);
    const FieldSpec& field = FieldSpec::for_width(m);
    BitMatrix g = swap_permute_base(f, p).matrix();
    for (unsigned k = 0; k < m; ++k) {
        for (unsigned b = 0; b < 2; ++b) {
            g.xor_row(2 * k + b, p.additive_masks, k);
        }
    }
    for (size_t r = 0; r < g.rows(); ++r) {
        uint64_t w = field.mul(static_cast<uint32_t>(g.row_word(r)), p.field_scale);
        g.set_row_word(r, row_times_matrix(w, m, p.right_factor));
    }
    if (with_offsets) {
        for (unsigned k = 0; k < m; ++k) {
            for (unsigned b = 0; b < 2; ++b) {
                g.xor_row(2 * k + b, p.row_offsets, k);
            }
        }
    }
    return Factorization(m, std::move(g));
}

/// Structural inverse of the masked evaluation: peel the row offsets, the
/// right factor, the field scale and the additive masks off y, then read one
/// input bit per block of the swap/permute base (each block's rows differ in a
/// single, block-distinct coordinate). Empty when y has no preimage.
inline std::optional<uint64_t> invert_eval(const MaskingParams& p, const Factorization& base,
                                           uint64_t y, bool with_offsets) {
    unsigned m = base.m();
    p.validate(m);
    const FieldSpec& field = FieldSpec::for_width(m);
    if (with_offsets) {
        y ^= xor_rows(p.row_offsets);
    }
    uint64_t y3 = row_times_matrix(y, m, *p.right_factor.inverted());
    y3 = field.mul(static_cast<uint32_t>(y3), field.inv(p.field_scale));
    y3 ^= xor_rows(p.additive_masks);

    uint64_t x = 0;
    for (unsigned k = 0; k < m; ++k) {
        uint64_t r0 = base.matrix().row_word(2 * k);
        uint64_t r1 = base.matrix().row_word(2 * k + 1);
        uint64_t d = r0 ^ r1;
        if (std::popcount(d) != 1) {
            return std::nullopt;
        }
        if ((r1 & d) == (y3 & d)) {
            x |= uint64_t(1) << (m - 1 - k);
        }
    }
    if (base.eval(x) != y3) {
        return std::nullopt;
    }
    return x;
}

/// Full evaluation table of a width-m factorization, with the inverse table
/// when the map is a permutation. Capped at m <= 16.
struct PermutationTable {
    std::vector<uint32_t> forward;
    std::vector<uint32_t> inverse;
    bool bijective = false;
};

inline PermutationTable permutation_table(const Factorization& f) {
    unsigned m = f.m();
    if (f.width() != m) {
        throw std::invalid_argument("permutation_table: width must equal word width");
    }
    if (m > 16) {
        throw std::length_error("permutation_table: word width above table capacity (16)");
    }
    size_t n = size_t(1) << m;
    PermutationTable t;
    t.forward.resize(n);
    std::vector<uint8_t> seen(n, 0);
    t.bijective = true;
    for (size_t x = 0; x < n; ++x) {
        uint64_t y = f.eval(x);
        t.forward[x] = static_cast<uint32_t>(y);
        if (seen[y]) {
            t.bijective = false;
        }
        seen[y] = 1;
    }
    if (t.bijective) {
        t.inverse.resize(n);
        for (size_t x = 0; x < n; ++x) {
            t.inverse[t.forward[x]] = static_cast<uint32_t>(x);
        }
    }
    return t;
}

} // namespace lineture
