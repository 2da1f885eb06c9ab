#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "hash.hpp"

namespace lineture {

/// Thrown when a fixed-buffer ByteStream runs out of bytes.
class StreamExhausted : public std::runtime_error {
public:
    StreamExhausted() : std::runtime_error("ByteStream: fixed buffer exhausted") {}
};

/// Thrown when rejection sampling exceeds its draw cap.
class DrawCapExceeded : public std::runtime_error {
public:
    explicit DrawCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic byte source. Either an unbounded SHAKE-256 stream (the normal
/// mode: same input, same bytes forever) or a finite replay buffer for tests.
class ByteStream {
public:
    explicit ByteStream(Shake256 xof) : xof_(std::move(xof)), shake_(true) {}

    static ByteStream seeded(std::string_view tag, std::span<const uint8_t> data = {}) {
        Shake256 x;
        x.absorb(tag);
        x.absorb(data);
        return ByteStream(std::move(x));
    }

    static ByteStream fixed(Bytes bytes) {
        ByteStream s;
        s.buffer_ = std::move(bytes);
        return s;
    }

    void fill(std::span<uint8_t> out) {
        if (shake_) {
            xof_.read(out);
            return;
        }
        if (pos_ + out.size() > buffer_.size()) {
            throw StreamExhausted();
        }
        std::copy_n(buffer_.begin() + static_cast<ptrdiff_t>(pos_), out.size(), out.begin());
        pos_ += out.size();
    }

    uint8_t next() {
        uint8_t b = 0;
        fill({&b, 1});
        return b;
    }

    /// Uniform integer in [0, n) via rejection on single bytes (n <= 256).
    unsigned next_below(unsigned n) {
        if (n == 0 || n > 256) {
            throw std::invalid_argument("ByteStream::next_below: range must be 1..256");
        }
        unsigned limit = 256 - 256 % n;
        for (;;) {
            unsigned b = next();
            if (b < limit) {
                return b % n;
            }
        }
    }

private:
    ByteStream() = default;

    Shake256 xof_;
    Bytes buffer_;
    size_t pos_ = 0;
    bool shake_ = false;
};

/// Dense binary matrix over F2. Rows are packed MSB-first and padded to whole
/// bytes; padding bits are kept zero, so byte-level equality and serialization
/// are exact. Sizes here stay small (<= 128 a side), so all arithmetic is the
/// direct row-XOR kind.
class BitMatrix {
public:
    BitMatrix() = default;

    BitMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), stride_((cols + 7) / 8), bits_(rows * stride_, 0) {
        if (rows == 0 || cols == 0) {
            throw std::invalid_argument("BitMatrix: dimensions must be positive");
        }
    }

    static BitMatrix identity(size_t n) {
        BitMatrix m(n, n);
        for (size_t i = 0; i < n; ++i) {
            m.set(i, i, true);
        }
        return m;
    }

    /// Build from "0101"-style row strings (test and fixture input).
    static BitMatrix from_rows(std::initializer_list<std::string_view> rows) {
        if (rows.size() == 0 || rows.begin()->empty()) {
            throw std::invalid_argument("BitMatrix::from_rows: empty input");
        }
        BitMatrix m(rows.size(), rows.begin()->size());
        size_t r = 0;
        for (auto row : rows) {
            if (row.size() != m.cols_) {
                throw std::invalid_argument("BitMatrix::from_rows: ragged rows");
            }
            for (size_t c = 0; c < row.size(); ++c) {
                if (row[c] != '0' && row[c] != '1') {
                    throw std::invalid_argument("BitMatrix::from_rows: expected 0/1");
                }
                m.set(r, c, row[c] == '1');
            }
            ++r;
        }
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t row_stride() const { return stride_; }

    bool get(size_t r, size_t c) const {
        return (bits_[r * stride_ + c / 8] >> (7 - c % 8)) & 1;
    }

    void set(size_t r, size_t c, bool v) {
        uint8_t mask = static_cast<uint8_t>(0x80u >> (c % 8));
        if (v) {
            bits_[r * stride_ + c / 8] |= mask;
        } else {
            bits_[r * stride_ + c / 8] &= static_cast<uint8_t>(~mask);
        }
    }

    std::span<const uint8_t> row_bytes(size_t r) const {
        return {bits_.data() + r * stride_, stride_};
    }

    /// Overwrite row r from packed bytes; padding bits are masked to zero.
    void load_row_bytes(size_t r, std::span<const uint8_t> src) {
        if (src.size() != stride_) {
            throw std::invalid_argument("BitMatrix::load_row_bytes: wrong length");
        }
        for (size_t b = 0; b < stride_; ++b) {
            bits_[r * stride_ + b] = src[b];
        }
        mask_row_padding(r);
    }

    /// Row as an integer, leftmost column in the most significant bit.
    /// Only defined for widths up to 64.
    uint64_t row_word(size_t r) const {
        if (cols_ > 64) {
            throw std::length_error("BitMatrix::row_word: width above 64");
        }
        uint64_t w = 0;
        const uint8_t* p = bits_.data() + r * stride_;
        for (size_t b = 0; b < stride_; ++b) {
            w = w << 8 | p[b];
        }
        return w >> (stride_ * 8 - cols_);
    }

    void set_row_word(size_t r, uint64_t w) {
        if (cols_ > 64) {
            throw std::length_error("BitMatrix::set_row_word: width above 64");
        }
        uint64_t shifted = w << (stride_ * 8 - cols_);
        uint8_t* p = bits_.data() + r * stride_;
        for (size_t b = 0; b < stride_; ++b) {
            p[b] = static_cast<uint8_t>(shifted >> ((stride_ - 1 - b) * 8));
        }
        mask_row_padding(r);
    }

    void xor_row(size_t dst, const BitMatrix& src, size_t src_row) {
        if (src.stride_ != stride_ || src.cols_ != cols_) {
            throw std::invalid_argument("BitMatrix::xor_row: width mismatch");
        }
        uint8_t* d = bits_.data() + dst * stride_;
        const uint8_t* s = src.bits_.data() + src_row * src.stride_;
        for (size_t b = 0; b < stride_; ++b) {
            d[b] ^= s[b];
        }
    }

    void swap_rows(size_t a, size_t b) {
        if (a == b) {
            return;
        }
        std::swap_ranges(bits_.begin() + static_cast<ptrdiff_t>(a * stride_),
                         bits_.begin() + static_cast<ptrdiff_t>((a + 1) * stride_),
                         bits_.begin() + static_cast<ptrdiff_t>(b * stride_));
    }

    BitMatrix transposed() const {
        BitMatrix t(cols_, rows_);
        for (size_t r = 0; r < rows_; ++r) {
            for (size_t c = 0; c < cols_; ++c) {
                if (get(r, c)) {
                    t.set(c, r, true);
                }
            }
        }
        return t;
    }

    BitMatrix submatrix(size_t r0, size_t c0, size_t nr, size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) {
            throw std::invalid_argument("BitMatrix::submatrix: out of range");
        }
        BitMatrix s(nr, nc);
        for (size_t r = 0; r < nr; ++r) {
            for (size_t c = 0; c < nc; ++c) {
                if (get(r0 + r, c0 + c)) {
                    s.set(r, c, true);
                }
            }
        }
        return s;
    }

    /// Gauss-Jordan inverse; empty when singular.
    std::optional<BitMatrix> inverted() const {
        if (rows_ != cols_) {
            throw std::invalid_argument("BitMatrix::inverted: matrix must be square");
        }
        BitMatrix work = *this;
        BitMatrix inv = identity(rows_);
        for (size_t col = 0; col < cols_; ++col) {
            size_t pivot = col;
            while (pivot < rows_ && !work.get(pivot, col)) {
                ++pivot;
            }
            if (pivot == rows_) {
                return std::nullopt;
            }
            work.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            for (size_t r = 0; r < rows_; ++r) {
                if (r != col && work.get(r, col)) {
                    work.xor_row(r, work, col);
                    inv.xor_row(r, inv, col);
                }
            }
        }
        return inv;
    }

    size_t rank() const {
        BitMatrix work = *this;
        size_t r = 0;
        for (size_t c = 0; c < cols_ && r < rows_; ++c) {
            size_t pivot = r;
            while (pivot < rows_ && !work.get(pivot, c)) {
                ++pivot;
            }
            if (pivot == rows_) {
                continue;
            }
            work.swap_rows(pivot, r);
            for (size_t rr = r + 1; rr < rows_; ++rr) {
                if (work.get(rr, c)) {
                    work.xor_row(rr, work, r);
                }
            }
            ++r;
        }
        return r;
    }

    bool is_zero() const {
        return std::all_of(bits_.begin(), bits_.end(), [](uint8_t b) { return b == 0; });
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

    /// Entrywise XOR.
    friend BitMatrix operator+(const BitMatrix& a, const BitMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
            throw std::invalid_argument("BitMatrix: XOR shape mismatch");
        }
        BitMatrix out = a;
        for (size_t i = 0; i < out.bits_.size(); ++i) {
            out.bits_[i] ^= b.bits_[i];
        }
        return out;
    }

    friend BitMatrix multiply(const BitMatrix& a, const BitMatrix& b) {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("multiply: inner dimensions differ");
        }
        BitMatrix out(a.rows_, b.cols_);
        for (size_t i = 0; i < a.rows_; ++i) {
            const uint8_t* arow = a.bits_.data() + i * a.stride_;
            uint8_t* dst = out.bits_.data() + i * out.stride_;
            for (size_t k = 0; k < a.cols_; ++k) {
                if (arow[k >> 3] & (0x80u >> (k & 7))) {
                    const uint8_t* src = b.bits_.data() + k * b.stride_;
                    for (size_t j = 0; j < out.stride_; ++j) {
                        dst[j] ^= src[j];
                    }
                }
            }
        }
        return out;
    }

private:
    void mask_row_padding(size_t r) {
        unsigned tail = cols_ % 8;
        if (tail != 0) {
            bits_[r * stride_ + stride_ - 1] &= static_cast<uint8_t>(0xff00u >> tail);
        }
    }

    size_t rows_ = 0;
    size_t cols_ = 0;
    size_t stride_ = 0;
    Bytes bits_;
};

inline BitMatrix hconcat(std::span<const BitMatrix> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("hconcat: no parts");
    }
    size_t rows = parts[0].rows();
    size_t cols = 0;
    for (const auto& p : parts) {
        if (p.rows() != rows) {
            throw std::invalid_argument("hconcat: row count mismatch");
        }
        cols += p.cols();
    }
    BitMatrix out(rows, cols);
    size_t base = 0;
    for (const auto& p : parts) {
        for (size_t r = 0; r < rows; ++r) {
            for (size_t c = 0; c < p.cols(); ++c) {
                if (p.get(r, c)) {
                    out.set(r, base + c, true);
                }
            }
        }
        base += p.cols();
    }
    return out;
}

inline BitMatrix vstack(std::span<const BitMatrix> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("vstack: no parts");
    }
    size_t cols = parts[0].cols();
    size_t rows = 0;
    for (const auto& p : parts) {
        if (p.cols() != cols) {
            throw std::invalid_argument("vstack: column count mismatch");
        }
        rows += p.rows();
    }
    BitMatrix out(rows, cols);
    size_t base = 0;
    for (const auto& p : parts) {
        for (size_t r = 0; r < p.rows(); ++r) {
            out.load_row_bytes(base + r, p.row_bytes(r));
        }
        base += p.rows();
    }
    return out;
}

/// Row vector (width bits, leftmost position in the MSB) times a matrix with
/// `width` rows. Result is a matrix-cols-wide word.
inline uint64_t row_times_matrix(uint64_t row, size_t width, const BitMatrix& mat) {
    if (mat.rows() != width) {
        throw std::invalid_argument("row_times_matrix: width mismatch");
    }
    uint64_t acc = 0;
    for (size_t p = 0; p < width; ++p) {
        if ((row >> (width - 1 - p)) & 1) {
            acc ^= mat.row_word(p);
        }
    }
    return acc;
}

/// XOR of all row words.
inline uint64_t xor_rows(const BitMatrix& mat) {
    uint64_t acc = 0;
    for (size_t r = 0; r < mat.rows(); ++r) {
        acc ^= mat.row_word(r);
    }
    return acc;
}

/// Draw a rows x cols matrix from the stream, row-major, MSB-first within each
/// byte (ceil(cols/8) bytes per row; excess low bits of the last byte are
/// dropped). With require_nonsingular, candidates are drawn until one inverts;
/// each draw succeeds with probability > 0.288, and the cap turns a
/// pathological stream into an error instead of a hang.
inline BitMatrix sample_matrix(ByteStream& stream, size_t rows, size_t cols,
                               bool require_nonsingular = false) {
    if (require_nonsingular && rows != cols) {
        throw std::invalid_argument("sample_matrix: nonsingular draw needs a square shape");
    }
    constexpr int draw_cap = 1024;
    BitMatrix m(rows, cols);
    Bytes rowbuf(m.row_stride());
    for (int attempt = 0; attempt < draw_cap; ++attempt) {
        for (size_t r = 0; r < rows; ++r) {
            stream.fill(rowbuf);
            m.load_row_bytes(r, rowbuf);
        }
        if (!require_nonsingular || m.inverted().has_value()) {
            return m;
        }
    }
    throw DrawCapExceeded("sample_matrix: no nonsingular matrix within 1024 draws");
}

} // namespace lineture
