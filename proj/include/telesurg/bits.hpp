// Bit-packed vectors and matrices used by the samplers and the tableau
// simulator.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <vector>

namespace telesurg {

/// Fixed-width vector of bits packed into 64-bit words.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return nbits_; }
    std::size_t num_words() const { return words_.size(); }
    uint64_t* words() { return words_.data(); }
    const uint64_t* words() const { return words_.data(); }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void set(std::size_t i, bool v) {
        uint64_t mask = uint64_t(1) << (i & 63);
        if (v) words_[i >> 6] |= mask;
        else words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= uint64_t(1) << (i & 63); }
    void clear() { std::memset(words_.data(), 0, words_.size() * 8); }

    void operator^=(const BitVec& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    }
    void operator&=(const BitVec& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    }

    std::size_t popcount() const {
        std::size_t n = 0;
        for (uint64_t w : words_) n += std::popcount(w);
        return n;
    }
    bool any() const {
        for (uint64_t w : words_) if (w) return true;
        return false;
    }
    bool parity_and(const BitVec& o) const {
        uint64_t acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
        return std::popcount(acc) & 1;
    }
    bool operator==(const BitVec& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }

private:
    std::size_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

/// Row-major bit matrix: `rows` rows of `cols` bits each.
class BitMat {
public:
    BitMat() = default;
    BitMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), stride_((cols + 63) / 64),
          words_(rows * stride_, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t stride() const { return stride_; }

    bool get(std::size_t r, std::size_t c) const {
        return (words_[r * stride_ + (c >> 6)] >> (c & 63)) & 1;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        uint64_t mask = uint64_t(1) << (c & 63);
        uint64_t& w = words_[r * stride_ + (c >> 6)];
        if (v) w |= mask;
        else w &= ~mask;
    }
    void flip(std::size_t r, std::size_t c) {
        words_[r * stride_ + (c >> 6)] ^= uint64_t(1) << (c & 63);
    }
    const uint64_t* row(std::size_t r) const { return words_.data() + r * stride_; }
    uint64_t* row(std::size_t r) { return words_.data() + r * stride_; }

    bool row_any(std::size_t r) const {
        const uint64_t* p = row(r);
        for (std::size_t w = 0; w < stride_; ++w) if (p[w]) return true;
        return false;
    }
    std::size_t count_ones() const {
        std::size_t n = 0;
        for (uint64_t w : words_) n += std::popcount(w);
        return n;
    }
    bool operator==(const BitMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && words_ == o.words_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace telesurg
