#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace timp {

// Dynamic fixed-capacity bitset used for vertex sets and adjacency rows.
// Hot loops in the solvers run on the raw words, so everything small is
// inline here.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }

    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    void clear() { for (auto& w : w_) w = 0; }

    void fill_first(std::size_t k) {
        clear();
        for (std::size_t i = 0; i < k; ++i) set(i);
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }

    bool any() const {
        for (auto w : w_) if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    Bitset& operator&=(const Bitset& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    // this := this \ o
    Bitset& and_not(const Bitset& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }

    bool intersects(const Bitset& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & o.w_[i]) return true;
        return false;
    }

    friend std::size_t count_and(const Bitset& a, const Bitset& b) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < a.w_.size(); ++i)
            c += std::popcount(a.w_[i] & b.w_[i]);
        return c;
    }

    friend std::size_t count_and3(const Bitset& a, const Bitset& b, const Bitset& c) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < a.w_.size(); ++i)
            n += std::popcount(a.w_[i] & b.w_[i] & c.w_[i]);
        return n;
    }

    // -1 when exhausted.
    int find_first() const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return static_cast<int>(i * 64 + std::countr_zero(w_[i]));
        return -1;
    }
    int find_next(std::size_t prev) const {
        std::size_t next = prev + 1;
        std::size_t i = next >> 6;
        if (i >= w_.size()) return -1;
        std::uint64_t w = w_[i] & (~std::uint64_t{0} << (next & 63));
        while (true) {
            if (w) return static_cast<int>(i * 64 + std::countr_zero(w));
            if (++i >= w_.size()) return -1;
            w = w_[i];
        }
    }

    bool operator==(const Bitset&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

inline Bitset full_set(std::size_t n) {
    Bitset b(n);
    b.fill_first(n);
    return b;
}

// Convenience range-style iteration: for (int v = s.find_first(); v >= 0; v = s.find_next(v))

} // namespace timp
