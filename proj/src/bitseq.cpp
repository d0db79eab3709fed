#include "csd/bitseq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace csd {

namespace {

std::atomic<std::uint64_t> g_rank_calls{0};
std::atomic<std::uint64_t> g_select_calls{0};

// Pascal triangle for the 15-bit enumerative code.
struct binom_table {
    std::uint32_t c[16][16]{};
    constexpr binom_table() {
        for (int n = 0; n <= 15; ++n) {
            c[n][0] = 1;
            for (int k = 1; k <= n; ++k)
                c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
        }
    }
};
constexpr binom_table kBinom;

constexpr unsigned offset_width(unsigned cls) {
    std::uint32_t v = kBinom.c[15][cls];
    unsigned w = 0;
    while ((1u << w) < v) ++w;
    return w;  // ceil(log2 C(15,cls)), 0 when the class is forced
}

struct offset_width_table {
    unsigned w[16]{};
    constexpr offset_width_table() {
        for (unsigned c = 0; c <= 15; ++c) w[c] = offset_width(c);
    }
};
constexpr offset_width_table kOw;

// Combinatorial rank of a 15-bit pattern among patterns of its class.
std::uint32_t encode_block(std::uint32_t pattern, unsigned cls) {
    std::uint32_t off = 0;
    unsigned r = cls;
    for (unsigned p = 0; p < 15 && r > 0; ++p) {
        if (pattern & (1u << p)) {
            off += kBinom.c[14 - p][r];
            --r;
        }
    }
    return off;
}

std::uint32_t decode_block(unsigned cls, std::uint32_t off) {
    std::uint32_t pattern = 0;
    unsigned r = cls;
    for (unsigned p = 0; p < 15 && r > 0; ++p) {
        std::uint32_t b = kBinom.c[14 - p][r];
        if (off >= b) {
            pattern |= 1u << p;
            off -= b;
            --r;
        }
    }
    return pattern;
}

std::uint64_t read_bits(std::span<const std::uint64_t> words, std::uint64_t start, unsigned len) {
    if (len == 0) return 0;
    std::uint64_t w = start / 64, off = start % 64;
    std::uint64_t v = words[w] >> off;
    if (off + len > 64) v |= words[w + 1] << (64 - off);
    return len == 64 ? v : v & ((1ull << len) - 1);
}

void append_bits(std::vector<std::uint64_t>& words, std::uint64_t& n_bits, std::uint64_t v, unsigned len) {
    if (len == 0) return;
    std::uint64_t need = words_for_bits(n_bits + len);
    while (words.size() < need) words.push_back(0);
    std::uint64_t w = n_bits / 64, off = n_bits % 64;
    words[w] |= v << off;
    if (off + len > 64) words[w + 1] |= v >> (64 - off);
    n_bits += len;
}

// Ones in bits [a,b) of an LSB-first word array.
std::uint64_t popcount_range(std::span<const std::uint64_t> words, std::uint64_t a, std::uint64_t b) {
    if (a >= b) return 0;
    std::uint64_t wa = a / 64, wb = (b - 1) / 64;
    std::uint64_t first = words[wa] >> (a % 64);
    if (wa == wb) {
        unsigned len = static_cast<unsigned>(b - a);
        if (len < 64) first &= (1ull << len) - 1;
        return std::popcount(first);
    }
    std::uint64_t c = std::popcount(first);
    for (std::uint64_t w = wa + 1; w < wb; ++w) c += std::popcount(words[w]);
    unsigned tail = static_cast<unsigned>(b - wb * 64);
    std::uint64_t last = tail == 64 ? words[wb] : words[wb] & ((1ull << tail) - 1);
    return c + std::popcount(last);
}

}  // namespace

bit_sequence::bit_sequence(const bit_buffer& bits, bit_layout layout, double x)
    : layout_(layout), n_(bits.size()), x_(x) {
    if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("bit_sequence: x must be in (0,1]");
    if (bits.empty()) throw std::invalid_argument("bit_sequence: empty bit string");
    if (n_ >= (1ull << 32)) throw std::invalid_argument("bit_sequence: too long for 32-bit samples");
    m_ = bits.popcount();
    if (layout_ == bit_layout::rg)
        build_rg(bits);
    else
        build_rrr(bits);
}

void bit_sequence::build_rg(const bit_buffer& bits) {
    words_.assign(bits.words().begin(), bits.words().end());
    rg_k_ = static_cast<std::uint64_t>(std::ceil(32.0 / x_));
    if (rg_k_ < 1) rg_k_ = 1;
    std::uint64_t cum = 0;
    for (std::uint64_t t = rg_k_; t <= n_; t += rg_k_) {
        cum += popcount_range(words_, t - rg_k_, t);
        rg_samples_.push_back(static_cast<std::uint32_t>(cum));
    }
}

void bit_sequence::build_rrr(const bit_buffer& bits) {
    std::uint64_t nb = num_blocks();
    rrr_t_ = static_cast<std::uint64_t>(std::ceil(64.0 / (kBlock * x_)));
    if (rrr_t_ < 1) rrr_t_ = 1;
    classes_ = packed_vector(nb, 4);
    off_words_.clear();
    off_bits_ = 0;
    std::uint64_t cum = 0;
    for (std::uint64_t b = 0; b < nb; ++b) {
        if (b % rrr_t_ == 0 && b > 0) {
            rrr_rank_samples_.push_back(static_cast<std::uint32_t>(cum));
            rrr_off_samples_.push_back(static_cast<std::uint32_t>(off_bits_));
        }
        unsigned len = static_cast<unsigned>(std::min<std::uint64_t>(kBlock, n_ - b * kBlock));
        auto pattern = static_cast<std::uint32_t>(read_bits(bits.words(), b * kBlock, len));
        unsigned cls = static_cast<unsigned>(std::popcount(pattern));
        classes_.set(b, cls);
        append_bits(off_words_, off_bits_, encode_block(pattern, cls), kOw.w[cls]);
        cum += cls;
    }
}

bool bit_sequence::access(std::uint64_t pos) const {
    if (pos < 1 || pos > n_) throw std::out_of_range("bit_sequence::access: position out of range");
    std::uint64_t i = pos - 1;
    if (layout_ == bit_layout::rg) return (words_[i / 64] >> (i % 64)) & 1;
    std::uint64_t b = i / kBlock;
    std::uint64_t t = b / rrr_t_;
    std::uint64_t off = t ? rrr_off_samples_[t - 1] : 0;
    for (std::uint64_t k = t * rrr_t_; k < b; ++k) off += kOw.w[block_class(k)];
    return (block_pattern(b, off) >> (i % kBlock)) & 1;
}

std::uint32_t bit_sequence::block_pattern(std::uint64_t b, std::uint64_t off_bitpos) const {
    unsigned cls = block_class(b);
    auto off = static_cast<std::uint32_t>(read_bits(off_words_, off_bitpos, kOw.w[cls]));
    return decode_block(cls, off);
}

std::uint64_t bit_sequence::rank1(std::uint64_t i) const {
    g_rank_calls.fetch_add(1, std::memory_order_relaxed);
    return rank1_impl(i);
}

std::uint64_t bit_sequence::rank0(std::uint64_t i) const {
    g_rank_calls.fetch_add(1, std::memory_order_relaxed);
    return i - rank1_impl(i);
}

std::uint64_t bit_sequence::rank(bool b, std::uint64_t i) const {
    return b ? rank1(i) : rank0(i);
}

std::uint64_t bit_sequence::rank1_impl(std::uint64_t i) const {
    if (i > n_) throw std::out_of_range("bit_sequence::rank: prefix length out of range");
    if (i == 0) return 0;
    return layout_ == bit_layout::rg ? rg_rank1(i) : rrr_rank1(i);
}

std::uint64_t bit_sequence::rg_rank1(std::uint64_t i) const {
    std::uint64_t t = i / rg_k_;
    std::uint64_t base = t ? rg_samples_[t - 1] : 0;
    return base + popcount_range(words_, t * rg_k_, i);
}

std::uint64_t bit_sequence::rrr_rank1(std::uint64_t i) const {
    std::uint64_t full = i / kBlock;
    unsigned rem = static_cast<unsigned>(i % kBlock);
    // full == num_blocks() when i == n; clamp to the last stored sample
    std::uint64_t t = std::min<std::uint64_t>(full / rrr_t_, rrr_rank_samples_.size());
    std::uint64_t cum = t ? rrr_rank_samples_[t - 1] : 0;
    std::uint64_t off = t ? rrr_off_samples_[t - 1] : 0;
    for (std::uint64_t b = t * rrr_t_; b < full; ++b) {
        unsigned cls = block_class(b);
        cum += cls;
        off += kOw.w[cls];
    }
    if (rem)
        cum += std::popcount(block_pattern(full, off) & ((1u << rem) - 1));
    return cum;
}

std::uint64_t bit_sequence::select1(std::uint64_t j) const {
    g_select_calls.fetch_add(1, std::memory_order_relaxed);
    if (j < 1 || j > m_) throw std::out_of_range("bit_sequence::select1: occurrence out of range");
    return layout_ == bit_layout::rg ? rg_select(true, j) : rrr_select(true, j);
}

std::uint64_t bit_sequence::select0(std::uint64_t j) const {
    g_select_calls.fetch_add(1, std::memory_order_relaxed);
    if (j < 1 || j > n_ - m_) throw std::out_of_range("bit_sequence::select0: occurrence out of range");
    return layout_ == bit_layout::rg ? rg_select(false, j) : rrr_select(false, j);
}

std::uint64_t bit_sequence::select(bool b, std::uint64_t j) const {
    return b ? select1(j) : select0(j);
}

std::uint64_t bit_sequence::rg_select(bool bitval, std::uint64_t j) const {
    // Binary search the rank samples, then scan words.
    std::uint64_t lo = 0, hi = rg_samples_.size();
    while (lo < hi) {
        std::uint64_t mid = (lo + hi) / 2;
        std::uint64_t ones = rg_samples_[mid];
        std::uint64_t val = bitval ? ones : (mid + 1) * rg_k_ - ones;
        if (val < j)
            lo = mid + 1;
        else
            hi = mid;
    }
    std::uint64_t bitpos = lo * rg_k_;
    std::uint64_t cum = lo ? (bitval ? rg_samples_[lo - 1] : lo * rg_k_ - rg_samples_[lo - 1]) : 0;
    while (bitpos < n_) {
        std::uint64_t wend = std::min<std::uint64_t>((bitpos / 64 + 1) * 64, n_);
        std::uint64_t word = words_[bitpos / 64];
        if (!bitval) word = ~word;
        unsigned lofs = static_cast<unsigned>(bitpos % 64);
        word >>= lofs;
        unsigned len = static_cast<unsigned>(wend - bitpos);
        if (len < 64) word &= (1ull << len) - 1;
        unsigned cnt = static_cast<unsigned>(std::popcount(word));
        if (cum + cnt >= j) {
            for (unsigned k = static_cast<unsigned>(j - cum); k > 1; --k) word &= word - 1;
            return bitpos + static_cast<unsigned>(std::countr_zero(word)) + 1;
        }
        cum += cnt;
        bitpos = wend;
    }
    throw std::out_of_range("bit_sequence::select: not found");
}

std::uint64_t bit_sequence::rrr_select(bool bitval, std::uint64_t j) const {
    std::uint64_t lo = 0, hi = rrr_rank_samples_.size();
    while (lo < hi) {
        std::uint64_t mid = (lo + hi) / 2;
        std::uint64_t ones = rrr_rank_samples_[mid];
        std::uint64_t bits = (mid + 1) * rrr_t_ * kBlock;
        std::uint64_t val = bitval ? ones : bits - ones;
        if (val < j)
            lo = mid + 1;
        else
            hi = mid;
    }
    std::uint64_t b = lo * rrr_t_;
    std::uint64_t cum = lo ? rrr_rank_samples_[lo - 1] : 0;
    std::uint64_t off = lo ? rrr_off_samples_[lo - 1] : 0;
    if (!bitval) cum = b * kBlock - cum;
    std::uint64_t nb = num_blocks();
    while (b < nb) {
        unsigned real = static_cast<unsigned>(std::min<std::uint64_t>(kBlock, n_ - b * kBlock));
        unsigned cls = block_class(b);
        unsigned inblock = bitval ? cls : real - cls;
        if (cum + inblock >= j) {
            std::uint32_t pattern = block_pattern(b, off);
            if (!bitval) pattern = ~pattern & ((1u << real) - 1);
            std::uint32_t word = pattern;
            for (std::uint64_t k = j - cum; k > 1; --k) word &= word - 1;
            return b * kBlock + static_cast<unsigned>(std::countr_zero(word)) + 1;
        }
        cum += inblock;
        off += kOw.w[cls];
        ++b;
    }
    throw std::out_of_range("bit_sequence::select: not found");
}

std::uint64_t bit_sequence::size_in_bits() const {
    byte_writer w;
    save(w);
    return 8 * w.position();
}

void bit_sequence::save(byte_writer& w) const {
    w.u8(static_cast<std::uint8_t>(layout_));
    w.u64(n_);
    w.u64(m_);
    w.f64(x_);
    if (layout_ == bit_layout::rg) {
        w.u64(words_.size());
        w.words(words_);
        w.u64(rg_samples_.size());
        w.u32s(rg_samples_);
    } else {
        classes_.save(w);
        w.u64(off_bits_);
        w.words(off_words_);
        w.u64(rrr_rank_samples_.size());
        w.u32s(rrr_rank_samples_);
        w.u32s(rrr_off_samples_);
    }
}

bit_sequence bit_sequence::load(byte_reader& r) {
    std::uint64_t start = r.position();
    bit_sequence s;
    std::uint8_t tag = r.u8();
    if (tag > 1) throw format_error("bad bit sequence layout tag", start);
    s.layout_ = static_cast<bit_layout>(tag);
    s.n_ = r.u64();
    s.m_ = r.u64();
    s.x_ = r.f64();
    if (s.n_ == 0 || !(s.x_ > 0.0 && s.x_ <= 1.0))
        throw format_error("bad bit sequence header", start);
    if (s.layout_ == bit_layout::rg) {
        s.rg_k_ = static_cast<std::uint64_t>(std::ceil(32.0 / s.x_));
        std::uint64_t wc = r.u64();
        if (wc != words_for_bits(s.n_)) throw format_error("bit sequence word count mismatch", r.position());
        s.words_ = r.words(wc);
        std::uint64_t sc = r.u64();
        if (sc != s.n_ / s.rg_k_) throw format_error("bit sequence sample count mismatch", r.position());
        s.rg_samples_ = r.u32s(sc);
    } else {
        s.rrr_t_ = static_cast<std::uint64_t>(std::ceil(64.0 / (kBlock * s.x_)));
        s.classes_ = packed_vector::load(r);
        if (s.classes_.size() != s.num_blocks() || s.classes_.width() != 4)
            throw format_error("bit sequence class table mismatch", r.position());
        s.off_bits_ = r.u64();
        s.off_words_ = r.words(words_for_bits(s.off_bits_));
        std::uint64_t sc = r.u64();
        if (sc != (s.num_blocks() - 1) / s.rrr_t_) throw format_error("bit sequence sample count mismatch", r.position());
        s.rrr_rank_samples_ = r.u32s(sc);
        s.rrr_off_samples_ = r.u32s(sc);
    }
    return s;
}

std::uint64_t bit_sequence::rank_calls() { return g_rank_calls.load(std::memory_order_relaxed); }
std::uint64_t bit_sequence::select_calls() { return g_select_calls.load(std::memory_order_relaxed); }
void bit_sequence::reset_op_counters() {
    g_rank_calls.store(0, std::memory_order_relaxed);
    g_select_calls.store(0, std::memory_order_relaxed);
}

}  // namespace csd
