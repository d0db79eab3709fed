#include "csd/dac.hpp"

#include <algorithm>
#include <stdexcept>

namespace csd {

dac_array dac_array::build(const std::vector<std::vector<std::uint32_t>>& sequences, unsigned width) {
    if (sequences.empty()) throw std::invalid_argument("dac_array: no sequences");
    if (width == 0 || width > 32) throw std::invalid_argument("dac_array: width must be 1..32");

    std::size_t max_len = 0;
    for (const auto& s : sequences) {
        if (s.empty()) throw std::invalid_argument("dac_array: empty sequence");
        max_len = std::max(max_len, s.size());
        if (width < 32)
            for (auto v : s)
                if (v >= (1u << width)) throw std::invalid_argument("dac_array: symbol overflow");
    }

    dac_array d;
    d.n_ = sequences.size();
    d.width_ = width;

    // survivors at level k: sequences longer than k, in input order
    std::vector<std::uint32_t> survivors(sequences.size());
    for (std::uint32_t i = 0; i < sequences.size(); ++i) survivors[i] = i;
    for (std::size_t k = 0; k < max_len; ++k) {
        packed_vector syms(survivors.size(), width);
        bit_buffer cont;
        std::vector<std::uint32_t> next;
        for (std::size_t j = 0; j < survivors.size(); ++j) {
            const auto& s = sequences[survivors[j]];
            syms.set(j, s[k]);
            bool more = s.size() > k + 1;
            cont.push_back(more);
            if (more) next.push_back(survivors[j]);
        }
        d.levels_.push_back({std::move(syms), bit_sequence(cont, bit_layout::rg, kBitmapOverhead)});
        survivors = std::move(next);
    }
    return d;
}

std::vector<std::uint32_t> dac_array::access(std::uint64_t i) const {
    return access_prefix(i, SIZE_MAX);
}

std::vector<std::uint32_t> dac_array::access_prefix(std::uint64_t i, std::size_t limit) const {
    if (i < 1 || i > n_) throw std::out_of_range("dac_array: sequence index out of range");
    std::vector<std::uint32_t> out;
    std::uint64_t idx = i;
    for (const auto& lv : levels_) {
        if (out.size() >= limit) break;
        out.push_back(static_cast<std::uint32_t>(lv.syms.get(idx - 1)));
        if (!lv.cont.access(idx)) break;
        idx = lv.cont.rank1(idx);
    }
    return out;
}

std::uint64_t dac_array::total_symbols() const {
    std::uint64_t t = 0;
    for (const auto& lv : levels_) t += lv.syms.size();
    return t;
}

std::uint64_t dac_array::bitmap_bits() const {
    std::uint64_t t = 0;
    for (const auto& lv : levels_) t += lv.cont.size_in_bits();
    return t;
}

std::uint64_t dac_array::size_in_bits() const {
    byte_writer w;
    save(w);
    return 8 * w.position();
}

void dac_array::save(byte_writer& w) const {
    w.u64(n_);
    w.u8(static_cast<std::uint8_t>(width_));
    w.u64(levels_.size());
    for (const auto& lv : levels_) {
        lv.syms.save(w);
        lv.cont.save(w);
    }
}

dac_array dac_array::load(byte_reader& r) {
    dac_array d;
    d.n_ = r.u64();
    d.width_ = r.u8();
    if (d.n_ == 0 || d.width_ == 0 || d.width_ > 32)
        throw format_error("bad dac header", r.position());
    std::uint64_t nlevels = r.u64();
    for (std::uint64_t k = 0; k < nlevels; ++k) {
        packed_vector syms = packed_vector::load(r);
        bit_sequence cont = bit_sequence::load(r);
        if (cont.size() != syms.size()) throw format_error("dac level size mismatch", r.position());
        d.levels_.push_back({std::move(syms), std::move(cont)});
    }
    if (!d.levels_.empty() && d.levels_[0].syms.size() != d.n_)
        throw format_error("dac first level size mismatch", r.position());
    return d;
}

}  // namespace csd
