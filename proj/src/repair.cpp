#include "csd/repair.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace csd {

namespace {

constexpr std::uint32_t kNil = UINT32_MAX;

inline std::uint64_t pack_pair(std::uint32_t x, std::uint32_t y) {
    return (static_cast<std::uint64_t>(x) << 32) | y;
}

struct pair_rec {
    std::uint64_t count = 0;
    std::uint32_t head = kNil;  // occurrence list, by left position
};

struct heap_entry {
    std::uint64_t count;
    std::uint64_t pair;
};
struct heap_less {
    bool operator()(const heap_entry& a, const heap_entry& b) const {
        if (a.count != b.count) return a.count < b.count;
        return a.pair > b.pair;  // smaller pair id wins ties
    }
};

// Working state: a doubly linked symbol sequence with per-pair occurrence
// lists. reg[i] set means position i starts a counted occurrence of the pair
// (sym[i], sym[next[i]]). Within a run of equal symbols the counted
// occurrences sit at even offsets from the run start, which is exactly the
// greedy left-to-right count.
struct repair_state {
    std::vector<std::uint32_t> sym, nxt, prv, onext, oprev;
    std::vector<std::uint8_t> reg;
    std::unordered_map<std::uint64_t, pair_rec> pairs;
    std::priority_queue<heap_entry, std::vector<heap_entry>, heap_less> heap;
    std::uint32_t forbidden;

    explicit repair_state(std::span<const std::uint32_t> text, std::uint32_t forbid)
        : sym(text.begin(), text.end()),
          nxt(text.size()),
          prv(text.size()),
          onext(text.size(), kNil),
          oprev(text.size(), kNil),
          reg(text.size(), 0),
          forbidden(forbid) {
        std::uint32_t n = static_cast<std::uint32_t>(text.size());
        for (std::uint32_t i = 0; i < n; ++i) {
            nxt[i] = i + 1 < n ? i + 1 : kNil;
            prv[i] = i > 0 ? i - 1 : kNil;
        }
        for (std::uint32_t i = 0; i + 1 < n; ++i) register_occ(i);
    }

    void raw_register(std::uint32_t i) {
        std::uint32_t j = nxt[i];
        std::uint64_t p = pack_pair(sym[i], sym[j]);
        pair_rec& rec = pairs[p];
        onext[i] = rec.head;
        oprev[i] = kNil;
        if (rec.head != kNil) oprev[rec.head] = i;
        rec.head = i;
        ++rec.count;
        reg[i] = 1;
        if (rec.count >= 2) heap.push({rec.count, p});
    }

    // Registers the adjacency at i unless it overlaps a counted occurrence of
    // the same square pair immediately to the left.
    void register_occ(std::uint32_t i) {
        std::uint32_t j = nxt[i];
        if (j == kNil) return;
        std::uint32_t x = sym[i], y = sym[j];
        if (x == forbidden || y == forbidden) return;
        if (x == y) {
            std::uint32_t l = prv[i];
            if (l != kNil && sym[l] == x && reg[l]) return;
        }
        raw_register(i);
    }

    void unregister_occ(std::uint32_t i) {
        if (!reg[i]) return;
        std::uint64_t p = pack_pair(sym[i], sym[nxt[i]]);
        auto it = pairs.find(p);
        pair_rec& rec = it->second;
        if (oprev[i] != kNil)
            onext[oprev[i]] = onext[i];
        else
            rec.head = onext[i];
        if (onext[i] != kNil) oprev[onext[i]] = oprev[i];
        onext[i] = oprev[i] = kNil;
        reg[i] = 0;
        if (--rec.count == 0) pairs.erase(it);
    }

    // Restores alternating registration for the run of y starting at p after
    // the run lost its head.
    void reparity_run(std::uint32_t p, std::uint32_t y) {
        bool want = true;
        while (p != kNil && nxt[p] != kNil && sym[p] == y && sym[nxt[p]] == y) {
            if (want && !reg[p])
                raw_register(p);
            else if (!want && reg[p])
                unregister_occ(p);
            want = !want;
            p = nxt[p];
        }
    }

    void replace_all(std::uint64_t p, std::uint32_t z) {
        std::uint32_t x = static_cast<std::uint32_t>(p >> 32);
        std::uint32_t y = static_cast<std::uint32_t>(p);
        std::vector<std::uint32_t> occ;
        for (std::uint32_t i = pairs[p].head; i != kNil; i = onext[i]) occ.push_back(i);
        std::sort(occ.begin(), occ.end());
        for (std::uint32_t i : occ) {
            if (!reg[i] || sym[i] != x) continue;  // dropped by an earlier splice
            std::uint32_t j = nxt[i];
            if (j == kNil || sym[j] != y) continue;
            std::uint32_t a = prv[i];
            std::uint32_t d = nxt[j];
            unregister_occ(i);
            if (a != kNil) unregister_occ(a);
            if (d != kNil) unregister_occ(j);
            sym[i] = z;
            nxt[i] = d;
            if (d != kNil) prv[d] = i;
            nxt[j] = prv[j] = kNil;
            if (a != kNil) register_occ(a);
            if (d != kNil) register_occ(i);
            // j headed a run of y that continues at d: its parity shifted
            if (x != y && d != kNil && sym[d] == y) reparity_run(d, y);
        }
    }
};

}  // namespace

repair_grammar repair_compress(std::span<const std::uint32_t> text, std::uint32_t alphabet_size,
                               std::uint32_t forbidden) {
    for (auto s : text)
        if (s >= alphabet_size) throw std::invalid_argument("repair: symbol outside alphabet");

    repair_grammar g;
    g.alphabet_size = alphabet_size;
    if (text.empty()) return g;

    repair_state st(text, forbidden);
    while (!st.heap.empty()) {
        heap_entry top = st.heap.top();
        st.heap.pop();
        auto it = st.pairs.find(top.pair);
        std::uint64_t live = it == st.pairs.end() ? 0 : it->second.count;
        if (live != top.count) {
            if (live >= 2) st.heap.push({live, top.pair});  // lazy refresh after decrements
            continue;
        }
        if (top.count < 2) continue;
        std::uint32_t z = g.alphabet_size + static_cast<std::uint32_t>(g.rules.size());
        g.rules.emplace_back(static_cast<std::uint32_t>(top.pair >> 32),
                             static_cast<std::uint32_t>(top.pair));
        st.replace_all(top.pair, z);
    }

    for (std::uint32_t i = 0; i != kNil;) {
        g.sequence.push_back(st.sym[i]);
        i = st.nxt[i];
    }
    return g;
}

}  // namespace csd
