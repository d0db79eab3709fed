#include "doctest.h"

#include <stdexcept>

#include "csd/dac.hpp"
#include "helpers.hpp"

using namespace csd;

namespace {

std::vector<std::vector<std::uint32_t>> random_sequences(csdtest::rng& r, std::size_t n,
                                                         std::size_t max_len, unsigned width) {
    std::vector<std::vector<std::uint32_t>> out(n);
    for (auto& s : out) {
        std::size_t len = 1 + r.below(max_len);
        for (std::size_t k = 0; k < len; ++k)
            s.push_back(static_cast<std::uint32_t>(r.below(1ull << width)));
    }
    return out;
}

}  // namespace

TEST_CASE("dac: two-sequence example reconstructs by chained ranks") {
    std::vector<std::vector<std::uint32_t>> seqs = {{5}, {7, 8}};
    auto d = dac_array::build(seqs, 4);
    CHECK(d.size() == 2);
    CHECK(d.levels() == 2);
    CHECK(d.total_symbols() == 3);
    CHECK(d.access(1) == std::vector<std::uint32_t>{5});
    CHECK(d.access(2) == std::vector<std::uint32_t>{7, 8});
}

TEST_CASE("dac: degenerate shapes") {
    // all length one: a single level
    std::vector<std::vector<std::uint32_t>> ones = {{1}, {2}, {3}};
    auto d1 = dac_array::build(ones, 8);
    CHECK(d1.levels() == 1);
    for (std::uint64_t i = 1; i <= 3; ++i) CHECK(d1.access(i) == ones[i - 1]);

    // uniform length L: L levels of n symbols each
    std::vector<std::vector<std::uint32_t>> uniform(4, std::vector<std::uint32_t>{9, 8, 7});
    auto d2 = dac_array::build(uniform, 8);
    CHECK(d2.levels() == 3);
    CHECK(d2.total_symbols() == 12);
    CHECK(d2.access(4) == uniform[3]);

    // single sequence
    std::vector<std::vector<std::uint32_t>> single = {{3, 1, 4, 1, 5}};
    auto d3 = dac_array::build(single, 4);
    CHECK(d3.access(1) == single[0]);
}

TEST_CASE("dac: parameter and bounds errors") {
    CHECK_THROWS_AS(dac_array::build({}, 8), std::invalid_argument);
    CHECK_THROWS_AS(dac_array::build({{1}, {}}, 8), std::invalid_argument);
    CHECK_THROWS_AS(dac_array::build({{255}}, 4), std::invalid_argument);
    auto d = dac_array::build({{1}, {2}}, 4);
    CHECK_THROWS_AS(d.access(0), std::out_of_range);
    CHECK_THROWS_AS(d.access(3), std::out_of_range);
}

TEST_CASE("dac: round trip against retained copies") {
    csdtest::rng r(201);
    auto seqs = random_sequences(r, 10000, 12, 10);
    auto d = dac_array::build(seqs, 10);
    for (std::uint64_t i = 1; i <= seqs.size(); ++i) CHECK(d.access(i) == seqs[i - 1]);

    for (int k = 0; k < 5000; ++k) {
        std::uint64_t i = 1 + r.below(seqs.size());
        std::size_t limit = 1 + r.below(14);
        auto got = d.access_prefix(i, limit);
        const auto& want = seqs[i - 1];
        REQUIRE(got.size() == std::min(limit, want.size()));
        for (std::size_t j = 0; j < got.size(); ++j) CHECK(got[j] == want[j]);
    }
    CHECK(d.access_prefix(1, 1).size() == 1);
    CHECK(d.access_prefix(1, 100) == seqs[0]);
}

TEST_CASE("dac: bitmap overhead stays within 1.25 bits per symbol plus headers") {
    csdtest::rng r(202);
    auto seqs = random_sequences(r, 20000, 8, 12);
    auto d = dac_array::build(seqs, 12);
    double bound = 1.25 * static_cast<double>(d.total_symbols()) +
                   1024.0 * static_cast<double>(d.levels());
    CHECK(static_cast<double>(d.bitmap_bits()) <= bound);
}

TEST_CASE("dac: serialization round trip") {
    csdtest::rng r(203);
    auto seqs = random_sequences(r, 500, 6, 9);
    auto d = dac_array::build(seqs, 9);
    byte_writer w;
    d.save(w);
    byte_reader rd(w.data());
    auto e = dac_array::load(rd);
    CHECK(rd.at_end());
    for (std::uint64_t i = 1; i <= seqs.size(); ++i) CHECK(e.access(i) == seqs[i - 1]);
    byte_writer w2;
    e.save(w2);
    CHECK(w.data() == w2.data());
}
