#ifndef CSD_TEST_HELPERS_HPP
#define CSD_TEST_HELPERS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace csdtest {

// Deterministic randomness for tests; avoids std distributions so results
// do not depend on the standard library version.
struct rng {
    explicit rng(std::uint64_t seed) : eng(seed) {}
    std::uint64_t next() { return eng(); }
    std::uint64_t below(std::uint64_t n) { return eng() % n; }
    bool chance(double p) { return static_cast<double>(eng() >> 11) * 0x1.0p-53 < p; }
    std::mt19937_64 eng;
};

inline std::string random_string(rng& r, std::size_t min_len, std::size_t max_len,
                                 const std::string& alphabet = "abcdefghijklmnopqrstuvwxyz") {
    std::size_t len = min_len + r.below(max_len - min_len + 1);
    std::string s;
    s.reserve(len);
    for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[r.below(alphabet.size())]);
    return s;
}

inline std::vector<std::string> random_corpus(rng& r, std::size_t n, std::size_t min_len,
                                              std::size_t max_len,
                                              const std::string& alphabet = "abcdefghijklmnopqrstuvwxyz") {
    std::vector<std::string> out;
    out.reserve(n * 2);
    while (out.size() < n) out.push_back(random_string(r, min_len, max_len, alphabet));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    while (out.size() < n) {
        out.push_back(random_string(r, min_len, max_len, alphabet));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    out.resize(n);
    std::sort(out.begin(), out.end());
    return out;
}

// Deep shared-prefix hierarchies, the shape front-coding and grammar
// compressors are good at.
inline std::vector<std::string> url_like_corpus(rng& r, std::size_t n) {
    std::vector<std::string> out;
    const char* hosts[] = {"http://alpha.example/", "http://beta.example/", "http://gamma.example/"};
    const char* segs[] = {"articles", "images", "users", "static", "data", "x"};
    while (out.size() < n * 2) {
        std::string s = hosts[r.below(3)];
        unsigned depth = 1 + static_cast<unsigned>(r.below(4));
        for (unsigned d = 0; d < depth; ++d) {
            s += segs[r.below(6)];
            s += '/';
        }
        s += std::to_string(r.below(n));
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.size() > n) out.resize(n);
    return out;
}

}  // namespace csdtest

#endif
