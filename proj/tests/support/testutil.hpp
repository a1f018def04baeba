#ifndef MODK0_TESTS_TESTUTIL_HPP
#define MODK0_TESTS_TESTUTIL_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace modk0::testutil {

// All suites draw through this wrapper so reported seeds reproduce exactly
// on any platform (std distributions are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}

    std::uint64_t raw() { return g_(); }

    // Uniform in [lo, hi].
    long pick(long lo, long hi) {
        return lo + static_cast<long>(g_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(unsigned percent) { return g_() % 100 < percent; }

    template <typename T>
    const T& among(const std::vector<T>& xs) {
        return xs[g_() % xs.size()];
    }

private:
    std::mt19937_64 g_;
};

}  // namespace modk0::testutil

#endif
