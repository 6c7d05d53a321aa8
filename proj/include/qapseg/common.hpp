#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace qapseg {

// Error taxonomy. Each maps to a CLI exit code: configuration/parse/usage
// problems exit 2, runtime/training failures exit 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct DataError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct TrainError : Error {
    using Error::Error;
};
struct UsageError : Error {
    using Error::Error;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b));
}

// Deterministic RNG wrapper. std::* distributions are implementation-defined,
// so all draws below are spelled out explicitly and stay stable across
// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix64(seed)) {}

    std::uint64_t next_u64() {
        // xorshift64* on a splitmix-initialized state
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dull;
    }

    // [0,1) with 53 bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive range
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    bool chance(double p) { return uniform() < p; }

    double normal() {
        // Box-Muller, cached second value
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 1e-300) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

    // derive an independent stream, e.g. per sample or per layer
    Rng fork(std::uint64_t stream) const { return Rng(hash_combine(state_, stream)); }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Thread cap for op-internal parallelism. QAPSEG_THREADS overrides hardware
// concurrency; work is partitioned into disjoint output slices so results are
// bitwise identical for any thread count.
inline int max_threads() {
    static const int cached = [] {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        if (n < 1) n = 1;
        if (const char* env = std::getenv("QAPSEG_THREADS")) {
            const int cap = std::atoi(env);
            if (cap >= 1 && cap < n) n = cap;
            if (cap > n) n = cap;
        }
        if (n > 64) n = 64;
        return n;
    }();
    return cached;
}

// Runs fn(i) for i in [0,n). Slices are contiguous and writer-disjoint by
// construction at every call site.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn,
                         std::int64_t min_per_thread = 4) {
    const int want = max_threads();
    if (want <= 1 || n < 2 * min_per_thread) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const int nt = static_cast<int>(std::min<std::int64_t>(want, n / min_per_thread ? n / min_per_thread : 1));
    if (nt <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(nt));
    const std::int64_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&fn, lo, hi] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& w : workers) w.join();
}

}  // namespace qapseg
