#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace nbrk {

/// Deterministic random source. All distribution transforms are implemented
/// here (not via std:: distributions, whose output is implementation-defined)
/// so that a given seed produces the same stream on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed), base_seed_(seed) {}

    uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Inclusive integer range.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int64_t>(gen_() % span);
    }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Zero-mean Laplacian with scale b (variance 2b^2), via inverse CDF.
    double laplacian(double b = 1.0) {
        const double u = uniform() - 0.5;
        const double s = u < 0.0 ? -1.0 : 1.0;
        return -b * s * std::log(1.0 - 2.0 * std::fabs(u));
    }

    /// Deterministic Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            const size_t j = static_cast<size_t>(gen_() % i);
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Independent child stream; splitmix-style mixing of the stream id.
    Rng fork(uint64_t stream) const {
        uint64_t z = base_seed_ ^ (stream + 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return Rng(z ^ (z >> 31));
    }

private:
    std::mt19937_64 gen_;
    uint64_t base_seed_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace nbrk
