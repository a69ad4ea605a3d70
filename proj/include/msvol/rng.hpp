#pragma once

#include <cmath>
#include <cstdint>

namespace msvol {

// SplitMix64 step; also used to derive substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with hand-rolled variate transforms. The standard
// library distributions are implementation-defined, which would break
// the bitwise-reproducibility contract of the ensemble runner.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    // Stream for path `index` under `master` seed. Fixed scheme: the
    // substream seed is SplitMix64 applied twice to (master, index),
    // so neighboring indices land in unrelated states.
    static RandomStream substream(std::uint64_t master, std::uint64_t index) {
        std::uint64_t x = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        std::uint64_t h = splitmix64(x);
        return RandomStream(h);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0,1]; safe as a log() argument.
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential(double rate) {
        return -std::log(uniform_pos()) / rate;
    }

    // Marsaglia polar method. The spare value is discarded so a draw
    // costs a fixed position in the stream regardless of call history.
    double normal() {
        for (;;) {
            double u = 2.0 * uniform() - 1.0;
            double v = 2.0 * uniform() - 1.0;
            double r2 = u * u + v * v;
            if (r2 > 0.0 && r2 < 1.0)
                return u * std::sqrt(-2.0 * std::log(r2) / r2);
        }
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

}  // namespace msvol
