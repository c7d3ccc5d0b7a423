#ifndef PREYPRED_RNG_HPP
#define PREYPRED_RNG_HPP

#include <cmath>
#include <cstdint>

namespace preypred {

/// Reproducible random stream, one per replica. The state is derived from
/// (master seed, replica index) with SplitMix64 and advanced with
/// xoshiro256++, so streams for distinct indices are independent and a rerun
/// with the same pair replays the identical sequence on any platform.
class RngStream {
  public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t replica_index = 0)
        : master_(master_seed), index_(replica_index) {
        std::uint64_t x = master_seed ^ (0x9E3779B97F4A7C15ULL * (replica_index + 1));
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw in the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard exponential draw; almost surely positive by construction.
    double exponential() { return -std::log(uniform()); }

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t replica_index() const { return index_; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
    std::uint64_t master_;
    std::uint64_t index_;
};

}  // namespace preypred

#endif
