#ifndef PREYPRED_DISTRIBUTION_HPP
#define PREYPRED_DISTRIBUTION_HPP

#include <cstdint>
#include <vector>

namespace preypred {

/// Probability mass function over prey counts, truncated at n_max().
/// Weights are normalized to sum to 1; the mass lost to truncation is
/// estimated separately in tail_mass.
struct DiscreteDistribution {
    std::int64_t support_start = 1;  ///< 1, or 0 with migration
    std::vector<double> p;
    double tail_mass = 0.0;
    bool truncation_warning = false;  ///< last recursion ratio > 1: n_max below the mode

    std::int64_t n_max() const {
        return support_start + static_cast<std::int64_t>(p.size()) - 1;
    }

    friend bool operator==(const DiscreteDistribution&, const DiscreteDistribution&) = default;
};

/// Half L1 distance between two pmfs on the same support. Throws on shape
/// mismatch.
double tv_distance(const DiscreteDistribution& a, const DiscreteDistribution& b);

}  // namespace preypred

#endif
