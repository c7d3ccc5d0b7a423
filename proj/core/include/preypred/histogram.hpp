#ifndef PREYPRED_HISTOGRAM_HPP
#define PREYPRED_HISTOGRAM_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "preypred/params.hpp"
#include "preypred/trajectory.hpp"

namespace preypred {

/// Two-dimensional histogram: prey bins centered at the integers n_lo..n_hi,
/// predator bins delimited by the interior edges h_edges (bin j covers
/// [e_{j-1}, e_j), with an implicit 0 lower bound and open top). Out-of-range
/// samples are clamped into the boundary bins so total weight is preserved.
struct Hist2D {
    std::int64_t n_lo = 1;
    std::int64_t n_hi = 1;
    std::vector<double> h_edges;  ///< strictly increasing interior edges
    std::vector<double> w;        ///< row-major (prey rows, predator columns)

    std::size_t n_rows() const { return static_cast<std::size_t>(n_hi - n_lo + 1); }
    std::size_t n_cols() const { return h_edges.size() + 1; }

    std::size_t h_bin(double h) const {
        return static_cast<std::size_t>(
            std::upper_bound(h_edges.begin(), h_edges.end(), h) - h_edges.begin());
    }
    std::size_t n_bin(std::int64_t n) const {
        return static_cast<std::size_t>(std::clamp(n, n_lo, n_hi) - n_lo);
    }

    double& at(std::size_t row, std::size_t col) { return w[row * n_cols() + col]; }
    double at(std::size_t row, std::size_t col) const { return w[row * n_cols() + col]; }

    void add(const State& s, double weight = 1.0) { at(n_bin(s.n), h_bin(s.h)) += weight; }

    double total_weight() const;

    friend bool operator==(const Hist2D&, const Hist2D&) = default;
};

/// Histogram skeleton with predator bins centered at the equilibria
/// (h*_n)_{n>=1}: edges sit at the midpoints between consecutive distinct
/// equilibrium values, so invariant-measure mass that concentrates on the
/// (n, h*_n) line falls into single cells.
Hist2D make_hstar_hist(const ModelParams& p, std::int64_t n_lo, std::int64_t n_hi);

/// Half L1 distance between the normalized weights; requires identical bin
/// structure and nonzero total weight on both sides.
double tv_distance(const Hist2D& a, const Hist2D& b);

/// Time-weighted predator-density histogram over a window of one trajectory.
struct OccupationMeasure {
    double t0 = 0.0;
    double t1 = 0.0;
    std::vector<double> h_edges;  ///< interior edges, as in Hist2D
    std::vector<double> w;        ///< h_edges.size() + 1 time weights; sums to t1 - t0

    double total_weight() const;
    double window_length() const { return t1 - t0; }

    friend bool operator==(const OccupationMeasure&, const OccupationMeasure&) = default;
};

}  // namespace preypred

#endif
