#ifndef PREYPRED_ANALYSIS_HPP
#define PREYPRED_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "preypred/distribution.hpp"
#include "preypred/generator.hpp"
#include "preypred/histogram.hpp"
#include "preypred/simulate.hpp"

namespace preypred {

/// Invariant pmf of the averaged prey chain, computed in log space from the
/// detailed-balance recursion
///   mu_{n+1}/mu_n = b n / ((n+1)(d + c(n+1) + B h*_{n+1})),
/// seeded at mu_1 and normalized over 1..n_max. tail_mass carries a geometric
/// estimate of the truncated mass from the last ratio; truncation_warning is
/// set when that ratio is still above 1 (n_max below the mode). Requires m=0.
DiscreteDistribution averaged_invariant(const ModelParams& p, std::int64_t n_max);

/// Diagnostic quadratic in the mode analysis: the sign of
/// alpha x^2 + beta x + gamma tracks where neighboring weights cross.
/// Its discriminant is always positive; x0 < 0 <= x1.
struct PolyDiag {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double discriminant = 0.0;
    double x0 = 0.0;
    double x1 = 0.0;

    friend bool operator==(const PolyDiag&, const PolyDiag&) = default;
};

struct ModeReport {
    std::int64_t mode = 1;    ///< argmax of the recursion weights (smaller index on ties)
    bool tie = false;         ///< a neighbor ratio equals 1 within 1e-12
    PolyDiag poly;            ///< diagnostic side-channel
    std::int64_t poly_mode = 1;  ///< ceil(x1) when x1 > 1, else 1
    bool discrepancy = false;    ///< recursion argmax != polynomial prediction

    friend bool operator==(const ModeReport&, const ModeReport&) = default;
};

ModeReport invariant_mode(const ModelParams& p, std::int64_t n_max);

/// Bins terminal states into the h*-centered histogram skeleton.
Hist2D empirical_invariant(std::span<const State> terminal, const Hist2D& skeleton);

/// Prey marginal of a sample of states, clamped into [support_start, n_max].
DiscreteDistribution prey_marginal(std::span<const State> sample, std::int64_t support_start,
                                   std::int64_t n_max);

/// Time-weighted predator histogram of one trajectory over [w0, w1]. Between
/// jumps the density follows the closed-form flow and the time spent in each
/// bin is computed exactly from bin-crossing times, not by time stepping.
OccupationMeasure occupation_measure(const Trajectory& traj, double w0, double w1,
                                     std::span<const double> interior_edges);

/// Exact time h(s) spends within |h - h*_{n(s)}| <= tol over the whole
/// trajectory, via the same crossing-time computation.
double time_near_equilibrium(const Trajectory& traj, double tol);

struct DriftGrid {
    std::int64_t n_max = 500;
    double h_max = 500.0;
    std::int64_t h_steps = 500;

    friend bool operator==(const DriftGrid&, const DriftGrid&) = default;
};

/// Result of the Foster-Lyapunov grid scan for A f <= -gamma f + delta 1_K,
/// K = {1..K_n} x [0, K_h]: outside K every grid point has margin
/// A f + gamma f <= 0; delta is the largest positive margin inside K.
struct DriftReport {
    bool valid = false;
    Lyapunov which = Lyapunov::V;
    double gamma = 0.0;
    double delta = 0.0;
    std::int64_t K_n = 0;
    double K_h = 0.0;
    DriftGrid grid;
    double worst_margin = 0.0;  ///< max margin over grid points outside K
    bool tail_ok = false;       ///< margins worsen across the outermost grid shells
    std::vector<State> offenders;  ///< boundary points with positive margin when invalid

    friend bool operator==(const DriftReport&, const DriftReport&) = default;
};

DriftReport drift_check(const ModelParams& p, Lyapunov which, double gamma,
                        const DriftGrid& grid);

struct DecayPoint {
    double t = 0.0;
    double tv = 0.0;

    friend bool operator==(const DecayPoint&, const DecayPoint&) = default;
};

/// Least-squares fit of log TV(Law(Z_t | z_a), Law(Z_t | z_b)) against t,
/// restricted to points above twice the split-half noise floor.
struct DecayReport {
    std::vector<DecayPoint> points;
    double noise_floor = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int points_used = 0;
    bool conclusive = false;  ///< at least two points above the noise floor

    friend bool operator==(const DecayReport&, const DecayReport&) = default;
};

DecayReport ergodicity_decay(const ModelParams& p, const State& z_a, const State& z_b,
                             std::span<const double> times, int replicas, std::uint64_t seed,
                             std::int64_t n_top = 60);

struct ReachReport {
    std::int64_t hits = 0;
    int replicas = 0;
    double frequency = 0.0;

    friend bool operator==(const ReachReport&, const ReachReport&) = default;
};

/// Empirical probability that the process started at z0 sits in
/// {target_n} x (h_lo, h_hi) at time T.
ReachReport reachability(const ModelParams& p, const State& z0, std::int64_t target_n,
                         double h_lo, double h_hi, double T, int replicas, std::uint64_t seed);

struct EpsRow {
    double epsilon = 0.0;
    double tv = 0.0;

    friend bool operator==(const EpsRow&, const EpsRow&) = default;
};

/// TV between the prey marginal of the epsilon-rescaled process at time T and
/// the matched averaged-process marginal, one row per epsilon. Expected
/// nonincreasing in epsilon up to Monte Carlo noise (split-half floor).
struct EpsTable {
    std::vector<EpsRow> rows;
    double noise_floor = 0.0;
    std::int64_t n_top = 0;

    friend bool operator==(const EpsTable&, const EpsTable&) = default;
};

EpsTable epsilon_convergence_suite(const ModelParams& p, std::span<const double> epsilons,
                                   const State& z0, double T, int replicas, std::uint64_t seed,
                                   std::int64_t n_top = 60);

/// TV between the prey marginals of the microscopic chain at scale K and the
/// limiting hybrid process, matched horizons and replica counts. The initial
/// predator count is round(h0 * K).
struct IbmCompare {
    std::int64_t K = 0;
    int replicas = 0;
    double tv = 0.0;
    double noise_floor = 0.0;

    friend bool operator==(const IbmCompare&, const IbmCompare&) = default;
};

IbmCompare ibm_vs_pdmp(const ModelParams& p, std::int64_t K, const State& z0, double T,
                       int replicas, std::uint64_t seed, std::int64_t n_top = 60);

}  // namespace preypred

#endif
