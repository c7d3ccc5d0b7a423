#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "preypred/analysis.hpp"
#include "preypred/simulate.hpp"

using namespace preypred;

namespace {

ModelParams pure_birth_params() {
    ModelParams p = oracles::params421();
    p.d = 0.0;
    p.B = 0.0;
    p.c = 1e-300;  // c > 0 required; no measurable competition
    return p;
}

}  // namespace

TEST_CASE("RngStream: reproducible, index-separated, draws in (0,1)") {
    RngStream a(42, 0), b(42, 0), c(42, 1);
    for (int i = 0; i < 1000; ++i) {
        double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        CHECK(a.exponential() == b.exponential());
    }
    // distinct replica indices decorrelate immediately
    RngStream a2(42, 0);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += a2.next_u64() == c.next_u64();
    CHECK(same == 0);
}

TEST_CASE("thinning accepts at the first proposal when h = h*_n") {
    ModelParams p = oracles::params421();
    State fixed{5, equilibrium(p, 5)};
    double theta = total_rate(p, fixed);
    for (std::uint64_t i = 0; i < 50; ++i) {
        RngStream rng(901, i), probe(901, i);
        Jump j = next_jump_thinning(p, fixed, rng);
        CHECK(j.dt == probe.exponential() / theta);  // exactly one proposal consumed
    }
}

TEST_CASE("pure-birth regime: waiting time is Exp(bn), kind always birth") {
    ModelParams p = pure_birth_params();
    State z{4, 2.0};
    double rate = p.b * 4.0;
    std::vector<double> sample;
    RngStream rng(7, 0);
    for (int i = 0; i < 20000; ++i) {
        Jump j = next_jump_thinning(p, z, rng);
        CHECK(j.kind == EventKind::prey_birth);
        sample.push_back(j.dt);
    }
    double d = oracles::ks_statistic(sample, [&](double t) { return -std::expm1(-rate * t); });
    CHECK(d < oracles::ks_critical_1pct(sample.size()));
}

TEST_CASE("both samplers match the hazard law and each other") {
    ModelParams p = oracles::params421();
    State z{3, 2.0};
    const int n = 20000;
    std::vector<double> thin, inv;
    RngStream rng_t(11, 0), rng_i(11, 1);
    for (int i = 0; i < n; ++i) {
        thin.push_back(next_jump_thinning(p, z, rng_t).dt);
        inv.push_back(next_jump_inversion(p, z, rng_i).dt);
    }
    auto cdf = [&](double t) { return -std::expm1(-hazard(p, z, t)); };
    CHECK(oracles::ks_statistic(thin, cdf) < oracles::ks_critical_1pct(thin.size()));
    CHECK(oracles::ks_statistic(inv, cdf) < oracles::ks_critical_1pct(inv.size()));
    CHECK(oracles::ks_statistic_two(thin, inv) <
          oracles::ks_critical_1pct_two(thin.size(), inv.size()));
}

TEST_CASE("seed determinism: identical trajectory event lists") {
    ModelParams p = oracles::params421();
    for (JumpSampler sampler : {JumpSampler::thinning, JumpSampler::inversion}) {
        SimOptions opts;
        opts.sampler = sampler;
        RngStream r1(555, 3), r2(555, 3);
        Trajectory a = simulate_pdmp(p, State{5, 5.0}, 50.0, r1, opts);
        Trajectory b = simulate_pdmp(p, State{5, 5.0}, 50.0, r2, opts);
        REQUIRE(a.events.size() == b.events.size());
        CHECK(a.events == b.events);
    }
}

TEST_CASE("trajectory invariants: ordered times, unit jumps, end marker") {
    ModelParams p = oracles::params421();
    RngStream rng(321, 0);
    Trajectory traj = simulate_pdmp(p, State{5, 5.0}, 100.0, rng);
    REQUIRE(!traj.events.empty());
    CHECK(traj.events.back().kind == EventKind::end);
    CHECK(traj.events.back().time == 100.0);
    double prev_t = 0.0;
    State prev = traj.initial;
    double max_n = static_cast<double>(traj.initial.n);
    for (const Event& ev : traj.events) {
        if (ev.kind == EventKind::end) break;
        CHECK(ev.time > prev_t);
        CHECK(ev.time <= traj.horizon);
        CHECK(std::abs(ev.after.n - prev.n) == 1);
        CHECK(ev.after.n >= 1);  // m = 0: prey never dies out
        max_n = std::max(max_n, static_cast<double>(ev.after.n));
        // predator bound along the path (majoration of the flow)
        CHECK(ev.after.h <= std::max(traj.initial.h, p.r * p.B / p.C * max_n) * (1 + 1e-12));
        prev_t = ev.time;
        prev = ev.after;
    }
}

TEST_CASE("no jump before a tiny horizon leaves h at the fixed point") {
    ModelParams p = oracles::params421();
    State z{6, equilibrium(p, 6)};
    RngStream rng(99, 0);
    Trajectory traj = simulate_pdmp(p, z, 1e-9, rng);
    CHECK(traj.events.size() == 1);  // just the end marker
    CHECK(traj.events.back().after.h == z.h);
}

TEST_CASE("event ceiling failure names the ceiling") {
    ModelParams p = oracles::params421();
    SimOptions opts;
    opts.max_events = 5;
    RngStream rng(17, 0);
    CHECK_THROWS_WITH_AS(simulate_pdmp(p, State{5, 5.0}, 1000.0, rng, opts),
                         "event-count ceiling of 5 events exceeded", EventCeilingError);
}

TEST_CASE("Yule moment oracle: mean prey e^{bT} n0 within 3 standard errors") {
    ModelParams p = pure_birth_params();
    const double T = 3.0;
    const std::int64_t n0 = 3;
    const int R = 10000;
    ReplicaSpec spec{p, ProcessTag{ProcessKind::pdmp, 0}, n0, 1.0, 0, T, {}};
    auto terminal = run_replicas_terminal(spec, R, 20240601);
    double mean = 0.0;
    for (const State& s : terminal) mean += static_cast<double>(s.n);
    mean /= R;
    double g = std::exp(p.b * T);
    double expected = n0 * g;
    double stderr_mean = std::sqrt(n0 * g * (g - 1.0) / R);
    CHECK(std::abs(mean - expected) <= 3.0 * stderr_mean);
}

TEST_CASE("coupled with a shared birth-proposal stream, prey never exceeds Yule") {
    // Thinning on the pair (Z, Ntilde): proposals at a rate dominating
    // b*Ntilde + death(N, h); the first b*N slice of the birth band moves both
    // counts, so N <= Ntilde is preserved pathwise while N keeps the exact
    // community law and Ntilde the Yule law.
    ModelParams p = oracles::params421();
    for (std::uint64_t seed_idx = 0; seed_idx < 100; ++seed_idx) {
        RngStream rng(31337, seed_idx);
        std::int64_t n = 4, ntilde = 4;
        double h0 = 5.0, t = 0.0, seg_t = 0.0;
        const double T = 8.0;
        double h_seg = h0;
        while (t < T) {
            double hstar = equilibrium(p, n);
            double h_now = flow(p, n, h_seg, t - seg_t);
            JumpRates jr = rates(p, State{n, std::max(h_now, hstar)});
            double bound = p.b * static_cast<double>(ntilde) + jr.death;
            t += rng.exponential() / bound;
            if (t >= T) break;
            double h_t = flow(p, n, h_seg, t - seg_t);
            JumpRates actual = rates(p, State{n, h_t});
            double x = rng.uniform() * bound;
            if (x <= actual.birth) {
                ++n;
                ++ntilde;
                h_seg = h_t;
                seg_t = t;
            } else if (x <= p.b * static_cast<double>(ntilde)) {
                ++ntilde;  // Yule-only birth
            } else if (x <= p.b * static_cast<double>(ntilde) + actual.death) {
                --n;
                h_seg = h_t;
                seg_t = t;
            }
            CHECK(n <= ntilde);
        }
    }
}

TEST_CASE("IBM rates: predator extinction absorbing, per-capita rate K-free") {
    ModelParams p = oracles::params421();
    IbmRates dead = ibm_rates(p, 500, 7, 0);
    CHECK(dead.pred_birth == 0.0);
    CHECK(dead.pred_death == 0.0);

    for (std::int64_t K : {1, 10, 500}) {
        IbmRates ir = ibm_rates(p, K, 6, 4 * K);
        CHECK(ir.pred_birth / (4.0 * K) ==
              doctest::Approx(p.r * p.B * 6.0).epsilon(1e-12));  // r^K B^K = rB
    }

    // prey death sees the density pred/K, independent of K
    IbmRates a = ibm_rates(p, 10, 5, 20);
    IbmRates b = ibm_rates(p, 1000, 5, 2000);
    CHECK(a.prey_death == doctest::Approx(b.prey_death).epsilon(1e-12));
}

TEST_CASE("IBM trajectory: unit moves, rescaled density, determinism") {
    ModelParams p = oracles::params421();
    RngStream r1(808, 0), r2(808, 0);
    Trajectory a = simulate_ibm(p, 50, 5, 250, 2.0, r1);
    Trajectory b = simulate_ibm(p, 50, 5, 250, 2.0, r2);
    CHECK(a.events == b.events);
    State prev = a.initial;
    for (const Event& ev : a.events) {
        if (ev.kind == EventKind::end) break;
        bool prey = ev.kind == EventKind::prey_birth || ev.kind == EventKind::prey_death;
        if (prey) {
            CHECK(std::abs(ev.after.n - prev.n) == 1);
            CHECK(ev.after.h == prev.h);
        } else {
            CHECK(ev.after.n == prev.n);
            CHECK(std::abs(ev.after.h - prev.h) * 50.0 == doctest::Approx(1.0).epsilon(1e-9));
        }
        prev = ev.after;
    }
}

TEST_CASE("prey count never reaches 0 in the IBM or averaged chains (m=0)") {
    ModelParams p = oracles::params421();
    RngStream r1(61, 0), r2(62, 0);
    for (const Event& ev : simulate_ibm(p, 30, 2, 60, 4.0, r1).events) CHECK(ev.after.n >= 1);
    for (const Event& ev : simulate_averaged(p, 2, 300.0, r2).events) CHECK(ev.after.n >= 1);
}

TEST_CASE("migration variant: n=0 is left only by migration births") {
    ModelParams p = oracles::params421();
    p.m = 0.5;
    bool saw_zero = false;
    for (std::uint64_t i = 0; i < 40; ++i) {
        RngStream rng(5252, i);
        Trajectory traj = simulate_pdmp(p, State{1, 2.0}, 60.0, rng);
        std::int64_t prev = traj.initial.n;
        for (const Event& ev : traj.events) {
            if (ev.kind == EventKind::end) break;
            CHECK(ev.after.n >= 0);
            if (prev == 0) {
                saw_zero = true;
                CHECK(ev.kind == EventKind::prey_birth);  // no deaths out of n=0
            }
            prev = ev.after.n;
        }
    }
    CHECK(saw_zero);  // with the indicator dropped, extinction visits do happen
}

TEST_CASE("averaged chain: first event from n0=1 is a birth; D=0 death rate identity") {
    ModelParams p = oracles::params421();
    for (std::uint64_t i = 0; i < 200; ++i) {
        RngStream rng(4242, i);
        Trajectory traj = simulate_averaged(p, 1, 5.0, rng);
        REQUIRE(traj.events.size() >= 1);
        if (traj.events.front().kind != EventKind::end)
            CHECK(traj.events.front().kind == EventKind::prey_birth);
    }
    // with D=0 the averaged death rate is n(d + c~ n), c~ = c + rB^2/C
    double ctilde = p.c + p.r * p.B * p.B / p.C;
    for (std::int64_t n = 2; n <= 40; ++n) {
        double nd = static_cast<double>(n);
        double via_hstar = nd * (p.d + p.c * nd + p.B * equilibrium(p, n));
        CHECK(via_hstar == doctest::Approx(nd * (p.d + ctilde * nd)).epsilon(1e-12));
    }
}

TEST_CASE("averaged long run matches the closed-form invariant law") {
    ModelParams p = oracles::params421();
    const int R = 2000;
    ReplicaSpec spec{p, ProcessTag{ProcessKind::averaged, 0}, 5, 0.0, 0, 1000.0, {}};
    auto terminal = run_replicas_terminal(spec, R, 77);
    DiscreteDistribution emp = prey_marginal(terminal, 1, 60);
    DiscreteDistribution exact = averaged_invariant(p, 60);
    CHECK(tv_distance(emp, exact) <= 0.05);
}

TEST_CASE("run_replicas: R=1 equals a single call on stream 0; aggregates reproduce") {
    ModelParams p = oracles::params421();
    ReplicaSpec spec{p, ProcessTag{ProcessKind::pdmp, 0}, 5, 5.0, 0, 20.0, {}};
    auto batch = run_replicas_terminal(spec, 1, 999);
    RngStream rng(999, 0);
    State single = simulate_pdmp_terminal(p, State{5, 5.0}, 20.0, rng);
    CHECK(batch[0] == single);

    auto once = run_replicas_terminal(spec, 64, 12345);
    auto twice = run_replicas_terminal(spec, 64, 12345);
    CHECK(once == twice);

    auto traj_batch = run_replicas(spec, 3, 2222);
    RngStream rng2(2222, 2);
    Trajectory third = simulate_pdmp(p, State{5, 5.0}, 20.0, rng2);
    CHECK(traj_batch[2].events == third.events);
}

TEST_CASE("replica failures carry the replica index") {
    ModelParams p = oracles::params421();
    SimOptions opts;
    opts.max_events = 3;
    ReplicaSpec spec{p, ProcessTag{ProcessKind::pdmp, 0}, 5, 5.0, 0, 100.0, opts};
    try {
        run_replicas_terminal(spec, 4, 1);
        FAIL("expected EventCeilingError");
    } catch (const EventCeilingError& e) {
        CHECK(e.replica() >= 0);
        CHECK(std::string(e.what()).find("replica") != std::string::npos);
    }
}

TEST_CASE("snapshots agree with state_at on the recorded trajectory") {
    ModelParams p = oracles::params421();
    std::vector<double> times{1.0, 5.0, 12.5, 20.0};
    RngStream r1(246, 0), r2(246, 0);
    Trajectory traj = simulate_pdmp(p, State{5, 5.0}, 20.0, r1);
    auto snaps = simulate_pdmp_snapshots(p, State{5, 5.0}, times, r2);
    REQUIRE(snaps.size() == times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        State expected = state_at(traj, times[k]);
        CHECK(snaps[k].n == expected.n);
        CHECK(snaps[k].h == doctest::Approx(expected.h).epsilon(1e-12));
    }
}

TEST_CASE("slow-fast path concentrates near the equilibrium line") {
    ModelParams p = oracles::params421();
    p.epsilon = 1e-3;
    RngStream rng(31, 0);
    Trajectory traj = simulate_pdmp(p, State{5, 5.0}, 200.0, rng);
    double frac = time_near_equilibrium(traj, 0.1) / traj.horizon;
    CHECK(frac > 0.9);

    ModelParams p1 = oracles::params421();
    RngStream rng1(31, 0);
    Trajectory traj1 = simulate_pdmp(p1, State{5, 5.0}, 200.0, rng1);
    double frac1 = time_near_equilibrium(traj1, 0.1) / traj1.horizon;
    CHECK(frac > frac1);  // monotone concentration on matched seeds
}
