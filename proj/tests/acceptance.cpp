// Acceptance suite: one numbered check per release criterion, each printed as
// a single [PASS]/[FAIL] line with the measured quantities. Run with no
// arguments for all criteria, with numbers to select a subset, with
// --cli PATH to point at the command-line binary (criterion 12), and with
// --full-scale for the full-size reference runs.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "preypred/analysis.hpp"
#include "preypred/io.hpp"

using namespace preypred;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// ---- 1. mu_1 reproduction -------------------------------------------------

Outcome c1_mu1() {
    auto start = std::chrono::steady_clock::now();
    DiscreteDistribution mu = averaged_invariant(oracles::params421(), 50);
    double elapsed = seconds_since(start);
    double mu1 = mu.p.front();
    bool pass = std::abs(mu1 - 2.69e-5) <= 0.02e-5 && elapsed < 0.010;
    return {pass, "mu1=" + fmt(mu1) + " (target 2.69e-5 +- 0.02e-5), runtime " +
                      fmt(elapsed * 1e3) + " ms (< 10 ms)"};
}

// ---- 2. D=0 closed form ---------------------------------------------------

Outcome c2_closed_form() {
    ModelParams p = oracles::params421();
    DiscreteDistribution mu = averaged_invariant(p, 50);
    double ctilde = p.c + p.r * p.B * p.B / p.C;
    double x = p.b / ctilde;
    double factor = 1.0;  // x^{n-1} / n!
    double worst = 0.0;
    for (std::int64_t n = 2; n <= 50; ++n) {
        factor *= x / static_cast<double>(n);
        double closed = mu.p.front() * factor / static_cast<double>(n);
        double got = mu.p[static_cast<std::size_t>(n - 1)];
        worst = std::max(worst, std::abs(got - closed) / closed);
    }
    return {worst <= 1e-10, "max relative gap to (b/c~)^{n-1}/(n n!) mu_1 over n<=50: " +
                                fmt(worst) + " (tol 1e-10)"};
}

// ---- 3. flow exactness ----------------------------------------------------

Outcome c3_flow() {
    auto start = std::chrono::steady_clock::now();
    ModelParams p = oracles::params421();
    double worst_rk = 0.0, worst_semi = 0.0, worst_fix = 0.0;
    for (std::int64_t n = 1; n <= 20; ++n) {
        double hstar = equilibrium(p, n);
        for (int hi = 0; hi < 20; ++hi) {
            double h = 0.25 + 1.55 * hi;  // 0.25 .. 29.7
            for (int ti = 0; ti < 10; ++ti) {
                double t = 0.4 * (ti + 1);  // 0.4 .. 4
                double exact = flow(p, n, h, t);
                worst_rk = std::max(worst_rk, std::abs(exact - oracles::rk4_flow(p, n, h, t, 2500)));
                double semi = flow(p, n, flow(p, n, h, 0.4 * t), 0.6 * t);
                worst_semi = std::max(worst_semi, std::abs(semi - exact) / exact);
            }
        }
        for (double t : {0.5, 3.0, 25.0})
            worst_fix = std::max(worst_fix, std::abs(flow(p, n, hstar, t) - hstar));
    }
    double elapsed = seconds_since(start);
    bool pass = worst_rk <= 1e-8 && worst_semi <= 1e-10 && worst_fix <= 1e-10 && elapsed < 1.0;
    return {pass, "max |flow - RK4| = " + fmt(worst_rk) + " (tol 1e-8), semigroup " +
                      fmt(worst_semi) + ", fixed point " + fmt(worst_fix) +
                      " (tol 1e-10), runtime " + fmt(elapsed) + " s (< 1 s)"};
}

// ---- 4. sampler equivalence -----------------------------------------------

Outcome c4_samplers() {
    auto start = std::chrono::steady_clock::now();
    ModelParams p = oracles::params421();
    const std::size_t n_draws = 100000;
    const State states[3] = {State{14, 14.0}, State{3, 40.0}, State{1, 2.0}};
    std::string detail;
    bool pass = true;
    for (int k = 0; k < 3; ++k) {
        std::vector<double> thin, inv;
        thin.reserve(n_draws);
        inv.reserve(n_draws);
        RngStream rng_t(60100 + k, 0), rng_i(60100 + k, 1);
        for (std::size_t i = 0; i < n_draws; ++i) {
            thin.push_back(next_jump_thinning(p, states[k], rng_t).dt);
            inv.push_back(next_jump_inversion(p, states[k], rng_i).dt);
        }
        double d = oracles::ks_statistic_two(thin, inv);
        double crit = oracles::ks_critical_1pct_two(n_draws, n_draws);
        pass = pass && d < crit;
        detail += "(" + std::to_string(states[k].n) + "," + fmt(states[k].h) + "): KS=" +
                  fmt(d) + (d < crit ? " < " : " >= ") + fmt(crit) + "  ";
    }
    double elapsed = seconds_since(start);
    pass = pass && elapsed < 30.0;
    return {pass, detail + "runtime " + fmt(elapsed) + " s (< 30 s)"};
}

// ---- 5. uniform contraction -----------------------------------------------

Outcome c5_contraction() {
    ModelParams base = oracles::params421();
    double hstar1 = equilibrium(base, 1);
    double delta = 0.99 * base.C * hstar1;
    double worst = -1e300;
    long checked = 0;
    for (double eps : {1.0, 0.1}) {
        ModelParams p = base;
        p.epsilon = eps;
        for (std::int64_t n : {1, 2, 3, 5, 8, 13, 21, 34}) {
            double hstar = equilibrium(p, n);
            for (double h : {1.0001, 1.5, 2.5, 5.0, 10.0, 25.0, 60.0, 150.0}) {
                for (double t : {0.05, 0.2, 1.0, 5.0, 20.0}) {
                    double lhs = std::abs(flow(p, n, h, t) - hstar);
                    double rhs = std::abs(h - hstar) * std::exp(-delta * t / eps);
                    worst = std::max(worst, lhs - rhs * (1.0 + 1e-12));
                    ++checked;
                }
            }
        }
    }
    return {worst <= 0.0, "grid of " + std::to_string(checked) +
                              " points, delta=0.99 C h*_1=" + fmt(delta) +
                              ", worst excess " + fmt(worst)};
}

// ---- 6. drift inequality --------------------------------------------------

Outcome c6_drift() {
    ModelParams p = oracles::params421();
    DriftGrid grid{500, 500.0, 500};
    std::string detail;
    bool pass = true;
    for (Lyapunov which : {Lyapunov::V, Lyapunov::W}) {
        DriftReport report = drift_check(p, which, 0.1, grid);
        pass = pass && report.valid && report.worst_margin <= 0.0 && report.delta > 0.0;
        detail += std::string(which == Lyapunov::V ? "V" : "W") + ": K={1.." +
                  std::to_string(report.K_n) + "}x[0," + fmt(report.K_h) + "], delta=" +
                  fmt(report.delta) + ", worst outside " + fmt(report.worst_margin) + "  ";
    }
    return {pass, detail + "(grid n<=500, h<=500, gamma=0.1)"};
}

// ---- 7. slow-fast concentration -------------------------------------------

Outcome c7_concentration() {
    auto start = std::chrono::steady_clock::now();
    ModelParams base = oracles::params421();
    const int R = 500;
    const double T = 200.0;
    double fractions[3] = {};
    const double eps_list[3] = {1.0, 0.1, 1e-3};
    for (int k = 0; k < 3; ++k) {
        ModelParams p = base;
        p.epsilon = eps_list[k];
        ReplicaSpec spec{p, ProcessTag{ProcessKind::pdmp, 0}, 5, 5.0, 0, T, {}};
        auto terminal = run_replicas_terminal(spec, R, 70000 + k);
        int inside = 0;
        for (const State& s : terminal)
            if (std::abs(s.h - equilibrium(p, s.n)) <= 0.1) ++inside;
        fractions[k] = static_cast<double>(inside) / R;
    }
    double elapsed = seconds_since(start);
    bool pass = fractions[0] <= fractions[1] && fractions[1] <= fractions[2] &&
                fractions[2] > 0.9 && elapsed < 600.0;
    return {pass, "mass within |h-h*_n|<=0.1: eps=1: " + fmt(fractions[0]) + ", eps=0.1: " +
                      fmt(fractions[1]) + ", eps=1e-3: " + fmt(fractions[2]) +
                      " (nondecreasing, last > 0.9), runtime " + fmt(elapsed) + " s (< 600 s)"};
}

// ---- 8. averaging of the prey marginal ------------------------------------

Outcome c8_averaging() {
    ModelParams p = oracles::params421();
    std::vector<double> eps{1.0, 0.1, 1e-3};
    EpsTable table = epsilon_convergence_suite(p, eps, State{5, 5.0}, 200.0, 2000, 80001);
    bool monotone = true;
    for (std::size_t k = 1; k < table.rows.size(); ++k)
        monotone = monotone && table.rows[k].tv <= table.rows[k - 1].tv + 2.0 * table.noise_floor;
    double last = table.rows.back().tv;
    bool pass = monotone && last <= 0.1;
    std::string detail = "TV(prey marginal, averaged): ";
    for (const EpsRow& row : table.rows)
        detail += "eps=" + fmt(row.epsilon) + ": " + fmt(row.tv) + "  ";
    return {pass, detail + "noise floor " + fmt(table.noise_floor) +
                      " (last <= 0.1, nonincreasing up to noise)"};
}

// ---- 9. IBM limit -----------------------------------------------------------

Outcome c9_ibm() {
    ModelParams p = oracles::params421();
    IbmCompare report = ibm_vs_pdmp(p, 500, State{5, 5.0}, 5.0, 2000, 90001);
    return {report.tv <= 0.15, "TV(IBM prey marginal, PDMP prey marginal) = " + fmt(report.tv) +
                                   " (tol 0.15), K=500, R=2000, noise floor " +
                                   fmt(report.noise_floor)};
}

// ---- 10. exponential ergodicity trend --------------------------------------

Outcome c10_ergodicity() {
    ModelParams p = oracles::params421();
    std::vector<double> times{5.0, 10.0, 20.0, 40.0};
    DecayReport report = ergodicity_decay(p, State{1, 2.0}, State{30, 10.0}, times, 5000, 100001);
    bool pass = report.conclusive && report.slope < 0.0;
    std::string detail = "TV(t): ";
    for (const DecayPoint& pt : report.points) detail += fmt(pt.t) + ":" + fmt(pt.tv) + "  ";
    detail += "floor " + fmt(report.noise_floor) + ", slope " + fmt(report.slope) + " from " +
              std::to_string(report.points_used) + " points above floor";
    return {pass, detail};
}

// ---- 11. mode analysis ------------------------------------------------------

Outcome c11_mode() {
    ModeReport report = invariant_mode(oracles::params421(), 200);
    bool pass = report.mode == 14 && std::abs(report.poly.x1 - 3.0) <= 1e-9 &&
                std::abs(report.poly.discriminant - 0.04) <= 1e-12 &&
                report.poly.discriminant > 0.0 && report.discrepancy;
    return {pass, "mode=" + std::to_string(report.mode) + " (expect 14), x1=" +
                      fmt(report.poly.x1) + " (expect 3), discriminant=" +
                      fmt(report.poly.discriminant) + " (expect 0.04), discrepancy flag " +
                      (report.discrepancy ? "set" : "NOT set")};
}

// ---- 12. determinism --------------------------------------------------------

std::string g_cli_path;

bool run_cli(const std::string& args, const std::filesystem::path& out) {
    std::string cmd = g_cli_path + " " + args + " --out " + out.string() + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return rc == 0;
}

bool same_bytes(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return sa.str() == sb.str() && !sa.str().empty();
}

Outcome c12_determinism() {
    if (g_cli_path.empty()) return {false, "no --cli PATH given"};
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "preypred_accept";
    fs::create_directories(dir);
    const std::string base = "--b 0.4 --d 0 --c 0.005 --B 0.02 --r 2 --D 0 --C 0.04";
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"pdmp trajectory csv",
         "simulate " + base + " --n0 5 --h0 5 --T 20 --seed 7"},
        {"pdmp inversion sampler",
         "simulate " + base + " --n0 5 --h0 5 --T 10 --seed 7 --sampler inversion"},
        {"ibm histogram",
         "simulate " + base + " --process ibm --K 50 --n0 5 --h0 5 --T 2 --replicas 8 "
         "--seed 8 --hist true"},
        {"averaged terminal states",
         "simulate " + base + " --process averaged --n0 5 --T 50 --replicas 4 --seed 9"},
        {"compare epsilon",
         "compare " + base + " --compare epsilon --epsilons 1,0.5 --n0 5 --h0 5 --T 10 "
         "--replicas 60 --seed 10"},
        {"compare ibm",
         "compare " + base + " --compare ibm --K 30 --n0 5 --h0 5 --T 2 --replicas 40 "
         "--seed 11"},
        {"compare ergodicity",
         "compare " + base + " --compare ergodicity --n0 2 --h0 2 --n0_b 20 --h0_b 8 "
         "--times 2,4 --replicas 60 --seed 12"},
        {"reach",
         "reach " + base + " --n0 1 --h0 2 --target_n 3 --target_h_lo 2.5 --target_h_hi 3.5 "
         "--T 25 --replicas 200 --seed 13"},
        {"occupation",
         "occupation " + base + " --n0 5 --h0 5 --T 20 --seed 14"},
    };
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        fs::path a = dir / ("run" + std::to_string(i) + "a.out");
        fs::path b = dir / ("run" + std::to_string(i) + "b.out");
        bool ok = run_cli(runs[i].second, a) && run_cli(runs[i].second, b) && same_bytes(a, b);
        pass = pass && ok;
        if (!ok) detail += runs[i].first + " NOT byte-identical; ";
    }
    if (pass) detail = std::to_string(runs.size()) + " stochastic commands, each run twice: byte-identical";
    return {pass, detail};
}

// ---- full-scale optional suite ----------------------------------------------

int full_scale() {
    ModelParams base = oracles::params421();
    const int R = 3000;
    const double T = 1000.0;
    std::printf("full-scale suite: R=%d, T=%g, eps in {1, 0.1, 1e-5}\n",
                R, T);
    DiscreteDistribution mu = averaged_invariant(base, 200);
    double fractions[3] = {};
    double tvs[3] = {};
    const double eps_list[3] = {1.0, 0.1, 1e-5};
    for (int k = 0; k < 3; ++k) {
        auto start = std::chrono::steady_clock::now();
        ModelParams p = base;
        p.epsilon = eps_list[k];
        ReplicaSpec spec{p, ProcessTag{ProcessKind::pdmp, 0}, 5, 5.0, 0, T, {}};
        auto terminal = run_replicas_terminal(spec, R, 123450 + k);

        Hist2D skeleton = make_hstar_hist(p, 1, 200);
        Hist2D hist = empirical_invariant(terminal, skeleton);
        double diag = 0.0;
        for (std::int64_t n = 1; n <= 200; ++n)
            diag += hist.at(hist.n_bin(n), hist.h_bin(equilibrium(p, n)));
        fractions[k] = diag / hist.total_weight();
        tvs[k] = tv_distance(prey_marginal(terminal, 1, 200), mu);
        std::printf("  eps=%-7g diagonal-cell mass %.4f   TV(prey marginal, closed-form mu) "
                    "%.4f   (%.1f s)\n",
                    eps_list[k], fractions[k], tvs[k], seconds_since(start));
    }
    bool pass = fractions[0] <= fractions[1] && fractions[1] <= fractions[2] &&
                fractions[2] >= 0.9;
    std::printf("[%s] full-scale: diagonal mass nondecreasing in 1/eps and >= 0.9 at eps=1e-5\n",
                pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    bool full = false;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc)
            g_cli_path = argv[++i];
        else if (arg == "--full-scale")
            full = true;
        else
            selected.push_back(std::atoi(arg.c_str()));
    }
    if (full) return full_scale();

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "mu_1 reproduction", c1_mu1},
        {2, "closed-form consistency (D=0)", c2_closed_form},
        {3, "flow exactness", c3_flow},
        {4, "sampler equivalence", c4_samplers},
        {5, "uniform contraction", c5_contraction},
        {6, "drift inequality", c6_drift},
        {7, "slow-fast concentration", c7_concentration},
        {8, "averaging of the prey marginal", c8_averaging},
        {9, "IBM limit", c9_ibm},
        {10, "exponential ergodicity trend", c10_ergodicity},
        {11, "mode analysis", c11_mode},
        {12, "determinism", c12_determinism},
    };

    int failures = 0;
    for (const Criterion& crit : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), crit.id) == selected.end())
            continue;
        Outcome outcome = crit.run();
        std::printf("[%s] %2d. %s: %s\n", outcome.pass ? "PASS" : "FAIL", crit.id, crit.name,
                    outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
