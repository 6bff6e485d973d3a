// Acceptance gate: one PASS/FAIL line per criterion. Arguments select
// criteria by number (default: all). Exit status 1 if any selected one fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>

#include "../common/corpus.hpp"
#include "hodg/dg.hpp"
#include "hodg/perf.hpp"
#include "hodg/renumber.hpp"
#include "hodg/solver.hpp"
#include "hodg/timestepping.hpp"

#ifndef HODG_CLI_PATH
#define HODG_CLI_PATH "hodg"
#endif

using namespace hodg;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Best per-iteration loop time over `reps` runs.
double seconds_per_iteration(const RunConfig& c, int reps) {
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < reps; ++r) {
        const RunArtifacts a = run(c);
        best = std::min(best, a.perf.wall_seconds / double(a.perf.iterations));
    }
    return best;
}

// ---------------------------------------------------------------------------

Outcome table6() {
    const auto t0 = Clock::now();
    const fs::path out = fs::temp_directory_path() / "hodg_acceptance_divergence.txt";
    const std::string cmd = std::string(HODG_CLI_PATH) +
                            " divergence --sloc base=2900 --diff OpenMP=34 --diff CUDA=280 "
                            "--diff OpenACC_UM=94 --diff OpenACC_nonUM=161 --base base > " +
                            out.string();
    const int status = std::system(cmd.c_str());
    const double secs = seconds_since(t0);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "divergence CLI failed"};

    const std::pair<const char*, double> expected[] = {
        {"OpenMP", 1.17}, {"CUDA", 9.67}, {"OpenACC_UM", 3.24}, {"OpenACC_nonUM", 5.56}};
    std::ifstream f(out);
    std::string line, got;
    bool ok = true;
    int found = 0;
    while (std::getline(f, line)) {
        for (const auto& [label, published] : expected) {
            const std::string prefix = std::string(label) + ",base,";
            if (line.rfind(prefix, 0) != 0) continue;
            const double d = std::stod(line.substr(line.rfind(',') + 1));
            ok = ok && std::abs(d - published) <= 0.02 + 1e-9;
            got += fmt("%s %.2f (published %.2f) ", label, d, published);
            ++found;
        }
    }
    fs::remove(out);
    ok = ok && found == 4 && secs < 1.0;
    return {ok, got + fmt("in %.3f s (limit 1 s, tolerance 0.02 pp)", secs)};
}

Outcome rcm_bandwidth() {
    const auto t0 = Clock::now();
    const std::pair<int, int> grids[] = {{42, 64}, {63, 64}, {126, 128}, {252, 256}};
    bool ok = true;
    std::string detail;
    for (auto [nx, ny] : grids) {
        const Mesh base = generate_quad_grid(nx, ny);
        const Mesh shuffled =
            apply_permutation(base, Permutation::random(base.n_cells(), 1000 + nx));
        const AdjacencyGraph g = build_adjacency(shuffled);
        const Index before = bandwidth(g, Permutation::identity(g.n()));
        const Index after = bandwidth(g, rcm(g));
        const Index limit = 2 * (std::min(nx, ny) + 2);
        const double factor = double(before) / double(after);
        ok = ok && after <= limit && factor >= 10.0;
        detail += fmt("%zu cells %d->%d (limit %d, x%.0f); ", base.n_cells(), before, after, limit,
                      factor);
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 10.0;
    return {ok, detail + fmt("%.2f s (limit 10 s)", secs)};
}

RunConfig large_grid(int workers) {
    RunConfig c;
    c.mesh.nx = 252;
    c.mesh.ny = 256;
    c.order = 1;
    c.mach = 0.5;
    c.angle = 10.0;
    c.initial = InitialCondition::pulse;
    c.pulse_width = 0.1;
    c.center = {0.5, 0.5};
    c.max_iterations = 12;
    c.workers = workers;
    return c;
}

Outcome renumber_speed() {
    const auto t0 = Clock::now();
    RunConfig c = large_grid(8);
    c.mesh.shuffle = 99;
    c.renumber = false;
    const double shuffled = seconds_per_iteration(c, 3);
    c.renumber = true;
    const double ordered = seconds_per_iteration(c, 3);
    const double gain = 1.0 - ordered / shuffled;
    const double secs = seconds_since(t0);
    const bool ok = gain >= 0.10 && secs < 300.0;
    return {ok, fmt("64512 cells, p=1, 8 workers: random %.1f ms/it, RCM %.1f ms/it, gain %.1f%% "
                    "(need >= 10%%) in %.1f s (limit 300 s)",
                    1e3 * shuffled, 1e3 * ordered, 100.0 * gain, secs)};
}

Outcome freestream() {
    GasModel ns;
    ns.ivis = 1;
    ns.mu_dyn = 0.01;
    double worst_rhs = 0.0, worst_drift = 0.0;
    int cases = 0;
    for (const auto& [name, mesh] : testing::corpus())
        for (const GasModel& gas : {GasModel{}, ns})
            for (int p = 0; p <= 2; ++p) {
                const auto q = conserved_from_primitive(
                    make_primitive(1.0, 1.0, 0.0, 1.0 / (1.4 * 0.25), gas), gas);
                const auto geo = compute_geometry(mesh, BasisSet(p));
                const auto bcs = BoundaryConditions::from_mesh(mesh, q);
                DofState<double> s(mesh.n_cells(), geo.n_basis);
                for (std::size_t cell = 0; cell < mesh.n_cells(); ++cell)
                    for (int v = 0; v < 4; ++v) s.at(cell, v, 0) = q[v];
                const DofState<double> initial = s;

                const Residual r = rhs(s, mesh, geo, bcs, gas);
                for (double x : r.r) worst_rhs = std::max(worst_rhs, std::abs(x));

                DgWorkspace<double> ws;
                Residual first, second;
                DofState<double> stage;
                std::vector<double> dt;
                for (int it = 0; it < 100; ++it) {
                    compute_local_dt(s, mesh, gas, 0.3, p, dt);
                    const double g = min_reduce(dt);
                    rk2_step(
                        s, std::span<const double>(&g, 1),
                        [&](const DofState<double>& st, Residual& out) {
                            rhs(st, mesh, geo, bcs, gas, ws, out);
                        },
                        first, second, stage);
                }
                for (std::size_t i = 0; i < s.c.size(); ++i)
                    worst_drift = std::max(worst_drift, std::abs(s.c[i] - initial.c[i]));
                ++cases;
            }
    const bool ok = worst_rhs < 1e-11 && worst_drift < 1e-12;
    return {ok, fmt("%d cases (corpus x Euler/NS x p=0..2): max |rhs| %.2e (limit 1e-11), "
                    "100-step drift %.2e (limit 1e-12)",
                    cases, worst_rhs, worst_drift)};
}

// Roe-averaged normal velocity over Roe-averaged sound speed.
double roe_normal_mach(const Conserved<double>& a, const Conserved<double>& b, Normal<double> n,
                       const GasModel& gas) {
    const auto wa = primitive_from_conserved(a, gas), wb = primitive_from_conserved(b, gas);
    const double sa = std::sqrt(wa.rho), sb = std::sqrt(wb.rho);
    const double Ha = (a[kEnergy] + wa.p) / wa.rho, Hb = (b[kEnergy] + wb.p) / wb.rho;
    const double u = (sa * wa.u + sb * wb.u) / (sa + sb), v = (sa * wa.v + sb * wb.v) / (sa + sb);
    const double H = (sa * Ha + sb * Hb) / (sa + sb);
    const double c = std::sqrt((gas.gamma - 1.0) * (H - 0.5 * (u * u + v * v)));
    return (u * n.x + v * n.y) / c;
}

Outcome flux_suite() {
    const auto t0 = Clock::now();
    const GasModel gas;
    std::mt19937_64 rng(777);
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    auto normal = [&] {
        const double t = uni(0.0, 2.0 * std::numbers::pi);
        return Normal<double>{std::cos(t), std::sin(t)};
    };
    auto rel = [](const Flux4<double>& a, const Flux4<double>& b) {
        double scale = 1.0, diff = 0.0;
        for (int k = 0; k < 4; ++k) {
            scale = std::max({scale, std::abs(a[k]), std::abs(b[k])});
            diff = std::max(diff, std::abs(a[k] - b[k]));
        }
        return diff / scale;
    };
    auto state = [&](double vmax) {
        return conserved_from_primitive(
            make_primitive(uni(0.1, 5.0), uni(-vmax, vmax), uni(-vmax, vmax), uni(0.1, 5.0), gas),
            gas);
    };
    const int n = 10000;
    double cons = 0.0, consist = 0.0, upwind = 0.0, wall = 0.0;
    const Conserved<double> fs = state(1.0);
    for (int i = 0; i < n; ++i) {
        const auto nn = normal();
        const auto q = state(3.0);
        consist = std::max(consist, rel(roe_flux(q, q, nn, gas), normal_flux(inviscid_flux(q, gas), nn)));

        const auto qL = state(3.0), qR = state(3.0);
        auto back = roe_flux(qR, qL, Normal<double>{-nn.x, -nn.y}, gas);
        for (auto& x : back) x = -x;
        cons = std::max(cons, rel(roe_flux(qL, qR, nn, gas), back));

        // Both sides supersonic along the normal: the flux is the left flux.
        auto supersonic = [&] {
            const double rho = uni(0.2, 3.0), p = uni(0.2, 3.0);
            const double a = std::sqrt(gas.gamma * p / rho);
            const double un = a * uni(1.05, 4.0), ut = uni(-2.0, 2.0);
            return conserved_from_primitive(
                make_primitive(rho, un * nn.x - ut * nn.y, un * nn.y + ut * nn.x, p, gas), gas);
        };
        // Drawn until the Roe-averaged normal Mach number clears the
        // entropy-fix band, where every wave moves from L to R.
        Conserved<double> sL, sR;
        do {
            sL = supersonic();
            sR = supersonic();
        } while (roe_normal_mach(sL, sR, nn, gas) < 1.0 + kEntropyFixFraction + 1e-6);
        upwind = std::max(upwind, rel(roe_flux(sL, sR, nn, gas), normal_flux(inviscid_flux(sL, gas), nn)));

        const auto ghost = boundary_state(q, BcKind::slip_wall, nn, fs, gas);
        const auto f = roe_flux(q, ghost, nn, gas);
        wall = std::max(wall, std::abs(f[kRho]) / std::max({1.0, std::abs(f[kMomX]), std::abs(f[kMomY]),
                                                              std::abs(f[kEnergy])}));
    }
    const double secs = seconds_since(t0);
    const bool ok = consist <= 1e-12 && cons <= 1e-12 && upwind <= 1e-12 && wall <= 1e-12 && secs < 30.0;
    return {ok, fmt("%d random states each: consistency %.1e, conservation %.1e, supersonic "
                    "upwinding %.1e, slip-wall mass flux %.1e (limit 1e-12 relative) in %.2f s",
                    n, consist, cons, upwind, wall, secs)};
}

Outcome vortex_order() {
    const auto t0 = Clock::now();
    auto error = [](int order, int n) {
        RunConfig c;
        c.mesh.nx = c.mesh.ny = n;
        c.mesh.extent = {-8, 8, -8, 8};
        c.initial = InitialCondition::vortex;
        c.mach = 0.5;
        c.order = order;
        c.step.mode = DtMode::global;
        c.step.cfl = 0.3;
        c.final_time = 1.0;
        c.max_iterations = 1000000;
        const RunArtifacts a = run(c);
        return density_error_l2(c, a.mesh, a.final_state, a.time);
    };
    bool ok = true;
    std::string detail;
    for (auto [p, need] : {std::pair{1, 1.8}, std::pair{2, 2.7}}) {
        const double e[3] = {error(p, 24), error(p, 48), error(p, 96)};
        const double r1 = std::log2(e[0] / e[1]), r2 = std::log2(e[1] / e[2]);
        ok = ok && r1 >= need && r2 >= need;
        detail += fmt("p=%d errors %.3e %.3e %.3e rates %.2f %.2f (need >= %.1f); ", p, e[0], e[1],
                      e[2], r1, r2, need);
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 600.0;
    return {ok, detail + fmt("%.1f s (limit 600 s)", secs)};
}

Outcome mixed_precision() {
    const auto t0 = Clock::now();
    RunConfig c;
    c.mesh.generator = "bump";
    c.mesh.nx = 224;
    c.mesh.ny = 72;
    c.mesh.extent = {0, 3, 0, 1};
    c.mesh.bump_height = 0.1;
    c.mach = 2.0;
    c.order = 0;
    c.step.mode = DtMode::local;
    c.step.cfl = 0.3;
    c.max_iterations = 6000;
    const std::int64_t early = 1500, late = 3000;

    struct Case {
        const char* name;
        PrecisionSchedule sched;
        double residual = 0.0;
        double seconds = 0.0;
    };
    Case cases[] = {{"DP", PrecisionSchedule::dp()},
                    {"MP-early", PrecisionSchedule::fixed(early)},
                    {"MP-late", PrecisionSchedule::fixed(late)},
                    {"SP", PrecisionSchedule::sp()}};
    std::size_t cells = 0;
    for (Case& k : cases) {
        c.precision = k.sched;
        const RunArtifacts a = run(c);
        cells = a.mesh.n_cells();
        k.residual = a.history.norms.back()[kRho];
        k.seconds = a.perf.wall_seconds;
    }
    const Case& dp = cases[0];
    const Case& mpe = cases[1];
    const Case& mpl = cases[2];
    const Case& sp = cases[3];
    const double gain = 1.0 - mpe.seconds / dp.seconds;
    const bool faster = gain >= 0.05;
    const bool close = mpe.residual <= 10.0 * dp.residual;
    // Accuracy declines as more iterations run in single precision.
    const bool ordered = dp.residual <= mpe.residual && mpe.residual <= mpl.residual &&
                         mpl.residual <= sp.residual;
    const bool literal = dp.residual <= mpl.residual && mpl.residual <= mpe.residual &&
                         mpe.residual <= sp.residual;
    const double secs = seconds_since(t0);
    const bool ok = faster && close && ordered && secs < 600.0;
    return {ok, fmt("%zu-cell bump, %lld its, switch %lld/%lld: residual DP %.2e MP-early %.2e "
                    "MP-late %.2e SP %.2e; time DP %.1f s MP-early %.1f s (gain %.1f%%, need >= 5%%): "
                    "speed %s, within 10x %s, DP<=MP-early<=MP-late<=SP %s "
                    "(DP<=MP-late<=MP-early<=SP %s) in %.0f s",
                    cells, (long long)c.max_iterations, (long long)early, (long long)late,
                    dp.residual, mpe.residual, mpl.residual, sp.residual, dp.seconds, mpe.seconds,
                    100.0 * gain, faster ? "ok" : "FAIL", close ? "ok" : "FAIL",
                    ordered ? "ok" : "FAIL", literal ? "holds" : "does not hold", secs)};
}

Outcome determinism() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    std::uniform_int_distribution<int> len(1, 300);
    std::vector<double> v;
    long mismatches = 0;
    const long arrays = 1000000;
    for (long a = 0; a < arrays; ++a) {
        v.resize(len(rng));
        for (double& x : v) x = u(rng);
        const double seq = *std::min_element(v.begin(), v.end());
        const double tree = min_reduce(v);
        mismatches += std::memcmp(&seq, &tree, sizeof seq) != 0;
    }
    v.resize(1000000);
    for (int a = 0; a < 10; ++a) {
        for (double& x : v) x = u(rng);
        const double seq = *std::min_element(v.begin(), v.end());
        const double tree = min_reduce(v);
        mismatches += std::memcmp(&seq, &tree, sizeof seq) != 0;
    }

    RunConfig c;
    c.mesh.generator = "tri";
    c.mesh.nx = 24;
    c.mesh.ny = 20;
    c.mesh.extent = {-1, 1, -1, 1};
    c.initial = InitialCondition::pulse;
    c.pulse_width = 0.3;
    c.gas.ivis = 1;
    c.reynolds = 500.0;
    c.order = 2;
    c.step.mode = DtMode::global;
    c.max_iterations = 40;
    std::vector<ResidualHistory> h;
    for (int w : {1, 2, 8}) {
        c.workers = w;
        h.push_back(run(c).history);
    }
    bool same = true;
    for (std::size_t k = 1; k < h.size(); ++k)
        same = same && h[k].size() == h[0].size() &&
               std::memcmp(h[k].norms.data(), h[0].norms.data(),
                           h[0].norms.size() * sizeof(h[0].norms[0])) == 0 &&
               std::memcmp(h[k].dt.data(), h[0].dt.data(), h[0].dt.size() * sizeof(double)) == 0;
    const double secs = seconds_since(t0);
    return {mismatches == 0 && same,
            fmt("min_reduce: %ld mismatches over %ld random arrays plus 10 of length 1e6; residual "
                "history over %zu iterations %s across 1/2/8 workers (%.1f s)",
                mismatches, arrays, h[0].size(), same ? "bitwise identical" : "DIFFERS", secs)};
}

Outcome scalability() {
    const auto t0 = Clock::now();
    RunConfig c = large_grid(1);
    const double one = seconds_per_iteration(c, 2);
    c.workers = 8;
    const double eight = seconds_per_iteration(c, 2);
    const double speedup = one / eight;
    const double secs = seconds_since(t0);
    return {speedup >= 4.0 && secs < 600.0,
            fmt("64512 cells, p=1: 1 worker %.1f ms/it, 8 workers %.1f ms/it, speedup %.2fx "
                "(need >= 4x; %d hardware threads) in %.1f s",
                1e3 * one, 1e3 * eight, speedup, int(std::thread::hardware_concurrency()), secs)};
}

Outcome roofline() {
    bool ok = true;
    const MachineModel m{"hand", 7e12, 9e11};
    ok = ok && roofline_attainable(m, 0.125) == 1.125e11;
    ok = ok && roofline_attainable(m, std::numeric_limits<double>::infinity()) == 7e12;
    const double ridge = m.ridge();
    ok = ok && std::abs(m.peak_bandwidth * ridge - m.peak_flops) <= 1e-15 * m.peak_flops;
    ok = ok && std::abs(roofline_attainable(m, ridge) - 7e12) <= 1e-15 * 7e12;
    ok = ok && roofline_attainable(m, 2.0 * ridge) == 7e12;
    ok = ok && roofline_attainable(m, 0.5 * ridge) == 0.5 * 7e12;
    ok = ok && roofline_attainable(MachineModel{"cpu", 1e12, 1e11}, 4.0) == 4e11;

    bool stub_ok = true;
    for (double overhead : {0.0, 0.75, 12.5, 3e4}) {
        auto stub = [&](std::int64_t n) {
            PerfSample s;
            s.wall_seconds = overhead + 0.0625 * double(n);
            s.flops = 5e5 + 1024.0 * double(n);
            s.dram_bytes = 2048.0 * double(n);
            s.iterations = n;
            return s;
        };
        const PerfSample s = dual_phase(stub, 100, 300);
        stub_ok = stub_ok && s.wall_seconds == 0.0625 && s.flops == 1024.0 && s.dram_bytes == 2048.0;
    }
    auto timer = [](std::int64_t n) {
        PerfSample s;
        s.wall_seconds = n == 1000 ? 6.0 : 10.0;
        return s;
    };
    stub_ok = stub_ok && dual_phase(timer, 1000, 2000).wall_seconds == 0.004;
    return {ok && stub_ok,
            fmt("hand cases (1.125e11 at ai 0.125, ridge %.4g, compute cap) %s; dual-phase stub "
                "recovers the per-iteration cost exactly %s",
                ridge, ok ? "ok" : "FAIL", stub_ok ? "ok" : "FAIL")};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "divergence table", table6},
        {2, "rcm bandwidth", rcm_bandwidth},
        {3, "renumbering performance", renumber_speed},
        {4, "free-stream preservation", freestream},
        {5, "flux properties", flux_suite},
        {6, "convergence order", vortex_order},
        {7, "mixed precision", mixed_precision},
        {8, "reduction and determinism", determinism},
        {9, "thread scalability", scalability},
        {10, "roofline math", roofline},
    };
    std::vector<int> pick;
    for (int i = 1; i < argc; ++i) pick.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (const Criterion& c : all) {
        if (!pick.empty() && std::find(pick.begin(), pick.end(), c.id) == pick.end()) continue;
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d %s: %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
