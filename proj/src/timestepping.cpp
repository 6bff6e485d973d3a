#include "hodg/timestepping.hpp"

#include <cmath>
#include <limits>
#include <mutex>

namespace hodg {

std::string to_string(DtMode mode) { return mode == DtMode::local ? "local" : "global"; }

DtMode parse_dt_mode(const std::string& name) {
    if (name == "local") return DtMode::local;
    if (name == "global") return DtMode::global;
    throw Error("unknown dt mode '" + name + "' (expected local or global)");
}

void StepControl::check() const {
    if (!(cfl > 0.0)) throw Error("cfl must be positive");
    if (!(dt_floor >= 0.0)) throw Error("dt_floor must be non-negative");
}

void ResidualHistory::push(std::int64_t iteration, const std::array<double, 4>& norm, double step,
                           int bits) {
    if (!iterations.empty() && iteration <= iterations.back())
        throw Error("residual history: iteration " + std::to_string(iteration) +
                    " does not follow " + std::to_string(iterations.back()));
    iterations.push_back(iteration);
    norms.push_back(norm);
    dt.push_back(step);
    precision.push_back(bits);
}

template <class Real>
void compute_local_dt(const DofState<Real>& state, const Mesh& mesh, const GasModel& gas,
                      double cfl, int order, std::vector<double>& out) {
    out.resize(mesh.n_cells());
    std::mutex m;
    std::int64_t bad = -1;
    std::string what;
    parallel_for(mesh.n_cells(), [&](std::size_t c) {
        const Conserved<Real> q = state.mean(c);
        try {
            const Conserved<double> m{{double(q[0]), double(q[1]), double(q[2]), double(q[3])}};
            out[c] = local_dt(mesh.cells[c].h, m, gas, cfl, order);
        } catch (const AdmissibilityError& e) {
            std::lock_guard lock(m);
            if (bad < 0 || std::int64_t(c) < bad) {
                bad = std::int64_t(c);
                what = e.what();
            }
        }
    });
    if (bad >= 0)
        throw AdmissibilityError(what + " at cell " + std::to_string(bad) + " (iteration " +
                                     std::to_string(state.iteration) + ")",
                                 bad, state.iteration);
}

template void compute_local_dt<float>(const DofState<float>&, const Mesh&, const GasModel&, double,
                                      int, std::vector<double>&);
template void compute_local_dt<double>(const DofState<double>&, const Mesh&, const GasModel&,
                                       double, int, std::vector<double>&);

double min_reduce(std::span<const double> values, std::size_t block) {
    if (values.empty()) throw Error("min_reduce: empty input");
    if (block < 2) throw Error("min_reduce: block size must be at least 2");
    std::vector<double> cur(values.begin(), values.end()), next;
    while (cur.size() > 1) {
        const std::size_t nblocks = (cur.size() + block - 1) / block;
        next.resize(nblocks);
        parallel_for(nblocks, [&](std::size_t b) {
            const std::size_t lo = b * block;
            const std::size_t hi = std::min(lo + block, cur.size());
            double m = cur[lo];
            for (std::size_t i = lo + 1; i < hi; ++i)
                if (cur[i] < m) m = cur[i];
            next[b] = m;
        });
        cur.swap(next);
    }
    return cur[0];
}

std::array<double, 4> residual_l2(const Residual& residual, const Mesh& mesh) {
    std::array<double, 4> s{0.0, 0.0, 0.0, 0.0};
    const std::size_t stride = residual.stride();
    for (std::size_t c = 0; c < residual.n_cells; ++c) {
        const double a = mesh.cells[c].area;
        const double* r = residual.r.data() + c * stride;
        for (int v = 0; v < 4; ++v) {
            const double x = r[v * residual.n_basis];
            s[v] += a * x * x;
        }
    }
    for (double& x : s) x = std::sqrt(x);
    return s;
}

}  // namespace hodg
