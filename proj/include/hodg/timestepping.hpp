#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hodg/dg.hpp"
#include "hodg/error.hpp"
#include "hodg/parallel.hpp"

namespace hodg {

enum class DtMode : std::uint8_t { local, global };

std::string to_string(DtMode mode);
DtMode parse_dt_mode(const std::string& name);

struct StepControl {
    double cfl = 0.3;
    DtMode mode = DtMode::global;
    double dt_floor = 0.0;

    void check() const;
};

/// Per-iteration L2 norms of the mean-mode residual, the step size used and
/// the precision (32/64) of the step.
struct ResidualHistory {
    std::vector<std::int64_t> iterations;
    std::vector<std::array<double, 4>> norms;
    std::vector<double> dt;
    std::vector<int> precision;

    std::size_t size() const { return iterations.size(); }
    bool empty() const { return iterations.empty(); }
    /// Throws Error if `iteration` does not exceed the last recorded one.
    void push(std::int64_t iteration, const std::array<double, 4>& norm, double dt, int bits);
};

/// dt = cfl h / ((2p+1) (|u| + a + 2 mu (2p+1) / (rho h))).
template <class R>
R local_dt(R h, const Conserved<R>& mean, const GasModel& gas, double cfl, int order) {
    using std::sqrt;
    const Primitive<R> w = primitive_from_conserved(mean, gas);
    const R k = R(2.0 * order + 1.0);
    const R speed = sqrt(w.u * w.u + w.v * w.v) + sound_speed(w, gas) +
                    R(2.0 * gas.mu_dyn) * k / (w.rho * h);
    return R(cfl) * h / (k * speed);
}

/// Local step of every cell from its mean state (data-parallel over cells).
template <class Real>
void compute_local_dt(const DofState<Real>& state, const Mesh& mesh, const GasModel& gas,
                      double cfl, int order, std::vector<double>& out);

inline constexpr std::size_t kReduceBlock = 256;

/// Minimum by a block tree: each pass reduces blocks of `block` values to one
/// (blocks in parallel, each block left to right) until one value remains.
/// Equal to the sequential minimum bitwise. Throws Error on empty input.
double min_reduce(std::span<const double> values, std::size_t block = kReduceBlock);

/// SSP-RK2 (Heun): u1 = u + dt R(u); u' = (u + u1 + dt R(u1)) / 2.
/// `dt` holds one value (global) or one per cell (local). `rhs_fn(state,
/// out)` is called exactly twice; `first` receives R(u).
template <class Real, class RhsFn>
void rk2_step(DofState<Real>& state, std::span<const double> dt, RhsFn&& rhs_fn,
              Residual& first, Residual& second, DofState<Real>& stage) {
    const std::size_t stride = state.stride();
    const bool per_cell = dt.size() != 1;
    if (per_cell && dt.size() != state.n_cells) throw Error("rk2_step: dt size mismatch");
    for (double d : dt)
        if (!(d > 0.0)) throw Error("rk2_step: time step must be positive");

    auto stage_call = [&](const DofState<Real>& s, Residual& r, int which) {
        try {
            rhs_fn(s, r);
        } catch (const AdmissibilityError& e) {
            throw AdmissibilityError(std::string(e.what()) + " in RK stage " + std::to_string(which),
                                     e.entity(), e.iteration());
        }
    };

    stage_call(state, first, 1);
    if (stage.n_cells != state.n_cells || stage.n_basis != state.n_basis)
        stage = DofState<Real>(state.n_cells, state.n_basis);
    stage.iteration = state.iteration;
    parallel_for(state.n_cells, [&](std::size_t c) {
        const double h = per_cell ? dt[c] : dt[0];
        const Real* u = state.cell(c);
        const double* r = first.r.data() + c * stride;
        Real* u1 = stage.cell(c);
        for (std::size_t k = 0; k < stride; ++k) u1[k] = Real(double(u[k]) + h * r[k]);
    });
    stage_call(stage, second, 2);
    parallel_for(state.n_cells, [&](std::size_t c) {
        const double h = per_cell ? dt[c] : dt[0];
        Real* u = state.cell(c);
        const Real* u1 = stage.cell(c);
        const double* r = second.r.data() + c * stride;
        for (std::size_t k = 0; k < stride; ++k)
            u[k] = Real(0.5 * double(u[k]) + 0.5 * (double(u1[k]) + h * r[k]));
    });
    ++state.iteration;
}

template <class Real, class RhsFn>
void rk2_step(DofState<Real>& state, std::span<const double> dt, RhsFn&& rhs_fn) {
    Residual first, second;
    DofState<Real> stage;
    rk2_step(state, dt, std::forward<RhsFn>(rhs_fn), first, second, stage);
}

/// Per variable sqrt(sum_cells area * r_mean^2), accumulated in double.
std::array<double, 4> residual_l2(const Residual& residual, const Mesh& mesh);

extern template void compute_local_dt<float>(const DofState<float>&, const Mesh&, const GasModel&,
                                             double, int, std::vector<double>&);
extern template void compute_local_dt<double>(const DofState<double>&, const Mesh&,
                                              const GasModel&, double, int, std::vector<double>&);

}  // namespace hodg
