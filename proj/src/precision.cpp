#include "hodg/precision.hpp"

#include <algorithm>
#include <cmath>

#include "hodg/error.hpp"

namespace hodg {

std::string to_string(PrecisionMode mode) {
    switch (mode) {
        case PrecisionMode::dp: return "dp";
        case PrecisionMode::sp: return "sp";
        case PrecisionMode::mp_fixed: return "mp_fixed";
        case PrecisionMode::mp_rebound: return "mp_rebound";
    }
    return "unknown";
}

PrecisionMode parse_precision_mode(const std::string& name) {
    if (name == "dp") return PrecisionMode::dp;
    if (name == "sp") return PrecisionMode::sp;
    if (name == "mp_fixed") return PrecisionMode::mp_fixed;
    if (name == "mp_rebound") return PrecisionMode::mp_rebound;
    throw Error("unknown precision mode '" + name + "' (expected dp, sp, mp_fixed or mp_rebound)");
}

std::string to_string(SwitchReason reason) {
    return reason == SwitchReason::scheduled ? "scheduled" : "rebound";
}

void PrecisionSchedule::check() const {
    if (switch_iter < 0) throw Error("precision.switch_iter must be non-negative");
    if (window < 2) throw Error("precision.window must be at least 2");
    if (!(factor > 1.0)) throw Error("precision.factor must exceed 1");
}

PrecisionDecision decide(const PrecisionSchedule& sched, std::int64_t iter,
                         const ResidualHistory& hist) {
    const double latest = hist.empty() ? 0.0 : hist.norms.back()[kRho];
    switch (sched.mode) {
        case PrecisionMode::dp: return {64, std::nullopt};
        case PrecisionMode::sp: return {32, std::nullopt};
        case PrecisionMode::mp_fixed:
            if (iter < sched.switch_iter) return {32, std::nullopt};
            if (iter == sched.switch_iter && sched.switch_iter > 0)
                return {64, PrecisionEvent{iter, SwitchReason::scheduled, latest}};
            return {64, std::nullopt};
        case PrecisionMode::mp_rebound: {
            if (!hist.empty() && hist.precision.back() == 64) return {64, std::nullopt};
            const std::size_t n = hist.size();
            if (n < 2) return {32, std::nullopt};
            const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(sched.window));
            double lo = latest;
            for (std::size_t i = n - w; i < n; ++i) lo = std::min(lo, hist.norms[i][kRho]);
            if (latest >= sched.factor * lo && lo > 0.0)
                return {64, PrecisionEvent{iter, SwitchReason::rebound, latest}};
            return {32, std::nullopt};
        }
    }
    return {64, std::nullopt};
}

DofState<float> demote(const DofState<double>& s) {
    DofState<float> out(s.n_cells, s.n_basis);
    out.iteration = s.iteration;
    for (std::size_t i = 0; i < s.c.size(); ++i) {
        const float x = static_cast<float>(s.c[i]);
        if (!std::isfinite(x))
            throw Error("demote: coefficient " + std::to_string(i) + " (" + std::to_string(s.c[i]) +
                        ") is not representable in 32 bit");
        out.c[i] = x;
    }
    return out;
}

DofState<double> promote(const DofState<float>& s) {
    DofState<double> out(s.n_cells, s.n_basis);
    out.iteration = s.iteration;
    std::copy(s.c.begin(), s.c.end(), out.c.begin());
    return out;
}

}  // namespace hodg
