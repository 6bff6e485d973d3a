#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hodg/dg.hpp"
#include "hodg/timestepping.hpp"

namespace hodg {

enum class PrecisionMode : std::uint8_t { dp, sp, mp_fixed, mp_rebound };

std::string to_string(PrecisionMode mode);
PrecisionMode parse_precision_mode(const std::string& name);

struct PrecisionSchedule {
    PrecisionMode mode = PrecisionMode::dp;
    std::int64_t switch_iter = 0;  // mp_fixed
    int window = 200;              // mp_rebound
    double factor = 2.0;           // mp_rebound

    void check() const;
    static PrecisionSchedule dp() { return {}; }
    static PrecisionSchedule sp() { return {PrecisionMode::sp}; }
    static PrecisionSchedule fixed(std::int64_t k) { return {PrecisionMode::mp_fixed, k}; }
    static PrecisionSchedule rebound(int window = 200, double factor = 2.0) {
        return {PrecisionMode::mp_rebound, 0, window, factor};
    }
};

enum class SwitchReason : std::uint8_t { scheduled, rebound };
std::string to_string(SwitchReason reason);

struct PrecisionEvent {
    std::int64_t iteration = 0;
    SwitchReason reason = SwitchReason::scheduled;
    double residual = 0.0;  // latest density residual when switching
};

struct PrecisionDecision {
    int bits = 64;
    std::optional<PrecisionEvent> event;
};

/// Precision of iteration `iter` given the history of iterations before it.
/// A run promotes at most once; for mp_rebound the history's precision column
/// tells whether that has already happened.
PrecisionDecision decide(const PrecisionSchedule& sched, std::int64_t iter,
                         const ResidualHistory& hist);

/// Round to nearest; throws Error if any coefficient overflows.
DofState<float> demote(const DofState<double>& s);
DofState<double> promote(const DofState<float>& s);

}  // namespace hodg
