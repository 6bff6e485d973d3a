#pragma once

#include <concepts>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hodg/error.hpp"
#include "hodg/mesh.hpp"
#include "hodg/physics.hpp"

namespace hodg {

struct PerfSample {
    double wall_seconds = 0.0;
    double flops = 0.0;
    double dram_bytes = 0.0;
    std::int64_t iterations = 0;

    double arithmetic_intensity() const { return dram_bytes > 0.0 ? flops / dram_bytes : 0.0; }
    double achieved_flops() const { return wall_seconds > 0.0 ? flops / wall_seconds : 0.0; }
    void check() const;
};

struct MachineModel {
    std::string label;
    double peak_flops = 0.0;      // FLOP/s
    double peak_bandwidth = 0.0;  // bytes/s

    double ridge() const { return peak_flops / peak_bandwidth; }
    void check() const;
    /// "name:peakflops:peakbw"
    static MachineModel parse(const std::string& spec);
};

/// Runs `measure(n1)` and `measure(n2)` and returns the per-iteration
/// difference, which cancels every cost that does not scale with the
/// iteration count.
template <class Measure>
    requires std::invocable<Measure&, std::int64_t>
PerfSample dual_phase(Measure&& measure, std::int64_t n1, std::int64_t n2) {
    if (n1 < 1 || n2 <= n1)
        throw Error("dual_phase needs n2 > n1 >= 1 (got n1=" + std::to_string(n1) +
                    ", n2=" + std::to_string(n2) + ")");
    const PerfSample a = measure(n1);
    const PerfSample b = measure(n2);
    const double dn = static_cast<double>(n2 - n1);
    PerfSample out;
    out.wall_seconds = (b.wall_seconds - a.wall_seconds) / dn;
    out.flops = (b.flops - a.flops) / dn;
    out.dram_bytes = (b.dram_bytes - a.dram_bytes) / dn;
    out.iterations = 1;
    return out;
}

struct RunConfig;
/// Dual-phase measurement of the solver: two runs of `config` with n1 and n2
/// iterations (output files disabled).
PerfSample dual_phase(const RunConfig& config, std::int64_t n1, std::int64_t n2);

/// Exact operation counts of one call of each kernel (adds, muls, divs,
/// sqrts and pow each count 1), taken on representative subsonic states.
struct KernelCounts {
    std::int64_t roe_flux = 0;
    std::int64_t inviscid_flux = 0;
    std::int64_t viscous_flux = 0;  // from (q, grad q)
    std::int64_t normal_flux = 0;
    std::int64_t br1_interface = 0;
    std::int64_t far_field_state = 0;
    std::int64_t slip_wall_state = 0;
    std::int64_t no_slip_wall_state = 0;
    std::int64_t pressure = 0;
    std::int64_t local_dt = 0;
};
KernelCounts kernel_counts(const GasModel& gas);

/// Analytic cost of one iteration (two right-hand sides, the RK updates, the
/// local step and the residual norm). Bytes use an ideal-traffic model: every
/// array touched by a pass is read or written once, all at `precision_bits`.
struct FlopByteCount {
    double flops = 0.0;
    double bytes = 0.0;
    double rhs_flops = 0.0;  // one right-hand side
    double words = 0.0;      // array elements moved per iteration
};
FlopByteCount count_flops_and_bytes(const Mesh& mesh, int order, const GasModel& gas,
                                    int precision_bits = 64);

/// min(peak_flops, peak_bandwidth * ai). Throws Error for negative ai.
double roofline_attainable(const MachineModel& m, double ai);

using LabeledSample = std::pair<std::string, PerfSample>;

/// Rows label,ai,achieved_flops,machine,attainable_flops,bound for every
/// (sample, machine) pair. Throws Error on empty input or when a sample
/// exceeds its attainable performance.
std::string format_roofline_csv(std::span<const LabeledSample> samples,
                                std::span<const MachineModel> machines);
void emit_roofline_csv(std::span<const LabeledSample> samples,
                       std::span<const MachineModel> machines, const std::filesystem::path& path);

}  // namespace hodg
