#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hodg/config.hpp"
#include "hodg/dg.hpp"
#include "hodg/mesh.hpp"
#include "hodg/perf.hpp"
#include "hodg/precision.hpp"
#include "hodg/timestepping.hpp"

namespace hodg {

enum class InitialCondition : std::uint8_t { freestream, vortex, pulse };
std::string to_string(InitialCondition ic);
InitialCondition parse_initial_condition(const std::string& name);

/// Mesh file, or a generated quad / tri / bump grid.
struct MeshSource {
    std::string path;
    std::string generator = "quad";
    int nx = 16, ny = 16;
    Extent extent;
    double bump_height = 0.1;
    SideKinds sides;
    bool sides_set = false;     // false: the generator's default sides
    std::uint64_t shuffle = 0;  // nonzero: random renumbering with this seed

    Mesh build() const;
};

struct RunConfig {
    MeshSource mesh;
    GasModel gas;
    // Free stream: rho = 1, |u| = 1 at `angle` degrees, p = 1 / (gamma Ma^2).
    double mach = 0.3;
    double angle = 0.0;
    double reynolds = 0.0;  // > 0 sets mu_dyn = 1 / Re
    InitialCondition initial = InitialCondition::freestream;
    double vortex_strength = 5.0;
    Vec2 center{0.0, 0.0};
    double pulse_amplitude = 0.1;  // relative density bump, isobaric
    double pulse_width = 0.5;

    int order = 1;
    StepControl step;
    std::int64_t max_iterations = 100;
    double residual_target = 0.0;  // density residual; 0 disables
    double final_time = 0.0;       // global mode only; 0 disables
    bool renumber = false;
    int workers = 0;
    PrecisionSchedule precision;

    std::string output_prefix;  // empty: no files
    std::int64_t log_every = 1;
    std::int64_t output_every = 0;  // 0: final field only

    /// Mesh path, when relative, is resolved against `base_dir`.
    static RunConfig from_config(const ConfigMap& map,
                                 const std::filesystem::path& base_dir = {});
    static RunConfig load(const std::filesystem::path& path);
    /// Every key with its resolved value.
    ConfigMap to_config() const;
    void check() const;

    GasModel resolved_gas() const;
    Conserved<double> freestream() const;
    Primitive<double> freestream_primitive() const;
    /// Exact solution for vortex / pulse (convected with the free stream), or
    /// the free stream.
    Primitive<double> exact(Vec2 x, double t) const;
};

struct RunArtifacts {
    Mesh mesh;                    // original numbering
    DofState<double> final_state; // original numbering, promoted if needed
    ResidualHistory history;
    std::optional<PrecisionEvent> precision_event;
    PerfSample perf;  // the iteration loop
    double setup_seconds = 0.0;
    double output_seconds = 0.0;
    double time = 0.0;
    std::int64_t rhs_evaluations = 0;
    std::int64_t aux_evaluations = 0;
    std::size_t geometry_constants = 0;
    Index bandwidth_before = 0;
    Index bandwidth_after = 0;
    std::vector<std::filesystem::path> files;
};

/// Projects the initial field, then iterates: precision decision, time step
/// (local, or global by min_reduce), RK2 step, residual norm and logging.
/// Stops at max_iterations, the residual target or the final time. Throws
/// DivergenceError on a non-finite residual and AdmissibilityError from the
/// operator.
RunArtifacts run(const RunConfig& config);

/// Legacy VTK ASCII with cell data rho, u, v, p, Mach from the cell means.
void write_vtk(const Mesh& mesh, const DofState<double>& state, const GasModel& gas,
               const std::filesystem::path& path);

/// L2 norm over the domain of rho_h - rho_exact(t), by quadrature of degree
/// 2p + 2 (capped at 4).
double density_error_l2(const RunConfig& config, const Mesh& mesh,
                        const DofState<double>& state, double t);

}  // namespace hodg
