#include "hodg/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <type_traits>

#include "hodg/error.hpp"
#include "hodg/parallel.hpp"
#include "hodg/quadrature.hpp"
#include "hodg/renumber.hpp"

namespace hodg {

std::string to_string(InitialCondition ic) {
    switch (ic) {
        case InitialCondition::freestream: return "freestream";
        case InitialCondition::vortex: return "vortex";
        case InitialCondition::pulse: return "pulse";
    }
    return "?";
}

InitialCondition parse_initial_condition(const std::string& name) {
    if (name == "freestream") return InitialCondition::freestream;
    if (name == "vortex") return InitialCondition::vortex;
    if (name == "pulse") return InitialCondition::pulse;
    throw Error("unknown initial condition '" + name + "' (freestream|vortex|pulse)");
}

Mesh MeshSource::build() const {
    Mesh m;
    if (!path.empty()) {
        m = load_mesh(path);
    } else if (generator == "quad") {
        m = generate_quad_grid(nx, ny, extent, sides);
    } else if (generator == "tri") {
        m = generate_tri_grid(nx, ny, extent, sides);
    } else if (generator == "bump") {
        m = sides_set ? generate_bump_channel(nx, ny, extent, bump_height, sides)
                      : generate_bump_channel(nx, ny, extent, bump_height);
    } else {
        throw Error("unknown mesh generator '" + generator + "' (quad|tri|bump)");
    }
    if (shuffle != 0) m = apply_permutation(m, Permutation::random(m.n_cells(), shuffle));
    return m;
}

// ---------------------------------------------------------------------------
// Config

RunConfig RunConfig::from_config(const ConfigMap& map, const std::filesystem::path& base_dir) {
    RunConfig c;
    MeshSource& m = c.mesh;
    m.path = map.get("mesh.path", "");
    if (!m.path.empty() && !base_dir.empty() && std::filesystem::path(m.path).is_relative())
        m.path = (base_dir / m.path).string();
    m.generator = map.get("mesh.generator", m.generator);
    m.nx = map.get("mesh.nx", m.nx);
    m.ny = map.get("mesh.ny", m.ny);
    m.extent.x0 = map.get("mesh.x0", m.extent.x0);
    m.extent.x1 = map.get("mesh.x1", m.extent.x1);
    m.extent.y0 = map.get("mesh.y0", m.extent.y0);
    m.extent.y1 = map.get("mesh.y1", m.extent.y1);
    m.bump_height = map.get("mesh.bump_height", m.bump_height);
    for (const char* side : {"bottom", "right", "top", "left"})
        if (map.has(std::string("mesh.") + side)) m.sides_set = true;
    if (m.sides_set) {
        m.sides.bottom = parse_bc_kind(map.get("mesh.bottom", to_string(m.sides.bottom)));
        m.sides.right = parse_bc_kind(map.get("mesh.right", to_string(m.sides.right)));
        m.sides.top = parse_bc_kind(map.get("mesh.top", to_string(m.sides.top)));
        m.sides.left = parse_bc_kind(map.get("mesh.left", to_string(m.sides.left)));
    }
    m.shuffle = static_cast<std::uint64_t>(map.get("mesh.shuffle", std::int64_t{0}));

    c.gas.gamma = map.get("gas.gamma", c.gas.gamma);
    c.gas.R = map.get("gas.R", c.gas.R);
    c.gas.mu_dyn = map.get("gas.mu_dyn", c.gas.mu_dyn);
    c.gas.Pr = map.get("gas.Pr", c.gas.Pr);
    c.gas.ivis = map.get("gas.ivis", c.gas.ivis);

    c.mach = map.get("flow.mach", c.mach);
    c.angle = map.get("flow.angle", c.angle);
    c.reynolds = map.get("flow.reynolds", c.reynolds);
    c.initial = parse_initial_condition(map.get("flow.initial", to_string(c.initial)));
    c.vortex_strength = map.get("flow.vortex_strength", c.vortex_strength);
    c.center.x = map.get("flow.center_x", c.center.x);
    c.center.y = map.get("flow.center_y", c.center.y);
    c.pulse_amplitude = map.get("flow.pulse_amplitude", c.pulse_amplitude);
    c.pulse_width = map.get("flow.pulse_width", c.pulse_width);

    c.order = map.get("solver.order", c.order);
    c.step.cfl = map.get("solver.cfl", c.step.cfl);
    c.step.mode = parse_dt_mode(map.get("solver.dt_mode", to_string(c.step.mode)));
    c.step.dt_floor = map.get("solver.dt_floor", c.step.dt_floor);
    c.max_iterations = map.get("solver.max_iterations", c.max_iterations);
    c.residual_target = map.get("solver.residual_target", c.residual_target);
    c.final_time = map.get("solver.final_time", c.final_time);
    c.renumber = map.get("solver.renumber", c.renumber);
    c.workers = map.get("solver.workers", c.workers);

    c.precision.mode = parse_precision_mode(map.get("precision.mode", to_string(c.precision.mode)));
    c.precision.switch_iter = map.get("precision.switch_iter", c.precision.switch_iter);
    c.precision.window = map.get("precision.window", c.precision.window);
    c.precision.factor = map.get("precision.factor", c.precision.factor);

    c.output_prefix = map.get("output.prefix", "");
    if (!c.output_prefix.empty() && !base_dir.empty() &&
        std::filesystem::path(c.output_prefix).is_relative())
        c.output_prefix = (base_dir / c.output_prefix).string();
    c.log_every = map.get("output.log_every", c.log_every);
    c.output_every = map.get("output.output_every", c.output_every);

    const auto extra = map.unused();
    if (!extra.empty()) throw Error("unknown config key '" + extra.front() + "'");
    c.check();
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    return from_config(ConfigMap::load(path), path.parent_path());
}

ConfigMap RunConfig::to_config() const {
    ConfigMap m;
    const auto d = format_double;
    if (!mesh.path.empty()) {
        m.set("mesh.path", mesh.path);
    } else {
        m.set("mesh.generator", mesh.generator);
        m.set("mesh.nx", std::to_string(mesh.nx));
        m.set("mesh.ny", std::to_string(mesh.ny));
        m.set("mesh.x0", d(mesh.extent.x0));
        m.set("mesh.x1", d(mesh.extent.x1));
        m.set("mesh.y0", d(mesh.extent.y0));
        m.set("mesh.y1", d(mesh.extent.y1));
        if (mesh.generator == "bump") m.set("mesh.bump_height", d(mesh.bump_height));
        if (mesh.sides_set) {
            m.set("mesh.bottom", to_string(mesh.sides.bottom));
            m.set("mesh.right", to_string(mesh.sides.right));
            m.set("mesh.top", to_string(mesh.sides.top));
            m.set("mesh.left", to_string(mesh.sides.left));
        }
    }
    m.set("mesh.shuffle", std::to_string(mesh.shuffle));
    m.set("gas.gamma", d(gas.gamma));
    m.set("gas.R", d(gas.R));
    m.set("gas.mu_dyn", d(gas.mu_dyn));
    m.set("gas.Pr", d(gas.Pr));
    m.set("gas.ivis", std::to_string(gas.ivis));
    m.set("flow.mach", d(mach));
    m.set("flow.angle", d(angle));
    m.set("flow.reynolds", d(reynolds));
    m.set("flow.initial", to_string(initial));
    m.set("flow.vortex_strength", d(vortex_strength));
    m.set("flow.center_x", d(center.x));
    m.set("flow.center_y", d(center.y));
    m.set("flow.pulse_amplitude", d(pulse_amplitude));
    m.set("flow.pulse_width", d(pulse_width));
    m.set("solver.order", std::to_string(order));
    m.set("solver.cfl", d(step.cfl));
    m.set("solver.dt_mode", to_string(step.mode));
    m.set("solver.dt_floor", d(step.dt_floor));
    m.set("solver.max_iterations", std::to_string(max_iterations));
    m.set("solver.residual_target", d(residual_target));
    m.set("solver.final_time", d(final_time));
    m.set("solver.renumber", renumber ? "on" : "off");
    m.set("solver.workers", std::to_string(workers));
    m.set("precision.mode", to_string(precision.mode));
    m.set("precision.switch_iter", std::to_string(precision.switch_iter));
    m.set("precision.window", std::to_string(precision.window));
    m.set("precision.factor", d(precision.factor));
    if (!output_prefix.empty()) m.set("output.prefix", output_prefix);
    m.set("output.log_every", std::to_string(log_every));
    m.set("output.output_every", std::to_string(output_every));
    return m;
}

void RunConfig::check() const {
    resolved_gas().check();
    step.check();
    precision.check();
    if (!(mach > 0.0)) throw Error("config: flow.mach must be positive");
    if (!(reynolds >= 0.0)) throw Error("config: flow.reynolds must be non-negative");
    if (order < 0 || order > 2) throw Error("config: solver.order must be 0, 1 or 2");
    if (max_iterations < 0) throw Error("config: solver.max_iterations must be >= 0");
    if (!(residual_target >= 0.0)) throw Error("config: solver.residual_target must be >= 0");
    if (!(final_time >= 0.0)) throw Error("config: solver.final_time must be >= 0");
    if (final_time > 0.0 && step.mode != DtMode::global)
        throw Error("config: solver.final_time needs dt_mode = global");
    if (workers < 0) throw Error("config: solver.workers must be >= 0");
    if (log_every < 1) throw Error("config: output.log_every must be >= 1");
    if (output_every < 0) throw Error("config: output.output_every must be >= 0");
    if (!(pulse_width > 0.0)) throw Error("config: flow.pulse_width must be positive");
    if (!(pulse_amplitude > -1.0)) throw Error("config: flow.pulse_amplitude must exceed -1");
    if (mesh.path.empty() && (mesh.nx < 1 || mesh.ny < 1))
        throw Error("config: mesh.nx and mesh.ny must be at least 1");
}

GasModel RunConfig::resolved_gas() const {
    GasModel g = gas;
    if (reynolds > 0.0) g.mu_dyn = 1.0 / reynolds;
    return g;
}

Primitive<double> RunConfig::freestream_primitive() const {
    const GasModel g = resolved_gas();
    const double a = angle * std::numbers::pi / 180.0;
    return make_primitive(1.0, std::cos(a), std::sin(a), 1.0 / (g.gamma * mach * mach), g);
}

Conserved<double> RunConfig::freestream() const {
    return conserved_from_primitive(freestream_primitive(), resolved_gas());
}

Primitive<double> RunConfig::exact(Vec2 x, double t) const {
    const GasModel g = resolved_gas();
    const Primitive<double> w = freestream_primitive();
    const double dx = x.x - center.x - w.u * t;
    const double dy = x.y - center.y - w.v * t;
    const double r2 = dx * dx + dy * dy;
    switch (initial) {
        case InitialCondition::freestream: return w;
        case InitialCondition::pulse: {
            const double rho = 1.0 + pulse_amplitude * std::exp(-r2 / (pulse_width * pulse_width));
            return make_primitive(rho, w.u, w.v, w.p, g);
        }
        case InitialCondition::vortex: {
            // Isentropic vortex: velocity perturbation b/(2 pi) e^{(1-r^2)/2} (-y, x)
            // balanced by the temperature drop (gamma-1) b^2/(8 gamma pi^2) e^{1-r^2}.
            const double b = vortex_strength;
            const double pi = std::numbers::pi;
            const double e = std::exp(0.5 * (1.0 - r2));
            const double T0 = w.p / (w.rho * g.R);
            const double T = T0 - (g.gamma - 1.0) * b * b / (8.0 * g.gamma * pi * pi * g.R) * e * e;
            if (!(T > 0.0)) throw Error("vortex too strong for the free-stream temperature");
            const double rho = w.rho * std::pow(T / T0, 1.0 / (g.gamma - 1.0));
            const double du = b / (2.0 * pi) * e;
            return make_primitive(rho, w.u - du * dy, w.v + du * dx, rho * g.R * T, g);
        }
    }
    return w;
}

// ---------------------------------------------------------------------------
// Output

void write_vtk(const Mesh& mesh, const DofState<double>& state, const GasModel& gas,
               const std::filesystem::path& path) {
    if (state.n_cells != mesh.n_cells()) throw Error("write_vtk: state does not match the mesh");
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path.string());
    f.precision(12);
    f << "# vtk DataFile Version 3.0\nhodg solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    f << "POINTS " << mesh.nodes.size() << " double\n";
    for (const Node& n : mesh.nodes) f << n.x << ' ' << n.y << " 0\n";
    std::size_t size = 0;
    for (const Cell& c : mesh.cells) size += 1 + c.n_vertices();
    f << "CELLS " << mesh.n_cells() << ' ' << size << '\n';
    for (const Cell& c : mesh.cells) {
        f << c.n_vertices();
        for (int k = 0; k < c.n_vertices(); ++k) f << ' ' << c.nodes[k];
        f << '\n';
    }
    f << "CELL_TYPES " << mesh.n_cells() << '\n';
    for (const Cell& c : mesh.cells) f << (c.shape == CellShape::triangle ? 5 : 9) << '\n';
    std::vector<Primitive<double>> w(mesh.n_cells());
    for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
        try {
            w[c] = primitive_from_conserved(state.mean(c), gas);
        } catch (const AdmissibilityError&) {
            const auto q = state.mean(c);
            w[c] = {q[kRho], 0.0, 0.0, std::nan(""), std::nan("")};
        }
    }
    f << "CELL_DATA " << mesh.n_cells() << '\n';
    auto scalar = [&](const char* name, auto&& fn) {
        f << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (const auto& x : w) f << fn(x) << '\n';
    };
    scalar("rho", [](const Primitive<double>& x) { return x.rho; });
    scalar("u", [](const Primitive<double>& x) { return x.u; });
    scalar("v", [](const Primitive<double>& x) { return x.v; });
    scalar("p", [](const Primitive<double>& x) { return x.p; });
    scalar("Mach", [&](const Primitive<double>& x) {
        return std::hypot(x.u, x.v) / std::sqrt(gas.gamma * x.p / x.rho);
    });
    if (!f) throw Error("write failed: " + path.string());
}

double density_error_l2(const RunConfig& config, const Mesh& mesh,
                        const DofState<double>& state, double t) {
    const int order = BasisSet::size_for(0) == state.n_basis   ? 0
                      : BasisSet::size_for(1) == state.n_basis ? 1
                                                                : 2;
    const BasisSet basis(order);
    const GeometryTables<double> geo = compute_geometry(mesh, basis);
    const int degree = std::min(2 * order + 2, 4);
    double sum = 0.0;
    double b[kMaxBasis];
    for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
        for (const QuadPoint& p : cell_quadrature(mesh, static_cast<Index>(c), degree)) {
            basis.values(geo.frames[c], p.x, b);
            double rho = 0.0;
            for (int j = 0; j < state.n_basis; ++j) rho += state.at(c, kRho, j) * b[j];
            const double e = rho - config.exact(p.x, t).rho;
            sum += p.w * e * e;
        }
    }
    return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// Driver

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class Real>
struct Level {
    const GeometryTables<Real>* geo = nullptr;
    DofState<Real> state;
    DofState<Real> stage;
    DgWorkspace<Real> ws;
};

class Driver {
public:
    Driver(const RunConfig& cfg, const Mesh& mesh, const GeometryTables<double>& geo64)
        : cfg_(cfg), gas_(cfg.resolved_gas()), mesh_(mesh), geo64_(geo64) {
        bcs_ = BoundaryConditions::from_mesh(mesh_, cfg.freestream());
        dp_.geo = &geo64_;
    }

    DofState<double>& dp_state() { return dp_.state; }

    void demote_state() {
        if (!geo32_) geo32_.emplace(convert_tables<float>(geo64_));
        sp_.geo = &*geo32_;
        sp_.state = demote(dp_.state);
    }
    void promote_state() { dp_.state = promote(sp_.state); }
    DofState<double> snapshot(int bits) const {
        return bits == 32 ? promote(sp_.state) : dp_.state;
    }

    /// One RK2 step at the given precision; returns (norms, reported dt).
    std::pair<std::array<double, 4>, double> step(int bits, double& time) {
        return bits == 32 ? advance(sp_, time) : advance(dp_, time);
    }

    std::int64_t rhs_evaluations() const {
        return dp_.ws.rhs_evaluations + sp_.ws.rhs_evaluations;
    }
    std::int64_t aux_evaluations() const {
        return dp_.ws.aux_evaluations + sp_.ws.aux_evaluations;
    }

private:
    template <class Real>
    std::pair<std::array<double, 4>, double> advance(Level<Real>& lv, double& time) {
        std::optional<FlushDenormals> flush;
        if constexpr (std::is_same_v<Real, float>) flush.emplace();
        compute_local_dt(lv.state, mesh_, gas_, cfg_.step.cfl, cfg_.order, dt_);
        if (cfg_.step.dt_floor > 0.0)
            for (double& d : dt_) d = std::max(d, cfg_.step.dt_floor);
        double reported;
        std::span<const double> dt;
        if (cfg_.step.mode == DtMode::global) {
            global_dt_ = min_reduce(dt_);
            if (cfg_.final_time > 0.0) global_dt_ = std::min(global_dt_, cfg_.final_time - time);
            dt = {&global_dt_, 1};
            reported = global_dt_;
        } else {
            dt = dt_;
            reported = min_reduce(dt_);
        }
        rk2_step(
            lv.state, dt,
            [&](const DofState<Real>& s, Residual& r) {
                rhs(s, mesh_, *lv.geo, bcs_, gas_, lv.ws, r);
            },
            first_, second_, lv.stage);
        time += reported;
        return {residual_l2(first_, mesh_), reported};
    }

    const RunConfig& cfg_;
    GasModel gas_;
    const Mesh& mesh_;
    const GeometryTables<double>& geo64_;
    std::optional<GeometryTables<float>> geo32_;
    BoundaryConditions bcs_;
    Level<double> dp_;
    Level<float> sp_;
    Residual first_, second_;
    std::vector<double> dt_;
    double global_dt_ = 0.0;
};

std::string iteration_tag(std::int64_t it) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06lld", static_cast<long long>(it));
    return buf;
}

}  // namespace

RunArtifacts run(const RunConfig& config) {
    config.check();
    const auto t_setup = Clock::now();
    set_workers(config.workers);
    const GasModel gas = config.resolved_gas();

    RunArtifacts art;
    art.mesh = config.mesh.build();
    const AdjacencyGraph graph = build_adjacency(art.mesh);
    const Permutation ident = Permutation::identity(art.mesh.n_cells());
    art.bandwidth_before = bandwidth(graph, ident);
    Permutation perm = ident;
    Mesh renumbered;
    if (config.renumber) {
        perm = rcm(graph);
        renumbered = apply_permutation(art.mesh, perm);
    }
    art.bandwidth_after = bandwidth(graph, perm);
    const Mesh& mesh = config.renumber ? renumbered : art.mesh;
    const Permutation back = Permutation::from_forward(perm.inverse);

    const GeometryTables<double> geo = compute_geometry(mesh, BasisSet(config.order));
    art.geometry_constants = geo.constant_count();
    Driver driver(config, mesh, geo);
    driver.dp_state() =
        project_initial(mesh, geo, [&](Vec2 x) { return config.exact(x, 0.0); }, gas);

    const FlopByteCount cost64 = count_flops_and_bytes(mesh, config.order, gas, 64);
    const FlopByteCount cost32 = count_flops_and_bytes(mesh, config.order, gas, 32);

    const bool files = !config.output_prefix.empty();
    std::ofstream csv;
    if (files) {
        const std::filesystem::path p = config.output_prefix + "_residual.csv";
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        csv.open(p);
        if (!csv) throw Error("cannot write " + p.string());
        csv << "iter,res_rho,res_rhou,res_rhov,res_e,dt,precision\n";
        art.files.push_back(p);
    }
    auto original_state = [&](const DofState<double>& s) {
        return config.renumber ? permute_state(s, back) : s;
    };
    art.setup_seconds = seconds_since(t_setup);

    int bits = 64;
    double output_seconds = 0.0;
    const auto t_loop = Clock::now();
    for (std::int64_t it = 0; it < config.max_iterations; ++it) {
        if (config.final_time > 0.0 && art.time >= config.final_time) break;
        const PrecisionDecision dec = decide(config.precision, it, art.history);
        if (dec.bits != bits) {
            if (dec.bits == 32) {
                driver.demote_state();
            } else {
                driver.promote_state();
                if (dec.event && !art.precision_event) art.precision_event = dec.event;
            }
            bits = dec.bits;
        }
        const auto [norms, dt] = driver.step(bits, art.time);
        for (double n : norms)
            if (!std::isfinite(n))
                throw DivergenceError("non-finite residual at iteration " + std::to_string(it + 1) +
                                          " (last good iteration " + std::to_string(it) + ")",
                                      it);
        art.history.push(it + 1, norms, dt, bits);
        const FlopByteCount& cost = bits == 32 ? cost32 : cost64;
        art.perf.flops += cost.flops;
        art.perf.dram_bytes += cost.bytes;
        art.perf.iterations += 1;

        if (files) {
            const auto t_out = Clock::now();
            if ((it + 1) % config.log_every == 0) {
                csv << (it + 1);
                for (double n : norms) csv << ',' << format_double(n);
                csv << ',' << format_double(dt) << ',' << bits << '\n';
            }
            if (config.output_every > 0 && (it + 1) % config.output_every == 0) {
                const std::filesystem::path p =
                    config.output_prefix + "_" + iteration_tag(it + 1) + ".vtk";
                const DofState<double> s = driver.snapshot(bits);
                write_vtk(art.mesh, original_state(s), gas, p);
                art.files.push_back(p);
            }
            output_seconds += seconds_since(t_out);
        }
        if (config.residual_target > 0.0 && norms[0] <= config.residual_target) break;
    }
    art.perf.wall_seconds = std::max(0.0, seconds_since(t_loop) - output_seconds);

    const auto t_out = Clock::now();
    if (bits == 32) driver.promote_state();
    art.final_state = original_state(driver.dp_state());
    art.rhs_evaluations = driver.rhs_evaluations();
    art.aux_evaluations = driver.aux_evaluations();
    if (files) {
        csv.close();
        const std::filesystem::path vtk = config.output_prefix + "_final.vtk";
        write_vtk(art.mesh, art.final_state, gas, vtk);
        art.files.push_back(vtk);
    }
    output_seconds += seconds_since(t_out);
    art.output_seconds = output_seconds;

    if (files) {
        const std::filesystem::path logp = config.output_prefix + ".log";
        std::ofstream log(logp);
        if (!log) throw Error("cannot write " + logp.string());
        log << config.to_config().format();
        const double n = static_cast<double>(std::max<std::int64_t>(art.perf.iterations, 1));
        log << "# cells = " << mesh.n_cells() << '\n'
            << "# geometry_constants = " << art.geometry_constants << '\n'
            << "# bandwidth_before = " << art.bandwidth_before << '\n'
            << "# bandwidth_after = " << art.bandwidth_after << '\n'
            << "# iterations = " << art.perf.iterations << '\n'
            << "# rhs_evaluations = " << art.rhs_evaluations << '\n'
            << "# setup_seconds = " << art.setup_seconds << '\n'
            << "# loop_seconds = " << art.perf.wall_seconds << '\n'
            << "# output_seconds = " << art.output_seconds << '\n'
            << "# seconds_per_iteration = " << art.perf.wall_seconds / n << '\n'
            << "# flops_per_iteration = " << art.perf.flops / n << '\n'
            << "# bytes_per_iteration = " << art.perf.dram_bytes / n << '\n';
        if (!art.history.empty()) {
            const auto& last = art.history.norms.back();
            log << "# final_residual = " << format_double(last[0]) << ' '
                << format_double(last[1]) << ' ' << format_double(last[2]) << ' '
                << format_double(last[3]) << '\n';
        }
        if (art.precision_event)
            log << "# precision_switch = " << art.precision_event->iteration << ' '
                << to_string(art.precision_event->reason) << ' '
                << format_double(art.precision_event->residual) << '\n';
        art.files.push_back(logp);
    }
    return art;
}

PerfSample dual_phase(const RunConfig& config, std::int64_t n1, std::int64_t n2) {
    RunConfig c = config;
    c.output_prefix.clear();
    c.residual_target = 0.0;
    c.final_time = 0.0;
    return dual_phase(
        [&](std::int64_t n) {
            c.max_iterations = n;
            const RunArtifacts a = run(c);
            PerfSample s = a.perf;
            s.wall_seconds += a.setup_seconds + a.output_seconds;
            return s;
        },
        n1, n2);
}

}  // namespace hodg
