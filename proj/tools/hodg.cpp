// hodg: run, renumber, perf, divergence and meshgen subcommands.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hodg/config.hpp"
#include "hodg/error.hpp"
#include "hodg/mesh.hpp"
#include "hodg/metrics.hpp"
#include "hodg/parallel.hpp"
#include "hodg/perf.hpp"
#include "hodg/renumber.hpp"
#include "hodg/solver.hpp"

using namespace hodg;
namespace fs = std::filesystem;

namespace {

constexpr int kUsage = 1;
constexpr int kFailure = 2;

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides,
                          int workers) {
    ConfigMap map = ConfigMap::load(path);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error("--set expects key=value, got '" + kv + "'");
        map.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (workers >= 0) map.set("solver.workers", std::to_string(workers));
    return RunConfig::from_config(map, fs::path(path).parent_path());
}

int cmd_run(const std::string& config, const std::vector<std::string>& overrides, int workers) {
    const RunConfig cfg = load_run_config(config, overrides, workers);
    const RunArtifacts a = run(cfg);
    std::printf("cells=%zu iterations=%lld rhs=%lld seconds=%.6g\n", a.mesh.n_cells(),
                static_cast<long long>(a.perf.iterations),
                static_cast<long long>(a.rhs_evaluations), a.perf.wall_seconds);
    if (!a.history.empty()) {
        const auto& r = a.history.norms.back();
        std::printf("residual=%.6e %.6e %.6e %.6e\n", r[0], r[1], r[2], r[3]);
    }
    if (a.precision_event)
        std::printf("precision_switch=%lld reason=%s\n",
                    static_cast<long long>(a.precision_event->iteration),
                    to_string(a.precision_event->reason).c_str());
    for (const auto& f : a.files) std::printf("wrote %s\n", f.string().c_str());
    return 0;
}

int cmd_renumber(const std::string& mesh_path, const std::string& prefix, std::uint64_t shuffle) {
    Mesh mesh = load_mesh(mesh_path);
    if (shuffle != 0) mesh = apply_permutation(mesh, Permutation::random(mesh.n_cells(), shuffle));
    const AdjacencyGraph g = build_adjacency(mesh);
    const Permutation ident = Permutation::identity(mesh.n_cells());
    const Permutation perm = rcm(g);
    const fs::path out(prefix);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_mesh(apply_permutation(mesh, perm), prefix + ".mesh");
    export_spy(g, ident, prefix + "_before.mtx");
    export_spy(g, perm, prefix + "_after.mtx");
    std::printf("cells=%zu bw_before=%d bw_after=%d\n", mesh.n_cells(), bandwidth(g, ident),
                bandwidth(g, perm));
    return 0;
}

int cmd_perf(const std::string& config, const std::vector<std::string>& overrides, int workers,
             std::int64_t n1, std::int64_t n2, const std::vector<std::string>& machines,
             const std::string& out, const std::string& label) {
    if (machines.empty()) throw Error("perf needs at least one --machine name:peakflops:peakbw");
    const RunConfig cfg = load_run_config(config, overrides, workers);
    std::vector<MachineModel> models;
    for (const auto& m : machines) models.push_back(MachineModel::parse(m));
    const PerfSample s = dual_phase(cfg, n1, n2);
    const std::vector<LabeledSample> samples{{label, s}};
    if (!out.empty()) {
        const fs::path p(out);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        emit_roofline_csv(samples, models, p);
    }
    std::cout << format_roofline_csv(samples, models);
    std::printf("# seconds_per_iteration=%.6g flops_per_iteration=%.6g bytes_per_iteration=%.6g\n",
                s.wall_seconds, s.flops, s.dram_bytes);
    return 0;
}

std::pair<std::string, std::string> split_label(const std::string& s, const char* flag) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
        throw Error(std::string(flag) + " expects label=value, got '" + s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

std::int64_t to_count(const std::string& s, const char* flag) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || v < 0)
        throw Error(std::string(flag) + ": '" + s + "' is not a non-negative integer");
    return v;
}

int cmd_divergence(const std::vector<std::string>& versions, const std::vector<std::string>& slocs,
                   const std::vector<std::string>& diffs, const std::string& base,
                   const std::string& comments) {
    const CommentRules rules = comments.empty() ? CommentRules::cpp() : CommentRules::parse(comments);
    std::vector<VersionRecord> recs;
    for (const auto& v : versions) {
        auto [label, paths] = split_label(v, "--version");
        VersionRecord r{label, 0, {}};
        std::size_t start = 0;
        while (start <= paths.size()) {
            const auto comma = paths.find(',', start);
            const std::string p =
                paths.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!p.empty()) r.roots.emplace_back(p);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        r.sloc = count_sloc(r.roots, rules);
        recs.push_back(std::move(r));
    }
    for (const auto& s : slocs) {
        auto [label, n] = split_label(s, "--sloc");
        recs.push_back({label, to_count(n, "--sloc"), {}});
    }
    if (!diffs.empty()) {
        if (base.empty()) throw Error("--diff needs --base");
        const auto it = std::find_if(recs.begin(), recs.end(),
                                     [&](const VersionRecord& r) { return r.label == base; });
        if (it == recs.end()) throw Error("base version '" + base + "' not given");
        const std::int64_t b = it->sloc;
        for (const auto& d : diffs) {
            auto [label, n] = split_label(d, "--diff");
            recs.push_back({label, b + to_count(n, "--diff"), {}});
        }
    }
    if (recs.size() < 2) throw Error("divergence needs at least two versions");
    for (std::size_t i = 0; i < recs.size(); ++i)
        for (std::size_t j = i + 1; j < recs.size(); ++j)
            if (recs[i].label == recs[j].label)
                throw Error("duplicate version label '" + recs[i].label + "'");

    std::printf("a,b,sloc_a,sloc_b,d_percent\n");
    auto row = [](const VersionRecord& a, const VersionRecord& b) {
        std::printf("%s,%s,%lld,%lld,%.2f\n", a.label.c_str(), b.label.c_str(),
                    static_cast<long long>(a.sloc), static_cast<long long>(b.sloc),
                    100.0 * pairwise_distance(a, b));
    };
    if (!base.empty()) {
        const auto it = std::find_if(recs.begin(), recs.end(),
                                     [&](const VersionRecord& r) { return r.label == base; });
        if (it == recs.end()) throw Error("base version '" + base + "' not given");
        for (const auto& r : recs)
            if (r.label != base) row(r, *it);
        for (std::size_t i = 0; i < recs.size(); ++i)
            for (std::size_t j = i + 1; j < recs.size(); ++j)
                if (recs[i].label != base && recs[j].label != base) row(recs[i], recs[j]);
    } else {
        for (std::size_t i = 0; i < recs.size(); ++i)
            for (std::size_t j = i + 1; j < recs.size(); ++j) row(recs[i], recs[j]);
    }
    std::printf("divergence_percent,%.2f\n", 100.0 * divergence(recs));
    return 0;
}

int cmd_meshgen(const std::string& kind, int nx, int ny, const std::vector<double>& extent,
                double height, std::uint64_t shuffle, const std::string& out) {
    Extent e;
    if (!extent.empty()) {
        if (extent.size() != 4) throw Error("--extent expects x0,x1,y0,y1");
        e = {extent[0], extent[1], extent[2], extent[3]};
    }
    Mesh m;
    if (kind == "quad") {
        m = generate_quad_grid(nx, ny, e);
    } else if (kind == "tri") {
        m = generate_tri_grid(nx, ny, e);
    } else if (kind == "bump") {
        m = generate_bump_channel(nx, ny, e, height);
    } else {
        throw Error("unknown mesh kind '" + kind + "' (quad|tri|bump)");
    }
    if (shuffle != 0) m = apply_permutation(m, Permutation::random(m.n_cells(), shuffle));
    if (out.empty()) {
        std::cout << format_mesh(m);
    } else {
        write_mesh(m, out);
        std::printf("cells=%zu faces=%zu nodes=%zu\n", m.n_cells(), m.n_faces(), m.nodes.size());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hodg: high-order DG flow solver and performance toolkit"};
    app.require_subcommand(1);
    int workers = -1;
    app.add_option("--workers", workers, "data-parallel worker count (0: runtime default)")
        ->check(CLI::NonNegativeNumber);

    auto* run_cmd = app.add_subcommand("run", "run the solver from a config file");
    std::string run_config;
    std::vector<std::string> run_set;
    run_cmd->add_option("config", run_config, "config file")->required();
    run_cmd->add_option("--set", run_set, "override a config key (key=value), repeatable");
    run_cmd->footer(
        "Config keys (defaults): mesh.path | mesh.generator=quad (quad|tri|bump), mesh.nx=16,\n"
        "mesh.ny=16, mesh.x0=0, mesh.x1=1, mesh.y0=0, mesh.y1=1, mesh.bump_height=0.1,\n"
        "mesh.bottom/right/top/left (far_field|slip_wall|no_slip_wall), mesh.shuffle=0;\n"
        "gas.gamma=1.4, gas.R=1, gas.mu_dyn=0, gas.Pr=0.72, gas.ivis=0;\n"
        "flow.mach=0.3, flow.angle=0, flow.reynolds=0 (>0 sets mu_dyn=1/Re),\n"
        "flow.initial=freestream (freestream|vortex|pulse), flow.vortex_strength=5,\n"
        "flow.center_x=0, flow.center_y=0, flow.pulse_amplitude=0.1, flow.pulse_width=0.5;\n"
        "solver.order=1, solver.cfl=0.3, solver.dt_mode=global (local|global),\n"
        "solver.dt_floor=0, solver.max_iterations=100, solver.residual_target=0,\n"
        "solver.final_time=0, solver.renumber=off, solver.workers=0;\n"
        "precision.mode=dp (dp|sp|mp_fixed|mp_rebound), precision.switch_iter=0,\n"
        "precision.window=200, precision.factor=2;\n"
        "output.prefix (empty: no files), output.log_every=1, output.output_every=0.");

    auto* ren_cmd = app.add_subcommand("renumber", "RCM-renumber a mesh file");
    std::string ren_mesh, ren_out = "renumbered";
    std::uint64_t ren_shuffle = 0;
    ren_cmd->add_option("mesh", ren_mesh, "mesh file")->required();
    ren_cmd->add_option("--out", ren_out, "output prefix")->capture_default_str();
    ren_cmd->add_option("--shuffle", ren_shuffle, "randomize the numbering first (seed)");

    auto* perf_cmd = app.add_subcommand("perf", "dual-phase measurement and roofline CSV");
    std::string perf_config, perf_out, perf_label = "run";
    std::vector<std::string> perf_set, perf_machines;
    std::int64_t n1 = 100, n2 = 200;
    perf_cmd->add_option("config", perf_config, "config file")->required();
    perf_cmd->add_option("--set", perf_set, "override a config key (key=value), repeatable");
    perf_cmd->add_option("--n1", n1, "iterations of the short run")->capture_default_str();
    perf_cmd->add_option("--n2", n2, "iterations of the long run")->capture_default_str();
    perf_cmd->add_option("--machine", perf_machines, "name:peakflops:peakbw, repeatable");
    perf_cmd->add_option("--out", perf_out, "roofline CSV path");
    perf_cmd->add_option("--label", perf_label, "sample label")->capture_default_str();

    auto* div_cmd = app.add_subcommand("divergence", "SLOC code divergence");
    std::vector<std::string> div_versions, div_sloc, div_diff;
    std::string div_base, div_comments;
    div_cmd->add_option("--version", div_versions, "label=path[,path...], repeatable");
    div_cmd->add_option("--sloc", div_sloc, "label=count, repeatable");
    div_cmd->add_option("--diff", div_diff, "label=changed lines relative to --base, repeatable");
    div_cmd->add_option("--base", div_base, "base version label");
    div_cmd->add_option("--comments", div_comments, "line=//,block=/*:*/");

    auto* gen_cmd = app.add_subcommand("meshgen", "generate a structured mesh");
    std::string gen_kind, gen_out;
    int gen_nx = 0, gen_ny = 0;
    std::vector<double> gen_extent;
    double gen_height = 0.1;
    std::uint64_t gen_shuffle = 0;
    gen_cmd->add_option("kind", gen_kind, "quad|tri|bump")->required();
    gen_cmd->add_option("nx", gen_nx, "cells in x")->required();
    gen_cmd->add_option("ny", gen_ny, "cells in y")->required();
    gen_cmd->add_option("--extent", gen_extent, "x0,x1,y0,y1")->delimiter(',');
    gen_cmd->add_option("--height", gen_height, "bump height")->capture_default_str();
    gen_cmd->add_option("--shuffle", gen_shuffle, "randomize the numbering (seed)");
    gen_cmd->add_option("--out", gen_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (workers >= 0) set_workers(workers);
        if (*run_cmd) return cmd_run(run_config, run_set, workers);
        if (*ren_cmd) return cmd_renumber(ren_mesh, ren_out, ren_shuffle);
        if (*perf_cmd)
            return cmd_perf(perf_config, perf_set, workers, n1, n2, perf_machines, perf_out,
                            perf_label);
        if (*div_cmd) return cmd_divergence(div_versions, div_sloc, div_diff, div_base, div_comments);
        if (*gen_cmd)
            return cmd_meshgen(gen_kind, gen_nx, gen_ny, gen_extent, gen_height, gen_shuffle,
                               gen_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFailure;
    }
    return kUsage;
}
