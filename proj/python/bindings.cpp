#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hodg/config.hpp"
#include "hodg/metrics.hpp"
#include "hodg/parallel.hpp"
#include "hodg/perf.hpp"
#include "hodg/renumber.hpp"
#include "hodg/solver.hpp"
#include "hodg/timestepping.hpp"

namespace py = pybind11;
using namespace hodg;

namespace {

RunConfig config_from(const py::dict& options, const std::string& base_dir) {
    ConfigMap map;
    for (const auto& [k, v] : options) {
        const std::string key = py::str(k);
        std::string value;
        if (py::isinstance<py::bool_>(v))
            value = v.cast<bool>() ? "on" : "off";
        else if (py::isinstance<py::float_>(v))
            value = format_double(v.cast<double>());
        else
            value = py::str(v);
        map.set(key, value);
    }
    return RunConfig::from_config(map, base_dir);
}

py::dict perf_dict(const PerfSample& s) {
    py::dict d;
    d["wall_seconds"] = s.wall_seconds;
    d["flops"] = s.flops;
    d["dram_bytes"] = s.dram_bytes;
    d["iterations"] = s.iterations;
    d["arithmetic_intensity"] = s.arithmetic_intensity();
    d["achieved_flops"] = s.achieved_flops();
    return d;
}

PerfSample perf_from(const py::dict& d) {
    PerfSample s;
    s.wall_seconds = d["wall_seconds"].cast<double>();
    s.flops = d["flops"].cast<double>();
    s.dram_bytes = d["dram_bytes"].cast<double>();
    s.iterations = d.contains("iterations") ? d["iterations"].cast<std::int64_t>() : 1;
    return s;
}

py::dict artifacts_dict(const RunArtifacts& a) {
    const std::size_t n = a.history.size();
    py::array_t<std::int64_t> it(static_cast<py::ssize_t>(n));
    py::array_t<double> norms({static_cast<py::ssize_t>(n), py::ssize_t{4}});
    py::array_t<double> dt(static_cast<py::ssize_t>(n));
    py::array_t<int> bits(static_cast<py::ssize_t>(n));
    auto itv = it.mutable_unchecked<1>();
    auto nv = norms.mutable_unchecked<2>();
    auto dv = dt.mutable_unchecked<1>();
    auto bv = bits.mutable_unchecked<1>();
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<py::ssize_t>(i);
        itv(k) = a.history.iterations[i];
        for (int v = 0; v < 4; ++v) nv(k, v) = a.history.norms[i][v];
        dv(k) = a.history.dt[i];
        bv(k) = a.history.precision[i];
    }
    const DofState<double>& s = a.final_state;
    py::array_t<double> state({static_cast<py::ssize_t>(s.n_cells), py::ssize_t{4},
                               static_cast<py::ssize_t>(s.n_basis)});
    std::copy(s.c.begin(), s.c.end(), state.mutable_data());

    py::dict d;
    d["iterations"] = it;
    d["residuals"] = norms;
    d["dt"] = dt;
    d["precision"] = bits;
    d["state"] = state;
    d["cells"] = a.mesh.n_cells();
    d["time"] = a.time;
    d["rhs_evaluations"] = a.rhs_evaluations;
    d["geometry_constants"] = a.geometry_constants;
    d["bandwidth_before"] = a.bandwidth_before;
    d["bandwidth_after"] = a.bandwidth_after;
    d["perf"] = perf_dict(a.perf);
    d["setup_seconds"] = a.setup_seconds;
    d["output_seconds"] = a.output_seconds;
    if (a.precision_event) {
        py::dict e;
        e["iteration"] = a.precision_event->iteration;
        e["reason"] = to_string(a.precision_event->reason);
        e["residual"] = a.precision_event->residual;
        d["precision_event"] = e;
    } else {
        d["precision_event"] = py::none();
    }
    std::vector<std::string> files;
    for (const auto& f : a.files) files.push_back(f.string());
    d["files"] = files;
    return d;
}

Mesh generate(const std::string& kind, int nx, int ny, const std::vector<double>& extent,
              double height, std::uint64_t shuffle) {
    Extent e;
    if (!extent.empty()) {
        if (extent.size() != 4) throw Error("extent expects (x0, x1, y0, y1)");
        e = {extent[0], extent[1], extent[2], extent[3]};
    }
    Mesh m;
    if (kind == "quad")
        m = generate_quad_grid(nx, ny, e);
    else if (kind == "tri")
        m = generate_tri_grid(nx, ny, e);
    else if (kind == "bump")
        m = generate_bump_channel(nx, ny, e, height);
    else
        throw Error("unknown mesh kind '" + kind + "' (quad|tri|bump)");
    if (shuffle != 0) m = apply_permutation(m, Permutation::random(m.n_cells(), shuffle));
    return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "High-order DG solver, renumbering, performance model and code metrics";

    py::register_exception<Error>(m, "HodgError", PyExc_RuntimeError);

    py::class_<Mesh>(m, "Mesh")
        .def_property_readonly("n_cells", &Mesh::n_cells)
        .def_property_readonly("n_faces", &Mesh::n_faces)
        .def_property_readonly("n_nodes", [](const Mesh& x) { return x.nodes.size(); })
        .def_property_readonly("n_interior_faces", &Mesh::n_interior_faces)
        .def("centroids",
             [](const Mesh& x) {
                 py::array_t<double> out({static_cast<py::ssize_t>(x.n_cells()), py::ssize_t{2}});
                 auto v = out.mutable_unchecked<2>();
                 for (std::size_t c = 0; c < x.n_cells(); ++c) {
                     v(c, 0) = x.cells[c].centroid.x;
                     v(c, 1) = x.cells[c].centroid.y;
                 }
                 return out;
             })
        .def("areas",
             [](const Mesh& x) {
                 std::vector<double> a;
                 for (const Cell& c : x.cells) a.push_back(c.area);
                 return a;
             })
        .def("validate",
             [](const Mesh& x) {
                 std::vector<std::string> out;
                 for (const Violation& v : validate(x)) out.push_back(v.kind + ": " + v.message);
                 return out;
             })
        .def("__repr__", [](const Mesh& x) {
            return "<Mesh cells=" + std::to_string(x.n_cells()) +
                   " faces=" + std::to_string(x.n_faces()) + ">";
        });

    m.def("generate_mesh", &generate, py::arg("kind"), py::arg("nx"), py::arg("ny"),
          py::arg("extent") = std::vector<double>{}, py::arg("height") = 0.1,
          py::arg("shuffle") = 0, "Structured quad, tri or bump-channel mesh.");
    m.def("load_mesh", &load_mesh, py::arg("path"));
    m.def("parse_mesh", &parse_mesh, py::arg("text"));
    m.def("write_mesh", &write_mesh, py::arg("mesh"), py::arg("path"));
    m.def("format_mesh", &format_mesh, py::arg("mesh"));

    m.def(
        "bandwidth",
        [](const Mesh& mesh) {
            const AdjacencyGraph g = build_adjacency(mesh);
            return bandwidth(g, Permutation::identity(g.n()));
        },
        py::arg("mesh"));
    m.def(
        "rcm_order",
        [](const Mesh& mesh) { return rcm(build_adjacency(mesh)).forward; }, py::arg("mesh"),
        "New index of every cell under reverse Cuthill-McKee.");
    m.def(
        "renumber",
        [](const Mesh& mesh) {
            const AdjacencyGraph g = build_adjacency(mesh);
            const Permutation p = rcm(g);
            return py::make_tuple(apply_permutation(mesh, p),
                                  bandwidth(g, Permutation::identity(g.n())), bandwidth(g, p));
        },
        py::arg("mesh"), "(renumbered mesh, bandwidth before, bandwidth after)");
    m.def(
        "export_spy",
        [](const Mesh& mesh, const std::string& path, bool renumbered) {
            const AdjacencyGraph g = build_adjacency(mesh);
            export_spy(g, renumbered ? rcm(g) : Permutation::identity(g.n()), path);
        },
        py::arg("mesh"), py::arg("path"), py::arg("renumbered") = false,
        "Adjacency pattern as a symmetric MatrixMarket file (lower triangle).");

    m.def(
        "run",
        [](const py::dict& options, const std::string& base_dir) {
            const RunConfig cfg = config_from(options, base_dir);
            RunArtifacts a;
            {
                py::gil_scoped_release release;
                a = run(cfg);
            }
            return artifacts_dict(a);
        },
        py::arg("options") = py::dict(), py::arg("base_dir") = "",
        "Runs the solver. Options use the config file keys, e.g. {'solver.order': 2}.");
    m.def(
        "run_file",
        [](const std::string& path, const py::dict& overrides) {
            ConfigMap map = ConfigMap::load(path);
            for (const auto& [k, v] : overrides) map.set(py::str(k), py::str(v));
            const RunConfig cfg =
                RunConfig::from_config(map, std::filesystem::path(path).parent_path());
            RunArtifacts a;
            {
                py::gil_scoped_release release;
                a = run(cfg);
            }
            return artifacts_dict(a);
        },
        py::arg("path"), py::arg("overrides") = py::dict());
    m.def(
        "resolved_config",
        [](const py::dict& options) { return config_from(options, "").to_config().format(); },
        py::arg("options") = py::dict(), "Every config key with its resolved value, as text.");

    m.def(
        "dual_phase",
        [](const py::dict& options, std::int64_t n1, std::int64_t n2) {
            const RunConfig cfg = config_from(options, "");
            PerfSample s;
            {
                py::gil_scoped_release release;
                s = dual_phase(cfg, n1, n2);
            }
            return perf_dict(s);
        },
        py::arg("options"), py::arg("n1"), py::arg("n2"));
    m.def(
        "count_flops_and_bytes",
        [](const Mesh& mesh, int order, bool viscous, int precision_bits) {
            GasModel gas;
            gas.ivis = viscous ? 1 : 0;
            const FlopByteCount c = count_flops_and_bytes(mesh, order, gas, precision_bits);
            py::dict d;
            d["flops"] = c.flops;
            d["bytes"] = c.bytes;
            d["rhs_flops"] = c.rhs_flops;
            d["words"] = c.words;
            return d;
        },
        py::arg("mesh"), py::arg("order"), py::arg("viscous") = false,
        py::arg("precision_bits") = 64);
    m.def(
        "roofline_attainable",
        [](double peak_flops, double peak_bandwidth, double ai) {
            return roofline_attainable(MachineModel{"", peak_flops, peak_bandwidth}, ai);
        },
        py::arg("peak_flops"), py::arg("peak_bandwidth"), py::arg("ai"));
    m.def(
        "roofline_csv",
        [](const std::vector<std::pair<std::string, py::dict>>& samples,
           const std::vector<std::string>& machines) {
            std::vector<LabeledSample> s;
            for (const auto& [label, d] : samples) s.emplace_back(label, perf_from(d));
            std::vector<MachineModel> mm;
            for (const auto& spec : machines) mm.push_back(MachineModel::parse(spec));
            return format_roofline_csv(s, mm);
        },
        py::arg("samples"), py::arg("machines"),
        "samples: [(label, perf dict)], machines: ['name:peakflops:peakbw'].");

    m.def(
        "count_sloc",
        [](const std::vector<std::string>& paths, const std::string& comments) {
            std::vector<std::filesystem::path> p(paths.begin(), paths.end());
            return count_sloc(p, comments.empty() ? CommentRules::cpp() : CommentRules::parse(comments));
        },
        py::arg("paths"), py::arg("comments") = "");
    m.def(
        "pairwise_distance",
        [](std::int64_t a, std::int64_t b) {
            return pairwise_distance({"a", a, {}}, {"b", b, {}});
        },
        py::arg("sloc_a"), py::arg("sloc_b"));
    m.def(
        "divergence",
        [](const std::vector<std::int64_t>& slocs) {
            std::vector<VersionRecord> v;
            for (std::size_t i = 0; i < slocs.size(); ++i)
                v.push_back({std::to_string(i), slocs[i], {}});
            return divergence(v);
        },
        py::arg("slocs"));
    m.def("rdtp", &rdtp, py::arg("speedup"), py::arg("relative_effort"));

    m.def(
        "min_reduce",
        [](const std::vector<double>& values, std::size_t block) {
            return min_reduce(values, block);
        },
        py::arg("values"), py::arg("block") = kReduceBlock);
    m.def("set_workers", &set_workers, py::arg("n"));
    m.def("workers", &workers);
}
