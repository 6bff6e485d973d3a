#include "hodg/perf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hodg/basis.hpp"
#include "hodg/counting.hpp"
#include "hodg/quadrature.hpp"
#include "hodg/timestepping.hpp"

namespace hodg {

void PerfSample::check() const {
    if (!(wall_seconds >= 0.0) || !(flops >= 0.0) || !(dram_bytes >= 0.0) || iterations < 0)
        throw Error("PerfSample: fields must be non-negative");
}

void MachineModel::check() const {
    if (!(peak_flops > 0.0) || !(peak_bandwidth > 0.0))
        throw Error("machine '" + label + "': peak flops and bandwidth must be positive");
}

MachineModel MachineModel::parse(const std::string& spec) {
    const auto a = spec.find(':');
    const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
    if (a == std::string::npos || b == std::string::npos || spec.find(':', b + 1) != std::string::npos)
        throw Error("machine spec '" + spec + "' is not name:peakflops:peakbw");
    MachineModel m;
    m.label = spec.substr(0, a);
    try {
        std::size_t used = 0;
        const std::string f = spec.substr(a + 1, b - a - 1);
        m.peak_flops = std::stod(f, &used);
        if (used != f.size()) throw std::invalid_argument(f);
        const std::string w = spec.substr(b + 1);
        m.peak_bandwidth = std::stod(w, &used);
        if (used != w.size()) throw std::invalid_argument(w);
    } catch (const std::logic_error&) {
        throw Error("machine spec '" + spec + "': bad number");
    }
    if (m.label.empty()) throw Error("machine spec '" + spec + "': empty name");
    m.check();
    return m;
}

namespace {

using CR = CountingReal;

Conserved<CR> counting_state(double r, double ru, double rv, double e) {
    return {{CR(r), CR(ru), CR(rv), CR(e)}};
}

template <class F>
std::int64_t count_ops(F&& f) {
    CR::reset();
    f();
    const std::int64_t n = CR::counter().total();
    CR::reset();
    return n;
}

}  // namespace

KernelCounts kernel_counts(const GasModel& gas) {
    // Subsonic states with the entropy fix inactive and the far-field face
    // taking the characteristic (not supersonic) branch.
    const Conserved<CR> qL = counting_state(1.0, 0.3, 0.1, 2.6);
    const Conserved<CR> qR = counting_state(1.1, 0.35, 0.05, 2.8);
    const Normal<CR> n{CR(0.6), CR(0.8)};
    ConservedGradient<CR> z;
    for (int v = 0; v < 4; ++v) {
        z.dx[v] = CR(0.1 * (v + 1));
        z.dy[v] = CR(-0.05 * (v + 2));
    }
    const FluxPair<CR> fp = inviscid_flux(qL, gas);

    KernelCounts k;
    k.roe_flux = count_ops([&] { (void)roe_flux(qL, qR, n, gas); });
    k.inviscid_flux = count_ops([&] { (void)inviscid_flux(qL, gas); });
    k.viscous_flux = count_ops([&] { (void)viscous_flux(qL, z, gas); });
    k.normal_flux = count_ops([&] { (void)normal_flux(fp, n); });
    k.br1_interface = count_ops([&] { (void)br1_interface(qL, qR, z, z, n, gas); });
    k.far_field_state =
        count_ops([&] { (void)boundary_state(qL, BcKind::far_field, n, qR, gas); });
    k.slip_wall_state =
        count_ops([&] { (void)boundary_state(qL, BcKind::slip_wall, n, qR, gas); });
    k.no_slip_wall_state =
        count_ops([&] { (void)boundary_state(qL, BcKind::no_slip_wall, n, qR, gas); });
    k.pressure = count_ops([&] { (void)pressure(qL, gas); });
    k.local_dt = count_ops([&] { (void)local_dt(CR(0.1), qL, gas, 0.3, 1); });
    return k;
}

FlopByteCount count_flops_and_bytes(const Mesh& mesh, int order, const GasModel& gas,
                                    int precision_bits) {
    if (order < 0 || order > 2) throw Error("count_flops_and_bytes: order must be 0, 1 or 2");
    if (precision_bits != 32 && precision_bits != 64)
        throw Error("count_flops_and_bytes: precision must be 32 or 64 bits");
    const KernelCounts k = kernel_counts(gas);
    const bool viscous = gas.ivis == 1;

    const double nb = BasisSet::size_for(order);
    const double nq = gauss_points_for_degree(2 * order + 1);
    const double C = static_cast<double>(mesh.n_cells());
    const double F = static_cast<double>(mesh.n_faces());
    double V = 0.0;
    for (std::size_t c = 0; c < mesh.n_cells(); ++c)
        V += static_cast<double>(cell_quadrature(mesh, static_cast<Index>(c), 2 * order).size());
    double Fi = 0.0, far = 0.0, slip = 0.0, noslip = 0.0;
    for (const Face& f : mesh.faces) {
        if (!f.boundary()) {
            Fi += 1.0;
            continue;
        }
        switch (mesh.patches[f.patch()].kind) {
            case BcKind::far_field: far += 1.0; break;
            case BcKind::slip_wall: slip += 1.0; break;
            case BcKind::no_slip_wall: noslip += 1.0; break;
        }
    }
    const double Fb = F - Fi;
    const double sides = 2.0 * Fi + Fb;  // cell-face incidences
    const double ghost = far * k.far_field_state + slip * k.slip_wall_state +
                         noslip * k.no_slip_wall_state;

    const double tr = 4.0 * (2.0 * nb - 1.0);  // one trace of 4 variables
    const double trg = 2.0 * tr;               // trace of the gradient
    const bool hi = nb > 1.0;

    // face pass
    double face = nq * (F * (tr + k.roe_flux) + Fi * tr + ghost);
    if (viscous) {
        face += nq * (F * trg + Fi * (trg + k.br1_interface) + (far + slip) * k.br1_interface +
                      noslip * (8.0 + k.viscous_flux + k.normal_flux));
    }
    // cell gather
    double gather = C * k.inviscid_flux;
    if (hi) {
        double per_point = tr + k.inviscid_flux + 8.0 + 4.0 * (2.0 + 4.0 * (nb - 1.0));
        if (viscous) per_point += trg + k.viscous_flux + 8.0;
        gather += V * per_point;
    }
    gather += sides * (12.0 + nq * (1.0 + 4.0 * ((viscous ? 3.0 : 2.0) + 2.0 * nb)));
    gather += C * 4.0 * nb * 2.0 * nb;
    // auxiliary gradient
    double aux = 0.0;
    if (viscous) {
        aux += nq * (F * (tr + k.pressure + 8.0) + Fi * tr + ghost);
        if (hi) aux += V * 4.0 * (4.0 * (nb - 1.0) + 2.0 + 4.0 * nb);
        aux += sides * (2.0 + nq * (tr + 4.0 * (4.0 + 4.0 * nb)));
        aux += C * 8.0 * nb * 2.0 * nb;
    }

    FlopByteCount out;
    out.rhs_flops = face + gather + aux;
    const double dofs = 4.0 * nb * C;
    out.flops = 2.0 * out.rhs_flops + 7.0 * dofs + C * k.local_dt + 12.0 * C + 4.0;

    // Ideal traffic in array elements.
    const double face_tab = F * nq * (2.0 * nb + 1.0);
    const double vol_tab = hi ? V * (1.0 + 3.0 * nb) : 0.0;
    const double flux = 4.0 * F * nq;
    const double normals = 2.0 * F;
    const double minv = C * nb * nb;
    double w_face = dofs + face_tab + normals + flux;
    if (viscous) w_face += 2.0 * dofs + flux;
    double w_gather = dofs + vol_tab + face_tab + normals + flux + minv + dofs;
    if (viscous) w_gather += 2.0 * dofs + flux;
    double w_aux = 0.0;
    if (viscous) {
        w_aux += dofs + F * nq * 2.0 * nb + normals + flux;                    // face traces
        w_aux += dofs + vol_tab + face_tab + flux + normals + minv + 2.0 * dofs;  // cell solve
    }
    const double w_rk = 3.0 * dofs + 4.0 * dofs;
    const double w_dt = 4.0 * C + C + C;
    const double w_norm = 4.0 * C + C;
    out.words = 2.0 * (w_face + w_gather + w_aux) + w_rk + w_dt + w_norm;
    out.bytes = out.words * (precision_bits / 8);
    return out;
}

double roofline_attainable(const MachineModel& m, double ai) {
    if (!(ai >= 0.0)) throw Error("roofline_attainable: arithmetic intensity must be >= 0");
    m.check();
    if (std::isinf(ai)) return m.peak_flops;
    return std::min(m.peak_flops, m.peak_bandwidth * ai);
}

std::string format_roofline_csv(std::span<const LabeledSample> samples,
                                std::span<const MachineModel> machines) {
    if (samples.empty()) throw Error("roofline: no samples");
    if (machines.empty()) throw Error("roofline: no machine models");
    std::ostringstream os;
    os.precision(9);
    os << "# dram bytes: ideal traffic, every array read or written once per pass (lower bound)\n";
    os << "label,ai,achieved_flops,machine,attainable_flops,bound\n";
    for (const auto& [label, s] : samples) {
        s.check();
        const double ai = s.arithmetic_intensity();
        const double achieved = s.achieved_flops();
        for (const MachineModel& m : machines) {
            const double att = roofline_attainable(m, ai);
            if (achieved > att * (1.0 + 1e-12))
                throw Error("roofline: sample '" + label + "' achieves " + std::to_string(achieved) +
                            " FLOP/s, above the attainable " + std::to_string(att) + " on " +
                            m.label);
            const char* bound = ai < m.ridge() ? "memory" : "compute";
            os << label << ',' << ai << ',' << achieved << ',' << m.label << ',' << att << ','
               << bound << '\n';
        }
    }
    return os.str();
}

void emit_roofline_csv(std::span<const LabeledSample> samples,
                       std::span<const MachineModel> machines, const std::filesystem::path& path) {
    const std::string text = format_roofline_csv(samples, machines);
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
    if (!f) throw Error("write failed: " + path.string());
}

}  // namespace hodg
