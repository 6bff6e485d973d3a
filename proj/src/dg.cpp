#include "hodg/dg.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <string>
#include <type_traits>

#include "hodg/error.hpp"
#include "hodg/parallel.hpp"
#include "hodg/quadrature.hpp"

namespace hodg {

BoundaryConditions BoundaryConditions::from_mesh(const Mesh& mesh,
                                                 const Conserved<double>& freestream) {
    BoundaryConditions b;
    b.freestream = freestream;
    for (const auto& p : mesh.patches) b.kinds.push_back(p.kind);
    return b;
}

namespace {

// Keeps the admissibility failure with the smallest entity id so the error
// reported after a parallel pass does not depend on scheduling.
class PassErrors {
public:
    void record(std::int64_t entity, const char* what) {
        std::lock_guard lock(mutex_);
        if (entity < entity_) {
            entity_ = entity;
            what_ = what;
        }
    }
    void rethrow(const char* kind, std::int64_t iteration) const {
        if (entity_ == std::numeric_limits<std::int64_t>::max()) return;
        throw AdmissibilityError(what_ + " at " + kind + " " + std::to_string(entity_) +
                                     " (iteration " + std::to_string(iteration) + ")",
                                 entity_, iteration);
    }

private:
    std::mutex mutex_;
    std::int64_t entity_ = std::numeric_limits<std::int64_t>::max();
    std::string what_;
};

template <class Real>
inline void trace(const Real* c, const Real* b, int nb, Conserved<Real>& q) {
    for (int v = 0; v < 4; ++v) {
        Real s = c[v * nb] * b[0];
        for (int j = 1; j < nb; ++j) s += c[v * nb + j] * b[j];
        q[v] = s;
    }
}

template <class Real>
inline Conserved<Real> trace(const Real* c, const Real* b, int nb) {
    Conserved<Real> q;
    trace(c, b, nb, q);
    return q;
}

template <class Real>
inline ConservedGradient<Real> trace_gradient(const Real* z, const Real* b, int nb) {
    ConservedGradient<Real> g;
    trace(z, b, nb, g.dx);
    trace(z + 4 * nb, b, nb, g.dy);
    return g;
}

template <class Real>
Conserved<Real> cast_state(const Conserved<double>& q) {
    return {{Real(q[0]), Real(q[1]), Real(q[2]), Real(q[3])}};
}

template <class Real>
inline void check_admissible(const Conserved<Real>& q, const GasModel& gas) {
    if (!(q[kRho] > Real(0)) || !(pressure(q, gas) > Real(0)))
        throw AdmissibilityError("inadmissible trace state");
}

// Ghost state on a boundary face, or the neighbour trace on an interior one.
template <class Real>
inline Conserved<Real> outer_state(const Face& face, const Conserved<Real>& qL,
                                   const Real* cr, const Real* br, int nb,
                                   const BoundaryConditions& bcs, const Conserved<Real>& fs,
                                   Normal<Real> n, const GasModel& gas) {
    if (!face.boundary()) return trace(cr, br, nb);
    return boundary_state(qL, bcs.kinds[face.patch()], n, fs, gas);
}

template <class Real>
void ensure_buffer(FaceFluxBuffer<Real>& buf, std::size_t faces, int points, bool viscous) {
    if (buf.n_faces != faces || buf.n_points != points || buf.has_viscous() != viscous)
        buf = FaceFluxBuffer<Real>(faces, points, viscous);
}

// Runs fn(std::integral_constant<int, nb>) so the per-cell loops see a
// compile-time basis size.
template <class Fn>
void with_basis_size(int nb, Fn&& fn) {
    switch (nb) {
        case 1: fn(std::integral_constant<int, 1>{}); return;
        case 3: fn(std::integral_constant<int, 3>{}); return;
        case 6: fn(std::integral_constant<int, 6>{}); return;
    }
    throw Error("unsupported basis size " + std::to_string(nb));
}

}  // namespace

template <class Real>
void compute_aux_gradient(const DofState<Real>& state, const Mesh& mesh,
                          const GeometryTables<Real>& geo, const BoundaryConditions& bcs,
                          const GasModel& gas, FaceFluxBuffer<Real>& buf,
                          AuxGradient<Real>& out) {
    with_basis_size(geo.n_basis, [&](auto nb_tag) {
        constexpr int nb = decltype(nb_tag)::value;
        const int nq = geo.face_points;
        ensure_buffer(buf, mesh.n_faces(), nq, true);
        if (out.n_cells != mesh.n_cells() || out.n_basis != nb)
            out = AuxGradient<Real>(mesh.n_cells(), nb);
        const Conserved<Real> fs = cast_state<Real>(bcs.freestream);

        PassErrors face_errors;
        parallel_for(mesh.n_faces(), [&](std::size_t f) {
            const Face& face = mesh.faces[f];
            const Normal<Real> n{Real(face.normal.x), Real(face.normal.y)};
            const Real* cl = state.cell(face.left);
            const Real* cr = face.boundary() ? nullptr : state.cell(face.right);
            try {
                for (int q = 0; q < nq; ++q) {
                    const std::size_t k = f * nq + q;
                    Conserved<Real> qL;
                    trace(cl, &geo.face_bl[k * nb], nb, qL);
                    check_admissible(qL, gas);
                    const Conserved<Real> qR =
                        outer_state(face, qL, cr, &geo.face_br[k * nb], nb, bcs, fs, n, gas);
                    Real* qh = &buf.q_hat[buf.slot(f, q)];
                    for (int v = 0; v < 4; ++v) qh[v] = Real(0.5) * (qL[v] + qR[v]);
                }
            } catch (const AdmissibilityError& e) {
                face_errors.record(static_cast<std::int64_t>(f), e.what());
            }
        });
        face_errors.rethrow("face", state.iteration);

        // Strong form: int Z b = int grad(Q) b + sum_faces int (q_hat - Q_own) n b,
        // which is exactly zero for a uniform state.
        parallel_for(mesh.n_cells(), [&](std::size_t c) {
            double acc[2][4][kMaxBasis] = {};
            const Real* cc = state.cell(c);
            if (nb > 1) {
                for (Index p = geo.vol_offset[c]; p < geo.vol_offset[c + 1]; ++p) {
                    const Real w = geo.vol_w[p];
                    const Real* b = &geo.vol_b[p * nb];
                    const Real* db = &geo.vol_db[p * nb * 2];
                    for (int v = 0; v < 4; ++v) {
                        Real gx = Real(0), gy = Real(0);
                        for (int k = 1; k < nb; ++k) {
                            gx += cc[v * nb + k] * db[2 * k];
                            gy += cc[v * nb + k] * db[2 * k + 1];
                        }
                        gx *= w;
                        gy *= w;
                        for (int j = 0; j < nb; ++j) {
                            acc[0][v][j] += double(gx * b[j]);
                            acc[1][v][j] += double(gy * b[j]);
                        }
                    }
                }
            }
            const Cell& cell = mesh.cells[c];
            for (int k = 0; k < cell.n_vertices(); ++k) {
                const Index f = cell.faces[k];
                const Face& face = mesh.faces[f];
                const bool left = face.left == static_cast<Index>(c);
                const Real s = left ? Real(1) : Real(-1);
                const Real nx = s * Real(face.normal.x), ny = s * Real(face.normal.y);
                const std::vector<Real>& tab = left ? geo.face_bl : geo.face_br;
                for (int q = 0; q < nq; ++q) {
                    const std::size_t kq = static_cast<std::size_t>(f) * nq + q;
                    const Real* b = &tab[kq * nb];
                    Conserved<Real> own;
                    trace(cc, b, nb, own);
                    const Real* qh = &buf.q_hat[buf.slot(f, q)];
                    const Real w = geo.face_w[kq];
                    for (int v = 0; v < 4; ++v) {
                        const Real jump = w * (qh[v] - own[v]);
                        const Real wx = jump * nx, wy = jump * ny;
                        for (int j = 0; j < nb; ++j) {
                            acc[0][v][j] += double(wx * b[j]);
                            acc[1][v][j] += double(wy * b[j]);
                        }
                    }
                }
            }
            const double* mi = &geo.inv_mass[c * nb * nb];
            Real* z = out.cell(c);
            for (int d = 0; d < 2; ++d)
                for (int v = 0; v < 4; ++v)
                    for (int i = 0; i < nb; ++i) {
                        double s = 0.0;
                        for (int j = 0; j < nb; ++j) s += mi[i * nb + j] * acc[d][v][j];
                        z[(d * 4 + v) * nb + i] = Real(s);
                    }
        });
    });
}

template <class Real>
void face_flux_pass(const DofState<Real>& state, const AuxGradient<Real>* aux, const Mesh& mesh,
                    const GeometryTables<Real>& geo, const BoundaryConditions& bcs,
                    const GasModel& gas, FaceFluxBuffer<Real>& buf,
                    std::span<const Index> order) {
    with_basis_size(geo.n_basis, [&](auto nb_tag) {
        constexpr int nb = decltype(nb_tag)::value;
        const int nq = geo.face_points;
        const bool viscous = aux != nullptr;
        if (viscous) {
            // keep q_hat from the gradient pass
            if (buf.n_faces != mesh.n_faces() || buf.n_points != nq || !buf.has_viscous())
                buf = FaceFluxBuffer<Real>(mesh.n_faces(), nq, true);
        } else if (buf.n_faces != mesh.n_faces() || buf.n_points != nq) {
            buf = FaceFluxBuffer<Real>(mesh.n_faces(), nq, false);
        }
        const Conserved<Real> fs = cast_state<Real>(bcs.freestream);
        const std::size_t count = order.empty() ? mesh.n_faces() : order.size();

        PassErrors errors;
        parallel_for(count, [&](std::size_t idx) {
            const std::size_t f = order.empty() ? idx : static_cast<std::size_t>(order[idx]);
            const Face& face = mesh.faces[f];
            const Normal<Real> n{Real(face.normal.x), Real(face.normal.y)};
            const Real* cl = state.cell(face.left);
            const Real* cr = face.boundary() ? nullptr : state.cell(face.right);
            try {
                for (int q = 0; q < nq; ++q) {
                    const std::size_t k = f * nq + q;
                    const Real* bl = &geo.face_bl[k * nb];
                    const Real* br = &geo.face_br[k * nb];
                    Conserved<Real> qL;
                    trace(cl, bl, nb, qL);
                    const Conserved<Real> qR = outer_state(face, qL, cr, br, nb, bcs, fs, n, gas);
                    const Flux4<Real> h = roe_flux(qL, qR, n, gas);
                    Real* out = &buf.inviscid[buf.slot(f, q)];
                    for (int v = 0; v < 4; ++v) out[v] = h[v];
                    if (!viscous) continue;

                    const ConservedGradient<Real> zL = trace_gradient(aux->cell(face.left), bl, nb);
                    Flux4<Real> hv;
                    if (!face.boundary()) {
                        const ConservedGradient<Real> zR =
                            trace_gradient(aux->cell(face.right), br, nb);
                        hv = br1_interface(qL, qR, zL, zR, n, gas).hv;
                    } else if (bcs.kinds[face.patch()] == BcKind::no_slip_wall) {
                        // Adiabatic wall: viscous traction at the wall state, no heat flux.
                        Conserved<Real> qw;
                        for (int v = 0; v < 4; ++v) qw[v] = Real(0.5) * (qL[v] + qR[v]);
                        hv = normal_flux(viscous_flux(qw, zL, gas), n);
                        hv[kEnergy] = Real(0);
                    } else {
                        hv = br1_interface(qL, qR, zL, zL, n, gas).hv;
                    }
                    Real* outv = &buf.viscous[buf.slot(f, q)];
                    for (int v = 0; v < 4; ++v) outv[v] = hv[v];
                }
            } catch (const AdmissibilityError& e) {
                errors.record(static_cast<std::int64_t>(f), e.what());
            }
        });
        errors.rethrow("face", state.iteration);
    });
}

template <class Real>
void accumulate_rhs(const DofState<Real>& state, const AuxGradient<Real>* aux,
                    const FaceFluxBuffer<Real>& fluxes, const Mesh& mesh,
                    const GeometryTables<Real>& geo, const GasModel& gas, Residual& out,
                    std::span<const Index> order) {
    with_basis_size(geo.n_basis, [&](auto nb_tag) {
        constexpr int nb = decltype(nb_tag)::value;
        const int nq = geo.face_points;
        const bool viscous = aux != nullptr && fluxes.has_viscous();
        if (out.n_cells != mesh.n_cells() || out.n_basis != nb) out = Residual(mesh.n_cells(), nb);
        const std::size_t count = order.empty() ? mesh.n_cells() : order.size();

        // Fluxes enter relative to the flux of the cell mean F0: the constant part
        // integrates to zero exactly, so a uniform state leaves only rounding of
        // near-zero differences.
        PassErrors errors;
        parallel_for(count, [&](std::size_t idx) {
            const std::size_t c = order.empty() ? idx : static_cast<std::size_t>(order[idx]);
            double acc[4][kMaxBasis] = {};
            const Real* cc = state.cell(c);
            FluxPair<Real> F0;
            try {
                F0 = inviscid_flux(state.mean(c), gas);
                if (nb > 1) {
                    for (Index p = geo.vol_offset[c]; p < geo.vol_offset[c + 1]; ++p) {
                        const Real* b = &geo.vol_b[p * nb];
                        const Real* db = &geo.vol_db[p * nb * 2];
                        const Real w = geo.vol_w[p];
                        Conserved<Real> Q;
                        trace(cc, b, nb, Q);
                        FluxPair<Real> F = inviscid_flux(Q, gas);
                        for (int v = 0; v < 4; ++v) {
                            F.ex[v] -= F0.ex[v];
                            F.fy[v] -= F0.fy[v];
                        }
                        if (viscous) {
                            const FluxPair<Real> Fv =
                                viscous_flux(Q, trace_gradient(aux->cell(c), b, nb), gas);
                            for (int v = 0; v < 4; ++v) {
                                F.ex[v] -= Fv.ex[v];
                                F.fy[v] -= Fv.fy[v];
                            }
                        }
                        for (int v = 0; v < 4; ++v) {
                            const Real fx = w * F.ex[v], fy = w * F.fy[v];
                            for (int j = 1; j < nb; ++j)
                                acc[v][j] += double(fx * db[2 * j] + fy * db[2 * j + 1]);
                        }
                    }
                }
            } catch (const AdmissibilityError& e) {
                errors.record(static_cast<std::int64_t>(c), e.what());
                return;
            }
            const Cell& cell = mesh.cells[c];
            for (int k = 0; k < cell.n_vertices(); ++k) {
                const Index f = cell.faces[k];
                const Face& face = mesh.faces[f];
                const bool left = face.left == static_cast<Index>(c);
                const Real s = left ? Real(-1) : Real(1);
                const Real nx = Real(face.normal.x), ny = Real(face.normal.y);
                Real ref[4];
                for (int v = 0; v < 4; ++v) ref[v] = F0.ex[v] * nx + F0.fy[v] * ny;
                const std::vector<Real>& tab = left ? geo.face_bl : geo.face_br;
                for (int q = 0; q < nq; ++q) {
                    const std::size_t kq = static_cast<std::size_t>(f) * nq + q;
                    const Real* b = &tab[kq * nb];
                    const Real* h = &fluxes.inviscid[fluxes.slot(f, q)];
                    const Real* hv = viscous ? &fluxes.viscous[fluxes.slot(f, q)] : nullptr;
                    const Real sw = s * geo.face_w[kq];
                    for (int v = 0; v < 4; ++v) {
                        const Real t = sw * (viscous ? (h[v] - ref[v]) - hv[v] : h[v] - ref[v]);
                        for (int j = 0; j < nb; ++j) acc[v][j] += double(t * b[j]);
                    }
                }
            }
            const double* mi = &geo.inv_mass[c * nb * nb];
            double* r = out.r.data() + c * out.stride();
            for (int v = 0; v < 4; ++v)
                for (int i = 0; i < nb; ++i) {
                    double s = 0.0;
                    for (int j = 0; j < nb; ++j) s += mi[i * nb + j] * acc[v][j];
                    r[v * nb + i] = s;
                }
        });
        errors.rethrow("cell", state.iteration);
    });
}

template <class Real>
void rhs(const DofState<Real>& state, const Mesh& mesh, const GeometryTables<Real>& geo,
         const BoundaryConditions& bcs, const GasModel& gas, DgWorkspace<Real>& ws,
         Residual& out) {
    ++ws.rhs_evaluations;
    if (gas.ivis == 1) {
        ++ws.aux_evaluations;
        compute_aux_gradient(state, mesh, geo, bcs, gas, ws.fluxes, ws.aux);
        face_flux_pass(state, &ws.aux, mesh, geo, bcs, gas, ws.fluxes);
        accumulate_rhs(state, &ws.aux, ws.fluxes, mesh, geo, gas, out);
    } else {
        face_flux_pass<Real>(state, nullptr, mesh, geo, bcs, gas, ws.fluxes);
        accumulate_rhs<Real>(state, nullptr, ws.fluxes, mesh, geo, gas, out);
    }
}

template <class Real>
Residual rhs(const DofState<Real>& state, const Mesh& mesh, const GeometryTables<Real>& geo,
             const BoundaryConditions& bcs, const GasModel& gas) {
    DgWorkspace<Real> ws;
    Residual out;
    rhs(state, mesh, geo, bcs, gas, ws, out);
    return out;
}

DofState<double> project_initial(const Mesh& mesh, const GeometryTables<double>& geo,
                                 const FieldFunction& w0, const GasModel& gas) {
    const BasisSet basis(geo.order);
    const int nb = geo.n_basis;
    const int degree = std::min(2 * geo.order + 2, 4);
    DofState<double> s(mesh.n_cells(), nb);
    double b[kMaxBasis];
    for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
        double acc[4][kMaxBasis] = {};
        for (const QuadPoint& p : cell_quadrature(mesh, static_cast<Index>(c), degree)) {
            Conserved<double> q;
            try {
                q = conserved_from_primitive(w0(p.x), gas);
            } catch (const AdmissibilityError& e) {
                throw AdmissibilityError(std::string("initial field: ") + e.what() + " in cell " +
                                             std::to_string(c),
                                         static_cast<std::int64_t>(c), 0);
            }
            basis.values(geo.frames[c], p.x, b);
            for (int v = 0; v < 4; ++v)
                for (int j = 0; j < nb; ++j) acc[v][j] += p.w * q[v] * b[j];
        }
        const double* mi = &geo.inv_mass[c * nb * nb];
        for (int v = 0; v < 4; ++v)
            for (int i = 0; i < nb; ++i) {
                double t = 0.0;
                for (int j = 0; j < nb; ++j) t += mi[i * nb + j] * acc[v][j];
                s.at(c, v, i) = t;
            }
    }
    return s;
}

template <class Real>
Conserved<double> evaluate(const DofState<Real>& state, const GeometryTables<double>& geo,
                           const BasisSet& basis, std::size_t cell, Vec2 x) {
    double b[kMaxBasis];
    basis.values(geo.frames[cell], x, b);
    Conserved<double> q;
    for (int v = 0; v < 4; ++v) {
        double s = 0.0;
        for (int j = 0; j < state.n_basis; ++j) s += double(state.at(cell, v, j)) * b[j];
        q[v] = s;
    }
    return q;
}

#define HODG_DG_INSTANTIATE(R)                                                                  \
    template void compute_aux_gradient<R>(const DofState<R>&, const Mesh&,                      \
                                          const GeometryTables<R>&, const BoundaryConditions&,  \
                                          const GasModel&, FaceFluxBuffer<R>&, AuxGradient<R>&); \
    template void face_flux_pass<R>(const DofState<R>&, const AuxGradient<R>*, const Mesh&,     \
                                    const GeometryTables<R>&, const BoundaryConditions&,        \
                                    const GasModel&, FaceFluxBuffer<R>&,                        \
                                    std::span<const Index>);                                    \
    template void accumulate_rhs<R>(const DofState<R>&, const AuxGradient<R>*,                  \
                                    const FaceFluxBuffer<R>&, const Mesh&,                      \
                                    const GeometryTables<R>&, const GasModel&, Residual&,       \
                                    std::span<const Index>);                                    \
    template void rhs<R>(const DofState<R>&, const Mesh&, const GeometryTables<R>&,             \
                         const BoundaryConditions&, const GasModel&, DgWorkspace<R>&,           \
                         Residual&);                                                            \
    template Residual rhs<R>(const DofState<R>&, const Mesh&, const GeometryTables<R>&,         \
                             const BoundaryConditions&, const GasModel&);                       \
    template Conserved<double> evaluate<R>(const DofState<R>&, const GeometryTables<double>&,   \
                                           const BasisSet&, std::size_t, Vec2);

HODG_DG_INSTANTIATE(float)
HODG_DG_INSTANTIATE(double)
#undef HODG_DG_INSTANTIATE

}  // namespace hodg
