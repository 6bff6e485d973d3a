#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hodg/basis.hpp"
#include "hodg/geometry.hpp"
#include "hodg/mesh.hpp"
#include "hodg/physics.hpp"

namespace hodg {

/// Modal coefficients c[cell][variable][basis] at storage precision Real.
template <class Real>
struct DofState {
    std::size_t n_cells = 0;
    int n_basis = 1;
    std::vector<Real> c;
    std::int64_t iteration = 0;

    static constexpr int precision_bits = 8 * static_cast<int>(sizeof(Real));

    DofState() = default;
    DofState(std::size_t cells, int basis)
        : n_cells(cells), n_basis(basis), c(cells * 4 * static_cast<std::size_t>(basis), Real(0)) {}

    std::size_t stride() const { return 4 * static_cast<std::size_t>(n_basis); }
    Real* cell(std::size_t i) { return c.data() + i * stride(); }
    const Real* cell(std::size_t i) const { return c.data() + i * stride(); }
    Real& at(std::size_t i, int var, int j) { return c[i * stride() + var * n_basis + j]; }
    Real at(std::size_t i, int var, int j) const { return c[i * stride() + var * n_basis + j]; }
    /// Cell mean (mode 0 of every variable).
    Conserved<Real> mean(std::size_t i) const {
        const Real* p = cell(i);
        return {{p[0], p[n_basis], p[2 * n_basis], p[3 * n_basis]}};
    }
};

/// Auxiliary gradient z[cell][direction][variable][basis].
template <class Real>
struct AuxGradient {
    std::size_t n_cells = 0;
    int n_basis = 1;
    std::vector<Real> z;

    AuxGradient() = default;
    AuxGradient(std::size_t cells, int basis)
        : n_cells(cells), n_basis(basis), z(cells * 8 * static_cast<std::size_t>(basis), Real(0)) {}

    std::size_t stride() const { return 8 * static_cast<std::size_t>(n_basis); }
    Real* cell(std::size_t i) { return z.data() + i * stride(); }
    const Real* cell(std::size_t i) const { return z.data() + i * stride(); }
    Real at(std::size_t i, int dir, int var, int j) const {
        return z[i * stride() + (dir * 4 + var) * n_basis + j];
    }
};

/// Per face and face quadrature point: Roe flux, BR1 viscous flux and the
/// central trace, each a 4-vector. Each face owns its own slots.
template <class Real>
struct FaceFluxBuffer {
    std::size_t n_faces = 0;
    int n_points = 1;
    std::vector<Real> inviscid;
    std::vector<Real> viscous;
    std::vector<Real> q_hat;

    FaceFluxBuffer() = default;
    FaceFluxBuffer(std::size_t faces, int points, bool with_viscous)
        : n_faces(faces),
          n_points(points),
          inviscid(faces * points * 4, Real(0)),
          viscous(with_viscous ? faces * points * 4 : 0, Real(0)),
          q_hat(with_viscous ? faces * points * 4 : 0, Real(0)) {}

    bool has_viscous() const { return !viscous.empty(); }
    std::size_t slot(std::size_t face, int q) const { return (face * n_points + q) * 4; }
};

/// dQ/dt in modal form, always 64 bit.
struct Residual {
    std::size_t n_cells = 0;
    int n_basis = 1;
    std::vector<double> r;

    Residual() = default;
    Residual(std::size_t cells, int basis)
        : n_cells(cells), n_basis(basis), r(cells * 4 * static_cast<std::size_t>(basis), 0.0) {}

    std::size_t stride() const { return 4 * static_cast<std::size_t>(n_basis); }
    double at(std::size_t i, int var, int j) const { return r[i * stride() + var * n_basis + j]; }
};

/// Boundary kinds per mesh patch plus the far-field reference state.
struct BoundaryConditions {
    std::vector<BcKind> kinds;
    Conserved<double> freestream;

    static BoundaryConditions from_mesh(const Mesh& mesh, const Conserved<double>& freestream);
};

using FieldFunction = std::function<Primitive<double>(Vec2)>;

/// L2 projection of conserved(w0(x)) onto the basis of every cell, using a
/// volume rule two degrees above the mass-matrix rule (capped at 4).
DofState<double> project_initial(const Mesh& mesh, const GeometryTables<double>& geo,
                                 const FieldFunction& w0, const GasModel& gas);

/// Auxiliary gradient Z = grad Q from the BR1 strong form with central traces.
/// Writes the traces into `buf.q_hat`.
template <class Real>
void compute_aux_gradient(const DofState<Real>& state, const Mesh& mesh,
                          const GeometryTables<Real>& geo, const BoundaryConditions& bcs,
                          const GasModel& gas, FaceFluxBuffer<Real>& buf, AuxGradient<Real>& out);

/// Face-parallel pass: every face quadrature point gets its Roe flux and,
/// when `aux` is given, its BR1 viscous flux. `order` optionally fixes the
/// face processing order (each face writes only its own slots, so the result
/// does not depend on it).
template <class Real>
void face_flux_pass(const DofState<Real>& state, const AuxGradient<Real>* aux, const Mesh& mesh,
                    const GeometryTables<Real>& geo, const BoundaryConditions& bcs,
                    const GasModel& gas, FaceFluxBuffer<Real>& buf,
                    std::span<const Index> order = {});

/// Cell-parallel gather: volume integral of (F - Fv) . grad b plus the signed
/// face fluxes of the cell's own faces, times the inverse mass matrix.
template <class Real>
void accumulate_rhs(const DofState<Real>& state, const AuxGradient<Real>* aux,
                    const FaceFluxBuffer<Real>& fluxes, const Mesh& mesh,
                    const GeometryTables<Real>& geo, const GasModel& gas, Residual& out,
                    std::span<const Index> order = {});

/// Scratch storage reused across right-hand-side evaluations.
template <class Real>
struct DgWorkspace {
    FaceFluxBuffer<Real> fluxes;
    AuxGradient<Real> aux;
    std::int64_t rhs_evaluations = 0;
    std::int64_t aux_evaluations = 0;
};

/// Full spatial operator: aux gradient (Navier-Stokes only), face pass,
/// cell gather.
template <class Real>
void rhs(const DofState<Real>& state, const Mesh& mesh, const GeometryTables<Real>& geo,
         const BoundaryConditions& bcs, const GasModel& gas, DgWorkspace<Real>& ws,
         Residual& out);

template <class Real>
Residual rhs(const DofState<Real>& state, const Mesh& mesh, const GeometryTables<Real>& geo,
             const BoundaryConditions& bcs, const GasModel& gas);

/// Point value of the solution of one cell.
template <class Real>
Conserved<double> evaluate(const DofState<Real>& state, const GeometryTables<double>& geo,
                           const BasisSet& basis, std::size_t cell, Vec2 x);

#define HODG_DG_EXTERN(R)                                                                       \
    extern template void compute_aux_gradient<R>(const DofState<R>&, const Mesh&,               \
                                                 const GeometryTables<R>&,                      \
                                                 const BoundaryConditions&, const GasModel&,     \
                                                 FaceFluxBuffer<R>&, AuxGradient<R>&);           \
    extern template void face_flux_pass<R>(const DofState<R>&, const AuxGradient<R>*,            \
                                           const Mesh&, const GeometryTables<R>&,                \
                                           const BoundaryConditions&, const GasModel&,           \
                                           FaceFluxBuffer<R>&, std::span<const Index>);          \
    extern template void accumulate_rhs<R>(const DofState<R>&, const AuxGradient<R>*,            \
                                           const FaceFluxBuffer<R>&, const Mesh&,                \
                                           const GeometryTables<R>&, const GasModel&, Residual&, \
                                           std::span<const Index>);                              \
    extern template void rhs<R>(const DofState<R>&, const Mesh&, const GeometryTables<R>&,       \
                                const BoundaryConditions&, const GasModel&, DgWorkspace<R>&,     \
                                Residual&);                                                      \
    extern template Residual rhs<R>(const DofState<R>&, const Mesh&, const GeometryTables<R>&,   \
                                    const BoundaryConditions&, const GasModel&);                 \
    extern template Conserved<double> evaluate<R>(const DofState<R>&,                            \
                                                  const GeometryTables<double>&,                 \
                                                  const BasisSet&, std::size_t, Vec2);

HODG_DG_EXTERN(float)
HODG_DG_EXTERN(double)
#undef HODG_DG_EXTERN

}  // namespace hodg
