#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "../common/corpus.hpp"
#include "hodg/dg.hpp"
#include "hodg/parallel.hpp"
#include "hodg/quadrature.hpp"

using namespace hodg;

namespace {

const GasModel kEuler{};

GasModel navier_stokes() {
    GasModel g;
    g.mu_dyn = 0.01;
    g.ivis = 1;
    return g;
}

Conserved<double> freestream(const GasModel& gas) {
    return conserved_from_primitive(make_primitive(1.0, 1.0, 0.0, 1.0 / (1.4 * 0.25), gas), gas);
}

DofState<double> uniform_state(const Mesh& m, int nb, const Conserved<double>& q) {
    DofState<double> s(m.n_cells(), nb);
    for (std::size_t c = 0; c < m.n_cells(); ++c)
        for (int v = 0; v < 4; ++v) s.at(c, v, 0) = q[v];
    return s;
}

double max_abs(const Residual& r) {
    double m = 0.0;
    for (double x : r.r) m = std::max(m, std::abs(x));
    return m;
}

bool touches_boundary(const Mesh& m, std::size_t c) {
    for (int k = 0; k < m.cells[c].n_vertices(); ++k)
        if (m.faces[m.cells[c].faces[k]].boundary()) return true;
    return false;
}

}  // namespace

TEST_CASE("projection of a uniform field") {
    const Mesh m = testing::jitter_nodes(generate_tri_grid(4, 3), 0.2, 1);
    const auto fs = freestream(kEuler);
    const auto w = primitive_from_conserved(fs, kEuler);
    for (int p = 0; p <= 2; ++p) {
        const auto geo = compute_geometry(m, BasisSet(p));
        const auto s = project_initial(m, geo, [&](Vec2) { return w; }, kEuler);
        for (std::size_t c = 0; c < m.n_cells(); ++c)
            for (int v = 0; v < 4; ++v) {
                CHECK(s.at(c, v, 0) == doctest::Approx(fs[v]).epsilon(1e-14));
                for (int j = 1; j < s.n_basis; ++j) CHECK(std::abs(s.at(c, v, j)) < 1e-14 * std::abs(fs[v]) + 1e-15);
            }
    }
}

TEST_CASE("projection reproduces a linear density field") {
    const Mesh m = testing::jitter_nodes(generate_quad_grid(4, 4), 0.2, 2);
    auto field = [](Vec2 x) { return make_primitive(1.0 + 0.3 * x.x - 0.2 * x.y, 0.0, 0.0, 1.0, kEuler); };
    for (int p = 1; p <= 2; ++p) {
        const BasisSet basis(p);
        const auto geo = compute_geometry(m, basis);
        const auto s = project_initial(m, geo, field, kEuler);
        for (std::size_t c = 0; c < m.n_cells(); ++c)
            for (Vec2 x : {m.cells[c].centroid, m.node(m.cells[c].nodes[0])}) {
                const auto q = evaluate(s, geo, basis, c, x);
                CHECK(std::abs(q[kRho] - field(x).rho) < 1e-12);
            }
    }
}

TEST_CASE("order 0 projection gives cell averages") {
    const Mesh m = testing::jitter_nodes(generate_quad_grid(3, 3), 0.2, 6);
    const auto geo = compute_geometry(m, BasisSet(0));
    auto field = [](Vec2 x) { return make_primitive(1.0 + 0.3 * x.x - 0.2 * x.y, 0.0, 0.0, 1.0, kEuler); };
    const auto s = project_initial(m, geo, field, kEuler);
    for (std::size_t c = 0; c < m.n_cells(); ++c) {
        // the mean of a linear field over a polygon is its value at the centroid
        const Vec2 xc = m.cells[c].centroid;
        CHECK(s.at(c, kRho, 0) == doctest::Approx(1.0 + 0.3 * xc.x - 0.2 * xc.y).epsilon(1e-13));
    }
    CHECK_THROWS_AS(project_initial(m, geo, [](Vec2) { return make_primitive(-1.0, 0.0, 0.0, 1.0, kEuler); }, kEuler),
                    AdmissibilityError);
}

TEST_CASE("aux gradient of uniform and linear states") {
    const GasModel gas = navier_stokes();
    const Mesh m = testing::jitter_nodes(generate_tri_grid(6, 6), 0.2, 4);
    const auto bcs = BoundaryConditions::from_mesh(m, freestream(gas));
    for (int p = 1; p <= 2; ++p) {
        const auto geo = compute_geometry(m, BasisSet(p));
        FaceFluxBuffer<double> buf;
        AuxGradient<double> z;
        compute_aux_gradient(uniform_state(m, geo.n_basis, freestream(gas)), m, geo, bcs, gas, buf, z);
        // dimensionless: |Z| h / |Q|
        const double qmax = freestream(gas)[kEnergy];
        for (std::size_t c = 0; c < m.n_cells(); ++c)
            for (int k = 0; k < 8 * geo.n_basis; ++k)
                CHECK(std::abs(z.cell(c)[k]) * m.cells[c].h / qmax < 1e-13);

        // Q = a + g . x in every conserved variable
        const double slope[4][2] = {{0.1, -0.05}, {0.2, 0.1}, {-0.1, 0.3}, {0.4, -0.2}};
        DofState<double> s(m.n_cells(), geo.n_basis);
        const auto fs = freestream(gas);
        for (std::size_t c = 0; c < m.n_cells(); ++c) {
            const Vec2 xc = m.cells[c].centroid;
            const double h = geo.frames[c].h;
            for (int v = 0; v < 4; ++v) {
                s.at(c, v, 0) = fs[v] + slope[v][0] * xc.x + slope[v][1] * xc.y;
                s.at(c, v, 1) = slope[v][0] * h;
                s.at(c, v, 2) = slope[v][1] * h;
            }
        }
        compute_aux_gradient(s, m, geo, bcs, gas, buf, z);
        for (std::size_t c = 0; c < m.n_cells(); ++c) {
            if (touches_boundary(m, c)) continue;
            for (int d = 0; d < 2; ++d)
                for (int v = 0; v < 4; ++v) {
                    CHECK(std::abs(z.at(c, d, v, 0) - slope[v][d]) < 1e-10);
                    for (int j = 1; j < geo.n_basis; ++j) CHECK(std::abs(z.at(c, d, v, j)) < 1e-10);
                }
        }
    }
}

TEST_CASE("aux gradient of a projected quadratic converges at order p") {
    const GasModel gas = navier_stokes();
    auto field = [&](Vec2 x) {
        return make_primitive(1.0 + 0.2 * std::sin(x.x) * std::cos(x.y), 0.0, 0.0, 1.0, gas);
    };
    auto drho_dx = [](Vec2 x) { return 0.2 * std::cos(x.x) * std::cos(x.y); };
    for (int p = 1; p <= 2; ++p) {
        std::vector<double> err;
        for (int n : {8, 16, 32}) {
            const Mesh m = generate_quad_grid(n, n, {0, 2, 0, 2});
            const BasisSet basis(p);
            const auto geo = compute_geometry(m, basis);
            const auto bcs = BoundaryConditions::from_mesh(m, freestream(gas));
            const auto s = project_initial(m, geo, field, gas);
            FaceFluxBuffer<double> buf;
            AuxGradient<double> z;
            compute_aux_gradient(s, m, geo, bcs, gas, buf, z);
            double e = 0.0;
            for (std::size_t c = 0; c < m.n_cells(); ++c) {
                if (touches_boundary(m, c)) continue;
                for (Index q = geo.vol_offset[c]; q < geo.vol_offset[c + 1]; ++q) {
                    double g = 0.0;
                    for (int j = 0; j < geo.n_basis; ++j) g += z.at(c, 0, kRho, j) * geo.vol_b[q * geo.n_basis + j];
                    e += geo.vol_w[q] * std::pow(g - drho_dx(geo.vol_x[q]), 2);
                }
            }
            err.push_back(std::sqrt(e));
        }
        const double rate = std::log2(err[1] / err[2]);
        MESSAGE("p=" << p << " gradient errors " << err[0] << " " << err[1] << " " << err[2]);
        CHECK(rate > p - 0.2);
    }
}

TEST_CASE("face fluxes of a uniform state") {
    const Mesh m = generate_quad_grid(5, 4);
    const auto fs = freestream(kEuler);
    const auto bcs = BoundaryConditions::from_mesh(m, fs);
    const auto geo = compute_geometry(m, BasisSet(1));
    FaceFluxBuffer<double> buf;
    face_flux_pass<double>(uniform_state(m, 3, fs), nullptr, m, geo, bcs, kEuler, buf);
    for (std::size_t f = 0; f < m.n_faces(); ++f) {
        const Normal<double> n{m.faces[f].normal.x, m.faces[f].normal.y};
        const auto exact = normal_flux(inviscid_flux(fs, kEuler), n);
        for (int q = 0; q < geo.face_points; ++q)
            for (int v = 0; v < 4; ++v) CHECK(std::abs(buf.inviscid[buf.slot(f, q) + v] - exact[v]) < 1e-13);
    }
}

TEST_CASE("slip wall aligned with the flow carries no mass") {
    SideKinds sides;
    sides.bottom = BcKind::slip_wall;
    const Mesh m = generate_tri_grid(4, 4, {}, sides);
    const auto fs = freestream(kEuler);
    const auto bcs = BoundaryConditions::from_mesh(m, fs);
    const auto geo = compute_geometry(m, BasisSet(2));
    FaceFluxBuffer<double> buf;
    face_flux_pass<double>(uniform_state(m, 6, fs), nullptr, m, geo, bcs, kEuler, buf);
    for (std::size_t f = 0; f < m.n_faces(); ++f)
        if (m.faces[f].boundary() && m.patches[m.faces[f].patch()].kind == BcKind::slip_wall)
            for (int q = 0; q < geo.face_points; ++q) CHECK(std::abs(buf.inviscid[buf.slot(f, q)]) < 1e-15);
}

TEST_CASE("flux buffer and residual do not depend on processing order") {
    const GasModel gas = navier_stokes();
    const Mesh m = testing::jitter_nodes(generate_tri_grid(6, 5), 0.2, 9);
    const auto bcs = BoundaryConditions::from_mesh(m, freestream(gas));
    const BasisSet basis(2);
    const auto geo = compute_geometry(m, basis);
    auto field = [&](Vec2 x) {
        return make_primitive(1.0 + 0.1 * std::sin(3 * x.x), 0.5 + 0.1 * x.y, 0.1 * x.x, 2.0 + 0.1 * x.x * x.y, gas);
    };
    const auto s = project_initial(m, geo, field, gas);
    FaceFluxBuffer<double> a, b;
    AuxGradient<double> z;
    compute_aux_gradient(s, m, geo, bcs, gas, a, z);
    b = a;
    std::vector<Index> faces(m.n_faces());
    std::iota(faces.begin(), faces.end(), 0);
    std::shuffle(faces.begin(), faces.end(), std::mt19937(1));
    face_flux_pass(s, &z, m, geo, bcs, gas, a);
    face_flux_pass(s, &z, m, geo, bcs, gas, b, faces);
    CHECK(a.inviscid == b.inviscid);
    CHECK(a.viscous == b.viscous);

    std::vector<Index> cells(m.n_cells());
    std::iota(cells.begin(), cells.end(), 0);
    std::shuffle(cells.begin(), cells.end(), std::mt19937(2));
    Residual ra, rb;
    accumulate_rhs(s, &z, a, m, geo, gas, ra);
    accumulate_rhs(s, &z, a, m, geo, gas, rb, cells);
    CHECK(ra.r == rb.r);
}

TEST_CASE("order 0 residual is the signed face flux sum over the area") {
    const Mesh m = generate_quad_grid(2, 1, {0, 2, 0, 1.5});
    const auto geo = compute_geometry(m, BasisSet(0));
    const auto s = uniform_state(m, 1, freestream(kEuler));
    FaceFluxBuffer<double> buf(m.n_faces(), geo.face_points, false);
    for (std::size_t f = 0; f < m.n_faces(); ++f)
        for (int v = 0; v < 4; ++v) buf.inviscid[buf.slot(f, 0) + v] = double(f + 1) * (v + 1);
    Residual r;
    accumulate_rhs<double>(s, nullptr, buf, m, geo, kEuler, r);
    // Each cell is 1 x 1.5: faces of length 1 (bottom/top) and 1.5 (sides).
    for (std::size_t c = 0; c < 2; ++c) {
        double expect = 0.0;
        for (std::size_t f = 0; f < m.n_faces(); ++f) {
            const Face& face = m.faces[f];
            if (face.left == Index(c)) expect -= double(f + 1) * face.length;
            if (face.right == Index(c)) expect += double(f + 1) * face.length;
        }
        expect /= 1.5;
        for (int v = 0; v < 4; ++v) CHECK(r.at(c, v, 0) == doctest::Approx(expect * (v + 1)).epsilon(1e-14));
    }

    // the face part r(H) - r(0) is linear in H
    FaceFluxBuffer<double> twice = buf, zero = buf;
    for (auto& x : twice.inviscid) x *= 2;
    for (auto& x : zero.inviscid) x = 0;
    Residual r2, r0;
    accumulate_rhs<double>(s, nullptr, twice, m, geo, kEuler, r2);
    accumulate_rhs<double>(s, nullptr, zero, m, geo, kEuler, r0);
    for (std::size_t i = 0; i < r.r.size(); ++i) {
        const double part = r.r[i] - r0.r[i];
        CHECK(std::abs((r2.r[i] - r0.r[i]) - 2 * part) <= 1e-15 * std::abs(part));
    }
}

TEST_CASE("free-stream preservation on the corpus") {
    for (const auto& [name, m] : testing::corpus())
        for (const GasModel& gas : {kEuler, navier_stokes()})
            for (int p = 0; p <= 2; ++p) {
                const auto fs = freestream(gas);
                const auto bcs = BoundaryConditions::from_mesh(m, fs);
                const auto geo = compute_geometry(m, BasisSet(p));
                const Residual r = rhs(uniform_state(m, geo.n_basis, fs), m, geo, bcs, gas);
                INFO(name << " p=" << p << " ivis=" << gas.ivis);
                CHECK(max_abs(r) < 1e-11);
            }
}

TEST_CASE("closed slip-wall cavity conserves mass") {
    SideKinds walls{BcKind::slip_wall, BcKind::slip_wall, BcKind::slip_wall, BcKind::slip_wall};
    const Mesh m = testing::jitter_nodes(generate_tri_grid(8, 8, {}, walls), 0.2, 11);
    const auto bcs = BoundaryConditions::from_mesh(m, freestream(kEuler));
    const auto geo = compute_geometry(m, BasisSet(1));
    auto field = [](Vec2 x) {
        return make_primitive(1.0 + 0.2 * std::exp(-20 * ((x.x - 0.4) * (x.x - 0.4) + (x.y - 0.6) * (x.y - 0.6))),
                              0.0, 0.0, 1.0 + 0.3 * x.x * x.y, kEuler);
    };
    const auto s = project_initial(m, geo, field, kEuler);
    const Residual r = rhs(s, m, geo, bcs, kEuler);
    double total = 0.0, scale = 0.0;
    for (std::size_t c = 0; c < m.n_cells(); ++c) {
        total += m.cells[c].area * r.at(c, kRho, 0);
        scale += m.cells[c].area * std::abs(r.at(c, kEnergy, 0));
    }
    CHECK(scale > 1e-3);
    CHECK(std::abs(total) < 1e-11);
}

TEST_CASE("euler path skips the gradient") {
    const Mesh m = generate_quad_grid(3, 3);
    const auto geo = compute_geometry(m, BasisSet(1));
    const auto bcs = BoundaryConditions::from_mesh(m, freestream(kEuler));
    DgWorkspace<double> ws;
    Residual r;
    rhs(uniform_state(m, 3, freestream(kEuler)), m, geo, bcs, kEuler, ws, r);
    CHECK(ws.rhs_evaluations == 1);
    CHECK(ws.aux_evaluations == 0);
    CHECK(!ws.fluxes.has_viscous());
    const GasModel ns = navier_stokes();
    rhs(uniform_state(m, 3, freestream(ns)), m, geo, bcs, ns, ws, r);
    CHECK(ws.aux_evaluations == 1);
}

TEST_CASE("residual is bitwise identical across worker counts") {
    const GasModel gas = navier_stokes();
    const Mesh m = generate_tri_grid(20, 20);
    const auto bcs = BoundaryConditions::from_mesh(m, freestream(gas));
    const auto geo = compute_geometry(m, BasisSet(2));
    auto field = [&](Vec2 x) { return make_primitive(1.0 + 0.1 * x.x, 0.8, 0.1 * x.y, 2.0, gas); };
    const auto s = project_initial(m, geo, field, gas);
    set_workers(1);
    const Residual a = rhs(s, m, geo, bcs, gas);
    set_workers(3);
    const Residual b = rhs(s, m, geo, bcs, gas);
    set_workers(0);
    CHECK(a.r == b.r);
}

TEST_CASE("admissibility failures name the face and iteration") {
    const Mesh m = generate_quad_grid(3, 1);
    const auto geo = compute_geometry(m, BasisSet(0));
    const auto bcs = BoundaryConditions::from_mesh(m, freestream(kEuler));
    auto s = uniform_state(m, 1, freestream(kEuler));
    s.iteration = 17;
    s.at(1, kRho, 0) = -1.0;
    try {
        rhs(s, m, geo, bcs, kEuler);
        FAIL("expected an admissibility error");
    } catch (const AdmissibilityError& e) {
        CHECK(e.iteration() == 17);
        CHECK(e.entity() >= 0);
        const Face& f = m.faces[e.entity()];
        CHECK((f.left == 1 || f.right == 1));
    }
}

TEST_CASE("single precision rhs tracks double precision") {
    const Mesh m = generate_quad_grid(6, 6);
    const auto geo = compute_geometry(m, BasisSet(1));
    const auto geo32 = convert_tables<float>(geo);
    const auto bcs = BoundaryConditions::from_mesh(m, freestream(kEuler));
    auto field = [](Vec2 x) { return make_primitive(1.0 + 0.1 * x.x, 0.5, 0.0, 1.0 + 0.1 * x.y, kEuler); };
    const auto s = project_initial(m, geo, field, kEuler);
    DofState<float> s32(s.n_cells, s.n_basis);
    for (std::size_t i = 0; i < s.c.size(); ++i) s32.c[i] = float(s.c[i]);
    const Residual a = rhs(s, m, geo, bcs, kEuler);
    const Residual b = rhs(s32, m, geo32, bcs, kEuler);
    const double scale = max_abs(a);
    for (std::size_t i = 0; i < a.r.size(); ++i) CHECK(std::abs(a.r[i] - b.r[i]) < 1e-4 * std::max(scale, 1.0));
}
