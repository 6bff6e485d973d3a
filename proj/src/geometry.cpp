#include "hodg/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "hodg/error.hpp"
#include "hodg/quadrature.hpp"

namespace hodg {

bool invert_spd(double* a, int n, double tol) {
    double diag_max = 0.0;
    for (int i = 0; i < n; ++i) diag_max = std::max(diag_max, std::abs(a[i * n + i]));
    if (!(diag_max > 0.0)) return false;
    // Lower Cholesky factor L in place.
    double l[kMaxBasis * kMaxBasis] = {};
    for (int j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (int k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
        if (!(d > tol * diag_max)) return false;
        l[j * n + j] = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = s / l[j * n + j];
        }
    }
    // inv(L), lower triangular.
    double li[kMaxBasis * kMaxBasis] = {};
    for (int i = 0; i < n; ++i) {
        li[i * n + i] = 1.0 / l[i * n + i];
        for (int j = 0; j < i; ++j) {
            double s = 0.0;
            for (int k = j; k < i; ++k) s -= l[i * n + k] * li[k * n + j];
            li[i * n + j] = s / l[i * n + i];
        }
    }
    // A^-1 = L^-T L^-1
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = i; k < n; ++k) s += li[k * n + i] * li[k * n + j];
            a[i * n + j] = s;
            a[j * n + i] = s;
        }
    return true;
}

GeometryTables<double> compute_geometry(const Mesh& mesh, const BasisSet& basis) {
    GeometryTables<double> g;
    const int order = basis.order();
    const int nb = basis.size();
    g.order = order;
    g.n_basis = nb;
    const int vol_degree = 2 * order;
    const int face_degree = 2 * order + 1;
    const std::size_t nc = mesh.n_cells();

    g.frames.resize(nc);
    g.vol_offset.assign(nc + 1, 0);
    g.mass.assign(nc * nb * nb, 0.0);
    g.inv_mass.assign(nc * nb * nb, 0.0);

    std::vector<double> b(nb), db(2 * nb);
    for (std::size_t c = 0; c < nc; ++c) {
        const Cell& cell = mesh.cells[c];
        const auto pts = cell_quadrature(mesh, static_cast<Index>(c), vol_degree);
        CellFrame& fr = g.frames[c];
        fr.centroid = cell.centroid;
        fr.h = cell.h;
        if (order >= 2) {
            double vol = 0.0, m0 = 0.0, m1 = 0.0, m2 = 0.0;
            for (const auto& p : pts) {
                const double xi = (p.x.x - fr.centroid.x) / fr.h;
                const double eta = (p.x.y - fr.centroid.y) / fr.h;
                vol += p.w;
                m0 += p.w * 0.5 * xi * xi;
                m1 += p.w * xi * eta;
                m2 += p.w * 0.5 * eta * eta;
            }
            fr.quad_mean = {m0 / vol, m1 / vol, m2 / vol};
        }
        g.vol_offset[c + 1] = g.vol_offset[c] + static_cast<Index>(pts.size());
        double* m = &g.mass[c * nb * nb];
        for (const auto& p : pts) {
            basis.values(fr, p.x, b.data());
            basis.gradients(fr, p.x, db.data());
            g.vol_w.push_back(p.w);
            g.vol_x.push_back(p.x);
            g.vol_b.insert(g.vol_b.end(), b.begin(), b.end());
            g.vol_db.insert(g.vol_db.end(), db.begin(), db.end());
            for (int i = 0; i < nb; ++i)
                for (int j = 0; j < nb; ++j) m[i * nb + j] += p.w * b[i] * b[j];
        }
        double* mi = &g.inv_mass[c * nb * nb];
        std::copy(m, m + nb * nb, mi);
        if (!invert_spd(mi, nb))
            throw TopologyError("singular mass matrix in cell " + std::to_string(c));
    }

    const std::size_t nf = mesh.n_faces();
    g.face_points = gauss_points_for_degree(face_degree);
    const int nq = g.face_points;
    g.face_w.resize(nf * nq);
    g.face_x.resize(nf * nq);
    g.face_bl.assign(nf * nq * nb, 0.0);
    g.face_br.assign(nf * nq * nb, 0.0);
    for (std::size_t f = 0; f < nf; ++f) {
        const Face& face = mesh.faces[f];
        const auto pts = face_quadrature(mesh, static_cast<Index>(f), face_degree);
        for (int q = 0; q < nq; ++q) {
            const std::size_t k = f * nq + q;
            g.face_w[k] = pts[q].w;
            g.face_x[k] = pts[q].x;
            basis.values(g.frames[face.left], pts[q].x, &g.face_bl[k * nb]);
            if (!face.boundary()) basis.values(g.frames[face.right], pts[q].x, &g.face_br[k * nb]);
        }
    }
    return g;
}

template <class Real>
GeometryTables<Real> convert_tables(const GeometryTables<double>& g) {
    GeometryTables<Real> out;
    out.order = g.order;
    out.n_basis = g.n_basis;
    out.face_points = g.face_points;
    out.frames = g.frames;
    out.vol_offset = g.vol_offset;
    out.vol_x = g.vol_x;
    out.face_x = g.face_x;
    out.inv_mass = g.inv_mass;
    out.mass = g.mass;
    auto cast = [](const std::vector<double>& v) { return std::vector<Real>(v.begin(), v.end()); };
    out.vol_w = cast(g.vol_w);
    out.vol_b = cast(g.vol_b);
    out.vol_db = cast(g.vol_db);
    out.face_w = cast(g.face_w);
    out.face_bl = cast(g.face_bl);
    out.face_br = cast(g.face_br);
    return out;
}

template GeometryTables<float> convert_tables<float>(const GeometryTables<double>&);
template GeometryTables<double> convert_tables<double>(const GeometryTables<double>&);

}  // namespace hodg
