#include "hodg/quadrature.hpp"

#include <cmath>

#include "hodg/error.hpp"

namespace hodg {

Rule1D gauss_legendre(int n) {
    switch (n) {
        case 1: return {{0.0}, {2.0}};
        case 2: {
            const double a = 1.0 / std::sqrt(3.0);
            return {{-a, a}, {1.0, 1.0}};
        }
        case 3: {
            const double a = std::sqrt(0.6);
            return {{-a, 0.0, a}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
        }
        case 4: {
            const double s = 2.0 * std::sqrt(1.2);
            const double a = std::sqrt(3.0 / 7.0 - s / 7.0);
            const double b = std::sqrt(3.0 / 7.0 + s / 7.0);
            const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
            const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
            return {{-b, -a, a, b}, {wb, wa, wa, wb}};
        }
        case 5: {
            const double s = 2.0 * std::sqrt(10.0 / 7.0);
            const double a = std::sqrt(5.0 - s) / 3.0;
            const double b = std::sqrt(5.0 + s) / 3.0;
            const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
            const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
            return {{-b, -a, 0.0, a, b}, {wb, wa, 128.0 / 225.0, wa, wb}};
        }
        default: throw Error("gauss_legendre: unsupported point count " + std::to_string(n));
    }
}

TriRule dunavant(int degree) {
    TriRule r;
    auto orbit3 = [&r](double a, double b, double w) {
        r.bary.push_back({a, a, b});
        r.bary.push_back({a, b, a});
        r.bary.push_back({b, a, a});
        r.w.insert(r.w.end(), 3, w);
    };
    switch (degree) {
        case 0:
        case 1:
            r.bary.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
            r.w.push_back(1.0);
            break;
        case 2: orbit3(1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0); break;
        case 3:
        case 4:
            orbit3(0.44594849091596488632, 0.10810301816807022736, 0.22338158967801146570);
            orbit3(0.09157621350977074346, 0.81684757298045851308, 0.10995174365532186764);
            break;
        default: throw Error("dunavant: unsupported degree " + std::to_string(degree));
    }
    return r;
}

std::vector<QuadPoint> cell_quadrature(const Mesh& mesh, Index cell, int degree) {
    const Cell& c = mesh.cells[cell];
    std::vector<QuadPoint> pts;
    if (c.shape == CellShape::triangle) {
        const Vec2 p0 = mesh.node(c.nodes[0]);
        const Vec2 p1 = mesh.node(c.nodes[1]);
        const Vec2 p2 = mesh.node(c.nodes[2]);
        const TriRule r = dunavant(degree);
        pts.reserve(r.w.size());
        for (std::size_t q = 0; q < r.w.size(); ++q) {
            const auto& l = r.bary[q];
            pts.push_back({{l[0] * p0.x + l[1] * p1.x + l[2] * p2.x,
                            l[0] * p0.y + l[1] * p1.y + l[2] * p2.y},
                           r.w[q] * c.area});
        }
        return pts;
    }
    // Bilinear map from [-1,1]^2; degree in physical monomials grows by one
    // per direction through the Jacobian, hence degree + 1.
    const Rule1D g = gauss_legendre(gauss_points_for_degree(degree + 1));
    const Vec2 p[4] = {mesh.node(c.nodes[0]), mesh.node(c.nodes[1]), mesh.node(c.nodes[2]),
                       mesh.node(c.nodes[3])};
    pts.reserve(g.x.size() * g.x.size());
    for (std::size_t j = 0; j < g.x.size(); ++j)
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double s = g.x[i], t = g.x[j];
            const double n[4] = {0.25 * (1 - s) * (1 - t), 0.25 * (1 + s) * (1 - t),
                                 0.25 * (1 + s) * (1 + t), 0.25 * (1 - s) * (1 + t)};
            const double ds[4] = {-0.25 * (1 - t), 0.25 * (1 - t), 0.25 * (1 + t), -0.25 * (1 + t)};
            const double dt[4] = {-0.25 * (1 - s), -0.25 * (1 + s), 0.25 * (1 + s), 0.25 * (1 - s)};
            Vec2 x, xs, xt;
            for (int k = 0; k < 4; ++k) {
                x = x + n[k] * p[k];
                xs = xs + ds[k] * p[k];
                xt = xt + dt[k] * p[k];
            }
            const double jac = xs.x * xt.y - xs.y * xt.x;
            if (!(jac > 0.0))
                throw TopologyError("cell " + std::to_string(cell) +
                                    " has a non-positive Jacobian at a quadrature point");
            pts.push_back({x, g.w[i] * g.w[j] * jac});
        }
    return pts;
}

std::vector<QuadPoint> face_quadrature(const Mesh& mesh, Index face, int degree) {
    const Face& f = mesh.faces[face];
    const Vec2 a = mesh.node(f.node_a);
    const Vec2 b = mesh.node(f.node_b);
    const Rule1D g = gauss_legendre(gauss_points_for_degree(degree));
    std::vector<QuadPoint> pts;
    pts.reserve(g.x.size());
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double s = 0.5 * (g.x[i] + 1.0);
        pts.push_back({a + s * (b - a), 0.5 * g.w[i] * f.length});
    }
    return pts;
}

}  // namespace hodg
