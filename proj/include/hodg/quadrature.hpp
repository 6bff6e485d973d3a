#pragma once

#include <vector>

#include "hodg/mesh.hpp"

namespace hodg {

struct QuadPoint {
    Vec2 x;
    double w = 0.0;
};

/// Gauss-Legendre nodes/weights on [-1, 1]; n in 1..5.
struct Rule1D {
    std::vector<double> x;
    std::vector<double> w;
};
Rule1D gauss_legendre(int n);

/// Symmetric triangle rule on the reference triangle (0,0)-(1,0)-(0,1),
/// barycentric coordinates with weights summing to 1. Exact for polynomials
/// up to `degree` (0..4).
struct TriRule {
    std::vector<std::array<double, 3>> bary;
    std::vector<double> w;
};
TriRule dunavant(int degree);

/// Volume quadrature of a cell in physical coordinates, weights include the
/// Jacobian. Triangles use Dunavant rules, quadrilaterals a tensor Gauss rule
/// on the bilinear map. Exact up to `degree`.
std::vector<QuadPoint> cell_quadrature(const Mesh& mesh, Index cell, int degree);

/// Gauss-Legendre points along a face, weights include the face length.
std::vector<QuadPoint> face_quadrature(const Mesh& mesh, Index face, int degree);

/// Number of 1D Gauss points needed for exactness up to `degree`.
constexpr int gauss_points_for_degree(int degree) { return degree / 2 + 1; }

}  // namespace hodg
