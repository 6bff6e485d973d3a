#pragma once

#include <cstddef>
#include <vector>

#include "hodg/basis.hpp"
#include "hodg/mesh.hpp"

namespace hodg {

/// Precomputed quadrature and basis data for one mesh at one polynomial
/// order. Volume and face tables are stored at precision `Real`; inverse mass
/// matrices and cell frames stay in double.
template <class Real>
struct GeometryTables {
    int order = 0;
    int n_basis = 1;
    int face_points = 1;  // quadrature points per face

    std::vector<CellFrame> frames;       // [cell]
    std::vector<Index> vol_offset;       // [cell + 1] into the volume arrays
    std::vector<Real> vol_w;             // [qp] weight * |J|
    std::vector<Vec2> vol_x;             // [qp] physical coordinates
    std::vector<Real> vol_b;             // [qp][basis]
    std::vector<Real> vol_db;            // [qp][basis][2]
    std::vector<Real> face_w;            // [face][q] weight * length
    std::vector<Vec2> face_x;            // [face][q]
    std::vector<Real> face_bl;           // [face][q][basis], left cell trace
    std::vector<Real> face_br;           // [face][q][basis], right cell trace (0 at boundary)
    std::vector<double> inv_mass;        // [cell][basis][basis]
    std::vector<double> mass;            // [cell][basis][basis]

    std::size_t n_cells() const { return frames.size(); }
    std::size_t n_vol_points() const { return vol_w.size(); }

    /// Number of scalar constants the integrals read each step.
    std::size_t constant_count() const {
        return vol_w.size() + vol_b.size() + vol_db.size() + face_w.size() + face_bl.size() +
               face_br.size() + inv_mass.size();
    }
};

/// Builds the tables for `basis` on `mesh`. Volume rules are exact to degree
/// 2*order, face rules to 2*order + 1. Throws TopologyError naming the cell
/// if a mass matrix is singular.
GeometryTables<double> compute_geometry(const Mesh& mesh, const BasisSet& basis);

template <class Real>
GeometryTables<Real> convert_tables(const GeometryTables<double>& g);

extern template GeometryTables<float> convert_tables<float>(const GeometryTables<double>&);
extern template GeometryTables<double> convert_tables<double>(const GeometryTables<double>&);

/// In-place inverse of a symmetric positive definite n x n matrix (row major)
/// by Cholesky factorisation. Returns false if a pivot is not positive
/// relative to `tol` times the largest diagonal entry.
bool invert_spd(double* a, int n, double tol = 1e-13);

}  // namespace hodg
