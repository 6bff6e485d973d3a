#include "hodg/basis.hpp"

#include "hodg/error.hpp"

namespace hodg {

BasisSet::BasisSet(int order) : order_(order), n_basis_(size_for(order)) {
    if (order < 0 || order > 2)
        throw Error("polynomial order must be 0, 1 or 2 (got " + std::to_string(order) + ")");
}

void BasisSet::values(const CellFrame& fr, Vec2 x, double* out) const {
    out[0] = 1.0;
    if (order_ == 0) return;
    const double xi = (x.x - fr.centroid.x) / fr.h;
    const double eta = (x.y - fr.centroid.y) / fr.h;
    out[1] = xi;
    out[2] = eta;
    if (order_ == 1) return;
    out[3] = 0.5 * xi * xi - fr.quad_mean[0];
    out[4] = xi * eta - fr.quad_mean[1];
    out[5] = 0.5 * eta * eta - fr.quad_mean[2];
}

void BasisSet::gradients(const CellFrame& fr, Vec2 x, double* out) const {
    out[0] = 0.0;
    out[1] = 0.0;
    if (order_ == 0) return;
    const double inv_h = 1.0 / fr.h;
    const double xi = (x.x - fr.centroid.x) * inv_h;
    const double eta = (x.y - fr.centroid.y) * inv_h;
    out[2] = inv_h;
    out[3] = 0.0;
    out[4] = 0.0;
    out[5] = inv_h;
    if (order_ == 1) return;
    out[6] = xi * inv_h;
    out[7] = 0.0;
    out[8] = eta * inv_h;
    out[9] = xi * inv_h;
    out[10] = 0.0;
    out[11] = eta * inv_h;
}

}  // namespace hodg
