#pragma once

#include <array>

#include "hodg/mesh.hpp"

namespace hodg {

inline constexpr int kMaxBasis = 6;

/// Centroid-centred scaling of one cell's Taylor basis. The quadratic modes
/// have their cell means removed so that mode 0 always carries the cell mean.
struct CellFrame {
    Vec2 centroid;
    double h = 1.0;
    std::array<double, 3> quad_mean{0.0, 0.0, 0.0};
};

/// Modal Taylor basis {1, xi, eta, xi^2/2, xi*eta, eta^2/2} with
/// xi = (x - xc)/h, eta = (y - yc)/h; truncated at `order`.
class BasisSet {
public:
    explicit BasisSet(int order);

    int order() const { return order_; }
    int size() const { return n_basis_; }

    static constexpr int size_for(int order) { return (order + 1) * (order + 2) / 2; }

    void values(const CellFrame& frame, Vec2 x, double* out) const;
    /// Physical-space gradients, out[2*j] = d/dx, out[2*j+1] = d/dy.
    void gradients(const CellFrame& frame, Vec2 x, double* out) const;

private:
    int order_;
    int n_basis_;
};

}  // namespace hodg
