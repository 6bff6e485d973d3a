#pragma once

// Compressible-flow state algebra and interface fluxes. Everything here is a
// template over the arithmetic type so the same code runs at 32 and 64 bit
// (and under the op-counting scalar used by the performance model).

#include <array>
#include <cmath>
#include <string>

#include "hodg/error.hpp"
#include "hodg/mesh.hpp"

namespace hodg {

enum Var : int { kRho = 0, kMomX = 1, kMomY = 2, kEnergy = 3 };

template <class R>
using Flux4 = std::array<R, 4>;

/// (rho, rho*u, rho*v, e)
template <class R>
struct Conserved {
    std::array<R, 4> v{};

    constexpr R& operator[](std::size_t i) { return v[i]; }
    constexpr const R& operator[](std::size_t i) const { return v[i]; }
    constexpr R rho() const { return v[kRho]; }
    constexpr R rho_u() const { return v[kMomX]; }
    constexpr R rho_v() const { return v[kMomY]; }
    constexpr R e() const { return v[kEnergy]; }
};

template <class R>
struct Primitive {
    R rho{}, u{}, v{}, p{}, T{};
};

struct GasModel {
    double gamma = 1.4;
    double R = 1.0;
    double mu_dyn = 0.0;
    double Pr = 0.72;
    int ivis = 0;

    double cv() const { return R / (gamma - 1.0); }
    double cp() const { return gamma * R / (gamma - 1.0); }
    /// Thermal conductivity mu * cp / Pr.
    double conductivity() const { return mu_dyn * cp() / Pr; }
    void check() const {
        if (!(gamma > 1.0)) throw Error("gas: gamma must exceed 1");
        if (!(R > 0.0)) throw Error("gas: R must be positive");
        if (!(mu_dyn >= 0.0)) throw Error("gas: mu_dyn must be non-negative");
        if (!(Pr > 0.0)) throw Error("gas: Pr must be positive");
        if (ivis != 0 && ivis != 1) throw Error("gas: ivis must be 0 or 1");
    }
};

template <class R>
struct Normal {
    R x{}, y{};
};

template <class R>
struct FluxPair {
    Flux4<R> ex{};
    Flux4<R> fy{};
};

template <class R>
struct StressHeat {
    R tau_xx{}, tau_xy{}, tau_yx{}, tau_yy{};
    R q_x{}, q_y{};
};

/// Velocity gradient [[du/dx, du/dy], [dv/dx, dv/dy]].
template <class R>
struct VelocityGradient {
    R ux{}, uy{}, vx{}, vy{};
};

template <class R>
struct Vector2 {
    R x{}, y{};
};

/// Gradient of the conserved variables, one Conserved per direction.
template <class R>
struct ConservedGradient {
    Conserved<R> dx{};
    Conserved<R> dy{};
};

// ---------------------------------------------------------------------------
// Equation of state

template <class R>
inline R pressure(const Conserved<R>& q, const GasModel& gas) {
    const R gm1 = R(gas.gamma - 1.0);
    return gm1 * (q[kEnergy] - R(0.5) * (q[kMomX] * q[kMomX] + q[kMomY] * q[kMomY]) / q[kRho]);
}

template <class R>
Primitive<R> primitive_from_conserved(const Conserved<R>& q, const GasModel& gas) {
    if (!(q[kRho] > R(0)))
        throw AdmissibilityError("non-positive density " + std::to_string(double(q[kRho])));
    Primitive<R> w;
    w.rho = q[kRho];
    w.u = q[kMomX] / q[kRho];
    w.v = q[kMomY] / q[kRho];
    w.p = R(gas.gamma - 1.0) * (q[kEnergy] - R(0.5) * w.rho * (w.u * w.u + w.v * w.v));
    if (!(w.p > R(0)))
        throw AdmissibilityError("non-positive pressure " + std::to_string(double(w.p)));
    w.T = w.p / (w.rho * R(gas.R));
    return w;
}

template <class R>
Conserved<R> conserved_from_primitive(const Primitive<R>& w, const GasModel& gas) {
    if (!(w.rho > R(0)) || !(w.p > R(0)))
        throw AdmissibilityError("inadmissible primitive state (rho " +
                                 std::to_string(double(w.rho)) + ", p " +
                                 std::to_string(double(w.p)) + ")");
    Conserved<R> q;
    q[kRho] = w.rho;
    q[kMomX] = w.rho * w.u;
    q[kMomY] = w.rho * w.v;
    q[kEnergy] = w.p / R(gas.gamma - 1.0) + R(0.5) * w.rho * (w.u * w.u + w.v * w.v);
    return q;
}

/// Builds a primitive state from (rho, u, v, p); T from the EOS.
template <class R>
Primitive<R> make_primitive(R rho, R u, R v, R p, const GasModel& gas) {
    return {rho, u, v, p, p / (rho * R(gas.R))};
}

template <class R>
inline R sound_speed(const Primitive<R>& w, const GasModel& gas) {
    using std::sqrt;
    return sqrt(R(gas.gamma) * w.p / w.rho);
}

// ---------------------------------------------------------------------------
// Physical fluxes

template <class R>
FluxPair<R> inviscid_flux(const Conserved<R>& q, const GasModel& gas) {
    const Primitive<R> w = primitive_from_conserved(q, gas);
    const R ep = q[kEnergy] + w.p;
    FluxPair<R> f;
    f.ex = {q[kMomX], q[kMomX] * w.u + w.p, q[kMomX] * w.v, ep * w.u};
    f.fy = {q[kMomY], q[kMomY] * w.u, q[kMomY] * w.v + w.p, ep * w.v};
    return f;
}

template <class R>
Flux4<R> normal_flux(const FluxPair<R>& f, Normal<R> n) {
    Flux4<R> out;
    for (int k = 0; k < 4; ++k) out[k] = f.ex[k] * n.x + f.fy[k] * n.y;
    return out;
}

template <class R>
StressHeat<R> viscous_stress(const VelocityGradient<R>& g, const Vector2<R>& grad_T,
                             const GasModel& gas) {
    const R mu = R(gas.mu_dyn);
    const R kappa = R(gas.conductivity());
    StressHeat<R> s;
    s.tau_xx = mu * R(2.0 / 3.0) * (R(2) * g.ux - g.vy);
    s.tau_yy = mu * R(2.0 / 3.0) * (R(2) * g.vy - g.ux);
    s.tau_xy = mu * (g.uy + g.vx);
    s.tau_yx = s.tau_xy;
    s.q_x = -kappa * grad_T.x;
    s.q_y = -kappa * grad_T.y;
    return s;
}

template <class R>
FluxPair<R> viscous_flux(const Primitive<R>& w, const StressHeat<R>& s) {
    FluxPair<R> f;
    f.ex = {R(0), s.tau_xx, s.tau_xy, w.u * s.tau_xx + w.v * s.tau_xy - s.q_x};
    f.fy = {R(0), s.tau_yx, s.tau_yy, w.u * s.tau_yx + w.v * s.tau_yy - s.q_y};
    return f;
}

/// Velocity and temperature gradients from conserved values and their
/// gradient. No admissibility check: callers have validated q already.
template <class R>
void primitive_gradients(const Conserved<R>& q, const ConservedGradient<R>& z,
                         const GasModel& gas, Primitive<R>& w, VelocityGradient<R>& gu,
                         Vector2<R>& gT) {
    const R gm1 = R(gas.gamma - 1.0);
    const R inv_rho = R(1) / q[kRho];
    w.rho = q[kRho];
    w.u = q[kMomX] * inv_rho;
    w.v = q[kMomY] * inv_rho;
    const R ke = R(0.5) * (w.u * w.u + w.v * w.v);
    w.p = gm1 * (q[kEnergy] - w.rho * ke);
    w.T = w.p * inv_rho / R(gas.R);

    gu.ux = (z.dx[kMomX] - w.u * z.dx[kRho]) * inv_rho;
    gu.vx = (z.dx[kMomY] - w.v * z.dx[kRho]) * inv_rho;
    gu.uy = (z.dy[kMomX] - w.u * z.dy[kRho]) * inv_rho;
    gu.vy = (z.dy[kMomY] - w.v * z.dy[kRho]) * inv_rho;
    const R px = gm1 * (z.dx[kEnergy] - w.u * z.dx[kMomX] - w.v * z.dx[kMomY] + ke * z.dx[kRho]);
    const R py = gm1 * (z.dy[kEnergy] - w.u * z.dy[kMomX] - w.v * z.dy[kMomY] + ke * z.dy[kRho]);
    const R p_over_rho = w.p * inv_rho;
    const R inv_rhoR = inv_rho / R(gas.R);
    gT.x = (px - p_over_rho * z.dx[kRho]) * inv_rhoR;
    gT.y = (py - p_over_rho * z.dy[kRho]) * inv_rhoR;
}

/// Viscous flux of (q, grad q) in both directions.
template <class R>
FluxPair<R> viscous_flux(const Conserved<R>& q, const ConservedGradient<R>& z,
                         const GasModel& gas) {
    Primitive<R> w;
    VelocityGradient<R> gu;
    Vector2<R> gT;
    primitive_gradients(q, z, gas, w, gu, gT);
    return viscous_flux(w, viscous_stress(gu, gT, gas));
}

// ---------------------------------------------------------------------------
// Interface fluxes

/// Relative width of the entropy-fix band on the acoustic eigenvalues.
inline constexpr double kEntropyFixFraction = 0.05;

/// Roe's approximate Riemann flux across a face with unit normal n (pointing
/// from L to R), with Harten's smoothing of |lambda| for the two acoustic
/// waves below delta = 0.05 * c_roe.
template <class R>
Flux4<R> roe_flux(const Conserved<R>& qL, const Conserved<R>& qR, Normal<R> n,
                  const GasModel& gas) {
    using std::abs;
    using std::sqrt;
    const R gm1 = R(gas.gamma - 1.0);
    const R half = R(0.5);

    const R rL = qL[kRho], rR = qR[kRho];
    if (!(rL > R(0)) || !(rR > R(0)))
        throw AdmissibilityError("roe_flux: non-positive density");
    const R uL = qL[kMomX] / rL, vL = qL[kMomY] / rL;
    const R uR = qR[kMomX] / rR, vR = qR[kMomY] / rR;
    const R pL = gm1 * (qL[kEnergy] - half * (qL[kMomX] * uL + qL[kMomY] * vL));
    const R pR = gm1 * (qR[kEnergy] - half * (qR[kMomX] * uR + qR[kMomY] * vR));
    if (!(pL > R(0)) || !(pR > R(0)))
        throw AdmissibilityError("roe_flux: non-positive pressure");
    const R HL = (qL[kEnergy] + pL) / rL;
    const R HR = (qR[kEnergy] + pR) / rR;
    const R unL = uL * n.x + vL * n.y;
    const R unR = uR * n.x + vR * n.y;

    const R sL = sqrt(rL), sR = sqrt(rR);
    const R inv = R(1) / (sL + sR);
    const R rho = sL * sR;
    const R u = (sL * uL + sR * uR) * inv;
    const R v = (sL * vL + sR * vR) * inv;
    const R H = (sL * HL + sR * HR) * inv;
    const R q2 = u * u + v * v;
    const R c2 = gm1 * (H - half * q2);
    if (!(c2 > R(0))) throw AdmissibilityError("roe_flux: non-positive Roe-averaged sound speed");
    const R c = sqrt(c2);
    const R un = u * n.x + v * n.y;
    const R ut = v * n.x - u * n.y;

    const R dr = rR - rL;
    const R dp = pR - pL;
    const R dun = unR - unL;
    const R dut = (vR * n.x - uR * n.y) - (vL * n.x - uL * n.y);

    const R inv_2c2 = half / c2;
    const R a1 = (dp - rho * c * dun) * inv_2c2;
    const R a2 = dr - dp / c2;
    const R a3 = rho * dut;
    const R a4 = (dp + rho * c * dun) * inv_2c2;

    const R delta = R(kEntropyFixFraction) * c;
    auto fix = [delta, half](R lam) {
        const R l = abs(lam);
        return l < delta ? half * (l * l + delta * delta) / delta : l;
    };
    const R l1 = fix(un - c);
    const R l2 = abs(un);
    const R l4 = fix(un + c);

    const R w1 = l1 * a1, w2 = l2 * a2, w3 = l2 * a3, w4 = l4 * a4;
    Flux4<R> d;
    d[0] = w1 + w2 + w4;
    d[1] = w1 * (u - c * n.x) + w2 * u - w3 * n.y + w4 * (u + c * n.x);
    d[2] = w1 * (v - c * n.y) + w2 * v + w3 * n.x + w4 * (v + c * n.y);
    d[3] = w1 * (H - c * un) + w2 * half * q2 + w3 * ut + w4 * (H + c * un);

    const R eL = qL[kEnergy] + pL, eR = qR[kEnergy] + pR;
    Flux4<R> f;
    f[0] = half * (rL * unL + rR * unR - d[0]);
    f[1] = half * (qL[kMomX] * unL + pL * n.x + qR[kMomX] * unR + pR * n.x - d[1]);
    f[2] = half * (qL[kMomY] * unL + pL * n.y + qR[kMomY] * unR + pR * n.y - d[2]);
    f[3] = half * (eL * unL + eR * unR - d[3]);
    return f;
}

template <class R>
struct Br1Result {
    Conserved<R> q_hat;
    Flux4<R> hv{};
};

/// Central (BR1) interface values: trace average for the gradient equation
/// and averaged normal viscous flux.
template <class R>
Br1Result<R> br1_interface(const Conserved<R>& qL, const Conserved<R>& qR,
                           const ConservedGradient<R>& zL, const ConservedGradient<R>& zR,
                           Normal<R> n, const GasModel& gas) {
    Br1Result<R> out;
    for (int k = 0; k < 4; ++k) out.q_hat[k] = R(0.5) * (qL[k] + qR[k]);
    const Flux4<R> fl = normal_flux(viscous_flux(qL, zL, gas), n);
    const Flux4<R> fr = normal_flux(viscous_flux(qR, zR, gas), n);
    for (int k = 0; k < 4; ++k) out.hv[k] = R(0.5) * (fl[k] + fr[k]);
    return out;
}

/// Ghost state for a boundary face with outward unit normal n.
template <class R>
Conserved<R> boundary_state(const Conserved<R>& q_in, BcKind kind, Normal<R> n,
                            const Conserved<R>& freestream, const GasModel& gas) {
    using std::pow;
    using std::sqrt;
    switch (kind) {
        case BcKind::slip_wall: {
            const R un = (q_in[kMomX] * n.x + q_in[kMomY] * n.y);
            Conserved<R> q = q_in;
            q[kMomX] = q_in[kMomX] - R(2) * un * n.x;
            q[kMomY] = q_in[kMomY] - R(2) * un * n.y;
            return q;
        }
        case BcKind::no_slip_wall: {
            Conserved<R> q = q_in;
            q[kMomX] = -q_in[kMomX];
            q[kMomY] = -q_in[kMomY];
            return q;
        }
        case BcKind::far_field: {
            const R g = R(gas.gamma);
            const R gm1 = R(gas.gamma - 1.0);
            const Primitive<R> wi = primitive_from_conserved(q_in, gas);
            const Primitive<R> wf = primitive_from_conserved(freestream, gas);
            const R ci = sound_speed(wi, gas);
            const R cf = sound_speed(wf, gas);
            const R uni = wi.u * n.x + wi.v * n.y;
            const R unf = wf.u * n.x + wf.v * n.y;
            if (unf <= -cf) return freestream;  // supersonic inflow
            if (uni >= ci) return q_in;         // supersonic outflow
            const R r_out = uni + R(2) * ci / gm1;
            const R r_in = unf - R(2) * cf / gm1;
            const R un = R(0.5) * (r_out + r_in);
            const R c = R(0.25) * gm1 * (r_out - r_in);
            const Primitive<R>& src = un > R(0) ? wi : wf;
            const R entropy = src.p / pow(src.rho, g);
            const R uns = src.u * n.x + src.v * n.y;
            Primitive<R> wb;
            wb.rho = pow(c * c / (g * entropy), R(1) / gm1);
            wb.p = wb.rho * c * c / g;
            wb.u = src.u + (un - uns) * n.x;
            wb.v = src.v + (un - uns) * n.y;
            wb.T = wb.p / (wb.rho * R(gas.R));
            return conserved_from_primitive(wb, gas);
        }
    }
    throw Error("boundary_state: unknown boundary kind");
}

}  // namespace hodg
