#pragma once
// Direct integration of  i q_t + q_xx - i q^2 conj(q)_x + (|q|^4 - q0^4) q / 2 = 0
// on a finite interval: 4th-order central differences, classical RK4,
// Dirichlet pinning of the two outermost points on each side, and a sponge
// that relaxes q towards its tail value over the outer part of the domain.

#include <functional>
#include <vector>

#include "gi/scattering.hpp"

namespace gi {

struct SimGrid {
    double x_min = -400.0, x_max = 400.0;
    int n_points = 1 << 13;

    double dx() const { return (x_max - x_min) / (n_points - 1); }
    double x(int i) const { return x_min + i * dx(); }
    /// Throws InvalidArgument unless n_points >= 16 and x_min < x_max.
    void validate() const;
};

struct SimOptions {
    /// Fraction of the domain (per side) covered by the sponge; 0 disables it.
    double sponge_fraction = 0.1;
    /// Peak damping rate at the grid ends.
    double sponge_strength = 1.0;
    /// Value imposed at pinned point x at time t. Empty: the background tails.
    std::function<cplx(double x, double t)> boundary;
};

struct SimState {
    SimGrid grid;
    std::vector<cplx> q;
    double t = 0.0;
    Background bg;
};

/// Samples the profile on the grid. Throws TailMismatch if the end samples
/// differ from q_-/q_+ by more than 1e-10.
SimState init_profile(const InitialProfile& profile, const SimGrid& grid);

/// Right-hand side q_t = i q_xx + q^2 conj(q)_x + (i/2)(|q|^4 - q0^4) q - sponge,
/// zero on the pinned points.
void pde_rhs(const SimState& s, const std::vector<cplx>& q, double t, const SimOptions& opt,
             std::vector<cplx>& dq);

/// Default step 0.2 dx^2.
double default_dt(const SimGrid& grid);

/// One RK4 step. Throws InvalidArgument if dt exceeds 0.5 dx^2 (the
/// dispersive stability bound with margin) and BlowupDetected if max|q|
/// exceeds 10 q0 or a sample is not finite.
SimState step(const SimState& state, double dt, const SimOptions& opt = {});

/// States at the requested times (sorted, within [state.t, T]); the run
/// continues to T. Steps are dt = min(dt_max, remaining) so every snapshot
/// time is hit exactly. dt_max <= 0 selects default_dt.
std::vector<SimState> simulate(const SimState& state, double T, const std::vector<double>& snapshots,
                               const SimOptions& opt = {}, double dt_max = -1.0,
                               SimState* final_state = nullptr);

/// q at x by 4-point Lagrange interpolation (exact at grid points).
/// Throws InvalidArgument outside the grid.
cplx sample(const SimState& s, double x);

}  // namespace gi
