#include "gi/pde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gi/errors.hpp"

namespace gi {

namespace {

const cplx kI{0.0, 1.0};
constexpr int kPin = 2;  // pinned points per side (stencil half-width)

void pin(std::vector<cplx>& q, const SimState& s, const SimOptions& opt, double t) {
    const int n = s.grid.n_points;
    for (int k = 0; k < kPin; ++k) {
        if (opt.boundary) {
            q[k] = opt.boundary(s.grid.x(k), t);
            q[n - 1 - k] = opt.boundary(s.grid.x(n - 1 - k), t);
        } else {
            q[k] = s.bg.q_minus;
            q[n - 1 - k] = s.bg.q_plus;
        }
    }
}

// Sponge rate at grid index i: sin^2 ramp from the inner edge of the layer.
double sponge_rate(const SimGrid& g, int i, const SimOptions& opt) {
    if (opt.sponge_fraction <= 0.0) return 0.0;
    const double width = opt.sponge_fraction * (g.x_max - g.x_min);
    const double x = g.x(i);
    const double depth = std::max(g.x_min + width - x, x - (g.x_max - width));
    if (depth <= 0.0) return 0.0;
    const double s = std::sin(0.5 * std::numbers::pi * std::min(1.0, depth / width));
    return opt.sponge_strength * s * s;
}

void check_state(const std::vector<cplx>& q, double q0, double t) {
    for (const cplx& v : q) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw BlowupDetected("non-finite sample at t = " + std::to_string(t));
        if (std::abs(v) > 10.0 * q0)
            throw BlowupDetected("max|q| exceeds 10 q0 at t = " + std::to_string(t));
    }
}

}  // namespace

void SimGrid::validate() const {
    if (n_points < 16) throw InvalidArgument("simulation grid needs at least 16 points");
    if (!(x_min < x_max)) throw InvalidArgument("simulation grid needs x_min < x_max");
}

SimState init_profile(const InitialProfile& profile, const SimGrid& grid) {
    grid.validate();
    SimState s;
    s.grid = grid;
    s.bg = profile.background();
    s.q.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) s.q[i] = profile.evaluate(grid.x(i));
    if (std::abs(s.q.front() - profile.q_minus) > 1e-10 || std::abs(s.q.back() - profile.q_plus) > 1e-10)
        throw TailMismatch("profile has not reached its tails at the grid ends; widen the domain");
    return s;
}

double default_dt(const SimGrid& grid) { return 0.2 * grid.dx() * grid.dx(); }

void pde_rhs(const SimState& s, const std::vector<cplx>& q, double t, const SimOptions& opt,
             std::vector<cplx>& dq) {
    (void)t;
    const int n = s.grid.n_points;
    const double h = s.grid.dx();
    const double c2 = 1.0 / (12.0 * h * h), c1 = 1.0 / (12.0 * h);
    const double q04 = std::pow(s.bg.q0, 4);
    const auto [ql, qr] = std::pair{s.bg.q_minus, s.bg.q_plus};
    dq.assign(n, cplx(0.0));
    for (int i = kPin; i < n - kPin; ++i) {
        const cplx qxx = (-q[i - 2] + 16.0 * q[i - 1] - 30.0 * q[i] + 16.0 * q[i + 1] - q[i + 2]) * c2;
        const cplx qbx = std::conj(q[i - 2] - 8.0 * q[i - 1] + 8.0 * q[i + 1] - q[i + 2]) * c1;
        const double m2 = std::norm(q[i]);
        cplx v = kI * qxx + q[i] * q[i] * qbx + 0.5 * kI * (m2 * m2 - q04) * q[i];
        const double g = sponge_rate(s.grid, i, opt);
        if (g > 0.0) v -= g * (q[i] - (2 * i < n ? ql : qr));
        dq[i] = v;
    }
}

SimState step(const SimState& state, double dt, const SimOptions& opt) {
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (dt > 0.5 * state.grid.dx() * state.grid.dx())
        throw InvalidArgument("dt exceeds the stability bound 0.5 dx^2");
    const int n = state.grid.n_points;
    const double t = state.t;
    std::vector<cplx> k1, k2, k3, k4, tmp(n);
    auto stage = [&](const std::vector<cplx>& k, double c, double tc) {
        for (int i = 0; i < n; ++i) tmp[i] = state.q[i] + c * dt * k[i];
        pin(tmp, state, opt, tc);
    };
    pde_rhs(state, state.q, t, opt, k1);
    stage(k1, 0.5, t + 0.5 * dt);
    pde_rhs(state, tmp, t + 0.5 * dt, opt, k2);
    stage(k2, 0.5, t + 0.5 * dt);
    pde_rhs(state, tmp, t + 0.5 * dt, opt, k3);
    stage(k3, 1.0, t + dt);
    pde_rhs(state, tmp, t + dt, opt, k4);
    SimState out;
    out.grid = state.grid;
    out.bg = state.bg;
    out.t = t + dt;
    out.q.resize(n);
    for (int i = 0; i < n; ++i)
        out.q[i] = state.q[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    pin(out.q, state, opt, out.t);
    check_state(out.q, state.bg.q0, out.t);
    return out;
}

std::vector<SimState> simulate(const SimState& state, double T, const std::vector<double>& snapshots,
                               const SimOptions& opt, double dt_max, SimState* final_state) {
    if (T < state.t) throw InvalidArgument("T precedes the current time");
    if (!std::is_sorted(snapshots.begin(), snapshots.end()))
        throw InvalidArgument("snapshot times must be sorted");
    if (!snapshots.empty() && (snapshots.front() < state.t || snapshots.back() > T))
        throw InvalidArgument("snapshot times must lie in [t, T]");
    const double dt = dt_max > 0.0 ? dt_max : default_dt(state.grid);
    // Times are tracked as t0 + k dt so that reruns are bit-identical and no
    // drift accumulates.
    std::vector<SimState> out;
    SimState cur = state;
    std::size_t next = 0;
    auto advance_to = [&](double target) {
        const double span = target - cur.t;
        if (span <= 0.0) return;
        const long steps = static_cast<long>(std::ceil(span / dt - 1e-9));
        const double h = span / static_cast<double>(steps);
        const double t0 = cur.t;
        for (long k = 1; k <= steps; ++k) {
            cur = step(cur, h, opt);
            cur.t = k == steps ? target : t0 + static_cast<double>(k) * h;
        }
    };
    while (next < snapshots.size()) {
        advance_to(snapshots[next]);
        out.push_back(cur);
        ++next;
    }
    advance_to(T);
    if (final_state) *final_state = cur;
    return out;
}

cplx sample(const SimState& s, double x) {
    const SimGrid& g = s.grid;
    if (x < g.x_min || x > g.x_max) throw InvalidArgument("sample point outside the grid");
    const double u = (x - g.x_min) / g.dx();
    const int n = g.n_points;
    const double near = std::round(u);
    if (std::abs(u - near) < 1e-9) return s.q[static_cast<std::size_t>(near)];
    const int j = static_cast<int>(std::floor(u));
    const int lo = std::clamp(j - 1, 0, n - 4);
    cplx acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) w *= (u - (lo + b)) / static_cast<double>(a - b);
        acc += w * s.q[lo + a];
    }
    return acc;
}

}  // namespace gi
