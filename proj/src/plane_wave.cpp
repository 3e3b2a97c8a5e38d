#include "gi/plane_wave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gi/errors.hpp"

namespace gi {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// Real-axis density ln(1 - u f(u) conj f(u)).
double log_density(double u, const ScatteringData& data, PlaneRegion region) {
    const cplx f = region == PlaneRegion::I ? data.rho(u) : data.varrho(u);
    const double arg = 1.0 - u * std::norm(f);
    if (!(arg > 0.0))
        throw SignAssumptionViolated("1 - u rho conj(rho) <= 0 at u = " + std::to_string(u));
    return std::log(arg);
}

// L5 traversed upward, -ia -> ia.
Path lambda_cut(const Background& bg) { return Path::segment(cplx(0.0, -bg.a()), cplx(0.0, bg.a())); }

// ln(2 sqrt(-s)/q0): the branch that keeps the pure background at q = q_-.
cplx log_root(cplx s, double q0) { return std::log(2.0 * std::sqrt(-s) / q0); }

cplx phase_integral(double xi, const ScatteringData& data, PlaneRegion region) {
    const Background& bg = data.bg;
    double split;
    // The sector edge itself is admitted: the stationary points merge there
    // and phi is continuous, which the elliptic collar fallback relies on.
    const double edge = 2.0 * std::numbers::sqrt2 * bg.q0 * bg.q0;
    const Region tag = classify(xi, bg.q0).tag;
    const bool at_edge = tag == Region::boundary && std::abs(std::abs(xi) - edge) <= 1e-12 * edge;
    if (region == PlaneRegion::I) {
        if (!(tag == Region::plane_wave_I || (at_edge && xi < 0.0)))
            throw WrongRegion("phi is defined for xi <= -2 sqrt2 q0^2");
        split = stationary_points(xi, bg.q0).first;
    } else {
        if (!(tag == Region::plane_wave_II || (at_edge && xi > 0.0)))
            throw WrongRegion("phi-tilde is defined for xi >= 2 sqrt2 q0^2");
        split = stationary_points(xi, bg.q0).second;
    }
    QuadratureConfig outer;
    outer.rel_tol = 1e-11;
    outer.abs_tol = 1e-13;
    // ln delta is analytic on a neighbourhood of L5 (the ray stays at
    // distance |split| from it), so a Chebyshev interpolant in Im s replaces
    // thousands of nested evaluations by a few dozen.
    const double a = bg.a();
    const ChebyshevInterpolant ld(
        [&](double y) { return log_delta(cplx(0.0, y), split, data, region); }, -a, a);
    auto f = [&](cplx s) {
        if (s.real() != 0.0) s = cplx(0.0, s.imag());
        const cplx lam = lambda_z(s, CutSide::plus, bg);
        return (log_root(s, bg.q0) - 2.0 * ld(s.imag())) / lam;
    };
    return integrate_contour_sqrt_ends(f, lambda_cut(bg), outer) / (2.0 * kPi);
}

}  // namespace

cplx log_delta(cplx z, double split, const ScatteringData& data, PlaneRegion region,
               const QuadratureConfig& cfg_in) {
    const double sgn = region == PlaneRegion::I ? -1.0 : 1.0;  // direction of the ray
    // Distance of z from the ray [split, sgn*inf).
    const double along = sgn * (z.real() - split);
    const double dist = along >= 0.0 ? std::abs(z.imag()) : std::abs(z - split);
    if (dist < 1e-12 * std::max(1.0, std::abs(split)))
        throw PointOnContour("delta evaluated on its ray");

    QuadratureConfig cfg = cfg_in;
    cfg.abs_tol = std::max(cfg.abs_tol, 1e-14);
    // Finite piece [split, far] of the ray, long enough to contain the foot
    // point c of z. The density value at c is subtracted so that the
    // remainder stays bounded when z approaches the ray; its Cauchy integral
    // is a logarithm in closed form.
    const double width = std::max({1.0, std::abs(split), 2.0 * std::max(along, 0.0)});
    const double far = split + sgn * width;
    const double c = split + sgn * std::clamp(along, 0.0, width);
    const double fc = log_density(c, data, region);
    auto near = [&](double u) { return cplx(log_density(u, data, region) - fc) / (u - z); };
    const double lo = std::min(split, far), hi = std::max(split, far);
    cplx I_near = 0.0;
    if (c > lo) I_near += integrate_interval(near, lo, c, cfg);
    if (c < hi) I_near += integrate_interval(near, c, hi, cfg);
    // int over the finite piece of du/(u - z); u - z never crosses the
    // negative axis because Im(u - z) is constant along it.
    const cplx I_log = fc * (std::log(hi - z) - std::log(lo - z));
    // The ray runs outward from far; region I integrates from -inf, i.e. inward.
    const cplx I_tail = sgn * integrate_contour(
        [&](cplx u) { return cplx(log_density(u.real(), data, region)) / (u - z); },
        Path::ray(far, sgn), cfg);
    const cplx total = I_near + I_log + I_tail;
    // (1/2pi i) on the left ray, (i/2pi) on the right one.
    return region == PlaneRegion::I ? total / (2.0 * kPi * kI) : kI * total / (2.0 * kPi);
}

cplx delta_fn(cplx z, double split, const ScatteringData& data, PlaneRegion region,
              const QuadratureConfig& cfg) {
    return std::exp(log_delta(z, split, data, region, cfg));
}

double phi_const(const Background& bg) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    auto f = [&](cplx s) {
        if (s.real() != 0.0) s = cplx(0.0, s.imag());
        return log_root(s, bg.q0) / lambda_z(s, CutSide::plus, bg);
    };
    const cplx v = integrate_contour_sqrt_ends(f, lambda_cut(bg), cfg) / (2.0 * kPi);
    if (std::abs(v.imag()) > 1e-8) throw RealnessViolation("phi_const is not real");
    return v.real();
}

cplx phi_I_complex(double xi, const ScatteringData& data) {
    return phase_integral(xi, data, PlaneRegion::I);
}

cplx phi_II_complex(double xi, const ScatteringData& data) {
    return phase_integral(xi, data, PlaneRegion::II);
}

double phi_I(double xi, const ScatteringData& data) {
    const cplx v = phi_I_complex(xi, data);
    if (std::abs(v.imag()) > 1e-6)
        throw RealnessViolation("phi has imaginary part " + std::to_string(v.imag()));
    return v.real();
}

double phi_II(double xi, const ScatteringData& data) {
    const cplx v = phi_II_complex(xi, data);
    if (std::abs(v.imag()) > 1e-6)
        throw RealnessViolation("phi-tilde has imaginary part " + std::to_string(v.imag()));
    return v.real();
}

PlaneWaveResult q_plane_wave(double x, double t, const ScatteringData& data) {
    if (!(t > 0.0)) throw InvalidArgument("t must be positive");
    PlaneWaveResult r;
    r.xi = x / t;
    Region tag = classify(r.xi, data.bg.q0).tag;
    // The sector edges belong to the plane-wave formulas.
    if (tag == Region::boundary && r.xi != 0.0)
        tag = r.xi < 0.0 ? Region::plane_wave_I : Region::plane_wave_II;
    if (tag == Region::plane_wave_I) {
        r.region = PlaneRegion::I;
        r.phase = phi_I(r.xi, data);
        r.q_leading = data.bg.q_minus * std::exp(-2.0 * kI * r.phase);
    } else if (tag == Region::plane_wave_II) {
        r.region = PlaneRegion::II;
        r.phase = phi_II(r.xi, data);
        r.q_leading = data.bg.q_plus * std::exp(2.0 * kI * r.phase);
    } else {
        throw WrongRegion("xi = " + std::to_string(r.xi) + " is not in a plane-wave sector");
    }
    return r;
}

}  // namespace gi
