#include "gi/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gi/errors.hpp"

namespace gi {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double boundary_tol(double q0) { return 1e-12 * std::max(1.0, q0 * q0); }

}  // namespace

std::string to_string(Region r) {
    switch (r) {
        case Region::plane_wave_I: return "plane_wave_I";
        case Region::elliptic_I: return "elliptic_I";
        case Region::elliptic_II: return "elliptic_II";
        case Region::plane_wave_II: return "plane_wave_II";
        case Region::boundary: return "boundary";
    }
    return "unknown";
}

RegionParams classify(double xi, double q0) {
    if (!(q0 > 0.0)) throw InvalidArgument("q0 must be positive");
    if (!std::isfinite(xi)) throw InvalidArgument("xi must be finite");
    RegionParams p;
    p.xi = xi;
    p.q0 = q0;
    const double edge = 2.0 * kSqrt2 * q0 * q0, tol = boundary_tol(q0);
    const double ax = std::abs(xi);
    if (ax <= tol || std::abs(ax - edge) <= tol)
        p.tag = Region::boundary;
    else if (xi < -edge)
        p.tag = Region::plane_wave_I;
    else if (xi < 0.0)
        p.tag = Region::elliptic_I;
    else if (xi < edge)
        p.tag = Region::elliptic_II;
    else
        p.tag = Region::plane_wave_II;
    return p;
}

std::pair<double, double> stationary_points(double xi, double q0) {
    const double q4 = std::pow(q0, 4);
    double disc = xi * xi - 8.0 * q4;
    if (disc < 0.0) {
        // Tolerate roundoff exactly at the sector edge.
        if (disc > -1e-12 * std::max(1.0, q4)) disc = 0.0;
        else throw NoRealStationaryPoints("xi^2 < 8 q0^4: no real stationary points");
    }
    const double s = std::sqrt(disc);
    // Product of the roots is q0^4/8; use it for the smaller-magnitude root.
    const double big = (xi - (xi < 0 ? s : -s)) / 8.0;
    const double small = big == 0.0 ? 0.0 : q4 / (8.0 * big);
    return {std::min(big, small), std::max(big, small)};
}

cplx scaled_F_derivative(double x, double y, int order) {
    if (order < 0 || order > 2) throw InvalidArgument("F derivative order must be 0, 1 or 2");
    const double c = 2.0 * y * y - 4.0 * x * y + 1.0;
    const cplx I{0.0, 1.0};
    auto g = [&](cplx tau) -> cplx {
        const cplx A = (I * tau + y) * (I * tau + y) + c;
        if (A.imag() == 0.0 && A.real() < 0.0)
            throw NegativeDiscriminant("radicand of F crosses the negative axis");
        const cplx S = std::sqrt(A), B = I * tau + 2.0 * x - y;
        if (order == 0) return S * B;
        const cplx Ay = 2.0 * (I * tau + y) + 4.0 * y - 4.0 * x;
        const cplx Sy = Ay / (2.0 * S);
        if (order == 1) return Sy * B - S;
        const cplx Syy = 3.0 / S - Ay * Ay / (4.0 * S * S * S);
        return Syy * B - 2.0 * Sy;
    };
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-13;
    cfg.abs_tol = 1e-15;
    cfg.nodes_per_panel = 32;
    return integrate_endpoint_singular(g, Path::segment(-1.0, 1.0), {-0.5, -0.5}, cfg);
}

cplx scaled_F(double x, double y) { return scaled_F_derivative(x, y, 0); }

Z0Solution solve_z0_detailed(double xi, double q0) {
    if (!(q0 > 0.0)) throw InvalidArgument("q0 must be positive");
    const double edge = 2.0 * kSqrt2 * q0 * q0, tol = boundary_tol(q0);
    if (xi > tol || xi < -edge - tol)
        throw WrongRegion("z0 is defined for -2 sqrt2 q0^2 <= xi <= 0");
    const double x = std::clamp(-xi / (4.0 * q0 * q0), 0.0, kSqrt2 / 2.0);
    auto F = [&](double y, int order = 0) { return scaled_F_derivative(x, y, order).real(); };
    const double scale = 0.25 * q0 * q0 * q0 * q0;
    // Size of the roundoff in F; below it the sign of F carries no information.
    constexpr double kNoise = 1e-14;

    Z0Solution sol;
    double lo = 0.0, hi = kSqrt2;
    const double flo = F(lo), fhi = F(hi);
    double y;
    if (std::abs(flo) <= kNoise) {
        y = lo;
    } else if (std::abs(fhi) <= kNoise) {
        y = hi;
    } else {
        if (flo < 0.0 || fhi > 0.0)
            throw ResidualNotConverged("F(x, .) does not change sign on [0, sqrt2]");
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            const double fm = F(mid);
            ++sol.iterations;
            if (fm > 0.0) lo = mid;
            else hi = mid;
        }
        y = 0.5 * (lo + hi);
        for (int it = 0; it < 50; ++it) {
            const double fy = F(y), dF = F(y, 1);
            if (std::abs(fy) <= kNoise || dF == 0.0) break;
            double yn = y - fy / dF;
            if (!(yn > lo - 1e-6 && yn < hi + 1e-6)) yn = 0.5 * (lo + hi);
            ++sol.iterations;
            const bool done = std::abs(yn - y) < 1e-15;
            y = yn;
            if (done) break;
        }
    }
    // Where F_y also (nearly) vanishes the root is a cluster, and F alone
    // fixes it only to the cube root of the roundoff. The cluster centre is
    // the simple root of F_yy, which is well conditioned.
    if (y > 0.0 && std::abs(F(y, 1)) < 1e-6) {
        double yc = y;
        for (int it = 0; it < 50; ++it) {
            const double h = 1e-5;
            const double f2 = F(yc, 2);
            const double f3 = (F(yc + h, 2) - F(yc - h, 2)) / (2.0 * h);
            if (f3 == 0.0) break;
            const double step = f2 / f3;
            yc -= step;
            ++sol.iterations;
            if (std::abs(step) < 1e-15) break;
        }
        if (std::abs(yc - y) < 1e-3 && std::abs(F(yc)) <= std::max(std::abs(F(y)), kNoise)) y = yc;
    }
    sol.y = y;
    sol.z0 = (2.0 * q0 * q0 * y + xi) / 4.0;
    sol.residual = scale * std::abs(scaled_F(x, y));
    if (!(sol.residual < 1e-10))
        throw ResidualNotConverged("z0 residual " + std::to_string(sol.residual) + " above 1e-10");
    return sol;
}

double solve_z0(double xi, double q0) { return solve_z0_detailed(xi, q0).z0; }

EllipticEndpoint alpha_endpoint(double xi, double z0, double q0) {
    double d = 2.0 * z0 * z0 - 0.5 * xi * z0 + 0.25 * std::pow(q0, 4);
    if (d < 0.0) {
        if (d > -1e-14 * std::max(1.0, std::pow(q0, 4))) d = 0.0;
        else throw NegativeDiscriminant("alpha2^2 < 0: z0 outside the admissible branch");
    }
    return {0.25 * xi - z0, std::sqrt(d)};
}

RegionParams region_geometry(double xi, double q0) {
    RegionParams p = classify(xi, q0);
    const double edge = 2.0 * kSqrt2 * q0 * q0;
    auto fill_elliptic = [&](double xi_left, bool mirrored) {
        const Z0Solution s = solve_z0_detailed(xi_left, q0);
        EllipticEndpoint al = alpha_endpoint(xi_left, s.z0, q0);
        double z0 = s.z0;
        if (mirrored) {
            z0 = -z0;
            al.alpha1 = -al.alpha1;
        }
        p.z0 = z0;
        p.alpha = al;
        p.residual = s.residual;
    };
    switch (p.tag) {
        case Region::plane_wave_I:
        case Region::plane_wave_II: {
            const auto [zm, zp] = stationary_points(xi, q0);
            p.z_minus = zm;
            p.z_plus = zp;
            break;
        }
        case Region::elliptic_I: fill_elliptic(xi, false); break;
        case Region::elliptic_II: fill_elliptic(-xi, true); break;
        case Region::boundary:
            if (std::abs(std::abs(xi) - edge) <= boundary_tol(q0)) {
                const auto [zm, zp] = stationary_points(xi, q0);
                p.z_minus = zm;
                p.z_plus = zp;
                fill_elliptic(-edge, xi > 0);
            } else {
                fill_elliptic(0.0, xi > 0);
            }
            break;
    }
    return p;
}

}  // namespace gi
