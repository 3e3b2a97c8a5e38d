#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gi/elliptic.hpp"
#include "gi/errors.hpp"

using gi::cplx;
using gi::CutSide;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {
const cplx I{0.0, 1.0};

gi::ScatteringData gaussian_data(gi::Background bg = gi::Background::from_phases(1.0, 0.0, 0.0)) {
    auto f = [](cplx z) { return 0.3 * std::exp(0.4 * I) * std::exp(-z * z / 8.0); };
    auto g = [](cplx z) { return 0.3 * std::exp(-0.7 * I) * std::exp(-z * z / 8.0); };
    return gi::ScatteringData::synthetic(bg, f, g);
}

const gi::EllipticSurface& surface() {
    static const gi::EllipticSurface s(-1.2, gi::Background::from_phases(1.0, 0.0, 0.0));
    return s;
}

const gi::EllipticInvariants& invariants() {
    static const gi::EllipticInvariants inv = [] {
        const auto d = gaussian_data();
        return surface().invariants(gi::spectral_input_I(d, surface().z0()));
    }();
    return inv;
}
}  // namespace

TEST_SUITE("elliptic") {
    TEST_CASE("g coefficients agree with the normalisation at infinity") {
        for (double q0 : {0.7, 1.0, 1.6}) {
            for (double frac : {0.05, 0.3, 0.6, 0.95}) {
                const double xi = -frac * 2 * sqrt2 * q0 * q0;
                const double z0 = gi::solve_z0(xi, q0);
                const auto al = gi::alpha_endpoint(xi, z0, q0);
                const auto g = gi::g_coefficients(xi, z0, al, q0);
                // P(s) vanishes at the three finite zeros of dg.
                for (cplx s : {cplx(z0), al.alpha(), std::conj(al.alpha())}) {
                    const cplx p = ((s + g.c2) * s + g.c1) * s + g.c0;
                    CHECK(std::abs(p) < 1e-12 * std::max(1.0, std::pow(q0, 6)));
                }
            }
        }
        const double z0 = gi::solve_z0(-1.2, 1.0);
        auto al = gi::alpha_endpoint(-1.2, z0, 1.0);
        al.alpha2 *= 1.001;
        CHECK_THROWS_AS(gi::g_coefficients(-1.2, z0, al, 1.0), gi::ConsistencyViolation);
    }

    TEST_CASE("geometric constants match independent references at xi = -1.2") {
        // Omega, tau, c, U: fixed-panel Python prototype. G(inf): 60-digit
        // mpmath quadrature with the 1/s^2 tail added analytically.
        const auto& s = surface();
        CHECK(s.z0() == doctest::Approx(-0.1719050920236117).epsilon(1e-12));
        CHECK(s.alpha().alpha2 == doctest::Approx(0.4538277934559824).epsilon(1e-12));
        CHECK(std::abs(s.big_omega() - 0.8508642924983775) < 1e-10);
        const auto [g, G] = s.g_infinities();
        CHECK(std::abs(G - (-0.099300204702502336)) < 1e-11);
        CHECK(std::abs(G - g - 0.25) < 1e-14);
        const auto rd = s.riemann_data();
        CHECK(std::abs(rd.tau - cplx(0.0, 0.4707462834186066)) < 1e-10);
        CHECK(std::abs(rd.c - cplx(0.0, -0.07174072728826424)) < 1e-10);
        CHECK(std::abs(s.U_inf() - cplx(-0.25, -0.09164577342990177)) < 1e-10);
        CHECK(std::abs(s.U0() - cplx(0.75, 0.0916457734303)) < 1e-10);
        CHECK(rd.b_residual < 1e-10);
    }

    TEST_CASE("Omega, G(inf) and tau have the expected phases") {
        for (double xi : {-0.3, -1.2, -2.5}) {
            const gi::EllipticSurface s(xi, gi::Background::from_phases(1.0, 0.2, -0.4));
            CHECK(std::abs(s.big_omega_complex().imag()) < 1e-10);
            CHECK(std::abs(s.g_infinities_complex().second.imag()) < 1e-10);
            const auto rd = s.riemann_data();
            CHECK(std::abs(rd.tau.real()) < 1e-10);
            CHECK(rd.tau.imag() > 0.0);
            CHECK(std::abs(rd.c.real()) < 1e-10);
        }
    }

    TEST_CASE("a-period on B equals the b-period on L5") {
        // Cauchy: ds/w decays like s^-2, so the integrals over the two cuts
        // cancel; hence 2 c (D6 - D7) = -1.
        const auto d = gaussian_data();
        const auto parts = surface().omega_parts(gi::spectral_input_I(d, surface().z0()));
        const cplx c = surface().riemann_data().c;
        CHECK(std::abs(2.0 * c * (parts.D6 - parts.D7) + 1.0) < 1e-11);
        CHECK(std::abs(parts.D7 - std::conj(parts.D6)) < 1e-11);
    }

    TEST_CASE("Abel map: branch point values and constant sums on the cuts") {
        const auto& s = surface();
        const cplx tau = s.riemann_data().tau;
        const cplx al = s.alpha().alpha();
        CHECK(std::abs(s.abel_map(cplx(0.0, -0.5)) - 0.5) < 1e-11);
        CHECK(std::abs(s.abel_map(al) + 0.5 * tau) < 1e-11);
        CHECK(std::abs(s.abel_map(std::conj(al)) - 0.5 + 0.5 * tau) < 1e-11);
        // w changes sign across a cut, so U+ + U- is constant along it.
        auto sum = [&](cplx z) { return s.abel_map(z, CutSide::plus) + s.abel_map(z, CutSide::minus); };
        CHECK(std::abs(sum(cplx(0.0, 0.1)) - sum(cplx(0.0, -0.3))) < 1e-10);
        const cplx p(s.z0(), 0.0);
        CHECK(std::abs(sum(p + 0.3 * (al - p)) - sum(p + 0.8 * (al - p))) < 1e-10);
        CHECK_THROWS_AS(s.abel_map(cplx(0.0, 0.1)), gi::InvalidArgument);
    }

    TEST_CASE("Abel map is a primitive of c/w") {
        const auto& s = surface();
        const cplx c = s.riemann_data().c;
        for (cplx z : {cplx(1.0, 1.0), cplx(-0.6, 0.2), cplx(0.3, -0.8)}) {
            const double h = 1e-4;
            const cplx du = (s.abel_map(z + h) - s.abel_map(z - h)) / (2 * h);
            CHECK(std::abs(du - c / s.w(z)) < 1e-7);
        }
    }

    TEST_CASE("theta3: periodicity, quasi-periodicity and parity") {
        const auto tp = gi::ThetaParams::from_tau(cplx(0.1, 0.47));
        for (cplx v : {cplx(0.2, 0.1), cplx(-0.7, 0.9), cplx(1.3, -2.4)}) {
            const cplx t = gi::theta3(v, tp);
            CHECK(std::abs(gi::theta3(v + 1.0, tp) - t) < 1e-12 * std::abs(t));
            CHECK(std::abs(gi::theta3(-v, tp) - t) < 1e-12 * std::abs(t));
            const cplx shifted = gi::theta3(v + tp.tau, tp);
            const cplx expect = std::exp(-I * pi * tp.tau - 2.0 * pi * I * v) * t;
            CHECK(std::abs(shifted - expect) < 1e-11 * std::abs(expect));
        }
        // Jacobi triple product as an independent oracle.
        const cplx v(0.31, 0.17), q = std::exp(I * pi * tp.tau);
        cplx prod = 1.0;
        for (int m = 1; m < 200; ++m) {
            const cplx q2m = std::pow(q, 2 * m), q2m1 = std::pow(q, 2 * m - 1);
            prod *= (1.0 - q2m) * (1.0 + q2m1 * std::exp(2.0 * pi * I * v)) *
                    (1.0 + q2m1 * std::exp(-2.0 * pi * I * v));
        }
        CHECK(std::abs(gi::theta3(v, tp) - prod) < 1e-13);
        CHECK_THROWS_AS(gi::ThetaParams::from_tau(cplx(0.0, -0.1)), gi::TruncationInsufficient);
        CHECK_THROWS_AS(gi::theta3(cplx(0.0, 1e7), tp), gi::TruncationInsufficient);
    }

    TEST_CASE("omega and ghat(inf) do not depend on the contour") {
        const auto d = gaussian_data();
        const auto in = gi::spectral_input_I(d, surface().z0());
        const auto& straight = invariants();
        for (double bulge : {0.05, 0.1}) {
            const auto bent = surface().invariants(in, gi::ContourOptions{bulge});
            CHECK(std::abs(bent.Omega - straight.Omega) < 1e-12);
            CHECK(std::abs(bent.tau - straight.tau) < 1e-12);
            CHECK(std::abs(bent.omega - straight.omega) < 1e-9);
            CHECK(std::abs(bent.ghat_inf - straight.ghat_inf) < 1e-9);
        }
        // Real parts against the prototype (rerun with panel refinement).
        CHECK(std::abs(straight.omega.real() - (-0.5042175116779947)) < 1e-9);
        CHECK(std::abs(straight.ghat_inf.real() - (-0.5823399576780036)) < 1e-9);
    }

    TEST_CASE("checked omega accessor reports the imaginary part it finds") {
        const auto d = gaussian_data();
        const auto in = gi::spectral_input_I(d, surface().z0());
        const double im = invariants().omega.imag();
        if (std::abs(im) >= 1e-6)
            CHECK_THROWS_AS(gi::small_omega(surface(), in), gi::RealnessViolation);
        else
            CHECK(gi::small_omega(surface(), in) == doctest::Approx(invariants().omega.real()));
        CHECK(invariants().realness_residual() >= std::abs(im));
    }

    TEST_CASE("paths are checked against both cuts") {
        const auto& s = surface();
        const cplx al = s.alpha().alpha();
        CHECK_THROWS_AS(s.check_path({cplx(-1.0, 0.2), cplx(1.0, 0.2)}), gi::PathCrossesCut);
        CHECK_THROWS_AS(s.check_path({cplx(-0.15, 0.9), cplx(-0.15, 0.1)}), gi::PathCrossesCut);
        CHECK_THROWS_AS(s.check_path({cplx(0.0, -0.9), cplx(0.0, 0.9)}), gi::PathCrossesCut);
        CHECK_NOTHROW(s.check_path({cplx(0.0, 0.5), al}));
        CHECK_NOTHROW(s.check_path({cplx(1.0, 1.0), cplx(1.0, -1.0)}));
        CHECK_THROWS_AS(gi::EllipticSurface(-4.0, surface().background()), gi::WrongRegion);
    }

    TEST_CASE("the wave degenerates to the plane wave at the sector edge") {
        const auto bg = gi::Background::from_phases(1.0, 0.3, -0.2);
        const auto d = gaussian_data(bg);
        const double edge = 2 * sqrt2;
        const cplx q_plane = bg.q_minus * std::exp(-2.0 * I * gi::phi_I(-edge, d));
        const gi::EllipticOptions open{1e-7, {}};
        double prev = INFINITY;
        for (double eps : {1e-3, 1e-5}) {
            const auto inv = gi::elliptic_invariants(-edge + eps, d, open);
            const double gap = std::abs(gi::q_elliptic_at(inv, 1.0) - q_plane);
            CHECK(gap < 4.0 * inv.alpha.alpha2);
            CHECK(gap < prev);
            prev = gap;
        }
        // Inside the default collar the plane-wave value is returned as is.
        const auto r = gi::q_elliptic(-edge + 1e-9, 1.0, d);
        CHECK(r.collar_fallback);
        CHECK(std::abs(r.q - q_plane) < 1e-12);
        CHECK_THROWS_AS(gi::elliptic_invariants(-edge + 1e-9, d), gi::CollarError);
    }

    TEST_CASE("region II runs through the mirror rule") {
        const auto d = gaussian_data(gi::Background::from_phases(1.0, 0.3, -0.2));
        const auto inv = gi::elliptic_invariants(1.2, d);
        const auto mirror = gi::EllipticSurface(-1.2, d.bg);
        CHECK(inv.xi == doctest::Approx(-1.2));
        CHECK(std::abs(inv.Omega - mirror.big_omega()) < 1e-12);
        CHECK(inv.q_minus == d.bg.q_plus);
        const auto r = gi::q_elliptic(2.4, 2.0, d);
        CHECK(r.region == gi::Region::elliptic_II);
        CHECK(std::isfinite(std::abs(r.q)));
        CHECK_THROWS_AS(gi::q_elliptic(10.0, 1.0, d), gi::WrongRegion);
    }
}
