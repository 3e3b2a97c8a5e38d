// Property tests over seeded random inputs. Each generator draws from one
// fixed-seed engine, so a failure is reproducible from the case index shown
// by INFO.

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gi/cli.hpp"
#include "gi/elliptic.hpp"
#include "gi/errors.hpp"
#include "gi/pde_sim.hpp"

using gi::cplx;

namespace {

const cplx I{0.0, 1.0};
const double kSqrt2 = std::numbers::sqrt2;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    cplx box(double half) { return {uniform(-half, half), uniform(-half, half)}; }
    /// A point at least `gap` away from the segment [-ia, ia].
    cplx off_cut(double a, double half, double gap) {
        for (;;) {
            const cplx z = box(half);
            if (std::abs(z.real()) > gap || std::abs(z.imag()) > a + gap) return z;
        }
    }
    double q0() { return std::exp(uniform(std::log(0.5), std::log(2.0))); }
    /// xi strictly inside the region-I elliptic sector, away from its ends.
    double xi_elliptic(double q0) { return -2.0 * kSqrt2 * q0 * q0 * uniform(0.05, 0.95); }
    gi::InitialProfile bump() {
        const double q0 = this->q0();
        const cplx eps = std::polar(uniform(0.01, 0.15), uniform(-std::numbers::pi, std::numbers::pi));
        return gi::InitialProfile::bump(q0, eps, uniform(-1.0, 1.0), uniform(0.6, 1.5));
    }
    double any_double() {
        const double m = uniform(1.0, 10.0);
        return (integer(0, 1) ? -m : m) * std::pow(10.0, integer(-300, 300));
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace

TEST_SUITE("properties") {
    TEST_CASE("lambda^2 = z^2 + a^2 and w^2 = (z - alpha)(z - conj alpha)(z^2 + a^2)") {
        Gen g(101);
        for (int n = 0; n < 200; ++n) {
            INFO("case " << n);
            const auto bg = gi::Background::from_phases(g.q0(), 0.0, 0.0);
            const double a = bg.a();
            const cplx z = g.off_cut(a, 3.0, 1e-3);
            const cplx lam = gi::lambda_z(z, gi::CutSide::off_cut, bg);
            CHECK(std::abs(lam * lam - (z * z + a * a)) < 1e-12 * (1.0 + std::norm(z)));
            const gi::EllipticEndpoint al{g.uniform(-1.0, 0.0), g.uniform(0.05, 1.0)};
            const gi::EllipticCuts cuts(bg, al);
            if (cuts.on_band_cut(z) || std::abs(z.real() - al.alpha1) < 1e-3) continue;
            const cplx w = cuts.w(z);
            const cplx p = (z - al.alpha()) * (z - std::conj(al.alpha())) * (z * z + a * a);
            CHECK(std::abs(w * w - p) < 1e-11 * (1.0 + std::abs(p)));
            // Schwarz symmetry of the principal sheet.
            CHECK(std::abs(cuts.w(std::conj(z)) - std::conj(w)) < 1e-12 * (1.0 + std::abs(w)));
        }
    }

    TEST_CASE("stationary points solve 4z^2 - xi z + q0^4/2 = 0 in the plane-wave sectors") {
        Gen g(202);
        for (int n = 0; n < 200; ++n) {
            INFO("case " << n);
            const double q0 = g.q0(), edge = 2.0 * kSqrt2 * q0 * q0;
            const double xi = (g.integer(0, 1) ? 1.0 : -1.0) * edge * g.uniform(1.01, 5.0);
            const auto [zm, zp] = gi::stationary_points(xi, q0);
            CHECK(zm <= zp);
            for (double z : {zm, zp})
                CHECK(std::abs(4.0 * z * z - xi * z + 0.5 * std::pow(q0, 4)) < 1e-12 * xi * xi);
        }
    }

    TEST_CASE("z0 scales with q0^2 and keeps a tiny residual") {
        Gen g(303);
        for (int n = 0; n < 40; ++n) {
            INFO("case " << n);
            const double q0 = g.q0(), s = g.uniform(0.02, 0.98);
            const double xi1 = -2.0 * kSqrt2 * s;
            const auto d = gi::solve_z0_detailed(xi1 * q0 * q0, q0);
            CHECK(d.residual < 1e-10 * std::pow(q0, 4));
            CHECK(d.z0 == doctest::Approx(q0 * q0 * gi::solve_z0(xi1, 1.0)).epsilon(1e-9));
            const auto al = gi::alpha_endpoint(xi1 * q0 * q0, d.z0, q0);
            CHECK(al.alpha2 > 0.0);
            CHECK(d.z0 < al.alpha1);
        }
    }

    TEST_CASE("theta3 is even, 1-periodic and tau-quasi-periodic") {
        Gen g(404);
        for (int n = 0; n < 200; ++n) {
            INFO("case " << n);
            const cplx tau{0.0, g.uniform(0.3, 3.0)};
            const auto p = gi::ThetaParams::from_tau(tau);
            const cplx v = g.box(1.0);
            const cplx t = gi::theta3(v, p);
            const double scale = std::abs(t) + 1e-300;
            CHECK(std::abs(gi::theta3(-v, p) - t) < 1e-12 * scale);
            CHECK(std::abs(gi::theta3(v + 1.0, p) - t) < 1e-12 * scale);
            const cplx shifted = gi::theta3(v + tau, p) * std::exp(I * std::numbers::pi * (tau + 2.0 * v));
            CHECK(std::abs(shifted - t) < 1e-12 * scale);
        }
    }

    TEST_CASE("Gauss-Legendre panels integrate polynomials exactly") {
        Gen g(505);
        for (int n = 0; n < 50; ++n) {
            INFO("case " << n);
            const int deg = g.integer(0, 20);
            std::vector<cplx> c(deg + 1);
            for (auto& v : c) v = g.box(1.0);
            const cplx a = g.box(2.0), b = g.box(2.0);
            auto f = [&](cplx s) {
                cplx acc = 0.0;
                for (int k = deg; k >= 0; --k) acc = acc * s + c[k];
                return acc;
            };
            auto F = [&](cplx s) {
                cplx acc = 0.0;
                for (int k = deg; k >= 0; --k) acc = acc * s + c[k] / double(k + 1);
                return acc * s;
            };
            const cplx exact = F(b) - F(a);
            CHECK(std::abs(gi::integrate_contour(f, gi::Path::segment(a, b)) - exact) <
                  1e-11 * (1.0 + std::abs(exact)));
        }
    }

    TEST_CASE("scattering data of random bumps: det s = 1 and k -> -k symmetry") {
        Gen g(606);
        for (int n = 0; n < 12; ++n) {
            INFO("case " << n);
            const auto prof = g.bump();
            const double k = g.uniform(0.2, 2.0) * prof.background().q0;
            const auto s = gi::scattering_coeffs(prof, k);
            CHECK(s.det_residual() < 1e-6);
            CHECK(std::abs(std::norm(s.a) - std::norm(s.b) - 1.0) < 1e-6);
            const auto m = gi::scattering_coeffs(prof, -k);
            CHECK(std::abs(m.a - s.a) < 1e-6);
            CHECK(std::abs(m.b + s.b) < 1e-6);
        }
    }

    TEST_CASE("the PDE flow commutes with global phase rotation") {
        Gen g(707);
        for (int n = 0; n < 4; ++n) {
            INFO("case " << n);
            const double theta = g.uniform(-std::numbers::pi, std::numbers::pi);
            const double q0 = g.q0();
            const cplx eps = g.box(0.1);
            const gi::SimGrid grid{-30.0, 30.0, 241};
            const auto p0 = gi::InitialProfile::bump(q0, eps, 0.0, 1.0);
            const auto p1 = gi::InitialProfile::bump(q0, eps * std::exp(I * theta), 0.0, 1.0, theta, theta);
            const auto a = gi::simulate(gi::init_profile(p0, grid), 0.3, {0.3}).at(0);
            const auto b = gi::simulate(gi::init_profile(p1, grid), 0.3, {0.3}).at(0);
            double m = 0.0;
            for (int i = 0; i < grid.n_points; ++i) m = std::max(m, std::abs(a.q[i] * std::exp(I * theta) - b.q[i]));
            CHECK(m < 1e-12);
        }
    }

    TEST_CASE("CSV numbers round-trip exactly") {
        Gen g(808);
        for (int n = 0; n < 1000; ++n) {
            const double v = g.any_double();
            INFO("value " << v);
            CHECK(std::stod(gi::format_double(v)) == v);
        }
    }

    TEST_CASE("misspelled keys are rejected at every level") {
        Gen g(909);
        const std::vector<std::string> sections{"background", "profile", "asymptote", "sim", "tolerances"};
        for (int n = 0; n < 30; ++n) {
            std::string key = "k";
            for (int i = 0; i < 6; ++i) key += static_cast<char>('a' + g.integer(0, 25));
            const std::string sec = sections[g.integer(0, static_cast<int>(sections.size()) - 1)];
            const std::string doc = "{\"" + sec + "\": {\"" + key + "\": 1}}";
            INFO(doc);
            CHECK_THROWS_AS(gi::parse_config(doc), gi::ConfigError);
        }
    }

    TEST_CASE("the elliptic b-period is normalised for random sectors") {
        Gen g(1001);
        for (int n = 0; n < 6; ++n) {
            INFO("case " << n);
            const double q0 = g.q0();
            const auto bg = gi::Background::from_phases(q0, 0.0, 0.0);
            const gi::EllipticSurface surf(g.xi_elliptic(q0), bg);
            const auto rd = surf.riemann_data();
            CHECK(rd.b_residual < 1e-9);
            CHECK(std::abs(rd.tau.real()) < 1e-9);
            CHECK(rd.tau.imag() > 0.0);
            const cplx Om = surf.big_omega_complex();
            CHECK(std::abs(Om.imag()) < 1e-8 * std::max(1.0, std::abs(Om)));
        }
    }
}
