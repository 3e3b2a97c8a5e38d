#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gi/errors.hpp"
#include "gi/quadrature.hpp"

using gi::cplx;
using std::numbers::pi;

namespace {
const cplx I{0.0, 1.0};

gi::Path unit_circle(int n) {
    std::vector<cplx> pts;
    for (int k = 0; k <= n; ++k) pts.push_back(std::polar(1.0, 2.0 * pi * k / n));
    return gi::Path::polyline(pts);
}
}  // namespace

TEST_SUITE("quadrature") {
    TEST_CASE("constant along a diagonal segment integrates to the displacement") {
        const cplx v = gi::integrate_contour([](cplx) { return cplx(1.0); },
                                             gi::Path::segment(0.0, cplx(1.0, 1.0)));
        CHECK(std::abs(v - cplx(1.0, 1.0)) < 1e-14);
    }

    TEST_CASE("odd integrand over a symmetric segment vanishes") {
        const cplx v = gi::integrate_contour([](cplx s) { return s; }, gi::Path::segment(-1.0, 1.0));
        CHECK(std::abs(v) < 1e-14);
    }

    TEST_CASE("1/s around a closed 64-gon gives the residue") {
        const cplx v = gi::integrate_contour([](cplx s) { return 1.0 / s; }, unit_circle(64));
        CHECK(std::abs(v - 2.0 * pi * I) < 1e-9 * 2.0 * pi);
    }

    TEST_CASE("reversed path flips the sign") {
        const auto p = gi::Path::polyline({0.0, cplx(1.0, 0.5), cplx(2.0, -1.0)});
        auto f = [](cplx s) { return std::exp(s) * s; };
        CHECK(std::abs(gi::integrate_contour(f, p) + gi::integrate_contour(f, p.reversed())) < 1e-12);
    }

    TEST_CASE("ray integral of exp(-s)") {
        const cplx v = gi::integrate_contour([](cplx s) { return std::exp(-s); },
                                             gi::Path::ray(1.0, 1.0));
        CHECK(std::abs(v - std::exp(-1.0)) < 1e-10);
    }

    TEST_CASE("tanh-sinh agrees with Gauss-Legendre") {
        gi::QuadratureConfig de;
        de.rule = gi::QuadRule::double_exponential;
        auto g = [](double x) { return cplx(std::cos(3 * x), std::sqrt(x + 1.0)); };
        const cplx a = gi::integrate_interval(g, 0.0, 2.0);
        const cplx b = gi::integrate_interval(g, 0.0, 2.0, de);
        CHECK(std::abs(a - b) < 1e-9);
    }

    TEST_CASE("endpoint-singular examples") {
        auto one = [](cplx) { return cplx(1.0); };
        CHECK(std::abs(gi::integrate_endpoint_singular(one, gi::Path::segment(0.0, 1.0), {-0.5, 0.0}) -
                       2.0) < 1e-12);
        CHECK(std::abs(gi::integrate_endpoint_singular(one, gi::Path::segment(-1.0, 1.0),
                                                       {-0.5, -0.5}) -
                       pi) < 1e-12);
        CHECK(std::abs(gi::integrate_endpoint_singular([](cplx s) { return s; },
                                                       gi::Path::segment(-1.0, 1.0), {-0.5, -0.5})) <
              1e-13);
    }

    TEST_CASE("Gauss-Jacobi integrates the weight's moments exactly") {
        // int_{-1}^{1} (1-x)^{1/2} (1+x)^{-1/2} dx = pi
        const auto [x, w] = gi::gauss_jacobi(12, 0.5, -0.5);
        double s = 0.0, s1 = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            s += w[i];
            s1 += w[i] * x[i];
        }
        CHECK(s == doctest::Approx(pi).epsilon(1e-13));
        CHECK(s1 == doctest::Approx(-pi / 2).epsilon(1e-13));
    }

    TEST_CASE("cosine-substitution integral of 1/sqrt(1-s^2)") {
        const cplx v = gi::integrate_contour_sqrt_ends(
            [](cplx s) { return 1.0 / std::sqrt(1.0 - s * s); }, gi::Path::segment(-1.0, 1.0));
        CHECK(std::abs(v - pi) < 1e-10);
    }

    TEST_CASE("Cauchy integral closed forms") {
        const auto seg = gi::Path::segment(0.0, 1.0);
        auto one = [](cplx) { return cplx(1.0); };
        CHECK(std::abs(gi::cauchy_integral([](cplx) { return cplx(0.0); }, seg, 3.0)) == 0.0);
        const cplx at2 = gi::cauchy_integral(one, seg, 2.0);
        // ln(1 - 2) - ln(0 - 2) = -ln 2.
        CHECK(std::abs(at2 + std::log(2.0) / (2.0 * pi * I)) < 1e-12);
        CHECK(std::abs(at2.imag() - 0.110318) < 1e-6);
        const cplx ati = gi::cauchy_integral(one, seg, I);
        CHECK(std::abs(ati - (std::log(1.0 - I) - std::log(-I)) / (2.0 * pi * I)) < 1e-12);
    }

    TEST_CASE("Cauchy integral refuses points on the contour") {
        CHECK_THROWS_AS(gi::cauchy_integral([](cplx) { return cplx(1.0); },
                                            gi::Path::segment(0.0, 1.0), 0.5),
                        gi::PointOnContour);
    }

    TEST_CASE("Plemelj jump of a smooth density") {
        const auto seg = gi::Path::segment(-1.0, 1.0);
        auto dens = [](cplx s) { return std::exp(s); };
        const cplx s0 = 0.3;
        const cplx p = gi::cauchy_boundary_value(dens, seg, s0, gi::Side::plus);
        const cplx m = gi::cauchy_boundary_value(dens, seg, s0, gi::Side::minus);
        CHECK(std::abs((p - m) - dens(s0)) < 1e-6);
    }

    TEST_CASE("invalid configuration is rejected") {
        gi::QuadratureConfig bad;
        bad.nodes_per_panel = 0;
        CHECK_THROWS(gi::validate(bad));
    }
    TEST_CASE("Chebyshev interpolant reproduces an analytic function") {
        auto f = [](double x) { return std::exp(gi::cplx(0.0, 3.0) * x) / (1.0 + 0.25 * x * x); };
        const gi::ChebyshevInterpolant p(f, -2.0, 1.5);
        for (double x : {-2.0, -1.37, 0.0, 0.4, 1.5})
            CHECK(std::abs(p(x) - f(x)) < 1e-12);
        CHECK(p.degree() <= 128);
    }

    TEST_CASE("Chebyshev interpolant reports a function it cannot resolve") {
        auto f = [](double x) { return gi::cplx(std::abs(x - 0.1234)); };
        CHECK_THROWS_AS(gi::ChebyshevInterpolant(f, -1.0, 1.0, 1e-13, 256), gi::NonConvergence);
    }
}
