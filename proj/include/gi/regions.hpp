#pragma once
// Asymptotic sectors in xi = x/t and their spectral geometry.

#include <optional>
#include <string>
#include <utility>

#include "gi/spectral.hpp"

namespace gi {

enum class Region { plane_wave_I, elliptic_I, elliptic_II, plane_wave_II, boundary };

std::string to_string(Region r);

struct RegionParams {
    double xi = 0.0;
    double q0 = 1.0;
    Region tag = Region::boundary;
    std::optional<double> z_minus, z_plus;
    std::optional<double> z0;
    std::optional<EllipticEndpoint> alpha;
    /// |residual| of the z0 equation, elliptic sectors only.
    std::optional<double> residual;
};

/// Tag only. Points within 1e-12 of |xi| in {0, 2 sqrt2 q0^2} are `boundary`.
RegionParams classify(double xi, double q0);

/// Roots of 4z^2 - xi z + q0^4/2, ordered z_minus <= z_plus.
std::pair<double, double> stationary_points(double xi, double q0);

/// Scaled z0 functional
///   F(x,y) = int_{-1}^{1} sqrt(((i tau + y)^2 + 2y^2 - 4xy + 1) / (1 - tau^2))
///            (i tau + 2x - y) dtau,
/// evaluated with the Gauss-Chebyshev rule. Real for real (x, y).
cplx scaled_F(double x, double y);
/// d^order F / dy^order for order 0, 1, 2 (differentiated under the integral).
cplx scaled_F_derivative(double x, double y, int order);

struct Z0Solution {
    double z0 = 0.0;
    double y = 0.0;         // scaled unknown, z0 = (2 q0^2 y + xi)/4
    double residual = 0.0;  // |unscaled residual| = (q0^2/2)^2 |F|
    int iterations = 0;
};

/// z0(xi) for -2 sqrt2 q0^2 <= xi <= 0: bisection on y in [0, sqrt2]
/// (F decreases in y), then Newton. At the sector edge the root is triple;
/// there the polish switches to the simple root of F_yy.
Z0Solution solve_z0_detailed(double xi, double q0);
double solve_z0(double xi, double q0);

/// alpha1 = xi/4 - z0, alpha2 = sqrt(2 z0^2 - xi z0/2 + q0^4/4).
EllipticEndpoint alpha_endpoint(double xi, double z0, double q0);

/// Full geometry for the sector of xi. Elliptic II is the mirror image
/// z -> -z of elliptic I at -xi.
RegionParams region_geometry(double xi, double q0);

}  // namespace gi
