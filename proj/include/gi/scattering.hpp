#pragma once
// Direct scattering at t = 0: Jost solutions, a(k), b(k), and the
// reflection functions rho(z) = r(k)/k and varrho(z) = -conj-b/(k conj-a).

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gi/spectral.hpp"

namespace gi {

/// Initial datum q(x, 0) with constant tails q_minus (x -> -inf) and
/// q_plus (x -> +inf).
struct InitialProfile {
    std::string family;
    std::function<cplx(double)> evaluate;
    cplx q_minus, q_plus;
    /// Width scale: beyond 8 * decay_scale the tails are reached to 1e-10.
    double decay_scale = 1.0;

    Background background() const;

    /// q(x) = q0 e^{i phase}.
    static InitialProfile constant(double q0, double phase = 0.0);
    /// Phase interpolated by a tanh of width ell centred at x0.
    static InitialProfile phase_step(double q0, double phase_minus, double phase_plus, double ell,
                                     double x0 = 0.0);
    /// Background (constant or phase step of width sigma) plus
    /// eps * exp(-(x-x0)^2 / (2 sigma^2)).
    static InitialProfile bump(double q0, cplx eps, double x0, double sigma,
                               double phase_minus = 0.0, double phase_plus = 0.0);
};

using Mat2 = std::array<std::array<cplx, 2>, 2>;

/// Background eigenvector matrix E(k) for tail value q.
Mat2 background_eigenvectors(cplx k, cplx q, CutSide side = CutSide::off_cut);

struct JostPair {
    Mat2 mu_minus;  // normalised at x -> -inf
    Mat2 mu_plus;   // normalised at x -> +inf
    double x_match = 0.0;
};

struct JostOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    /// Negative: use +-8 * decay_scale.
    double half_width = -1.0;
};

/// Integrates mu' = X mu - i lambda mu sigma3 from both tails to x = 0.
/// At complex k only the columns that stay bounded are meaningful; the
/// solver integrates all of them regardless.
JostPair jost_solutions(const InitialProfile& profile, cplx k, CutSide side = CutSide::off_cut,
                        const JostOptions& opt = {});

struct ScatteringCoefficients {
    cplx a, b;          // a(k), b(k)
    cplx a_bar, b_bar;  // conj(a(conj k)), conj(b(conj k)) from their own Wronskians
    double det_residual() const { return std::abs(a * a_bar - b * b_bar - 1.0); }
};

ScatteringCoefficients scattering_coeffs(const InitialProfile& profile, cplx k,
                                         CutSide side = CutSide::off_cut,
                                         const JostOptions& opt = {});

/// Reflection data. On the real z axis values come from a tabulated grid
/// (cubic splines in log|z|, one per half-line); off the axis rho and varrho
/// are computed on demand from the Lax equation at k = sqrt(z).
class ScatteringData {
public:
    using Fn = std::function<cplx(cplx)>;

    /// Data defined by analytic functions (tests and synthetic studies).
    static ScatteringData synthetic(const Background& bg, Fn rho, Fn varrho);

    Background bg;
    std::vector<double> z_grid;
    std::vector<cplx> k_grid, a_values, b_values, rho_values, varrho_values;
    std::vector<double> unitarity_residual;

    /// Real-axis values (z != 0).
    cplx rho(double z) const;
    cplx varrho(double z) const;
    /// Analytic continuation off the real axis.
    cplx rho_c(cplx z) const;
    cplx varrho_c(cplx z) const;
    /// conj(rho(conj z)) and conj(varrho(conj z)).
    cplx rho_bar_c(cplx z) const { return std::conj(rho_c(std::conj(z))); }
    cplx varrho_bar_c(cplx z) const { return std::conj(varrho_c(std::conj(z))); }

    bool has_profile() const;
    const InitialProfile& profile() const;

    struct Impl;

private:
    std::shared_ptr<const Impl> impl_;
    friend ScatteringData reflection_table(const InitialProfile&, const std::vector<double>&);
};

/// Default grid: n_per_side points per half-line, uniform in log|z| on
/// [1/R, R] with R = 40 max(1, q0^2).
std::vector<double> default_z_grid(double q0, int n_per_side = 200);

/// Builds the table. Throws SolitonAssumptionViolated if |a| < 1e-8 and
/// SignAssumptionViolated if 1 - z rho conj(rho) <= 0 at a grid point.
ScatteringData reflection_table(const InitialProfile& profile, const std::vector<double>& z_grid);

}  // namespace gi
