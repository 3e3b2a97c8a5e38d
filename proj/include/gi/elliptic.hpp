#pragma once
// Genus-one g-function data for the modulated elliptic wave sector
// -2 sqrt2 q0^2 < xi < 0, its mirror image 0 < xi < 2 sqrt2 q0^2, and the
// leading-order elliptic wave built from theta3.
//
// Contours (all in the z plane, with the cuts of spectral.hpp):
//   * B is the chevron conj(alpha) -> z0 -> alpha; L6 = [z0, alpha] and
//     L7 = [z0, conj alpha], both oriented away from z0.
//   * Densities on L5, L6, L7 are integrated against w-, the boundary value
//     from the right of the upward orientation of L5 and B.
//   * Paths between branch points are straight unless ContourOptions asks
//     for a bulge; every path is checked against both cuts.

#include <functional>
#include <utility>
#include <vector>

#include "gi/plane_wave.hpp"

namespace gi {

/// dg = -4 (s^3 + c2 s^2 + c1 s + c0) / w(s) ds.
struct GCoefficients {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

/// Coefficients of (s - z0)(s - alpha)(s - conj alpha), cross-checked against
/// the normalisation at infinity c2 = -xi/4 - alpha1,
/// c1 = alpha2^2/2 + xi alpha1/4 + q0^4/8. The second identity holds only when
/// (z0, alpha) come from the z0 equation. Throws ConsistencyViolation if either
/// differs by more than 1e-12 (relative to the size of the terms).
GCoefficients g_coefficients(double xi, double z0, EllipticEndpoint alpha, double q0);

/// Shape of the integration contours. With bulge > 0 each path p0 -> p1 is
/// replaced by p0 -> m + bulge * n -> p1, where m is the midpoint and n a unit
/// normal; the side is the one the integrand allows (see elliptic.cpp).
struct ContourOptions {
    double bulge = 0.0;
};

/// Normalised holomorphic differential du = c ds / w and its a-period.
struct RiemannData {
    cplx c;
    cplx tau;
    double b_residual = 0.0;  // |oint_b du - 1| along an independent loop
};

/// Spectral input of the sector: ln delta (ray ending at z0), rho along L6
/// and its Schwarz reflection rho_bar(s) = conj(rho(conj s)) along L7, and the
/// background whose q_minus enters the prefactor.
struct EllipticSpectralInput {
    Background bg;
    std::function<cplx(cplx)> log_delta;
    std::function<cplx(cplx)> rho;
    std::function<cplx(cplx)> rho_bar;
};

/// Region I input from scattering data (ray (-inf, z0], density ln(1 - u|rho|^2)).
EllipticSpectralInput spectral_input_I(const ScatteringData& data, double z0);
/// Mirror input for region II at xi > 0: the region-I pipeline is run at -xi
/// with q_- and q_+ swapped, rho_m(s) = varrho(-s) and
/// ln delta_m(s) = -ln delta_II(-s) with split -z0. z0 is the region-I value at -xi.
EllipticSpectralInput spectral_input_II(const ScatteringData& data, double z0);

/// Every constant the elliptic wave needs. omega and ghat_inf are stored as
/// computed (complex); the checked real accessors below throw when the
/// imaginary part is not negligible.
struct EllipticInvariants {
    double xi = 0.0;  // region-I value
    double z0 = 0.0;
    EllipticEndpoint alpha;
    GCoefficients coeffs;
    double Omega = 0.0, G_inf = 0.0, g_inf = 0.0;
    double im_Omega = 0.0, im_G_inf = 0.0;  // dropped imaginary parts
    cplx omega, ghat_inf;
    cplx c_norm, tau, U_inf, U0;
    double z_star = 0.0;
    double b_residual = 0.0;
    cplx q_minus;  // tail entering the prefactor and the theta argument

    /// max of |Im Omega|, |Im G_inf|, |Im omega|, |Im ghat_inf|.
    double realness_residual() const;
};

class EllipticSurface {
public:
    /// Region-I surface at xi in (-2 sqrt2 q0^2, 0). Throws WrongRegion outside
    /// and DegenerateBand when alpha2 < 1e-6.
    EllipticSurface(double xi, const Background& bg);

    double xi() const { return xi_; }
    double z0() const { return z0_; }
    EllipticEndpoint alpha() const { return alpha_; }
    const GCoefficients& coeffs() const { return coeffs_; }
    const EllipticCuts& cuts() const { return cuts_; }
    const Background& background() const { return bg_; }

    cplx w(cplx s, CutSide side = CutSide::off_cut) const { return cuts_.w(s, side); }
    /// (s^3 + c2 s^2 + c1 s + c0) / w(s).
    cplx dg_ratio(cplx s) const;

    /// Omega from the two path integrals computed independently; the
    /// imaginary part is the realness residual.
    cplx big_omega_complex(const ContourOptions& opt = {}) const;
    /// Throws RealnessViolation if |Im| >= 1e-8.
    double big_omega(const ContourOptions& opt = {}) const;
    /// (g_inf, G_inf) as complex numbers; G_inf - g_inf = q0^4/4.
    std::pair<cplx, cplx> g_infinities_complex() const;
    std::pair<double, double> g_infinities() const;

    /// Throws DegenerateBand when alpha2 < 1e-6 (checked at construction).
    RiemannData riemann_data(const ContourOptions& opt = {}) const;
    /// U(z) = int_{ia}^{z} du along a routed path that avoids both cuts. On a
    /// cut pass the side; the path then arrives from that side.
    cplx abel_map(cplx z, CutSide side = CutSide::off_cut) const;
    cplx U_inf() const;
    double z_star() const;
    /// U(z*) + (1 + tau)/2.
    cplx U0() const;

    struct OmegaParts {
        cplx omega, ghat_inf;
        cplx n5, n6, n7;  // density integrals
        cplx D6, D7;      // int ds / w- on L6, L7
    };
    /// omega and ghat(inf). Throws LogBranchFailure if rho vanishes along L6/L7.
    OmegaParts omega_parts(const EllipticSpectralInput& in, const ContourOptions& opt = {}) const;

    EllipticInvariants invariants(const EllipticSpectralInput& in,
                                  const ContourOptions& opt = {}) const;

    /// Throws PathCrossesCut if the polyline meets L5 or B anywhere except at
    /// its own end points.
    void check_path(const std::vector<cplx>& pts) const;

private:
    cplx poly(cplx s) const;
    /// w at a quadrature node, corrected for rounding of the node next to a
    /// branch point.
    cplx w_at(const EdgePoint& e, CutSide side = CutSide::off_cut) const;
    std::vector<cplx> route(cplx from, cplx to) const;
    std::vector<cplx> bulged(cplx p0, cplx p1, double bulge, int side) const;
    double clearance() const;

    Background bg_;
    double xi_, z0_;
    EllipticEndpoint alpha_;
    GCoefficients coeffs_;
    EllipticCuts cuts_;
    RiemannData riemann_;
};

/// Checked real omega and ghat(inf): RealnessViolation if |Im| >= 1e-6.
double small_omega(const EllipticSurface& s, const EllipticSpectralInput& in);
double ghat_infinity(const EllipticSurface& s, const EllipticSpectralInput& in);

struct ThetaParams {
    cplx tau;
    int truncation = 0;  // terms |l| <= truncation for |Im v| = 0
    /// N = ceil(sqrt(40 / (pi Im tau))) + 5. Throws TruncationInsufficient if
    /// Im tau <= 0.
    static ThetaParams from_tau(cplx tau);
};

/// theta3(v) = sum_l exp(i pi tau l^2 + 2 i pi l v). The window is widened by
/// |Im v| / Im tau so that the dropped tail stays below 1e-15 relative to the
/// largest term. Throws TruncationInsufficient beyond 10^6 terms.
cplx theta3(cplx v, const ThetaParams& p);

/// Theta quotient of the elliptic wave at time t.
cplx elliptic_theta_ratio(const EllipticInvariants& inv, double t);
/// (q_- + 2 alpha2 / conj q_-) * theta ratio * exp(2i (ghat_inf - G_inf t)).
cplx q_elliptic_at(const EllipticInvariants& inv, double t);

struct EllipticOptions {
    /// Inside alpha2 < collar the plane-wave value at the sector edge is used.
    double collar = 1e-4;
    ContourOptions contours;
};

/// Invariants at x/t = xi for xi in either elliptic sector (region II by the
/// mirror rule). WrongRegion elsewhere, CollarError inside the collar.
EllipticInvariants elliptic_invariants(double xi, const ScatteringData& data,
                                       const EllipticOptions& opt = {});

struct EllipticWaveResult {
    double xi = 0.0;
    cplx q;
    Region region = Region::elliptic_I;
    bool collar_fallback = false;
    double alpha2 = 0.0;
};

/// Leading-order q(x, t) in the elliptic sectors.
EllipticWaveResult q_elliptic(double x, double t, const ScatteringData& data,
                              const EllipticOptions& opt = {});

}  // namespace gi
