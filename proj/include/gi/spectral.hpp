#pragma once
// Scalar spectral functions in the z = k^2 plane.
//
// Cut conventions used throughout the library:
//   * L5 = [-ia, ia] with a = q0^2/2, oriented upward.
//   * B  = band cut joining conj(alpha) and alpha, oriented upward. It is a
//     chevron conj(alpha) -> p -> alpha through a real junction p, or the
//     vertical segment when p == alpha1.
//   * CutSide::plus is the left side of an oriented cut, minus the right.
// With these choices nu+ = i nu- and w = w- = -w+ on L5 u B.

#include <complex>

#include "gi/quadrature.hpp"

namespace gi {

struct Background {
    cplx q_minus{1.0, 0.0};
    cplx q_plus{1.0, 0.0};
    double q0 = 1.0;

    static Background from_phases(double q0, double phase_minus, double phase_plus);
    /// Throws ConfigError unless |q_minus| = |q_plus| = q0 > 0.
    void validate() const;
    double a() const { return 0.5 * q0 * q0; }
};

enum class CutSide { plus, minus, off_cut };

struct EllipticEndpoint {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    cplx alpha() const { return {alpha1, alpha2}; }
};

/// True when z lies on the closed segment [-ia, ia].
bool on_lambda_cut(cplx z, const Background& bg);

/// lambda(z) = sqrt(z^2 + a^2), cut on L5, lambda ~ z at infinity.
cplx lambda_z(cplx z, CutSide side, const Background& bg);

/// d(z) = 2 lambda / (lambda + z + a).
cplx d_z(cplx z, CutSide side, const Background& bg);

/// theta(xi; z) = lambda(z) (xi - 2z).
cplx theta_phase(double xi, cplx z, const Background& bg, CutSide side = CutSide::off_cut);

/// nu(z) = ((z - ia)/(z + ia))^(1/4), principal root.
cplx nu_plane(cplx z, const Background& bg, CutSide side = CutSide::off_cut);

/// Geometry of the two cuts of the genus-one surface.
class EllipticCuts {
public:
    /// junction: real point where the band cut crosses the axis.
    EllipticCuts(const Background& bg, EllipticEndpoint alpha, double junction);
    /// Vertical band cut (junction = alpha1).
    EllipticCuts(const Background& bg, EllipticEndpoint alpha);

    const Background& background() const { return bg_; }
    const EllipticEndpoint& endpoint() const { return alpha_; }
    double junction() const { return p_; }
    bool vertical() const { return vertical_; }

    /// Point strictly inside the triangle conj(alpha), p, alpha.
    bool inside_lens(cplx z) const;
    /// True when z lies on B (within a relative tolerance).
    bool on_band_cut(cplx z) const;

    /// r(z) ~ z - alpha1 at infinity, r^2 = (z - alpha)(z - conj alpha), cut B.
    cplx r(cplx z, CutSide side = CutSide::off_cut) const;
    /// w(z) = lambda(z) r(z), w ~ z^2 at infinity.
    cplx w(cplx z, CutSide side = CutSide::off_cut) const;
    /// nu(z) with nu^4 = (z-ia)(z-alpha)/((z+ia)(z-conj alpha)).
    cplx nu(cplx z, CutSide side = CutSide::off_cut) const;

private:
    // true when the minus (right) side of B faces the inside of the lens.
    bool minus_is_inside() const { return p_ < alpha_.alpha1; }
    bool side_is_inside(CutSide side) const;

    Background bg_;
    EllipticEndpoint alpha_;
    double p_;
    bool vertical_;
};

/// w with the vertical band cut.
cplx w_z(cplx z, CutSide side, EllipticEndpoint alpha, const Background& bg);
/// nu_elliptic with the vertical band cut.
cplx nu_elliptic(cplx z, EllipticEndpoint alpha, const Background& bg,
                 CutSide side = CutSide::off_cut);

}  // namespace gi
