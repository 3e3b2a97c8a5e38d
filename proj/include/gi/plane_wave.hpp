#pragma once
// delta(z), the plane-wave phases phi (x < -2 sqrt2 q0^2 t) and phi-tilde
// (x > 2 sqrt2 q0^2 t), and the leading-order plane wave.

#include "gi/regions.hpp"
#include "gi/scattering.hpp"

namespace gi {

/// I: ray (-inf, split] with density ln(1 - u rho conj rho), prefactor 1/(2 pi i).
/// II: ray [split, +inf) with density ln(1 - u varrho conj varrho), prefactor i/(2 pi).
enum class PlaneRegion { I, II };

struct PlaneWaveResult {
    double xi = 0.0;
    double phase = 0.0;  // phi or phi-tilde
    cplx q_leading;
    PlaneRegion region = PlaneRegion::I;
};

/// ln delta(z). Throws PointOnContour if z lies on the ray and
/// SignAssumptionViolated if 1 - u rho conj rho <= 0 on it.
cplx log_delta(cplx z, double split, const ScatteringData& data, PlaneRegion region,
               const QuadratureConfig& cfg = {});
cplx delta_fn(cplx z, double split, const ScatteringData& data, PlaneRegion region,
              const QuadratureConfig& cfg = {});

/// (1/2pi) int_{L5, upward} ln(2 sqrt(-s)/q0) / lambda+(s) ds: the phase left
/// when the reflection is switched off.
double phi_const(const Background& bg);

/// phi as a complex number (for realness diagnostics), and the checked real value.
/// Defined for xi <= -2 sqrt2 q0^2 (phi) and xi >= 2 sqrt2 q0^2 (phi-tilde),
/// edges included; WrongRegion elsewhere.
cplx phi_I_complex(double xi, const ScatteringData& data);
double phi_I(double xi, const ScatteringData& data);
cplx phi_II_complex(double xi, const ScatteringData& data);
double phi_II(double xi, const ScatteringData& data);

/// q_- e^{-2i phi} in region I, q_+ e^{2i phi-tilde} in region II.
/// Edges included; WrongRegion for xi in the open elliptic sectors and at xi = 0.
PlaneWaveResult q_plane_wave(double x, double t, const ScatteringData& data);

}  // namespace gi
