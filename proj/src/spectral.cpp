#include "gi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gi/errors.hpp"

namespace gi {

namespace {

constexpr cplx I{0.0, 1.0};

double rel_tol_geom(double scale) { return 1e-13 * std::max(1.0, scale); }

// Strict interior test for triangle (a, b, c).
bool in_triangle(cplx z, cplx a, cplx b, cplx c) {
    auto cross = [](cplx p, cplx q, cplx r) {
        return (q.real() - p.real()) * (r.imag() - p.imag()) -
               (q.imag() - p.imag()) * (r.real() - p.real());
    };
    const double d1 = cross(a, b, z), d2 = cross(b, c, z), d3 = cross(c, a, z);
    return (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
}

double seg_dist(cplx z, cplx a, cplx b) {
    const cplx d = b - a;
    double t = ((z - a) * std::conj(d)).real() / std::norm(d);
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

}  // namespace

Background Background::from_phases(double q0, double phase_minus, double phase_plus) {
    Background bg;
    bg.q0 = q0;
    bg.q_minus = std::polar(q0, phase_minus);
    bg.q_plus = std::polar(q0, phase_plus);
    bg.validate();
    return bg;
}

void Background::validate() const {
    if (!(q0 > 0.0) || !std::isfinite(q0)) throw ConfigError("q0 must be positive");
    if (std::abs(std::abs(q_minus) - q0) > 1e-12 * std::max(1.0, q0))
        throw ConfigError("|q_minus| differs from q0");
    if (std::abs(std::abs(q_plus) - q0) > 1e-12 * std::max(1.0, q0))
        throw ConfigError("|q_plus| differs from q0");
}

bool on_lambda_cut(cplx z, const Background& bg) {
    return z.real() == 0.0 && std::abs(z.imag()) <= bg.a();
}

cplx lambda_z(cplx z, CutSide side, const Background& bg) {
    const double a = bg.a();
    if (on_lambda_cut(z, bg)) {
        const double y = z.imag();
        if (std::abs(y) == a) return 0.0;
        if (side == CutSide::off_cut)
            throw InvalidArgument("lambda on its cut needs a side");
        const double v = std::sqrt(a * a - y * y);
        return side == CutSide::minus ? v : -v;
    }
    // 1 + (a/z)^2 in factored form: keeps full relative accuracy next to +-ia.
    const cplx ia(0.0, a);
    return z * std::sqrt((z - ia) * (z + ia) / (z * z));
}

cplx d_z(cplx z, CutSide side, const Background& bg) {
    const double a = bg.a();
    if (z.real() == 0.0 && std::abs(z.imag()) == a)
        throw BranchPointEvaluation("d is singular at the branch points");
    const cplx lam = lambda_z(z, side, bg);
    const cplx den = lam + z + a;
    if (den == 0.0) throw BranchPointEvaluation("d is singular at this boundary value");
    return 2.0 * lam / den;
}

cplx theta_phase(double xi, cplx z, const Background& bg, CutSide side) {
    return lambda_z(z, side, bg) * (xi - 2.0 * z);
}

cplx nu_plane(cplx z, const Background& bg, CutSide side) {
    const double a = bg.a();
    const cplx num = z - I * a, den = z + I * a;
    if (num == 0.0 || den == 0.0)
        throw BranchPointEvaluation("nu is singular at the branch points");
    const cplx ratio = num / den;
    if (on_lambda_cut(z, bg)) {
        if (side == CutSide::off_cut) throw InvalidArgument("nu on its cut needs a side");
        const double m = std::pow(std::abs(ratio), 0.25);
        return std::polar(m, side == CutSide::plus ? std::numbers::pi / 4 : -std::numbers::pi / 4);
    }
    return std::pow(ratio, 0.25);
}

// ------------------------------------------------------------ cuts

EllipticCuts::EllipticCuts(const Background& bg, EllipticEndpoint alpha, double junction)
    : bg_(bg), alpha_(alpha), p_(junction), vertical_(junction == alpha.alpha1) {
    if (!(alpha.alpha2 >= 0.0)) throw InvalidArgument("alpha2 must be nonnegative");
    if (alpha.alpha2 == 0.0) vertical_ = true;
}

EllipticCuts::EllipticCuts(const Background& bg, EllipticEndpoint alpha)
    : EllipticCuts(bg, alpha, alpha.alpha1) {}

bool EllipticCuts::inside_lens(cplx z) const {
    if (vertical_) return false;
    const cplx al = alpha_.alpha();
    return in_triangle(z, std::conj(al), cplx(p_, 0.0), al);
}

bool EllipticCuts::on_band_cut(cplx z) const {
    const cplx al = alpha_.alpha();
    const double tol = rel_tol_geom(std::abs(al));
    if (alpha_.alpha2 == 0.0) return std::abs(z - al) <= tol;
    if (vertical_)
        return std::abs(z.real() - alpha_.alpha1) <= tol && std::abs(z.imag()) <= alpha_.alpha2;
    const cplx p(p_, 0.0);
    return seg_dist(z, p, al) <= tol || seg_dist(z, std::conj(al), p) <= tol;
}

bool EllipticCuts::side_is_inside(CutSide side) const {
    return side == CutSide::minus ? minus_is_inside() : !minus_is_inside();
}

cplx EllipticCuts::r(cplx z, CutSide side) const {
    const double a1 = alpha_.alpha1, a2 = alpha_.alpha2;
    const cplx u = z - a1;
    if (a2 == 0.0) return u;
    const cplx al = alpha_.alpha();
    if (z == al || z == std::conj(al)) return 0.0;
    auto principal = [&] {
        const cplx ib(0.0, a2);
        return u * std::sqrt((u - ib) * (u + ib) / (u * u));
    };
    const bool on_vertical = z.real() == a1 && std::abs(z.imag()) < a2;
    if (on_band_cut(z)) {
        if (side == CutSide::off_cut) {
            // Quadrature nodes a rounding distance from a band end fall inside
            // the cut tolerance; off the exact segment the value is continuous.
            const double near = 1e-8 * std::max(1.0, std::abs(al));
            const bool end = std::abs(z - al) <= near || std::abs(z - std::conj(al)) <= near;
            const cplx p(p_, 0.0);
            if (!vertical_ && end && seg_dist(z, p, al) > 0.0 && seg_dist(z, std::conj(al), p) > 0.0)
                return inside_lens(z) ? -principal() : principal();
            throw InvalidArgument("r on its cut needs a side");
        }
        if (vertical_) {
            const double y = z.imag();
            const double v = std::sqrt(std::max(0.0, a2 * a2 - y * y));
            return side == CutSide::minus ? v : -v;
        }
        return side_is_inside(side) ? -principal() : principal();
    }
    if (on_vertical) {
        // Interior of the lens edge that is not a cut: use the outside value.
        const double y = z.imag();
        const double v = std::sqrt(a2 * a2 - y * y);
        return p_ < a1 ? v : -v;
    }
    return inside_lens(z) ? -principal() : principal();
}

cplx EllipticCuts::w(cplx z, CutSide side) const {
    if (on_lambda_cut(z, bg_)) return lambda_z(z, side, bg_) * r(z);
    if (on_band_cut(z)) return lambda_z(z, CutSide::off_cut, bg_) * r(z, side);
    return lambda_z(z, CutSide::off_cut, bg_) * r(z);
}

cplx EllipticCuts::nu(cplx z, CutSide side) const {
    const bool l5 = on_lambda_cut(z, bg_);
    const cplx f1 = nu_plane(z, bg_, l5 ? side : CutSide::off_cut);
    if (alpha_.alpha2 == 0.0) return f1;
    const cplx al = alpha_.alpha();
    const cplx num = z - al, den = z - std::conj(al);
    if (num == 0.0 || den == 0.0)
        throw BranchPointEvaluation("nu is singular at the band endpoints");
    const cplx ratio = num / den;
    const double pi4 = std::numbers::pi / 4;
    const cplx c_in = p_ < alpha_.alpha1 ? -I : I;
    const bool on_vertical = z.real() == alpha_.alpha1 && std::abs(z.imag()) < alpha_.alpha2;
    cplx f2;
    if (!l5 && on_band_cut(z)) {
        if (side == CutSide::off_cut) throw InvalidArgument("nu on its cut needs a side");
        if (vertical_)
            f2 = std::polar(std::pow(std::abs(ratio), 0.25), side == CutSide::plus ? pi4 : -pi4);
        else
            f2 = std::pow(ratio, 0.25) * (side_is_inside(side) ? c_in : cplx(1.0));
    } else if (on_vertical && !vertical_) {
        f2 = std::polar(std::pow(std::abs(ratio), 0.25), p_ < alpha_.alpha1 ? -pi4 : pi4);
    } else {
        f2 = std::pow(ratio, 0.25);
        if (inside_lens(z)) f2 *= c_in;
    }
    return f1 * f2;
}

cplx w_z(cplx z, CutSide side, EllipticEndpoint alpha, const Background& bg) {
    return EllipticCuts(bg, alpha).w(z, side);
}

cplx nu_elliptic(cplx z, EllipticEndpoint alpha, const Background& bg, CutSide side) {
    return EllipticCuts(bg, alpha).nu(z, side);
}

}  // namespace gi
