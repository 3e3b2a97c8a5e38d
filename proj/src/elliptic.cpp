#include "gi/elliptic.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "gi/errors.hpp"

namespace gi {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};
constexpr double kSqrt2 = std::numbers::sqrt2;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double point_segment_distance(cplx z, cplx a, cplx b) {
    const cplx d = b - a;
    const double t = std::clamp(((z - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

// Common points of [p, q] and [c, d]. Returns false when disjoint; sets
// overlap for collinear pieces of positive length, otherwise `at`.
bool segments_meet(cplx p, cplx q, cplx c, cplx d, cplx& at, bool& overlap) {
    overlap = false;
    const cplx r = q - p, s = d - c;
    const double scale = std::max({std::abs(r), std::abs(s), std::abs(c - p), 1e-300});
    const double den = cross(r, s);
    constexpr double eps = 1e-12;
    if (std::abs(den) <= 1e-14 * std::abs(r) * std::abs(s)) {
        if (std::abs(cross(c - p, r)) > eps * std::abs(r) * scale) return false;
        const double n = std::norm(r);
        const double t0 = ((c - p) * std::conj(r)).real() / n;
        const double t1 = ((d - p) * std::conj(r)).real() / n;
        const double lo = std::max(0.0, std::min(t0, t1)), hi = std::min(1.0, std::max(t0, t1));
        if (hi - lo > eps) {
            overlap = true;
            return true;
        }
        if (hi - lo < -eps) return false;
        at = p + lo * r;
        return true;
    }
    const double t = cross(c - p, s) / den, u = cross(c - p, r) / den;
    if (t < -eps || t > 1.0 + eps || u < -eps || u > 1.0 + eps) return false;
    at = p + t * r;
    return true;
}

QuadratureConfig tight_cfg() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    return cfg;
}

QuadratureConfig density_cfg() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-13;
    return cfg;
}

// Piecewise Chebyshev interpolants of f along the edges of a polyline.
class PolylineInterpolant {
public:
    PolylineInterpolant(const std::function<cplx(cplx)>& f, std::vector<cplx> pts, double tol)
        : pts_(std::move(pts)) {
        for (std::size_t e = 0; e + 1 < pts_.size(); ++e) {
            const cplx a = pts_[e], b = pts_[e + 1];
            parts_.emplace_back([&](double v) { return f(a + (b - a) * v); }, 0.0, 1.0, tol, 1024);
        }
    }

    std::pair<std::size_t, double> locate(cplx s) const {
        std::size_t best = 0;
        double best_d = INFINITY, best_v = 0.0;
        for (std::size_t e = 0; e < parts_.size(); ++e) {
            const cplx a = pts_[e], d = pts_[e + 1] - a;
            const double v = std::clamp(((s - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
            const double dist = std::abs(s - (a + v * d));
            if (dist < best_d) {
                best_d = dist;
                best = e;
                best_v = v;
            }
        }
        return {best, best_v};
    }

    cplx at(std::size_t e, double v) const { return parts_[e](v); }
    cplx operator()(cplx s) const {
        const auto [e, v] = locate(s);
        return at(e, v);
    }
    std::size_t edges() const { return parts_.size(); }

private:
    std::vector<cplx> pts_;
    std::vector<ChebyshevInterpolant> parts_;
};

// ln f along a polyline, on the branch continued from the first point (the
// anchor), where the principal value is taken.
class UnwoundLog {
public:
    UnwoundLog(const std::function<cplx(cplx)>& f, std::vector<cplx> pts, const char* name)
        : interp_(f, pts, 1e-10), name_(name) {
        constexpr int kSamples = 256;
        double peak = 0.0;
        for (std::size_t e = 0; e < interp_.edges(); ++e)
            for (int j = 0; j <= kSamples; ++j) peak = std::max(peak, std::abs(interp_.at(e, double(j) / kSamples)));
        if (!(peak > 0.0)) throw LogBranchFailure(std::string(name_) + " vanishes identically");
        floor_ = 1e-12 * peak;
        double prev = 0.0;
        bool first = true;
        for (std::size_t e = 0; e < interp_.edges(); ++e) {
            std::vector<double> args(kSamples + 1);
            for (int j = 0; j <= kSamples; ++j) {
                const cplx v = interp_.at(e, double(j) / kSamples);
                if (std::abs(v) <= floor_)
                    throw LogBranchFailure(std::string(name_) + " vanishes on its contour");
                double arg = std::arg(v);
                if (first) {
                    first = false;
                } else {
                    arg += 2.0 * kPi * std::round((prev - arg) / (2.0 * kPi));
                    if (std::abs(arg - prev) > 0.5 * kPi)
                        throw LogBranchFailure(std::string(name_) +
                                               " turns too fast to follow its logarithm");
                }
                args[j] = arg;
                prev = arg;
            }
            args_.push_back(std::move(args));
        }
    }

    cplx operator()(cplx s) const {
        const auto [e, v] = interp_.locate(s);
        const cplx val = interp_.at(e, v);
        if (std::abs(val) <= floor_)
            throw LogBranchFailure(std::string(name_) + " vanishes on its contour");
        const auto& a = args_[e];
        const double x = v * (a.size() - 1);
        const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(x), a.size() - 2);
        const double target = a[j] + (x - j) * (a[j + 1] - a[j]);
        cplx ln = std::log(val);
        ln += cplx(0.0, 2.0 * kPi * std::round((target - ln.imag()) / (2.0 * kPi)));
        return ln;
    }

private:
    PolylineInterpolant interp_;
    std::vector<std::vector<double>> args_;
    double floor_ = 0.0;
    const char* name_;
};

// Taylor coefficients (in u = 1/s) of the G(inf) integrand s (P/w - s + xi/4)
// at infinity, where w = s^2 sqrt((1 - alpha u)(1 - conj(alpha) u)(1 + a^2 u^2)).
// The first two vanish by the normalisation; the tail int_R^inf is then
// sum_{n>=3} e_n R^(2-n) / (n - 2).
std::vector<cplx> g_tail_series(const GCoefficients& g, cplx alpha, double a, double xi, int n) {
    std::vector<cplx> poly(n + 1, 0.0);
    const cplx p4[] = {1.0, -2.0 * alpha.real(), std::norm(alpha) + a * a, -2.0 * alpha.real() * a * a,
                       std::norm(alpha) * a * a};
    for (int k = 0; k < 5 && k <= n; ++k) poly[k] = p4[k];
    std::vector<cplx> r(n + 1, 0.0);
    r[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        cplx acc = poly[k];
        for (int j = 1; j < k; ++j) acc -= r[j] * r[k - j];
        r[k] = 0.5 * acc;
    }
    std::vector<cplx> num(n + 1, 0.0);
    const double pc[] = {1.0, g.c2, g.c1, g.c0};
    for (int k = 0; k < 4 && k <= n; ++k) num[k] = pc[k];
    std::vector<cplx> q(n + 1, 0.0);  // num / r
    for (int k = 0; k <= n; ++k) {
        cplx acc = num[k];
        for (int j = 1; j <= k; ++j) acc -= r[j] * q[k - j];
        q[k] = acc;
    }
    q[0] -= 1.0;
    if (n >= 1) q[1] += 0.25 * xi;
    return q;
}

std::vector<cplx> reversed(std::vector<cplx> v) {
    std::reverse(v.begin(), v.end());
    return v;
}

std::vector<cplx> conj_path(const std::vector<cplx>& v) {
    std::vector<cplx> out;
    for (cplx z : v) out.push_back(std::conj(z));
    return out;
}

cplx rho_from_profile(const InitialProfile& p, cplx z) {
    JostOptions opt;
    opt.abs_tol = opt.rel_tol = 1e-12;
    const cplx k = std::sqrt(z);
    const auto c = scattering_coeffs(p, k, CutSide::off_cut, opt);
    return -c.b_bar / (c.a * k);
}

cplx varrho_from_profile(const InitialProfile& p, cplx z) {
    JostOptions opt;
    opt.abs_tol = opt.rel_tol = 1e-12;
    const cplx k = std::sqrt(z);
    const auto c = scattering_coeffs(p, k, CutSide::off_cut, opt);
    return -c.b_bar / (k * c.a_bar);
}

}  // namespace

// ------------------------------------------------------------ coefficients

GCoefficients g_coefficients(double xi, double z0, EllipticEndpoint alpha, double q0) {
    const double a1 = alpha.alpha1, a2 = alpha.alpha2;
    const double m = a1 * a1 + a2 * a2;
    GCoefficients g;
    g.c2 = -(2.0 * a1 + z0);
    g.c1 = m + 2.0 * a1 * z0;
    g.c0 = -z0 * m;
    const double c2_inf = -0.25 * xi - a1;
    const double c1_inf = 0.5 * a2 * a2 + 0.25 * xi * a1 + 0.125 * std::pow(q0, 4);
    const double s2 = std::max({1.0, std::abs(a1), std::abs(z0), std::abs(xi)});
    const double s1 = std::max({1.0, m, std::abs(a1 * z0), std::abs(xi * a1), std::pow(q0, 4)});
    if (std::abs(g.c2 - c2_inf) > 1e-12 * s2 || std::abs(g.c1 - c1_inf) > 1e-12 * s1)
        throw ConsistencyViolation("g coefficients disagree with the normalisation at infinity");
    return g;
}

double EllipticInvariants::realness_residual() const {
    return std::max({std::abs(im_Omega), std::abs(im_G_inf), std::abs(omega.imag()),
                     std::abs(ghat_inf.imag())});
}

// ------------------------------------------------------------ surface

EllipticSurface::EllipticSurface(double xi, const Background& bg)
    : bg_(bg), xi_(xi), z0_(0.0), cuts_(bg, EllipticEndpoint{0.0, 1.0}) {
    bg.validate();
    if (classify(xi, bg.q0).tag != Region::elliptic_I)
        throw WrongRegion("elliptic surface needs -2 sqrt2 q0^2 < xi < 0");
    z0_ = solve_z0(xi, bg.q0);
    alpha_ = alpha_endpoint(xi, z0_, bg.q0);
    if (alpha_.alpha2 < 1e-6)
        throw DegenerateBand("alpha2 = " + std::to_string(alpha_.alpha2) + " is below 1e-6");
    coeffs_ = g_coefficients(xi, z0_, alpha_, bg.q0);
    cuts_ = EllipticCuts(bg, alpha_, z0_);
    riemann_ = riemann_data();
}

cplx EllipticSurface::poly(cplx s) const {
    return ((s + coeffs_.c2) * s + coeffs_.c1) * s + coeffs_.c0;
}

cplx EllipticSurface::dg_ratio(cplx s) const { return poly(s) / w(s); }

cplx EllipticSurface::w_at(const EdgePoint& e, CutSide side) const {
    const cplx base = w(e.s, side);
    const double a = bg_.a();
    const cplx al = alpha_.alpha();
    for (cplx b : {cplx(0.0, a), cplx(0.0, -a), al, std::conj(al)}) {
        if (e.anchor != b) continue;
        // w has a simple square-root zero at b: rescale by the exact distance.
        return base * std::sqrt(e.offset / (e.s - b));
    }
    return base;
}

double EllipticSurface::clearance() const {
    const double a = bg_.a();
    const cplx l0(0.0, -a), l1(0.0, a), al = alpha_.alpha(), p(cuts_.junction(), 0.0);
    double d = INFINITY;
    for (auto [b0, b1] : {std::pair{p, al}, std::pair{p, std::conj(al)}}) {
        d = std::min({d, point_segment_distance(l0, b0, b1), point_segment_distance(l1, b0, b1),
                      point_segment_distance(b0, l0, l1), point_segment_distance(b1, l0, l1)});
    }
    return d;
}

void EllipticSurface::check_path(const std::vector<cplx>& pts) const {
    if (pts.size() < 2) throw InvalidArgument("path needs two points");
    const double a = bg_.a();
    const cplx al = alpha_.alpha(), p(cuts_.junction(), 0.0);
    const std::pair<cplx, cplx> cuts[] = {{cplx(0.0, -a), cplx(0.0, a)}, {p, al}, {p, std::conj(al)}};
    const double tol = 1e-10 * std::max({1.0, bg_.q0 * bg_.q0, std::abs(al)});
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (const auto& [c, d] : cuts) {
            cplx at;
            bool overlap = false;
            if (!segments_meet(pts[i], pts[i + 1], c, d, at, overlap)) continue;
            if (overlap) throw PathCrossesCut("path runs along a cut");
            if (std::abs(at - pts.front()) <= tol || std::abs(at - pts.back()) <= tol) continue;
            throw PathCrossesCut("path meets a cut at " + std::to_string(at.real()) + " + " +
                                 std::to_string(at.imag()) + "i");
        }
    }
}

std::vector<cplx> EllipticSurface::bulged(cplx p0, cplx p1, double bulge, int side) const {
    const cplx d = p1 - p0;
    const cplx n = kI * d / std::abs(d);  // left normal
    return {p0, 0.5 * (p0 + p1) + static_cast<double>(side) * bulge * n, p1};
}

std::vector<cplx> EllipticSurface::route(cplx from, cplx to) const {
    const cplx al = alpha_.alpha();
    const double h = 0.5 * std::max(clearance(), 0.05 * bg_.q0 * bg_.q0);
    const cplx over = al + kI * h, under = std::conj(al) - kI * h;
    const cplx west(cuts_.junction() - h, 0.0);
    const std::vector<std::vector<cplx>> candidates = {
        {from, to},           {from, over, to},        {from, under, to},
        {from, over, west, to}, {from, under, west, to}};
    for (const auto& c : candidates) {
        bool degenerate = false;
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            if (c[i] == c[i + 1]) degenerate = true;
        if (degenerate) continue;
        try {
            check_path(c);
            return c;
        } catch (const PathCrossesCut&) {
        }
    }
    throw PathCrossesCut("no admissible path to the requested point");
}

cplx EllipticSurface::big_omega_complex(const ContourOptions& opt) const {
    const double a = bg_.a();
    const cplx al = alpha_.alpha();
    auto path_to = [&](cplx p0, cplx p1, int side_first) {
        if (opt.bulge <= 0.0) {
            std::vector<cplx> pts{p0, p1};
            check_path(pts);
            return pts;
        }
        for (int side : {side_first, -side_first}) {
            auto pts = bulged(p0, p1, opt.bulge, side);
            try {
                check_path(pts);
                return pts;
            } catch (const PathCrossesCut&) {
            }
        }
        throw PathCrossesCut("no bulged path for Omega");
    };
    auto f = [&](const EdgePoint& e) { return poly(e.s) / w_at(e); };
    const cplx I1 = integrate_edges_sqrt_ends(f, Path::polyline(path_to(cplx(0.0, -a), al, 1)),
                                              tight_cfg());
    const cplx I2 = integrate_edges_sqrt_ends(
        f, Path::polyline(path_to(cplx(0.0, a), std::conj(al), -1)), tight_cfg());
    return -4.0 * (I1 + I2);
}

double EllipticSurface::big_omega(const ContourOptions& opt) const {
    const cplx v = big_omega_complex(opt);
    if (std::abs(v.imag()) >= 1e-8)
        throw RealnessViolation("Omega has imaginary part " + std::to_string(v.imag()));
    return v.real();
}

std::pair<cplx, cplx> EllipticSurface::g_infinities_complex() const {
    const double a = bg_.a(), q4 = std::pow(bg_.q0, 4);
    const double R = 2.0 * std::max(bg_.q0 * bg_.q0, std::abs(alpha_.alpha()));
    // Past R_far the integrand is summed from its expansion at infinity; the
    // direct form cancels to roundoff there.
    const double R_far = 64.0 * std::max({1.0, a, std::abs(alpha_.alpha()), std::abs(xi_)});
    auto f = [&](cplx s) { return dg_ratio(s) - (s - 0.25 * xi_); };
    constexpr int kTerms = 14;
    const auto e = g_tail_series(coeffs_, alpha_.alpha(), a, xi_, kTerms);
    cplx tail = 0.0;
    for (int n = 3; n <= kTerms; ++n) tail += e[n] * std::pow(R_far, 2 - n) / double(n - 2);
    // On [R, R_far] the subtraction leaves roundoff of size s * eps per sample.
    QuadratureConfig far_cfg = tight_cfg();
    far_cfg.abs_tol = 1e3 * R_far * R_far * std::numeric_limits<double>::epsilon();
    const cplx straight = integrate_interval([&](double x) { return f(cplx(x, 0.0)); }, R, R_far, far_cfg);
    cplx total = 0.0;
    for (double sg : {-1.0, 1.0}) {
        const std::vector<cplx> pts{cplx(0.0, sg * a), cplx(R, sg * a), cplx(R, 0.0)};
        check_path(pts);
        total += integrate_edges_sqrt_ends(
                     [&](const EdgePoint& e) { return poly(e.s) / w_at(e) - (e.s - 0.25 * xi_); },
                     Path::polyline(pts), tight_cfg()) +
                 straight + tail;
    }
    const cplx G = -2.0 * total - 0.25 * q4;
    return {G - 0.25 * q4, G};
}

std::pair<double, double> EllipticSurface::g_infinities() const {
    const auto [g, G] = g_infinities_complex();
    if (std::abs(G.imag()) >= 1e-8)
        throw RealnessViolation("G(inf) has imaginary part " + std::to_string(G.imag()));
    return {g.real(), G.real()};
}

RiemannData EllipticSurface::riemann_data(const ContourOptions& opt) const {
    const double a = bg_.a();
    const cplx al = alpha_.alpha();
    const QuadratureConfig cfg = tight_cfg();
    auto inv_w = [&](const EdgePoint& e) { return 1.0 / w_at(e); };
    // b-period: int over L5 of ds / w-, or the same along a path on the right.
    cplx bper;
    if (opt.bulge <= 0.0) {
        bper = integrate_edges_sqrt_ends([&](const EdgePoint& e) { return 1.0 / w_at(e, CutSide::minus); },
                                         Path::segment(cplx(0.0, -a), cplx(0.0, a)), cfg);
    } else {
        const auto pts = bulged(cplx(0.0, -a), cplx(0.0, a), opt.bulge, -1);
        check_path(pts);
        bper = integrate_edges_sqrt_ends(inv_w, Path::polyline(pts), cfg);
    }
    RiemannData rd;
    rd.c = 1.0 / (2.0 * bper);
    std::vector<cplx> pts{cplx(0.0, a), al};
    if (opt.bulge > 0.0) {
        bool ok = false;
        for (int side : {-1, 1}) {
            pts = bulged(cplx(0.0, a), al, opt.bulge, side);
            try {
                check_path(pts);
                ok = true;
                break;
            } catch (const PathCrossesCut&) {
            }
        }
        if (!ok) throw PathCrossesCut("no bulged path for tau");
    } else {
        check_path(pts);
    }
    rd.tau = -2.0 * rd.c * integrate_edges_sqrt_ends(inv_w, Path::polyline(pts), cfg);
    // Independent b-cycle: an anticlockwise diamond around L5 that leaves B outside.
    const double hx = 0.5 * clearance(), hy = std::max(hx, 0.25 * a);
    const std::vector<cplx> loop{cplx(0.0, -a - hy), cplx(hx, 0.0), cplx(0.0, a + hy),
                                 cplx(-hx, 0.0), cplx(0.0, -a - hy)};
    for (std::size_t i = 0; i + 1 < loop.size(); ++i) check_path({loop[i], loop[i + 1]});
    const cplx oint = rd.c * integrate_contour([&](cplx s) { return 1.0 / w(s); },
                                               Path::polyline(loop), cfg);
    rd.b_residual = std::abs(oint - 1.0);
    return rd;
}

cplx EllipticSurface::abel_map(cplx z, CutSide side) const {
    const double a = bg_.a();
    const cplx start(0.0, a);
    if (z == start) return 0.0;
    const bool on_l5 = on_lambda_cut(z, bg_);
    const bool on_b = !on_l5 && cuts_.on_band_cut(z);
    const bool branch = z == std::conj(start) || z == alpha_.alpha() || z == std::conj(alpha_.alpha());
    auto inv_w = [&](const EdgePoint& e) { return 1.0 / w_at(e); };
    std::vector<cplx> pts;
    if ((on_l5 || on_b) && !branch) {
        if (side == CutSide::off_cut) throw InvalidArgument("U on a cut needs a side");
        // Unit tangent of the upward orientation at z, left normal = i * tangent.
        cplx tangent(0.0, 1.0);
        if (on_b) {
            const cplx p(cuts_.junction(), 0.0), al = alpha_.alpha();
            tangent = z.imag() >= 0.0 ? al - p : p - std::conj(al);
            tangent /= std::abs(tangent);
        }
        const cplx normal = (side == CutSide::plus ? 1.0 : -1.0) * kI * tangent;
        const cplx pre = z + 0.25 * clearance() * normal;
        pts = route(start, pre);
        pts.push_back(z);
    } else {
        pts = route(start, z);
    }
    return riemann_.c * integrate_edges_sqrt_ends(inv_w, Path::polyline(pts), tight_cfg());
}

cplx EllipticSurface::U_inf() const {
    const double a = bg_.a();
    const double R = 2.0 * std::max(bg_.q0 * bg_.q0, std::abs(alpha_.alpha()));
    const std::vector<cplx> pts{cplx(0.0, a), cplx(R, a), cplx(R, 0.0)};
    check_path(pts);
    auto inv_w = [&](const EdgePoint& e) { return 1.0 / w_at(e); };
    return riemann_.c * (integrate_edges_sqrt_ends(inv_w, Path::polyline(pts), tight_cfg()) +
                         integrate_contour([&](cplx s) { return 1.0 / w(s); }, Path::ray(R, 1.0),
                                           tight_cfg()));
}

double EllipticSurface::z_star() const {
    const double q2 = bg_.q0 * bg_.q0;
    return q2 * alpha_.alpha1 / (q2 + 2.0 * alpha_.alpha2);
}

cplx EllipticSurface::U0() const { return abel_map(z_star()) + 0.5 * (1.0 + riemann_.tau); }

EllipticSurface::OmegaParts EllipticSurface::omega_parts(const EllipticSpectralInput& in,
                                                         const ContourOptions& opt) const {
    const double a = bg_.a(), q0 = bg_.q0;
    const cplx al = alpha_.alpha(), p(cuts_.junction(), 0.0);
    const cplx lo(0.0, -a), hi(0.0, a);
    const bool bulge = opt.bulge > 0.0;
    const QuadratureConfig cfg = density_cfg();

    // L5. On the cut the density is paired with w-; a bulged path must run on
    // the left (the root sqrt(-s) is cut along the positive axis), where
    // w = w+ = -w-.
    std::vector<cplx> l5 = bulge ? bulged(lo, hi, opt.bulge, 1) : std::vector<cplx>{lo, 0.0, hi};
    if (bulge) check_path(l5);
    const double sign5 = bulge ? -1.0 : 1.0;
    const PolylineInterpolant ld5(in.log_delta, bulge ? l5 : std::vector<cplx>{lo, hi}, 1e-12);
    auto w5 = [&](const EdgePoint& e) { return bulge ? w_at(e) : w_at(e, CutSide::minus); };
    auto A5 = [&](cplx s) {
        if (!bulge) s = cplx(0.0, s.imag());
        return -std::log(2.0 * std::sqrt(-s) / q0) + 2.0 * ld5(s);
    };

    // L6 from the junction to alpha, L7 its mirror image; bulges go to the
    // right of the upward orientation of B, where w continues w-.
    std::vector<cplx> l6 = bulge ? bulged(p, al, opt.bulge, -1) : std::vector<cplx>{p, al};
    std::vector<cplx> l7 = conj_path(l6);
    if (bulge) {
        check_path(l6);
        check_path(l7);
    }
    auto wB = [&](const EdgePoint& e) { return bulge ? w_at(e) : w_at(e, CutSide::minus); };
    const UnwoundLog ln_rho(in.rho, reversed(l6), "rho");
    const UnwoundLog ln_rho_bar(in.rho_bar, reversed(l7), "conj rho");
    std::map<std::pair<double, double>, cplx> memo;
    auto ld = [&](cplx s) {
        const auto key = std::make_pair(s.real(), s.imag());
        const auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const cplx v = in.log_delta(s);
        memo.emplace(key, v);
        return v;
    };
    auto f6 = [&](cplx s) { return 2.0 * ld(s) - std::log(s) - ln_rho(s) + kI * kPi; };
    auto f7 = [&](cplx s) { return ln_rho_bar(s) + 2.0 * ld(s); };

    auto integ = [&](const std::vector<cplx>& pts, const std::function<cplx(const EdgePoint&)>& g) {
        return integrate_edges_sqrt_ends(g, Path::polyline(pts), cfg);
    };
    OmegaParts r;
    r.n5 = sign5 * integ(l5, [&](const EdgePoint& e) { return A5(e.s) / w5(e); });
    r.n6 = integ(l6, [&](const EdgePoint& e) { return f6(e.s) / wB(e); });
    r.n7 = integ(l7, [&](const EdgePoint& e) { return f7(e.s) / wB(e); });
    r.D6 = integ(l6, [&](const EdgePoint& e) { return 1.0 / wB(e); });
    r.D7 = integ(l7, [&](const EdgePoint& e) { return 1.0 / wB(e); });
    const cplx den = r.D6 - r.D7;
    if (std::abs(den) == 0.0) throw DegenerateBand("the a-period of ds/w vanishes");
    r.omega = kI * (r.n5 + r.n6 - r.n7) / den;

    const cplx m5 = sign5 * integ(l5, [&](const EdgePoint& e) { return A5(e.s) * e.s / w5(e); });
    const cplx m6 =
        integ(l6, [&](const EdgePoint& e) { return (f6(e.s) + kI * r.omega) * e.s / wB(e); });
    const cplx m7 =
        integ(l7, [&](const EdgePoint& e) { return (f7(e.s) + kI * r.omega) * e.s / wB(e); });
    r.ghat_inf = -(m5 + m6 - m7) / (2.0 * kPi);
    return r;
}

EllipticInvariants EllipticSurface::invariants(const EllipticSpectralInput& in,
                                               const ContourOptions& opt) const {
    EllipticInvariants inv;
    inv.xi = xi_;
    inv.z0 = z0_;
    inv.alpha = alpha_;
    inv.coeffs = coeffs_;
    const cplx Om = big_omega_complex(opt);
    inv.Omega = Om.real();
    inv.im_Omega = Om.imag();
    const auto [g, G] = g_infinities_complex();
    inv.G_inf = G.real();
    inv.g_inf = g.real();
    inv.im_G_inf = G.imag();
    const RiemannData rd = opt.bulge > 0.0 ? riemann_data(opt) : riemann_;
    inv.c_norm = rd.c;
    inv.tau = rd.tau;
    inv.b_residual = rd.b_residual;
    inv.U_inf = U_inf();
    inv.z_star = z_star();
    inv.U0 = U0();
    const OmegaParts op = omega_parts(in, opt);
    inv.omega = op.omega;
    inv.ghat_inf = op.ghat_inf;
    inv.q_minus = in.bg.q_minus;
    return inv;
}

double small_omega(const EllipticSurface& s, const EllipticSpectralInput& in) {
    const cplx v = s.omega_parts(in).omega;
    if (std::abs(v.imag()) >= 1e-6)
        throw RealnessViolation("omega has imaginary part " + std::to_string(v.imag()));
    return v.real();
}

double ghat_infinity(const EllipticSurface& s, const EllipticSpectralInput& in) {
    const cplx v = s.omega_parts(in).ghat_inf;
    if (std::abs(v.imag()) >= 1e-6)
        throw RealnessViolation("ghat(inf) has imaginary part " + std::to_string(v.imag()));
    return v.real();
}

// ------------------------------------------------------------ spectral input

EllipticSpectralInput spectral_input_I(const ScatteringData& data, double z0) {
    EllipticSpectralInput in;
    in.bg = data.bg;
    in.log_delta = [data, z0](cplx s) { return log_delta(s, z0, data, PlaneRegion::I); };
    if (data.has_profile()) {
        const InitialProfile prof = data.profile();
        in.rho = [prof](cplx s) { return rho_from_profile(prof, s); };
    } else {
        in.rho = [data](cplx s) { return data.rho_c(s); };
    }
    in.rho_bar = [rho = in.rho](cplx s) { return std::conj(rho(std::conj(s))); };
    return in;
}

EllipticSpectralInput spectral_input_II(const ScatteringData& data, double z0) {
    EllipticSpectralInput in;
    in.bg = data.bg;
    std::swap(in.bg.q_minus, in.bg.q_plus);
    in.log_delta = [data, z0](cplx s) { return -log_delta(-s, -z0, data, PlaneRegion::II); };
    if (data.has_profile()) {
        const InitialProfile prof = data.profile();
        in.rho = [prof](cplx s) { return varrho_from_profile(prof, -s); };
    } else {
        in.rho = [data](cplx s) { return data.varrho_c(-s); };
    }
    in.rho_bar = [rho = in.rho](cplx s) { return std::conj(rho(std::conj(s))); };
    return in;
}

// ------------------------------------------------------------ theta

ThetaParams ThetaParams::from_tau(cplx tau) {
    if (!(tau.imag() > 0.0)) throw TruncationInsufficient("theta3 needs Im tau > 0");
    ThetaParams p;
    p.tau = tau;
    p.truncation = static_cast<int>(std::ceil(std::sqrt(40.0 / (kPi * tau.imag())))) + 5;
    return p;
}

cplx theta3(cplx v, const ThetaParams& p) {
    const double it = p.tau.imag();
    if (!(it > 0.0)) throw TruncationInsufficient("theta3 needs Im tau > 0");
    // |term l| = exp(-pi Im tau (l - l*)^2 + const) with l* = -Im v / Im tau.
    const double centre = -v.imag() / it;
    if (!std::isfinite(centre) || std::abs(centre) + p.truncation > 1e6)
        throw TruncationInsufficient("theta3 argument needs more than 10^6 terms");
    const long lo = static_cast<long>(std::floor(centre)) - p.truncation;
    const long hi = static_cast<long>(std::ceil(centre)) + p.truncation;
    cplx sum = 0.0;
    for (long l = lo; l <= hi; ++l) {
        const double ld = static_cast<double>(l);
        sum += std::exp(kI * kPi * p.tau * (ld * ld) + 2.0 * kI * kPi * ld * v);
    }
    return sum;
}

// ------------------------------------------------------------ wave

cplx elliptic_theta_ratio(const EllipticInvariants& inv, double t) {
    const ThetaParams tp = ThetaParams::from_tau(inv.tau);
    const cplx X = -inv.Omega * t / (2.0 * kPi) + inv.omega / (2.0 * kPi) +
                   kI * std::log(std::conj(inv.q_minus) / 2.0) / (2.0 * kPi);
    const cplx num = theta3(-inv.U_inf + inv.U0 + X, tp) * theta3(inv.U_inf + inv.U0, tp);
    const cplx den = theta3(inv.U_inf + inv.U0 + X, tp) * theta3(-inv.U_inf + inv.U0, tp);
    if (std::abs(den) == 0.0) throw NonFiniteSample("theta denominator vanishes");
    return num / den;
}

cplx q_elliptic_at(const EllipticInvariants& inv, double t) {
    const cplx qm = inv.q_minus;
    const cplx pre = qm + 2.0 * inv.alpha.alpha2 / std::conj(qm);
    return pre * elliptic_theta_ratio(inv, t) * std::exp(2.0 * kI * (inv.ghat_inf - inv.G_inf * t));
}

namespace {

struct SectorSetup {
    Region tag;
    double xi_I;
    double z0;
    EllipticEndpoint alpha;
};

SectorSetup sector_setup(double xi, double q0) {
    const Region tag = classify(xi, q0).tag;
    if (tag != Region::elliptic_I && tag != Region::elliptic_II)
        throw WrongRegion("xi = " + std::to_string(xi) + " is not in an elliptic sector");
    SectorSetup s;
    s.tag = tag;
    s.xi_I = tag == Region::elliptic_I ? xi : -xi;
    s.z0 = solve_z0(s.xi_I, q0);
    s.alpha = alpha_endpoint(s.xi_I, s.z0, q0);
    return s;
}

}  // namespace

EllipticInvariants elliptic_invariants(double xi, const ScatteringData& data,
                                       const EllipticOptions& opt) {
    const SectorSetup s = sector_setup(xi, data.bg.q0);
    if (s.alpha.alpha2 < opt.collar)
        throw CollarError("alpha2 = " + std::to_string(s.alpha.alpha2) +
                          " is inside the boundary collar; use the plane-wave fallback");
    const EllipticSpectralInput in = s.tag == Region::elliptic_I ? spectral_input_I(data, s.z0)
                                                                 : spectral_input_II(data, s.z0);
    const EllipticSurface surf(s.xi_I, in.bg);
    return surf.invariants(in, opt.contours);
}

EllipticWaveResult q_elliptic(double x, double t, const ScatteringData& data,
                              const EllipticOptions& opt) {
    if (!(t > 0.0)) throw InvalidArgument("t must be positive");
    EllipticWaveResult r;
    r.xi = x / t;
    const SectorSetup s = sector_setup(r.xi, data.bg.q0);
    r.region = s.tag;
    r.alpha2 = s.alpha.alpha2;
    if (s.alpha.alpha2 < opt.collar) {
        // The band has (numerically) closed: continue the plane wave of the
        // neighbouring sector from its edge.
        const double edge = 2.0 * kSqrt2 * data.bg.q0 * data.bg.q0;
        r.collar_fallback = true;
        if (s.tag == Region::elliptic_I)
            r.q = data.bg.q_minus * std::exp(-2.0 * kI * phi_I(-edge, data));
        else
            r.q = data.bg.q_plus * std::exp(2.0 * kI * phi_II(edge, data));
        return r;
    }
    r.q = q_elliptic_at(elliptic_invariants(r.xi, data, opt), t);
    return r;
}

}  // namespace gi
