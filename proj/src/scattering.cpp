#include "gi/scattering.hpp"

#include <boost/math/interpolators/makima.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <thread>

#include "gi/errors.hpp"

namespace gi {

namespace {

constexpr cplx I{0.0, 1.0};

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Width of the tanh phase step beyond which the tails are reached to ~1e-12.
constexpr double kPhaseStepScale = 1.75;

cplx wr(const Mat2& A, int ca, const Mat2& B, int cb) {
    return A[0][ca] * B[1][cb] - A[1][ca] * B[0][cb];
}

using State = std::array<cplx, 4>;  // column-major 2x2: (m00, m10, m01, m11)

// makima on one half-line in the variable log|z|, for real and imaginary parts.
struct HalfLineSpline {
    using Interp = boost::math::interpolators::makima<std::vector<double>>;
    std::optional<Interp> re, im;
    double u_lo = 0.0, u_hi = 0.0;
    cplx v_lo, v_hi;

    HalfLineSpline() = default;
    HalfLineSpline(std::vector<double> u, const std::vector<cplx>& v) {
        u_lo = u.front();
        u_hi = u.back();
        v_lo = v.front();
        v_hi = v.back();
        std::vector<double> r(v.size()), i(v.size());
        for (std::size_t n = 0; n < v.size(); ++n) {
            r[n] = v[n].real();
            i[n] = v[n].imag();
        }
        std::vector<double> u2 = u;
        re.emplace(std::move(u), std::move(r));
        im.emplace(std::move(u2), std::move(i));
    }
    bool empty() const { return !re.has_value(); }
    cplx operator()(double absz) const {
        const double u = std::log(absz);
        if (u <= u_lo) return v_lo;
        if (u >= u_hi) {
            // rho decays at least like z^-2 beyond the table.
            const double ratio = std::exp(u_hi - u);
            return v_hi * ratio * ratio;
        }
        return {(*re)(u), (*im)(u)};
    }
};

}  // namespace

// ------------------------------------------------------------ profiles

Background InitialProfile::background() const {
    Background bg;
    bg.q0 = std::abs(q_minus);
    bg.q_minus = q_minus;
    bg.q_plus = q_plus;
    bg.validate();
    return bg;
}

InitialProfile InitialProfile::constant(double q0, double phase) {
    if (!(q0 > 0.0)) throw ConfigError("q0 must be positive");
    InitialProfile p;
    p.family = "constant";
    const cplx q = std::polar(q0, phase);
    p.q_minus = p.q_plus = q;
    p.evaluate = [q](double) { return q; };
    p.decay_scale = 1.0;
    return p;
}

InitialProfile InitialProfile::phase_step(double q0, double phase_minus, double phase_plus,
                                          double ell, double x0) {
    if (!(q0 > 0.0)) throw ConfigError("q0 must be positive");
    if (!(ell > 0.0)) throw ConfigError("phase step width must be positive");
    InitialProfile p;
    p.family = "phase_step";
    p.q_minus = std::polar(q0, phase_minus);
    p.q_plus = std::polar(q0, phase_plus);
    p.evaluate = [=](double x) {
        const double s = 0.5 * (1.0 + std::tanh((x - x0) / ell));
        return std::polar(q0, phase_minus + (phase_plus - phase_minus) * s);
    };
    p.decay_scale = kPhaseStepScale * ell + std::abs(x0) / 8.0;
    return p;
}

InitialProfile InitialProfile::bump(double q0, cplx eps, double x0, double sigma,
                                    double phase_minus, double phase_plus) {
    if (!(sigma > 0.0)) throw ConfigError("bump width must be positive");
    InitialProfile base = phase_step(q0, phase_minus, phase_plus, sigma, x0);
    InitialProfile p = base;
    p.family = "bump";
    p.evaluate = [base, eps, x0, sigma](double x) {
        const double u = (x - x0) / sigma;
        return base.evaluate(x) + eps * std::exp(-0.5 * u * u);
    };
    // The Gaussian reaches 1e-12 relative at about 7.4 sigma.
    const double gauss = std::sqrt(2.0 * std::log(std::max(1.0, std::abs(eps)) * 1e12)) / 8.0;
    const double step = phase_minus == phase_plus ? 0.0 : kPhaseStepScale;
    p.decay_scale = sigma * std::max(gauss, step) + std::abs(x0) / 8.0;
    return p;
}

// ------------------------------------------------------------ Jost solutions

Mat2 background_eigenvectors(cplx k, cplx q, CutSide side) {
    const double q0 = std::abs(q);
    Background bg;
    bg.q0 = q0;
    bg.q_minus = bg.q_plus = q;
    const cplx z = k * k;
    const cplx lam = lambda_z(z, side, bg);
    const cplx den = lam + z + bg.a();
    if (den == 0.0) throw BranchPointEvaluation("background eigenvectors degenerate");
    // (lambda - k^2 - a)/(k conj q) rewritten without cancellation.
    Mat2 E;
    E[0][0] = 1.0;
    E[1][1] = 1.0;
    E[0][1] = -k * q / den;
    E[1][0] = -k * std::conj(q) / den;
    return E;
}

JostPair jost_solutions(const InitialProfile& profile, cplx k, CutSide side,
                        const JostOptions& opt) {
    namespace ode = boost::numeric::odeint;
    if (k == 0.0) throw InvalidArgument("k = 0 is excluded from the spectrum");
    const Background bg = profile.background();
    const cplx z = k * k;
    const cplx lam = lambda_z(z, side, bg);
    const double L = opt.half_width > 0.0 ? opt.half_width : 8.0 * profile.decay_scale;
    const double x_lo = -L, x_hi = L;
    if (std::abs(profile.evaluate(x_lo) - profile.q_minus) > 1e-8 ||
        std::abs(profile.evaluate(x_hi) - profile.q_plus) > 1e-8)
        throw TailNotReached("profile has not reached its tails at the integration ends");

    auto rhs = [&](const State& m, State& dm, double x) {
        const cplx q = profile.evaluate(x);
        const double n2 = std::norm(q);
        const cplx x00 = I * (k * k + 0.5 * n2), x01 = I * k * q;
        const cplx x10 = -I * k * std::conj(q), x11 = -x00;
        // Column 1 carries -i lambda, column 2 +i lambda.
        dm[0] = x00 * m[0] + x01 * m[1] - I * lam * m[0];
        dm[1] = x10 * m[0] + x11 * m[1] - I * lam * m[1];
        dm[2] = x00 * m[2] + x01 * m[3] + I * lam * m[2];
        dm[3] = x10 * m[2] + x11 * m[3] + I * lam * m[3];
    };

    auto integrate = [&](const Mat2& E, double from, double to) {
        State s{E[0][0], E[1][0], E[0][1], E[1][1]};
        // Capping the step keeps the oscillatory mode inside the stability
        // region; otherwise roundoff in a flat tail is amplified up to tol.
        const double max_dt = 2.0 / (2.0 * std::abs(lam) + std::abs(k) * bg.q0 + 1.0);
        auto stepper = ode::make_controlled(opt.abs_tol, opt.rel_tol, max_dt,
                                            ode::runge_kutta_dopri5<State>());
        long steps = 0;
        // odeint clamps steps to +max_dt, so always march forward in u = dir (x - from).
        const double dir = to > from ? 1.0 : -1.0;
        auto rhs_u = [&](const State& m, State& dm, double u) {
            rhs(m, dm, from + dir * u);
            if (dir < 0.0)
                for (cplx& v : dm) v = -v;
        };
        const double span = std::abs(to - from);
        const double h0 = std::min(max_dt, 1e-2 * std::max(1.0, span));
        ode::integrate_adaptive(stepper, rhs_u, s, 0.0, span, h0, [&](const State& st, double) {
            if (++steps > 2000000) throw StiffIntegration("Jost integration exceeded step budget");
            for (const cplx& v : st)
                if (!finite(v)) throw StiffIntegration("Jost integration produced non-finite values");
        });
        Mat2 M;
        M[0][0] = s[0];
        M[1][0] = s[1];
        M[0][1] = s[2];
        M[1][1] = s[3];
        return M;
    };

    JostPair out;
    out.x_match = 0.0;
    out.mu_minus = integrate(background_eigenvectors(k, profile.q_minus, side), x_lo, 0.0);
    out.mu_plus = integrate(background_eigenvectors(k, profile.q_plus, side), x_hi, 0.0);
    return out;
}

ScatteringCoefficients scattering_coeffs(const InitialProfile& profile, cplx k, CutSide side,
                                         const JostOptions& opt) {
    const JostPair J = jost_solutions(profile, k, side, opt);
    const Background bg = profile.background();
    const cplx d = d_z(k * k, side, bg);
    if (std::abs(d) < 1e-300) throw BranchPointEvaluation("d vanishes");
    const Mat2 &m = J.mu_minus, &p = J.mu_plus;
    ScatteringCoefficients c;
    // Matching at x = 0, so the exponential factors of the Wronskians are 1.
    c.a = wr(p, 0, m, 1) / d;
    c.b = wr(m, 1, p, 1) / d;
    c.a_bar = wr(m, 0, p, 1) / d;
    c.b_bar = wr(p, 0, m, 0) / d;
    return c;
}

// ------------------------------------------------------------ ScatteringData

struct ScatteringData::Impl {
    std::optional<InitialProfile> profile;
    Fn rho_fn, varrho_fn;  // synthetic data
    HalfLineSpline rho_pos, rho_neg, varrho_pos, varrho_neg;
};

ScatteringData ScatteringData::synthetic(const Background& bg, Fn rho, Fn varrho) {
    bg.validate();
    ScatteringData d;
    d.bg = bg;
    auto impl = std::make_shared<Impl>();
    impl->rho_fn = std::move(rho);
    impl->varrho_fn = std::move(varrho);
    d.impl_ = impl;
    return d;
}

bool ScatteringData::has_profile() const { return impl_ && impl_->profile.has_value(); }

const InitialProfile& ScatteringData::profile() const {
    if (!has_profile()) throw InvalidArgument("scattering data has no profile");
    return *impl_->profile;
}

cplx ScatteringData::rho(double z) const {
    if (!impl_) throw InvalidArgument("empty scattering data");
    if (z == 0.0) throw InvalidArgument("rho is not evaluated at z = 0");
    if (impl_->rho_fn) return impl_->rho_fn(z);
    return z > 0 ? impl_->rho_pos(z) : impl_->rho_neg(-z);
}

cplx ScatteringData::varrho(double z) const {
    if (!impl_) throw InvalidArgument("empty scattering data");
    if (z == 0.0) throw InvalidArgument("varrho is not evaluated at z = 0");
    if (impl_->varrho_fn) return impl_->varrho_fn(z);
    return z > 0 ? impl_->varrho_pos(z) : impl_->varrho_neg(-z);
}

cplx ScatteringData::rho_c(cplx z) const {
    if (!impl_) throw InvalidArgument("empty scattering data");
    if (impl_->rho_fn) return impl_->rho_fn(z);
    const cplx k = std::sqrt(z);
    const auto c = scattering_coeffs(*impl_->profile, k);
    return -c.b_bar / (c.a * k);
}

cplx ScatteringData::varrho_c(cplx z) const {
    if (!impl_) throw InvalidArgument("empty scattering data");
    if (impl_->varrho_fn) return impl_->varrho_fn(z);
    const cplx k = std::sqrt(z);
    const auto c = scattering_coeffs(*impl_->profile, k);
    return -c.b_bar / (c.a_bar * k);
}

std::vector<double> default_z_grid(double q0, int n_per_side) {
    if (n_per_side < 4) throw InvalidArgument("z grid needs at least 4 points per side");
    const double R = 40.0 * std::max(1.0, q0 * q0);
    std::vector<double> pos(n_per_side);
    for (int i = 0; i < n_per_side; ++i)
        pos[i] = std::exp(-std::log(R) + 2.0 * std::log(R) * i / (n_per_side - 1));
    std::vector<double> g;
    g.reserve(2 * n_per_side);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) g.push_back(-*it);
    g.insert(g.end(), pos.begin(), pos.end());
    return g;
}

ScatteringData reflection_table(const InitialProfile& profile, const std::vector<double>& z_grid) {
    ScatteringData d;
    d.bg = profile.background();
    const std::size_t n = z_grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (z_grid[i] == 0.0) throw InvalidArgument("z grid must avoid z = 0");
        if (i > 0 && !(z_grid[i] > z_grid[i - 1])) throw InvalidArgument("z grid must increase");
    }
    d.z_grid = z_grid;
    d.k_grid.resize(n);
    d.a_values.resize(n);
    d.b_values.resize(n);
    d.rho_values.resize(n);
    d.varrho_values.resize(n);
    d.unitarity_residual.resize(n);
    std::vector<ScatteringCoefficients> coeffs(n);

    // Each grid point is independent; results do not depend on the split.
    const unsigned nt = std::max(1u, std::min(16u, std::thread::hardware_concurrency()));
    std::vector<std::exception_ptr> errors(nt);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += nt)
                    coeffs[i] = scattering_coeffs(profile, std::sqrt(cplx(z_grid[i], 0.0)));
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (std::size_t i = 0; i < n; ++i) {
        const double z = z_grid[i];
        const cplx k = std::sqrt(cplx(z, 0.0));
        const auto& c = coeffs[i];
        if (std::abs(c.a) < 1e-8)
            throw SolitonAssumptionViolated("a(k) vanishes at z = " + std::to_string(z));
        d.k_grid[i] = k;
        d.a_values[i] = c.a;
        d.b_values[i] = c.b;
        d.rho_values[i] = -c.b_bar / (c.a * k);
        d.varrho_values[i] = -c.b_bar / (k * c.a_bar);
        d.unitarity_residual[i] = c.det_residual();
        if (!(1.0 - z * std::norm(d.rho_values[i]) > 0.0))
            throw SignAssumptionViolated("1 - z rho conj(rho) <= 0 at z = " + std::to_string(z));
    }

    auto impl = std::make_shared<ScatteringData::Impl>();
    impl->profile = profile;
    auto build = [&](bool positive, const std::vector<cplx>& vals) {
        std::vector<double> u;
        std::vector<cplx> v;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = positive ? i : n - 1 - i;  // increasing |z|
            if ((z_grid[j] > 0) == positive) {
                u.push_back(std::log(std::abs(z_grid[j])));
                v.push_back(vals[j]);
            }
        }
        if (u.size() < 4) throw InvalidArgument("z grid needs at least 4 points per half-line");
        return HalfLineSpline(std::move(u), v);
    };
    impl->rho_pos = build(true, d.rho_values);
    impl->rho_neg = build(false, d.rho_values);
    impl->varrho_pos = build(true, d.varrho_values);
    impl->varrho_neg = build(false, d.varrho_values);
    d.impl_ = impl;
    return d;
}

}  // namespace gi
