#include "gi/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>

#include "gi/errors.hpp"

namespace gi {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

double segment_distance(cplx z, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - a);
    double t = ((z - a) * std::conj(d)).real() / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

// Newton iteration on P_n; standard and accurate to roundoff for n < 1000.
std::pair<std::vector<double>, std::vector<double>> compute_gauss_legendre(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute derivative at the converged node.
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

struct Panel {
    double lo, hi;
    cplx left, right;  // half-panel integrals
    double err;
    double abs_sum;
    bool operator<(const Panel& o) const { return err < o.err; }
};

// Gauss-Legendre integral of g on [lo,hi]; also accumulates |g|.
cplx gl_panel(const std::function<cplx(double)>& g, double lo, double hi, int n,
              double& abs_acc) {
    const auto& [x, w] = gauss_legendre(n);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    cplx sum = 0.0;
    double a = 0.0;
    for (int i = 0; i < n; ++i) {
        const cplx v = g(mid + half * x[i]);
        if (!finite(v)) throw NonFiniteSample("integrand returned a non-finite value");
        sum += w[i] * v;
        a += w[i] * std::abs(v);
    }
    abs_acc = a * half;
    return sum * half;
}

Panel make_panel(const std::function<cplx(double)>& g, double lo, double hi, cplx whole,
                 int n) {
    const double mid = 0.5 * (lo + hi);
    double a1 = 0.0, a2 = 0.0;
    Panel p;
    p.lo = lo;
    p.hi = hi;
    p.left = gl_panel(g, lo, mid, n, a1);
    p.right = gl_panel(g, mid, hi, n, a2);
    p.err = std::abs(p.left + p.right - whole);
    p.abs_sum = a1 + a2;
    return p;
}

cplx adaptive_gl(const std::function<cplx(double)>& g, double a, double b,
                 const QuadratureConfig& cfg) {
    const int n = cfg.nodes_per_panel;
    std::priority_queue<Panel> heap;
    constexpr int kInitial = 4;
    cplx total = 0.0;
    double errsum = 0.0, abs_total = 0.0;
    for (int k = 0; k < kInitial; ++k) {
        const double lo = a + (b - a) * k / kInitial;
        const double hi = a + (b - a) * (k + 1) / kInitial;
        double dummy = 0.0;
        const cplx whole = gl_panel(g, lo, hi, n, dummy);
        Panel p = make_panel(g, lo, hi, whole, n);
        total += p.left + p.right;
        errsum += p.err;
        abs_total += p.abs_sum;
        heap.push(p);
    }
    int panels = kInitial;
    const double eps = std::numeric_limits<double>::epsilon();
    auto target = [&] {
        return std::max({cfg.rel_tol * std::max(std::abs(total), abs_total),
                         64.0 * eps * abs_total, cfg.abs_tol});
    };
    while (errsum > target()) {
        if (panels >= cfg.max_panels)
            throw NonConvergence("adaptive quadrature exceeded max_panels (" +
                                 std::to_string(cfg.max_panels) + ")");
        Panel p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.lo + p.hi);
        if (mid <= p.lo || mid >= p.hi) {
            // Cannot split any further: accept what we have.
            errsum -= p.err;
            continue;
        }
        total -= p.left + p.right;
        errsum -= p.err;
        abs_total -= p.abs_sum;
        Panel l = make_panel(g, p.lo, mid, p.left, n);
        Panel r = make_panel(g, mid, p.hi, p.right, n);
        for (const Panel* c : {&l, &r}) {
            total += c->left + c->right;
            errsum += c->err;
            abs_total += c->abs_sum;
            heap.push(*c);
        }
        ++panels;
        if (errsum < 0.0) errsum = 0.0;
    }
    return total;
}

// tanh-sinh on [a,b]; level refinement until successive levels agree.
cplx double_exponential(const std::function<cplx(double)>& g, double a, double b,
                        const QuadratureConfig& cfg) {
    const double hlen = 0.5 * (b - a);
    const double tmax = 4.0;
    auto node = [&](double t, double& x, double& wgt, double& comp) {
        const double u = 0.5 * kPi * std::sinh(t);
        const double ch = std::cosh(u);
        x = std::tanh(u);
        comp = 1.0 / (std::exp(2.0 * std::abs(u)) + 1.0) * 2.0;  // 1 - |x|
        wgt = 0.5 * kPi * std::cosh(t) / (ch * ch);
    };
    auto eval = [&](double t) -> cplx {
        double x, wgt, comp;
        node(t, x, wgt, comp);
        if (comp <= 0.0) return 0.0;
        const double s = x >= 0 ? b - hlen * comp : a + hlen * comp;
        if (s <= a || s >= b) return 0.0;
        const cplx v = g(s);
        if (!finite(v)) throw NonFiniteSample("integrand returned a non-finite value");
        return wgt * v;
    };
    double h = 0.5;
    cplx sum = eval(0.0);
    for (double t = h; t <= tmax; t += h) sum += eval(t) + eval(-t);
    cplx prev = sum * h * hlen;
    int evals = 0;
    for (int level = 1; level < 12; ++level) {
        h *= 0.5;
        for (double t = h; t <= tmax; t += 2 * h) {
            sum += eval(t) + eval(-t);
            evals += 2;
        }
        const cplx cur = sum * h * hlen;
        if (std::abs(cur - prev) <= cfg.rel_tol * std::max(std::abs(cur), 1e-300)) return cur;
        if (evals > cfg.max_panels * cfg.nodes_per_panel)
            throw NonConvergence("tanh-sinh quadrature did not converge");
        prev = cur;
    }
    throw NonConvergence("tanh-sinh quadrature did not converge");
}

double jacobi_mu0(double alpha, double beta) {
    return std::exp((alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                    std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0));
}

}  // namespace

// ---------------------------------------------------------------- Path

Path Path::segment(cplx a, cplx b) {
    if (a == b) throw InvalidArgument("segment endpoints coincide");
    return Path{PathKind::segment, {a, b}, {1.0, 0.0}, 1};
}

Path Path::polyline(std::vector<cplx> pts) {
    if (pts.size() < 2) throw InvalidArgument("polyline needs at least two points");
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i] == pts[i - 1]) throw InvalidArgument("polyline has repeated vertex");
    return Path{PathKind::polyline, std::move(pts), {1.0, 0.0}, 1};
}

Path Path::ray(cplx start, cplx dir) {
    const double m = std::abs(dir);
    if (m == 0.0) throw InvalidArgument("ray direction is zero");
    return Path{PathKind::ray, {start}, dir / m, 1};
}

Path Path::reversed() const {
    Path p = *this;
    p.orientation = -orientation;
    return p;
}

double Path::length() const {
    if (kind == PathKind::ray) return std::numeric_limits<double>::infinity();
    double L = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) L += std::abs(points[i] - points[i - 1]);
    return L;
}

double Path::distance(cplx z) const {
    if (kind == PathKind::ray) {
        const double t = std::max(0.0, ((z - points[0]) * std::conj(direction)).real());
        return std::abs(z - (points[0] + t * direction));
    }
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < points.size(); ++i)
        d = std::min(d, segment_distance(z, points[i - 1], points[i]));
    return d;
}

// ---------------------------------------------------------- rules

void validate(const QuadratureConfig& cfg) {
    if (cfg.nodes_per_panel < 4) throw InvalidArgument("nodes_per_panel must be >= 4");
    if (!(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0))
        throw InvalidArgument("rel_tol must lie in (0,1)");
    if (!(cfg.abs_tol >= 0.0)) throw InvalidArgument("abs_tol must be nonnegative");
    if (cfg.max_panels < 1) throw InvalidArgument("max_panels must be positive");
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

std::pair<std::vector<double>, std::vector<double>> gauss_jacobi(int n, double alpha,
                                                                 double beta) {
    if (alpha <= -1.0 || beta <= -1.0) throw ExponentOutOfRange("Jacobi exponent <= -1");
    if (n < 1) throw InvalidArgument("gauss_jacobi: n must be positive");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    const double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        double diag;
        if (k == 0)
            diag = (beta - alpha) / (ab + 2.0);
        else
            diag = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        J(k, k) = diag;
        if (k + 1 < n) {
            const double m = k + 1.0;
            const double sm = 2.0 * m + ab;
            double b2;
            if (m == 1.0)
                b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
            else
                b2 = 4.0 * m * (m + alpha) * (m + beta) * (m + ab) /
                     (sm * sm * (sm + 1.0) * (sm - 1.0));
            J(k, k + 1) = J(k + 1, k) = std::sqrt(b2);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = jacobi_mu0(alpha, beta);
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        x[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        w[i] = mu0 * v0 * v0;
    }
    return {x, w};
}

// ------------------------------------------------------- integrals

cplx integrate_interval(const std::function<cplx(double)>& g, double a, double b,
                        const QuadratureConfig& cfg) {
    validate(cfg);
    if (a == b) return 0.0;
    if (cfg.rule == QuadRule::double_exponential) return double_exponential(g, a, b, cfg);
    return adaptive_gl(g, a, b, cfg);
}

cplx integrate_contour(const CFun& f, const Path& path, const QuadratureConfig& cfg) {
    cplx total = 0.0;
    if (path.kind == PathKind::ray) {
        const cplx p = path.points[0], d = path.direction;
        total = integrate_interval(
            [&](double u) {
                const double om = 1.0 - u;
                return f(p + d * (u / om)) * d / (om * om);
            },
            0.0, 1.0, cfg);
    } else {
        for (std::size_t i = 1; i < path.points.size(); ++i) {
            const cplx p0 = path.points[i - 1], dp = path.points[i] - p0;
            total += integrate_interval([&](double v) { return f(p0 + dp * v) * dp; }, 0.0,
                                        1.0, cfg);
        }
    }
    return static_cast<double>(path.orientation) * total;
}

cplx integrate_edges_sqrt_ends(const std::function<cplx(const EdgePoint&)>& f, const Path& path,
                               const QuadratureConfig& cfg) {
    if (path.kind == PathKind::ray)
        throw InvalidArgument("cosine substitution needs finite edges");
    cplx total = 0.0;
    for (std::size_t i = 1; i < path.points.size(); ++i) {
        const cplx p0 = path.points[i - 1], p1 = path.points[i], dp = p1 - p0;
        total += integrate_interval(
            [&](double v) {
                const double sn = std::sin(0.5 * kPi * v), cs = std::cos(0.5 * kPi * v);
                // Anchor at the nearer endpoint to keep s - p accurate there.
                EdgePoint e;
                e.anchor = v < 0.5 ? p0 : p1;
                e.offset = v < 0.5 ? dp * (sn * sn) : -dp * (cs * cs);
                e.s = e.anchor + e.offset;
                if (e.s == p0 || e.s == p1) return cplx(0.0);
                return f(e) * dp * (kPi * sn * cs);
            },
            0.0, 1.0, cfg);
    }
    return static_cast<double>(path.orientation) * total;
}

cplx integrate_contour_sqrt_ends(const CFun& f, const Path& path,
                                 const QuadratureConfig& cfg) {
    return integrate_edges_sqrt_ends([&](const EdgePoint& e) { return f(e.s); }, path, cfg);
}

cplx integrate_endpoint_singular(const CFun& g, const Path& path,
                                 std::pair<double, double> exponents,
                                 const QuadratureConfig& cfg) {
    const auto [e1, e2] = exponents;
    if (e1 <= -1.0 || e2 <= -1.0)
        throw ExponentOutOfRange("endpoint exponents must exceed -1");
    if (path.kind != PathKind::segment)
        throw InvalidArgument("endpoint-singular rule needs a segment");
    validate(cfg);
    const cplx a = path.points[0], b = path.points[1];
    const double L = std::abs(b - a);
    const cplx jac = 0.5 * (b - a) * std::pow(0.5 * L, e1 + e2);
    if (e1 == -0.5 && e2 == -0.5) {
        // s = a + (b-a)(1 - cos t)/2 turns the Chebyshev weight into dt, the
        // continuous form of the Gauss-Chebyshev rule; adaptive panels in t
        // then cope with integrands that are nearly singular near the ends.
        const cplx unit = (b - a) / L;
        return unit * integrate_interval(
                          [&](double t) {
                              const cplx v = g(a + 0.5 * (b - a) * (1.0 - std::cos(t)));
                              if (!finite(v)) throw NonFiniteSample("integrand returned a non-finite value");
                              return v;
                          },
                          0.0, kPi, cfg);
    }
    double abs_sum = 0.0;  // integral of |g| times the weight, for the tolerance
    auto rule = [&](int n) {
        cplx sum = 0.0;
        abs_sum = 0.0;
        // Weight (1-x)^e2 (1+x)^e1: x = -1 is the a end.
        const auto [x, w] = gauss_jacobi(n, e2, e1);
        for (int k = 0; k < n; ++k) {
            const cplx v = g(a + 0.5 * (b - a) * (1.0 + x[k]));
            if (!finite(v)) throw NonFiniteSample("integrand returned a non-finite value");
            sum += w[k] * v;
            abs_sum += w[k] * std::abs(v);
        }
        abs_sum *= std::abs(jac);
        return sum * jac;
    };
    int n = std::max(16, cfg.nodes_per_panel);
    cplx prev = rule(n);
    const int nmax = std::max(n, cfg.nodes_per_panel * 64);
    while (n < nmax) {
        n *= 2;
        const cplx cur = rule(n);
        const double scale = std::max(std::abs(cur), abs_sum);
        if (std::abs(cur - prev) <= std::max(cfg.rel_tol * scale, 1e-300)) return cur;
        prev = cur;
    }
    throw NonConvergence("endpoint-singular rule did not converge");
}

cplx cauchy_integral(const CFun& density, const Path& path, cplx z,
                     const QuadratureConfig& cfg, double exclusion) {
    if (exclusion < 0.0) {
        const double L = path.kind == PathKind::ray ? std::max(1.0, std::abs(path.points[0]))
                                                    : path.length();
        exclusion = 1e-8 * L;
    }
    if (path.distance(z) < exclusion)
        throw PointOnContour("Cauchy integral evaluated on its contour");
    const cplx I = integrate_contour([&](cplx s) { return density(s) / (s - z); }, path, cfg);
    return I / cplx(0.0, 2.0 * kPi);
}

cplx cauchy_boundary_value(const CFun& density, const Path& path, cplx s0, Side side,
                           const QuadratureConfig& cfg) {
    // Tangent of the edge nearest to s0.
    cplx tangent;
    double scale;
    if (path.kind == PathKind::ray) {
        tangent = path.direction;
        scale = std::max(1.0, std::abs(path.points[0]));
    } else {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < path.points.size(); ++i) {
            const double d = segment_distance(s0, path.points[i - 1], path.points[i]);
            if (d < best) {
                best = d;
                tangent = path.points[i] - path.points[i - 1];
            }
        }
        tangent /= std::abs(tangent);
        scale = path.length();
    }
    tangent *= static_cast<double>(path.orientation);
    const cplx normal = cplx(0.0, 1.0) * tangent * (side == Side::plus ? 1.0 : -1.0);
    const double eps = 1e-6 * scale;
    const cplx f1 = cauchy_integral(density, path, s0 + eps * normal, cfg, 0.25 * eps);
    const cplx f2 = cauchy_integral(density, path, s0 + 2.0 * eps * normal, cfg, 0.25 * eps);
    return 2.0 * f1 - f2;
}

// ------------------------------------------------------------ Chebyshev

ChebyshevInterpolant::ChebyshevInterpolant(const std::function<cplx(double)>& f, double lo,
                                           double hi, double tol, int max_degree)
    : lo_(lo), hi_(hi) {
    if (!(hi > lo)) throw InvalidArgument("Chebyshev interval must have hi > lo");
    if (!(tol > 0.0) || max_degree < 32) throw InvalidArgument("bad Chebyshev settings");
    auto to_x = [&](double t) { return 0.5 * (lo + hi) + 0.5 * (hi - lo) * t; };
    int n = 32;
    nodes_.resize(n + 1);
    values_.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        nodes_[j] = std::cos(std::numbers::pi * j / n);
        values_[j] = f(to_x(nodes_[j]));
    }
    while (true) {
        // The odd nodes of the doubled grid are new; compare them with the
        // current interpolant before merging.
        const int m = 2 * n;
        std::vector<double> nodes(m + 1);
        std::vector<cplx> values(m + 1);
        double scale = 1.0;
        err_ = 0.0;
        for (int j = 0; j <= m; ++j) {
            nodes[j] = std::cos(std::numbers::pi * j / m);
            if (j % 2 == 0) {
                values[j] = values_[j / 2];
            } else {
                values[j] = f(to_x(nodes[j]));
                err_ = std::max(err_, std::abs(values[j] - (*this)(to_x(nodes[j]))));
            }
            scale = std::max(scale, std::abs(values[j]));
        }
        nodes_ = std::move(nodes);
        values_ = std::move(values);
        n = m;
        if (err_ <= tol * scale) return;
        if (2 * n > max_degree)
            throw NonConvergence("Chebyshev interpolant did not converge, change " +
                                     std::to_string(err_));
    }
}

cplx ChebyshevInterpolant::operator()(double x) const {
    const double t = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
    const int n = degree();
    cplx num = 0.0;
    double den = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double d = t - nodes_[j];
        if (d == 0.0) return values_[j];
        double w = (j % 2 == 0 ? 1.0 : -1.0) / d;
        if (j == 0 || j == n) w *= 0.5;
        num += w * values_[j];
        den += w;
    }
    return num / den;
}

}  // namespace gi
