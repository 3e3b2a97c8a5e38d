#pragma once
// Contour quadrature in the complex plane.
//
// Paths are segments, polylines or rays. Integration is adaptive
// Gauss-Legendre (or tanh-sinh) in the path parameter. Endpoint
// square-root behaviour is handled either by an explicit Gauss-Jacobi
// rule or by a cosine substitution that flattens it.

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace gi {

using cplx = std::complex<double>;
using CFun = std::function<cplx(cplx)>;

enum class PathKind { segment, polyline, ray };

struct Path {
    PathKind kind = PathKind::segment;
    std::vector<cplx> points;  // ray: points[0] is the finite end
    cplx direction{1.0, 0.0};  // rays only, unit length
    int orientation = 1;       // -1 walks the points backwards

    static Path segment(cplx a, cplx b);
    static Path polyline(std::vector<cplx> pts);
    static Path ray(cplx start, cplx dir);

    Path reversed() const;
    double length() const;  // +inf for rays
    // Distance from z to the path.
    double distance(cplx z) const;
};

enum class QuadRule { gauss_legendre, double_exponential };

struct QuadratureConfig {
    QuadRule rule = QuadRule::gauss_legendre;
    int nodes_per_panel = 32;
    double rel_tol = 1e-10;
    double abs_tol = 0.0;  // floor for integrals that cancel to ~0
    int max_panels = 4096;
};

void validate(const QuadratureConfig& cfg);

/// Gauss-Legendre nodes/weights on [-1,1]. Cached per n.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

/// Gauss-Jacobi rule for weight (1-x)^alpha (1+x)^beta on [-1,1]
/// via the Golub-Welsch eigenproblem.
std::pair<std::vector<double>, std::vector<double>> gauss_jacobi(int n, double alpha, double beta);

/// Adaptive integral of a real-parameter function over [a,b].
cplx integrate_interval(const std::function<cplx(double)>& g, double a, double b,
                        const QuadratureConfig& cfg = {});

/// Oriented line integral of f along the path.
cplx integrate_contour(const CFun& f, const Path& path, const QuadratureConfig& cfg = {});

/// Like integrate_contour, but every edge is traversed with the cosine
/// substitution s = p0 + (p1-p0)(1-cos(pi v))/2, which removes
/// inverse-square-root (and square-root) endpoint behaviour.
cplx integrate_contour_sqrt_ends(const CFun& f, const Path& path,
                                 const QuadratureConfig& cfg = {});

/// A node of integrate_edges_sqrt_ends: s = anchor + offset, where anchor is
/// the nearer end of the edge. offset carries full relative accuracy even
/// when s itself rounds towards the anchor.
struct EdgePoint {
    cplx s;
    cplx anchor;
    cplx offset;
};

/// integrate_contour_sqrt_ends for integrands that need the exact distance to
/// an end point (square roots vanishing there). Nodes that round onto an end
/// point are skipped; their weight is below roundoff.
cplx integrate_edges_sqrt_ends(const std::function<cplx(const EdgePoint&)>& f, const Path& path,
                               const QuadratureConfig& cfg = {});

/// Integral of g(s)|s-a|^e1 |s-b|^e2 over a segment a->b.
cplx integrate_endpoint_singular(const CFun& g, const Path& path,
                                 std::pair<double, double> exponents,
                                 const QuadratureConfig& cfg = {});

/// (1/2 pi i) * integral of density(s)/(s - z) along the path.
/// Throws PointOnContour when z is within `exclusion` of the path;
/// a negative exclusion selects the default 1e-8 * length.
cplx cauchy_integral(const CFun& density, const Path& path, cplx z,
                     const QuadratureConfig& cfg = {}, double exclusion = -1.0);

enum class Side { plus, minus };

/// One-sided boundary value of the Cauchy integral at a point s0 on the
/// path. plus = left of the orientation. Two offsets, Richardson
/// extrapolated.
cplx cauchy_boundary_value(const CFun& density, const Path& path, cplx s0, Side side,
                           const QuadratureConfig& cfg = {});

/// Barycentric interpolant on Chebyshev-Lobatto points of [lo, hi]. The
/// degree doubles from 32 until successive interpolants agree to tol
/// (scaled by max(1, largest sample)). Throws NonConvergence past
/// max_degree.
class ChebyshevInterpolant {
public:
    ChebyshevInterpolant(const std::function<cplx(double)>& f, double lo, double hi,
                         double tol = 1e-13, int max_degree = 1024);
    cplx operator()(double x) const;
    int degree() const { return static_cast<int>(nodes_.size()) - 1; }
    /// Largest change seen in the last doubling.
    double error_estimate() const { return err_; }

private:
    double lo_, hi_, err_ = 0.0;
    std::vector<double> nodes_;  // on [-1, 1]
    std::vector<cplx> values_;
};

}  // namespace gi
