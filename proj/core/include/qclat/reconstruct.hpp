#pragma once

#include <string>
#include <vector>

#include "qclat/analysis.hpp"
#include "qclat/comb.hpp"
#include "qclat/diophantine.hpp"

namespace qclat {

/// Axis-aligned cone C_j = {x : |x - <x,e_j> e_j| < aperture |x|}.
struct ConeSpec {
    int axis_index = 0;
    double aperture = 0.25;
};

std::vector<ConeSpec> default_cones(int dim, double aperture = 0.25);

struct PeriodCertificate {
    Point period;             // T, exact
    std::vector<double> tau;  // almost-period candidate that produced T
    double max_mismatch = 0;  // 0 on success with exact inputs
    double window = 0;
    size_t checked_points = 0;
};

enum class SnapFailure {
    kNone,
    kThresholdViolated,  // match_radius too large for the separation/difference gaps
    kNoMatch,
    kAmbiguousMatch,
    kVerificationMiss,
};

struct SnapResult {
    bool ok = false;
    PeriodCertificate certificate;
    SnapFailure failure = SnapFailure::kNone;
    std::string detail;
};

/// Translate-and-match: anchor a = point of p1 nearest the origin, c = the
/// unique point of p1 within match_radius of a + tau, T = c - a; then verify
/// that +T maps both windowed sets into themselves on the shrunken window.
/// match_radius must stay below half the separation radius of both sets and
/// below half the least positive gap of the windowed difference profile;
/// violations throw (they would break uniqueness of the match).
SnapResult snap_period(const std::vector<Point>& p1, const std::vector<Point>& p2,
                       const std::vector<double>& tau, double match_radius, double window);

struct PeriodBasisResult {
    bool ok = false;
    std::vector<PeriodCertificate> periods;  // one per cone when ok
    std::string detail;                      // names the failing cone otherwise
};

/// One verified period per cone with |T_j| > 1; candidates are in-window
/// difference vectors of p1 driven through snap_period; the period matrix
/// determinant is verified nonzero.
PeriodBasisResult find_period_basis(const std::vector<Point>& p1, const std::vector<Point>& p2,
                                    const std::vector<ConeSpec>& cones, double window);

struct CosetDecomposition {
    Lattice lattice;
    std::vector<Point> residues_1;
    std::vector<Point> residues_2;
};

/// Build L from the periods and reduce every window point; residue lists are
/// deduplicated (exactly, then within 1e-9 for lifted float inputs) and must
/// be stable under halving the window.
CosetDecomposition coset_decompose(const std::vector<Point>& p1, const std::vector<Point>& p2,
                                   const std::vector<Point>& periods, double window);

/// The counterexample measure: unit masses on Z^2 plus alternating masses
/// e^{pi i m2} on diag(sqrt(2), 1) Z^2 + (0, 1/2).
Comb nu();

/// Same construction with the horizontal stretch replaced (e.g. a rational
/// stretch turns the support genuinely periodic).
Comb nu_variant(const FieldElem& stretch);

struct ExpectedCoset {
    Lattice lattice;
    Point offset;
    FieldElem modulus;  // |mass| on the coset; phases deliberately not asserted
};

/// Support cosets and atom moduli of fourier(nu()): unit masses on Z^2 and
/// modulus 1/sqrt(2) on dual(L) + (0, 1/2).
std::vector<ExpectedCoset> nu_hat_expected();

struct SupportCheck {
    bool ok = false;
    std::string detail;
};

/// Exact comparison of a comb's support cosets and atom moduli against an
/// expected list (single-term components only).
SupportCheck check_support(const Comb& m, const std::vector<ExpectedCoset>& expected);

/// Two distinct support points whose projections onto the direction with
/// slope T (direction (1,T)/|(1,T)|) are closer than eps but not equal;
/// the projection difference is certified nonzero in exact arithmetic.
struct ClusterPair {
    Point a;                    // from the integer component
    Point b;                    // from the shifted component
    FieldElem projection_diff;  // <a - b, (1, T)>, exact and nonzero
    double unit_gap;            // |projection_diff| / sqrt(1 + T^2) < eps
    long s = 0, r = 0;          // the underlying approximation
};

/// Spec'd entry point: theta in radians, non-vertical; the tested slope is
/// the exact dyadic lift of tan(theta).
ClusterPair projection_cluster_certificate(double theta, double eps, double window_cap);

/// Exact-slope variant, also usable on stretched variants of the measure.
ClusterPair projection_cluster_certificate_slope(const FieldElem& stretch, const Rational& slope,
                                                 double eps, double window_cap);

struct DirectionReport {
    Rational slope;
    double theta;
    std::vector<ClusterPair> ladder;  // one pair per eps that succeeded
    bool complete = false;            // every eps produced a verified pair
    std::string detail;
};

struct RefutationReport {
    std::vector<DirectionReport> directions;
    double vertical_gap = 0;  // exact min positive gap of the theta = pi/2 projection
    bool refuted = false;
    std::string verdict;
};

/// For every sampled non-vertical direction, a ladder of verified cluster
/// pairs (projection gaps below every eps); the vertical control direction
/// keeps gap exactly 1/2. The verdict is a sampled refutation: a cover by
/// shifts of one lattice would force two independent directions with
/// uniformly discrete projections, and only the vertical one survives.
RefutationReport refute_lattice_cover(const std::vector<double>& theta_grid,
                                      const std::vector<double>& eps_ladder,
                                      double window_cap = 1e7);

/// Slope-grid variant, parameterized by the horizontal stretch.
RefutationReport refute_lattice_cover_slopes(const FieldElem& stretch,
                                             const std::vector<Rational>& slopes,
                                             const std::vector<double>& eps_ladder,
                                             double window_cap = 1e7);

std::vector<double> default_theta_grid(int count = 16);
std::vector<double> default_eps_ladder();  // 1e-1 .. 1e-4

/// Lift float points to exact (dyadic) points.
std::vector<Point> lift_points(const std::vector<std::vector<double>>& pts);

} // namespace qclat
