#pragma once

#include <optional>
#include <vector>

#include "qclat/exact.hpp"

namespace qclat {

/// Continued fraction of a quadratic irrational, exact and eventually
/// periodic. partial_quotients[0] may be <= 0; all later quotients are >= 1.
struct CFExpansion {
    FieldElem value;
    std::vector<Integer> partial_quotients;
    int period_start = -1;
    int period_length = -1;

    /// convergents p_k/q_k for k = 0..count-1 (count <= quotients held)
    std::vector<std::pair<Integer, Integer>> convergents(size_t count) const;
};

/// Exact CF by the complete-quotient recursion; throws on rational input.
CFExpansion cf_expand(const FieldElem& x, int n_terms);

struct HomogeneousApprox {
    Integer s;              // minimal s > 0 with |s x + r| < eps
    Integer r;
    FieldElem residual;     // s x + r, exact
    double residual_d;
};

/// Convergent walk; minimality of s certified by the best-approximation
/// property (the previous convergent is checked to fail eps). Requires
/// 0 < eps < 1/2 and irrational x.
HomogeneousApprox best_homogeneous(const FieldElem& x, double eps);

struct InhomogeneousApprox {
    long s = 0;
    long r = 0;
    double residual = 0.0;  // s x + beta + r
    bool found = false;     // false: no solution with |s| <= s_cap
};

/// Minimal |s| with |s x + beta + r| < eps for some integer r, exhaustive
/// verified scan up to s_cap; ties broken by smaller |residual|, then by
/// positive s.
InhomogeneousApprox best_inhomogeneous(double x, double beta, double eps, long s_cap);

/// Exact a-posteriori check of a solution when x and beta live in the field.
bool verify_inhomogeneous(const FieldElem& x, const Rational& beta, long s, long r, double eps);

/// Basis for LLL/Babai: rows are independent rational vectors.
struct IntBasis {
    std::vector<std::vector<Rational>> rows;

    size_t size() const { return rows.size(); }
    size_t dim() const { return rows.empty() ? 0 : rows[0].size(); }
};

IntBasis int_basis(const std::vector<std::vector<long>>& rows);

struct LLLResult {
    IntBasis basis;                                // reduced rows
    std::vector<std::vector<Integer>> transform;   // reduced = transform * input
};

/// LLL reduction, delta in (1/4, 1). Gram-Schmidt runs in doubles with an
/// exact rational fallback whenever a Lovasz or rounding test falls within
/// 1e-9 of its threshold. Throws on dependent input.
LLLResult lll_reduce(const IntBasis& b, const Rational& delta = Rational(3, 4));

/// Exact check of size-reduction |mu_ij| <= 1/2 and the Lovasz condition.
bool verify_lll(const IntBasis& b, const Rational& delta = Rational(3, 4));

struct BabaiResult {
    std::vector<Integer> coeffs;       // in terms of the given basis rows
    std::vector<Rational> point;       // the lattice point itself
    double distance;
};

/// Nearest-plane on an LLL-reduced basis; distance within 2^(n/2) of optimal.
BabaiResult babai_nearest(const IntBasis& lll_basis, const std::vector<double>& target);

/// |<tau, omega_n> - z_n| < tol (mod Z) for n = 1..N.
struct KroneckerSystem {
    std::vector<std::vector<double>> freqs;  // omega_n
    std::vector<double> targets;             // z_n (empty = homogeneous)
    double tol;
};

/// Embedded-lattice basis (e_i, M w_i; 0, M e_n) with M = 1/tol; Babai on it
/// yields a candidate tau. Used as a seed for large radii.
std::vector<double> kronecker_seed(const KroneckerSystem& sys);

/// All grid points tau in [-R, R]^q (step grid_step) satisfying the system,
/// each re-verified by direct evaluation, sorted by |tau| then lexicographic.
/// An empty result is valid (enlarge the radius).
std::vector<std::vector<double>> kronecker_solve(const KroneckerSystem& sys,
                                                 double search_radius,
                                                 double grid_step = 1.0,
                                                 size_t cap = 20'000'000);

struct AlmostPeriod {
    std::vector<double> tau;
    double certified_bound;  // 2 pi sum |c_n| dist(<tau, w_n>, Z)
};

/// Common eps-almost periods of Q(x) = sum c_n e^{2 pi i <x, w_n>} via the
/// bound |e^{2 pi i d} - 1| <= 2 pi |d|; every returned bound is <= eps.
std::vector<AlmostPeriod> almost_periods(const std::vector<std::vector<double>>& freqs,
                                         const std::vector<double>& coeffs, double eps,
                                         double search_radius);

/// distance to the nearest integer
double dist_to_int(double x);

} // namespace qclat
