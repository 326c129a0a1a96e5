#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "qclat/comb.hpp"

namespace qclat {

/// Neumaier compensated accumulation.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x);
    double value() const { return sum + comp; }
};

struct ComplexSum {
    CompensatedSum re, im;
    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

/// f(x) = e^{-pi |(x-center)/sigma|^2} e^{2 pi i <x, modulation>}
struct GaussianProbe {
    std::vector<double> center;
    double sigma = 1.0;
    std::vector<double> modulation;

    int dim() const { return static_cast<int>(center.size()); }
    std::complex<double> operator()(const std::vector<double>& x) const;
};

struct ScaledProbe {
    std::complex<double> scale{1.0, 0.0};
    GaussianProbe probe;

    std::complex<double> operator()(const std::vector<double>& x) const {
        return scale * probe(x);
    }
};

/// Fourier transform of a Gaussian probe is again a (scaled) Gaussian probe:
/// f^ = sigma^p e^{2 pi i <center, modulation>} *
///      G(center' = modulation, sigma' = 1/sigma, modulation' = -center).
/// The formula is cross-checked against direct quadrature in the test suite.
ScaledProbe probe_fourier(const GaussianProbe& f);

/// Window of numerically evaluated atoms shared between probe evaluations.
struct AtomTable {
    double radius = 0.0;          // atoms cover the closed box [-radius, radius]^p
    std::vector<NumericAtom> atoms;
    double weight_bound = 0.0;    // sup over atoms of |w(x)| <= sum of coeffs
    double gap_estimate = 1.0;    // measured min atom gap near the origin
};

AtomTable build_atom_table(const Comb& m, double radius, size_t cap = Lattice::kDefaultCap);

struct ApplyResult {
    std::complex<double> value{0.0, 0.0};
    double tail_bound = 0.0;  // certified bound on the truncation error
    double cut_radius = 0.0;
    size_t atoms_used = 0;
};

/// Pairing m(f) = sum over atoms of w(x) f(x), truncated at a radius whose
/// Gaussian tail (shell-counting bound from the measured min gap) is < tol.
ApplyResult apply_measure(const Comb& m, const ScaledProbe& f, double tol,
                          size_t cap = Lattice::kDefaultCap);
ApplyResult apply_measure(const Comb& m, const GaussianProbe& f, double tol,
                          size_t cap = Lattice::kDefaultCap);
/// Same, over a prebuilt table (table.radius must cover the needed cut).
ApplyResult apply_measure(const AtomTable& table, const ScaledProbe& f, double tol);

struct ProbeCheck {
    GaussianProbe probe;
    std::complex<double> lhs;  // m(f^)
    std::complex<double> rhs;  // fourier(m)(f)
    double residual;
    bool pass;
};

struct PoissonReport {
    double tol = 0.0;
    std::vector<ProbeCheck> checks;
    bool all_pass = true;
    double max_residual = 0.0;
};

/// |m(f^) - fourier(m)(f)| < 2 tol per probe. The primary soundness alarm
/// for the symbolic transform.
PoissonReport poisson_check(const Comb& m, const std::vector<GaussianProbe>& probes, double tol);

struct OracleResult {
    std::complex<double> value{0.0, 0.0};
    std::vector<std::complex<double>> estimates;  // one per ladder sigma
    double convergence = std::numeric_limits<double>::infinity();
    bool converged = false;
    std::string diagnostic;
};

/// Mass of fourier(m) at z, extracted numerically: m(f^_{sigma,z}) -> mass as
/// sigma -> 0 when the spectrum is uniformly discrete. Independent of the
/// symbolic transform path.
OracleResult atom_oracle(const Comb& m, const Point& z,
                         const std::vector<double>& sigma_ladder = {0.4, 0.2, 0.1, 0.05},
                         double tol = 1e-9, double convergence_eps = 1e-6);

struct DiscretenessProfile {
    double min_gap = std::numeric_limits<double>::infinity();
    double fill_radius = 0.0;       // grid-covering estimate
    double separation_radius = 0.0; // min_gap / 2
    double window = 0.0;
};

/// Exact min pairwise gap (double prefilter, exact tie refinement) plus a
/// grid covering check. All quantities measured within the window only.
DiscretenessProfile discreteness_profile(const std::vector<Point>& points, double window);
DiscretenessProfile discreteness_profile_numeric(const std::vector<std::vector<double>>& points,
                                                 double window);

struct DifferenceProfile {
    std::vector<std::vector<double>> values;  // sorted, deduplicated (exact)
    double min_positive_gap = std::numeric_limits<double>::infinity();
    size_t distinct_count = 0;
};

/// Multiset {a + alpha b} clipped to the value window [-W, W]^p; the reported
/// gap is the least distance between distinct values.
DifferenceProfile difference_profile(const std::vector<Point>& a, const std::vector<Point>& b,
                                     const FieldElem& alpha, double value_window);
/// p = 2 with alpha acting as complex multiplication on R^2.
DifferenceProfile difference_profile(const std::vector<Point>& a, const std::vector<Point>& b,
                                     std::complex<double> alpha, double value_window);

/// Inner products with (cos theta, sin theta); p = 2.
std::vector<double> project(const std::vector<Point>& points, double theta);
/// Inner products with an arbitrary direction vector.
std::vector<double> project(const std::vector<std::vector<double>>& points,
                            const std::vector<double>& direction);
/// Exact projections onto an exact direction.
FieldVec project_exact(const std::vector<Point>& points, const FieldVec& direction);

/// P(z, conj z) = 1 - prod_j (1 - z conj(z) / beta_j^2); equals 1 whenever
/// |z| is one of the moduli and 0 at z = 0.
std::complex<double> idempotent_indicator(const std::vector<double>& moduli,
                                          std::complex<double> z);

} // namespace qclat
