#pragma once

#include <complex>
#include <vector>

#include "qclat/lattice.hpp"

namespace qclat {

/// Exact complex number in polar form coeff * e^{2*pi*i*t}, coeff >= 0.
/// The canonical zero has coeff = 0 and the unit phase.
struct PolarValue {
    FieldElem coeff;
    Phase phase;

    bool is_zero() const { return coeff.is_zero(); }
    std::complex<double> to_complex() const;
};

PolarValue make_polar(FieldElem coeff, Phase phase);  // absorbs a negative sign
PolarValue polar_conj(const PolarValue& v);
PolarValue polar_mul(const PolarValue& a, const PolarValue& b);

/// true when a + b stays in polar form over the field, i.e. the phases agree
/// or are opposite (mod 1), or a summand vanishes
bool polar_mergeable(const PolarValue& a, const PolarValue& b);

/// exact sum; throws ExactnessError when not polar_mergeable
PolarValue polar_add(const PolarValue& a, const PolarValue& b);

/// Reduce a sum of polar terms by merging everything mergeable. The result is
/// an exact representation of the sum; size 1 (or 0) means a closed value.
std::vector<PolarValue> polar_reduce(std::vector<PolarValue> terms);

/// One weight term c * e^{2*pi*i*(q + <freq, x>)} on a coset.
struct Term {
    FieldElem coeff;  // > 0 in canonical form
    Phase phase;
    FieldVec freq;    // reduced modulo the dual of the owning lattice
};

struct CombComponent {
    Lattice lattice;
    Point offset;             // reduced into the fundamental domain
    std::vector<Term> terms;  // nonempty; freqs pairwise distinct, sorted
};

/// Measure: finite sum of exponentially weighted Dirac combs on lattice
/// cosets. Closed under the Fourier transform (convention
/// f^(y) = integral f(x) e^{-2*pi*i*<x,y>} dx).
class Comb {
  public:
    Comb(int dim, long disc);

    /// unit masses on every point of L
    static Comb lattice_comb(const Lattice& lat);

    int dim() const { return dim_; }
    long disc() const { return disc_; }
    bool empty() const { return components_.empty(); }
    const std::vector<CombComponent>& components() const { return components_; }

    /// Insert a coset component; canonicalizes (offset & freq reduction,
    /// phase folding, term merging) and merges with an existing component on
    /// the same coset. Throws ExactnessError when the new coset intersects a
    /// distinct commensurable component.
    void add_component(const Lattice& lat, const Point& offset, std::vector<Term> terms);

  private:
    int dim_;
    long disc_;
    std::vector<CombComponent> components_;
};

Comb add(const Comb& a, const Comb& b);
Comb scale(const Comb& m, const PolarValue& s);
Comb fourier(const Comb& m);
Comb reflect(const Comb& m);      // x -> -x
Comb conjugate(const Comb& m);    // complex conjugate measure
bool comb_equal(const Comb& a, const Comb& b);
bool is_real_comb(const Comb& m);

/// Exact atom mass at x as a list of polar terms (always representable).
std::vector<PolarValue> atom_weight_terms(const Comb& m, const Point& x);

/// Exact atom mass at x as a single polar value; (0, unit) off the support.
/// Throws ExactnessError when the exact sum does not reduce to one term
/// (see atom_weight_terms for the general form).
PolarValue atom_weight(const Comb& m, const Point& x);

struct WindowAtom {
    Point location;
    PolarValue value;
};

/// All atoms with nonzero mass in the closed box [-R, R]^p, exact, merged
/// across components, ordered lexicographically by exact coordinates.
std::vector<WindowAtom> atoms_in_window(const Comb& m, double box_radius,
                                        size_t cap = Lattice::kDefaultCap);

/// Numeric twin of a window atom (double coordinates, complex weight).
struct NumericAtom {
    std::vector<double> x;
    std::complex<double> weight;
};

/// Atoms in the box with numerically evaluated weights; tolerant of sums
/// that do not reduce to a single polar term.
std::vector<NumericAtom> numeric_atoms_in_window(const Comb& m, double box_radius,
                                                 size_t cap = Lattice::kDefaultCap);

} // namespace qclat
