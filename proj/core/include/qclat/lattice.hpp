#pragma once

#include <vector>

#include "qclat/linalg.hpp"

namespace qclat {

/// A point of R^p with exact coordinates.
using Point = FieldVec;

Point origin(int dim);

/// Full-rank lattice L = A(Z^p); basis columns are the generators.
class Lattice {
  public:
    explicit Lattice(FieldMatrix basis);

    static Lattice integers(int dim);                // Z^p
    static Lattice diagonal(const FieldVec& diag);   // diag(d_1..d_p) Z^p

    int dim() const { return basis_.rows(); }
    const FieldMatrix& basis() const { return basis_; }
    const FieldMatrix& basis_inverse() const { return inv_; }

    /// |det A|, exact and positive.
    const FieldElem& det_abs() const { return det_abs_; }

    /// The conjugate lattice {y : <x,y> in Z for all x in L}; basis is the
    /// inverse transpose of this basis.
    Lattice dual() const;

    bool contains(const Point& x) const;

    struct Reduction {
        Point residue;                 // x - A*witness, coords of A^-1*residue in [0,1)
        std::vector<Integer> witness;
    };
    Reduction reduce_mod(const Point& x) const;

    static constexpr size_t kDefaultCap = 1'000'000;

    /// All points of L+offset in the closed box [-R, R]^p, in lexicographic
    /// order of their integer coordinates. Throws CapExceededError when the
    /// candidate count passes cap.
    std::vector<Point> enumerate_window(const Point& offset, double box_radius,
                                        size_t cap = kDefaultCap) const;

  private:
    FieldMatrix basis_;
    FieldMatrix inv_;
    FieldElem det_abs_;
};

/// true iff the two bases generate the same point set
bool same_lattice(const Lattice& a, const Lattice& b);

} // namespace qclat
