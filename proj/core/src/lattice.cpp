#include "qclat/lattice.hpp"

#include <cmath>
#include <string>

namespace qclat {

Point origin(int dim) { return Point(static_cast<size_t>(dim)); }

Lattice::Lattice(FieldMatrix basis) : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() == 0)
        throw Error("lattice basis must be square and nonempty");
    if (basis_.rows() > 4) throw Error("lattice dim > 4 unsupported");
    FieldElem d = basis_.det();
    if (d.is_zero()) throw Error("lattice basis is singular");
    det_abs_ = d.abs();
    inv_ = basis_.inverse();
}

Lattice Lattice::integers(int dim) { return Lattice(FieldMatrix::identity(dim)); }

Lattice Lattice::diagonal(const FieldVec& diag) {
    FieldMatrix m(static_cast<int>(diag.size()), static_cast<int>(diag.size()));
    for (size_t i = 0; i < diag.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = diag[i];
    return Lattice(m);
}

Lattice Lattice::dual() const {
    return Lattice(inv_.transpose());
}

bool Lattice::contains(const Point& x) const {
    FieldVec n = inv_.apply(x);
    for (const auto& c : n)
        if (!c.is_integer()) return false;
    return true;
}

Lattice::Reduction Lattice::reduce_mod(const Point& x) const {
    FieldVec y = inv_.apply(x);
    std::vector<Integer> witness(y.size());
    FieldVec n(y.size());
    for (size_t i = 0; i < y.size(); ++i) {
        witness[i] = y[i].floor();
        n[i] = FieldElem::rational(Rational(witness[i]));
    }
    Point residue = x - basis_.apply(n);
    return Reduction{std::move(residue), std::move(witness)};
}

std::vector<Point> Lattice::enumerate_window(const Point& offset, double box_radius,
                                             size_t cap) const {
    if (!(box_radius > 0)) throw Error("box_radius must be positive");
    int p = dim();
    if (static_cast<int>(offset.size()) != p) throw Error("offset dim mismatch");

    // certified over-approximation of the integer coordinate ranges, then an
    // exact box test per candidate
    FieldVec inv_off = inv_.apply(offset);
    std::vector<long> bound(p);
    double candidates = 1.0;
    for (int j = 0; j < p; ++j) {
        double row_norm = 0.0;
        for (int i = 0; i < p; ++i) row_norm += std::fabs(inv_.at(j, i).to_double());
        double b = box_radius * row_norm + std::fabs(inv_off[j].to_double());
        b = b * (1.0 + 1e-9) + 1.0;
        if (b > 1e15) throw CapExceededError("window too large: coordinate bound " + std::to_string(b));
        bound[j] = static_cast<long>(std::ceil(b));
        candidates *= 2.0 * static_cast<double>(bound[j]) + 1.0;
    }
    if (candidates > static_cast<double>(cap))
        throw CapExceededError("window too large: " + std::to_string(candidates) +
                               " candidate points exceed cap " + std::to_string(cap));

    FieldElem radius = FieldElem::rational(Rational(box_radius));  // exact double lift
    std::vector<Point> out;
    std::vector<long> n(p, 0);
    for (int j = 0; j < p; ++j) n[j] = -bound[j];
    while (true) {
        FieldVec nv(p);
        for (int j = 0; j < p; ++j) nv[j] = FieldElem::integer(n[j]);
        Point x = basis_.apply(nv) + offset;
        bool inside = true;
        for (int i = 0; i < p && inside; ++i)
            inside = compare(x[i].abs(), radius) <= 0;
        if (inside) out.push_back(std::move(x));

        int j = p - 1;
        while (j >= 0 && n[j] == bound[j]) {
            n[j] = -bound[j];
            --j;
        }
        if (j < 0) break;
        ++n[j];
    }
    return out;
}

bool same_lattice(const Lattice& a, const Lattice& b) {
    if (a.dim() != b.dim()) throw Error("lattice dim mismatch");
    FieldMatrix m = a.basis_inverse() * b.basis();
    if (!m.all_integer()) return false;
    FieldElem d = m.det();
    return d == FieldElem::integer(1) || d == FieldElem::integer(-1);
}

} // namespace qclat
