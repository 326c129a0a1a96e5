#include "qclat/comb.hpp"

#include <algorithm>
#include <map>

namespace qclat {

std::complex<double> PolarValue::to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    return coeff.to_double() * phase.to_complex();
}

PolarValue make_polar(FieldElem coeff, Phase phase) {
    int s = coeff.sign();
    if (s == 0) return PolarValue{};
    if (s < 0) return PolarValue{-coeff, phase * half_phase()};
    return PolarValue{std::move(coeff), std::move(phase)};
}

PolarValue polar_conj(const PolarValue& v) {
    if (v.is_zero()) return v;
    return PolarValue{v.coeff, v.phase.conj()};
}

PolarValue polar_mul(const PolarValue& a, const PolarValue& b) {
    if (a.is_zero() || b.is_zero()) return PolarValue{};
    return PolarValue{a.coeff * b.coeff, a.phase * b.phase};
}

namespace {

// phase difference reduced mod 1; {0} -> same direction, {1/2} -> opposite
enum class PhaseRel { kSame, kOpposite, kOther };

PhaseRel phase_relation(const Phase& a, const Phase& b) {
    Phase delta(a.t() - b.t());
    if (delta.t().is_zero()) return PhaseRel::kSame;
    if (delta.t() == FieldElem::rational(Rational(1, 2))) return PhaseRel::kOpposite;
    return PhaseRel::kOther;
}

} // namespace

bool polar_mergeable(const PolarValue& a, const PolarValue& b) {
    if (a.is_zero() || b.is_zero()) return true;
    return phase_relation(a.phase, b.phase) != PhaseRel::kOther;
}

PolarValue polar_add(const PolarValue& a, const PolarValue& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    switch (phase_relation(a.phase, b.phase)) {
        case PhaseRel::kSame:
            return PolarValue{a.coeff + b.coeff, a.phase};
        case PhaseRel::kOpposite:
            return make_polar(a.coeff - b.coeff, a.phase);
        case PhaseRel::kOther:
            break;
    }
    throw ExactnessError("sum of exponential terms leaves the polar class (phases " +
                         a.phase.t().str() + " vs " + b.phase.t().str() + ")");
}

std::vector<PolarValue> polar_reduce(std::vector<PolarValue> terms) {
    std::erase_if(terms, [](const PolarValue& v) { return v.is_zero(); });
    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t i = 0; i < terms.size() && !merged; ++i)
            for (size_t j = i + 1; j < terms.size() && !merged; ++j)
                if (polar_mergeable(terms[i], terms[j])) {
                    PolarValue sum = polar_add(terms[i], terms[j]);
                    terms.erase(terms.begin() + j);
                    if (sum.is_zero())
                        terms.erase(terms.begin() + i);
                    else
                        terms[i] = std::move(sum);
                    merged = true;
                }
    }
    return terms;
}

Comb::Comb(int dim, long disc) : dim_(dim), disc_(disc) {
    if (dim < 1 || dim > 4) throw Error("comb dim must be 1..4");
    if (disc != 0 && !is_valid_disc(disc)) throw Error("comb disc must be 0 or square-free >= 2");
}

Comb Comb::lattice_comb(const Lattice& lat) {
    long disc = 0;
    for (int i = 0; i < lat.dim(); ++i)
        for (int j = 0; j < lat.dim(); ++j)
            if (lat.basis().at(i, j).disc() != 0) disc = lat.basis().at(i, j).disc();
    Comb m(lat.dim(), disc);
    m.add_component(lat, origin(lat.dim()),
                    {Term{FieldElem::integer(1), Phase(), origin(lat.dim())}});
    return m;
}

namespace {

using TermMap = std::map<FieldVec, PolarValue, decltype([](const FieldVec& a, const FieldVec& b) {
                             return compare_vec(a, b) < 0;
                         })>;

// reduce freq modulo the dual lattice and fold the constant <eta, offset>
// into the phase; offset must already be the reduced coset representative
void insert_reduced_term(TermMap& acc, const Lattice& dual_lat, const Point& offset,
                         const Term& t) {
    if (t.coeff.is_zero()) return;
    auto red = dual_lat.reduce_mod(t.freq);
    FieldVec eta = t.freq - red.residue;
    Phase folded = t.phase * Phase(inner_product(eta, offset));
    PolarValue v = make_polar(t.coeff, folded);
    auto it = acc.find(red.residue);
    if (it == acc.end()) {
        if (!v.is_zero()) acc.emplace(red.residue, std::move(v));
    } else {
        it->second = polar_add(it->second, v);
        if (it->second.is_zero()) acc.erase(it);
    }
}

std::vector<Term> term_map_to_vector(const TermMap& acc) {
    std::vector<Term> out;
    out.reserve(acc.size());
    for (const auto& [freq, v] : acc) out.push_back(Term{v.coeff, v.phase, freq});
    return out;
}

// lattices with a full-rank intersection have a rational transition matrix
bool commensurable(const Lattice& a, const Lattice& b) {
    FieldMatrix m = a.basis_inverse() * b.basis();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).is_rational()) return false;
    return true;
}

// for commensurable lattices: does (L_a + off_a) meet (L_b + off_b)?
// Solves M k + c in Z^p over k in Z^p by periodicity of frac(M k).
bool cosets_intersect(const Lattice& a, const Point& off_a, const Lattice& b,
                      const Point& off_b) {
    int p = a.dim();
    FieldMatrix m = a.basis_inverse() * b.basis();
    FieldVec c = a.basis_inverse().apply(off_b - off_a);
    Integer den(1);
    for (const auto& e : c) {
        if (!e.is_rational()) return false;  // irrational offset gap: disjoint
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.rat().get_den_mpz_t());
    }
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m.at(i, j).rat().get_den_mpz_t());
    if (den > 512) throw CapExceededError("coset intersection check: common denominator " +
                                          den.get_str() + " too large");
    long d = den.get_si();
    std::vector<long> k(p, 0);
    while (true) {
        bool integral = true;
        for (int i = 0; i < p && integral; ++i) {
            Rational v = c[i].rat();
            for (int j = 0; j < p; ++j) v += m.at(i, j).rat() * k[j];
            integral = (v.get_den() == 1);
        }
        if (integral) return true;
        int j = p - 1;
        while (j >= 0 && k[j] == d - 1) {
            k[j] = 0;
            --j;
        }
        if (j < 0) break;
        ++k[j];
    }
    return false;
}

} // namespace

void Comb::add_component(const Lattice& lat, const Point& offset, std::vector<Term> terms) {
    if (lat.dim() != dim_) throw Error("component dim mismatch");
    Point off = lat.reduce_mod(offset).residue;
    Lattice dual_lat = lat.dual();

    TermMap acc;
    for (const auto& t : terms) insert_reduced_term(acc, dual_lat, off, t);
    if (acc.empty()) return;

    for (size_t ci = 0; ci < components_.size(); ++ci) {
        CombComponent& comp = components_[ci];
        if (same_lattice(comp.lattice, lat)) {
            if (comp.lattice.contains(off - comp.offset)) {
                // same coset: re-reduce the new terms in the existing frame
                TermMap merged;
                Lattice comp_dual = comp.lattice.dual();
                for (const auto& t : comp.terms) insert_reduced_term(merged, comp_dual, comp.offset, t);
                for (const auto& [freq, v] : acc)
                    insert_reduced_term(merged, comp_dual, comp.offset, Term{v.coeff, v.phase, freq});
                if (merged.empty())
                    components_.erase(components_.begin() + ci);
                else
                    comp.terms = term_map_to_vector(merged);
                return;
            }
            continue;  // same lattice, disjoint coset: keep both components
        }
        if (commensurable(comp.lattice, lat) &&
            cosets_intersect(comp.lattice, comp.offset, lat, off)) {
            throw ExactnessError(
                "combs with intersecting cosets of distinct commensurable lattices "
                "are outside the closed class");
        }
    }
    components_.push_back(CombComponent{lat, std::move(off), term_map_to_vector(acc)});
}

namespace {

long merged_comb_disc(const Comb& a, const Comb& b) {
    if (a.disc() == 0) return b.disc();
    if (b.disc() == 0 || a.disc() == b.disc()) return a.disc();
    throw FieldMismatchError("comb disc mismatch: " + std::to_string(a.disc()) + " vs " +
                             std::to_string(b.disc()));
}

} // namespace

Comb add(const Comb& a, const Comb& b) {
    if (a.dim() != b.dim()) throw Error("comb dim mismatch");
    Comb out(a.dim(), merged_comb_disc(a, b));
    for (const auto& c : a.components()) out.add_component(c.lattice, c.offset, c.terms);
    for (const auto& c : b.components()) out.add_component(c.lattice, c.offset, c.terms);
    return out;
}

Comb scale(const Comb& m, const PolarValue& s) {
    Comb out(m.dim(), m.disc());
    if (s.is_zero()) return out;
    for (const auto& c : m.components()) {
        std::vector<Term> terms;
        terms.reserve(c.terms.size());
        for (const auto& t : c.terms)
            terms.push_back(Term{t.coeff * s.coeff, t.phase * s.phase, t.freq});
        out.add_component(c.lattice, c.offset, std::move(terms));
    }
    return out;
}

Comb fourier(const Comb& m) {
    Comb out(m.dim(), m.disc());
    for (const auto& c : m.components()) {
        Lattice dual_lat = c.lattice.dual();
        FieldElem det = c.lattice.det_abs();
        for (const auto& t : c.terms) {
            // shift and modulation rules: coset L+a with weight
            // c e^{2 pi i (q + <w,x>)} maps to the dual coset L*+w with
            // coefficient c/det, phase q + <a,w>, frequency -a
            Term image{t.coeff / det, t.phase * Phase(inner_product(c.offset, t.freq)),
                       -c.offset};
            out.add_component(dual_lat, t.freq, {std::move(image)});
        }
    }
    return out;
}

Comb reflect(const Comb& m) {
    Comb out(m.dim(), m.disc());
    for (const auto& c : m.components()) {
        std::vector<Term> terms;
        terms.reserve(c.terms.size());
        for (const auto& t : c.terms) terms.push_back(Term{t.coeff, t.phase, -t.freq});
        out.add_component(c.lattice, -c.offset, std::move(terms));
    }
    return out;
}

Comb conjugate(const Comb& m) {
    Comb out(m.dim(), m.disc());
    for (const auto& c : m.components()) {
        std::vector<Term> terms;
        terms.reserve(c.terms.size());
        for (const auto& t : c.terms) terms.push_back(Term{t.coeff, t.phase.conj(), -t.freq});
        out.add_component(c.lattice, c.offset, std::move(terms));
    }
    return out;
}

namespace {

// term equality as weight functions on the common coset; rep must be an
// actual point of that coset
bool terms_equivalent(const Term& ta, const Term& tb, const Lattice& dual_lat,
                      const Point& rep) {
    if (ta.coeff != tb.coeff) return false;
    FieldVec eta = ta.freq - tb.freq;
    if (!dual_lat.contains(eta)) return false;
    return ta.phase * Phase(inner_product(eta, rep)) == tb.phase;
}

bool components_equivalent(const CombComponent& a, const CombComponent& b) {
    if (!same_lattice(a.lattice, b.lattice)) return false;
    if (!a.lattice.contains(a.offset - b.offset)) return false;
    if (a.terms.size() != b.terms.size()) return false;
    Lattice dual_lat = a.lattice.dual();
    std::vector<bool> used(b.terms.size(), false);
    for (const auto& ta : a.terms) {
        bool found = false;
        for (size_t j = 0; j < b.terms.size() && !found; ++j) {
            if (used[j]) continue;
            if (terms_equivalent(ta, b.terms[j], dual_lat, a.offset)) {
                used[j] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

} // namespace

bool comb_equal(const Comb& a, const Comb& b) {
    if (a.dim() != b.dim()) throw Error("comb dim mismatch");
    merged_comb_disc(a, b);
    if (a.components().size() != b.components().size()) return false;
    std::vector<bool> used(b.components().size(), false);
    for (const auto& ca : a.components()) {
        bool found = false;
        for (size_t j = 0; j < b.components().size() && !found; ++j) {
            if (used[j]) continue;
            if (components_equivalent(ca, b.components()[j])) {
                used[j] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

bool is_real_comb(const Comb& m) { return comb_equal(m, conjugate(m)); }

std::vector<PolarValue> atom_weight_terms(const Comb& m, const Point& x) {
    std::vector<PolarValue> parts;
    for (const auto& c : m.components()) {
        if (!c.lattice.contains(x - c.offset)) continue;
        for (const auto& t : c.terms)
            parts.push_back(make_polar(t.coeff, t.phase * Phase(inner_product(t.freq, x))));
    }
    return polar_reduce(std::move(parts));
}

PolarValue atom_weight(const Comb& m, const Point& x) {
    auto parts = atom_weight_terms(m, x);
    if (parts.empty()) return PolarValue{};
    if (parts.size() == 1) return parts[0];
    throw ExactnessError("atom weight is a sum of " + std::to_string(parts.size()) +
                         " non-mergeable exponential terms; use atom_weight_terms");
}

namespace {

using AtomMap = std::map<Point, std::vector<PolarValue>,
                         decltype([](const Point& a, const Point& b) {
                             return compare_vec(a, b) < 0;
                         })>;

AtomMap collect_window_atoms(const Comb& m, double box_radius, size_t cap) {
    AtomMap atoms;
    for (const auto& c : m.components()) {
        for (auto& x : c.lattice.enumerate_window(c.offset, box_radius, cap)) {
            std::vector<PolarValue>& parts = atoms[x];
            for (const auto& t : c.terms)
                parts.push_back(make_polar(t.coeff, t.phase * Phase(inner_product(t.freq, x))));
        }
        if (atoms.size() > cap)
            throw CapExceededError("window atom count exceeds cap " + std::to_string(cap));
    }
    return atoms;
}

} // namespace

std::vector<WindowAtom> atoms_in_window(const Comb& m, double box_radius, size_t cap) {
    std::vector<WindowAtom> out;
    for (auto& [x, parts] : collect_window_atoms(m, box_radius, cap)) {
        auto reduced = polar_reduce(parts);
        if (reduced.empty()) continue;
        if (reduced.size() > 1)
            throw ExactnessError("window atom weight not reducible to one polar term; "
                                 "use numeric_atoms_in_window");
        out.push_back(WindowAtom{x, reduced[0]});
    }
    return out;
}

std::vector<NumericAtom> numeric_atoms_in_window(const Comb& m, double box_radius, size_t cap) {
    std::vector<NumericAtom> out;
    for (auto& [x, parts] : collect_window_atoms(m, box_radius, cap)) {
        std::complex<double> w{0.0, 0.0};
        for (const auto& v : parts) w += v.to_complex();
        if (std::abs(w) == 0.0) continue;
        out.push_back(NumericAtom{to_doubles(x), w});
    }
    return out;
}

} // namespace qclat
