#include "qclat/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace qclat {

namespace {

using PointSet = std::set<Point, decltype([](const Point& a, const Point& b) {
                              return compare_vec(a, b) < 0;
                          })>;

double norm_d(const std::vector<double>& v) {
    double s = 0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

// nearest-origin anchor with lexicographic tie-break
const Point& anchor_point(const std::vector<Point>& pts) {
    if (pts.empty()) throw Error("empty point set");
    size_t best = 0;
    FieldElem best_norm = inner_product(pts[0], pts[0]);
    for (size_t i = 1; i < pts.size(); ++i) {
        FieldElem n2 = inner_product(pts[i], pts[i]);
        int c = compare(n2, best_norm);
        if (c < 0 || (c == 0 && compare_vec(pts[i], pts[best]) < 0)) {
            best = i;
            best_norm = n2;
        }
    }
    return pts[best];
}

} // namespace

std::vector<ConeSpec> default_cones(int dim, double aperture) {
    std::vector<ConeSpec> cones;
    for (int j = 0; j < dim; ++j) cones.push_back(ConeSpec{j, aperture});
    return cones;
}

SnapResult snap_period(const std::vector<Point>& p1, const std::vector<Point>& p2,
                       const std::vector<double>& tau, double match_radius, double window) {
    SnapResult res;
    if (p1.size() < 2 || p2.empty()) throw Error("snap_period needs nonempty windowed sets");

    double sep1 = discreteness_profile(p1, window).separation_radius;
    double sep2 = p2.size() >= 2 ? discreteness_profile(p2, window).separation_radius : sep1;
    double diff_gap =
        difference_profile(p1, p2, FieldElem::integer(-1), 2.0 * window).min_positive_gap;
    double limit = std::min({sep1 / 2.0, sep2 / 2.0, diff_gap / 2.0});
    if (!(match_radius > 0) || match_radius >= limit) {
        res.failure = SnapFailure::kThresholdViolated;
        res.detail = "match_radius " + std::to_string(match_radius) +
                     " not below the uniqueness threshold " + std::to_string(limit);
        throw CertificationError(res.detail);
    }

    const Point& a = anchor_point(p1);
    std::vector<double> target = to_doubles(a);
    for (size_t i = 0; i < target.size(); ++i) target[i] += tau[i];

    const Point* match = nullptr;
    int matches = 0;
    for (const auto& c : p1) {
        auto cd = to_doubles(c);
        double d2 = 0;
        for (size_t i = 0; i < cd.size(); ++i) {
            double dd = cd[i] - target[i];
            d2 += dd * dd;
        }
        if (d2 < match_radius * match_radius) {
            ++matches;
            match = &c;
        }
    }
    if (matches == 0) {
        res.failure = SnapFailure::kNoMatch;
        res.detail = "no point of p1 within match_radius of anchor + tau";
        return res;
    }
    if (matches > 1) {
        res.failure = SnapFailure::kAmbiguousMatch;
        res.detail = std::to_string(matches) + " points within match_radius";
        return res;
    }

    Point period = *match - a;
    double period_norm = norm_d(to_doubles(period));
    double shrunk = window - period_norm;
    if (shrunk <= 0) {
        res.failure = SnapFailure::kVerificationMiss;
        res.detail = "period longer than the window";
        return res;
    }

    PointSet set1(p1.begin(), p1.end());
    PointSet set2(p2.begin(), p2.end());
    size_t checked = 0, misses = 0;
    auto sweep = [&](const std::vector<Point>& pts, const PointSet& set) {
        for (const auto& x : pts) {
            Point shifted = x + period;
            bool inside = true;
            for (const auto& c : shifted)
                inside = inside && std::fabs(c.to_double()) <= shrunk - 1e-9;
            if (!inside) continue;
            ++checked;
            if (!set.count(shifted)) ++misses;
        }
    };
    sweep(p1, set1);
    sweep(p2, set2);

    if (misses > 0) {
        res.failure = SnapFailure::kVerificationMiss;
        res.detail = std::to_string(misses) + " of " + std::to_string(checked) +
                     " translated points left the support";
        return res;
    }
    res.ok = true;
    res.certificate = PeriodCertificate{std::move(period), tau, 0.0, window, checked};
    return res;
}

PeriodBasisResult find_period_basis(const std::vector<Point>& p1, const std::vector<Point>& p2,
                                    const std::vector<ConeSpec>& cones, double window) {
    PeriodBasisResult out;
    if (p1.size() < 2) throw Error("find_period_basis needs at least two points in p1");
    size_t dim = p1[0].size();

    double sep1 = discreteness_profile(p1, window).separation_radius;
    double sep2 = p2.size() >= 2 ? discreteness_profile(p2, window).separation_radius : sep1;
    double diff_gap =
        difference_profile(p1, p2, FieldElem::integer(-1), 2.0 * window).min_positive_gap;
    double match_radius = 0.45 * std::min({sep1 / 2.0, sep2 / 2.0, diff_gap / 2.0});
    if (!(match_radius > 1e-10)) {
        out.detail = "supports have no usable separation (thresholds degenerate)";
        return out;
    }

    const Point& a = anchor_point(p1);
    struct Candidate {
        Point v;
        double norm;
    };
    std::vector<Candidate> candidates;
    for (const auto& x : p1) {
        Point v = x - a;
        FieldElem n2 = inner_product(v, v);
        if (compare(n2, FieldElem::integer(1)) <= 0) continue;  // require |T| > 1
        candidates.push_back(Candidate{std::move(v), std::sqrt(n2.to_double())});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
        return l.norm < r.norm;
    });

    for (const auto& cone : cones) {
        if (cone.axis_index < 0 || cone.axis_index >= static_cast<int>(dim))
            throw Error("cone axis out of range");
        bool found = false;
        for (const auto& cand : candidates) {
            auto vd = to_doubles(cand.v);
            double axial = vd[cone.axis_index];
            double off_axis2 = 0;
            for (size_t i = 0; i < dim; ++i)
                if (static_cast<int>(i) != cone.axis_index) off_axis2 += vd[i] * vd[i];
            if (std::sqrt(off_axis2) >= cone.aperture * cand.norm) continue;
            (void)axial;
            SnapResult snap = snap_period(p1, p2, vd, match_radius, window);
            if (snap.ok) {
                out.periods.push_back(std::move(snap.certificate));
                found = true;
                break;
            }
        }
        if (!found) {
            out.detail = "cone around axis " + std::to_string(cone.axis_index) +
                         " exhausted without a verified period";
            out.periods.clear();
            return out;
        }
    }

    std::vector<FieldVec> cols;
    for (const auto& cert : out.periods) cols.push_back(cert.period);
    FieldElem det = FieldMatrix::from_columns(cols).det();
    if (det.is_zero()) {
        out.detail = "periods are linearly dependent";
        out.periods.clear();
        return out;
    }
    out.ok = true;
    return out;
}

namespace {

std::vector<Point> stable_residues(const Lattice& lat, const std::vector<Point>& pts,
                                   double box, double merge_tol) {
    FieldElem bound = FieldElem::rational(Rational(box));
    PointSet residues;
    for (const auto& x : pts) {
        bool inside = true;
        for (const auto& c : x) inside = inside && compare(c.abs(), bound) <= 0;
        if (!inside) continue;
        residues.insert(lat.reduce_mod(x).residue);
    }
    // merge float-noise duplicates (no-op for exact inputs)
    std::vector<Point> out(residues.begin(), residues.end());
    if (merge_tol > 0) {
        std::vector<Point> merged;
        for (const auto& r : out) {
            bool close_by = false;
            for (const auto& kept : merged) {
                double d = norm_d(to_doubles(r - kept));
                if (d < merge_tol) {
                    close_by = true;
                    break;
                }
            }
            if (!close_by) merged.push_back(r);
        }
        out = std::move(merged);
    }
    return out;
}

} // namespace

CosetDecomposition coset_decompose(const std::vector<Point>& p1, const std::vector<Point>& p2,
                                   const std::vector<Point>& periods, double window) {
    if (periods.empty()) throw Error("no periods given");
    Lattice lat = [&] {
        try {
            return Lattice(FieldMatrix::from_columns(periods));
        } catch (const Error&) {
            throw Error("periods are dependent (zero determinant)");
        }
    }();
    const double merge_tol = 1e-9;
    std::vector<Point> f1 = stable_residues(lat, p1, window, merge_tol);
    std::vector<Point> f2 = stable_residues(lat, p2, window, merge_tol);
    std::vector<Point> f1_half = stable_residues(lat, p1, window / 2.0, merge_tol);
    std::vector<Point> f2_half = stable_residues(lat, p2, window / 2.0, merge_tol);
    if (f1.size() != f1_half.size() || f2.size() != f2_half.size())
        throw CertificationError("not coset-finite in window: residue count " +
                                 std::to_string(f1.size()) + "/" + std::to_string(f2.size()) +
                                 " vs " + std::to_string(f1_half.size()) + "/" +
                                 std::to_string(f2_half.size()) + " on the half-window");
    return CosetDecomposition{std::move(lat), std::move(f1), std::move(f2)};
}

Comb nu() { return nu_variant(FieldElem::root_term(Rational(1), 2)); }

Comb nu_variant(const FieldElem& stretch) {
    long disc = stretch.disc();
    Comb m(2, disc == 0 ? 2 : disc);
    Lattice z2 = Lattice::integers(2);
    m.add_component(z2, origin(2), {Term{FieldElem::integer(1), Phase(), origin(2)}});

    Lattice shifted = Lattice::diagonal({stretch, FieldElem::integer(1)});
    Point offset{FieldElem::integer(0), FieldElem::rational(Rational(1, 2))};
    // weight e^{pi i m2} on (stretch*m1, m2 + 1/2) in absolute coordinates:
    // frequency (0, 1/2), phase -1/4
    FieldVec freq{FieldElem::integer(0), FieldElem::rational(Rational(1, 2))};
    m.add_component(shifted, offset,
                    {Term{FieldElem::integer(1), Phase(Rational(-1, 4)), freq}});
    return m;
}

std::vector<ExpectedCoset> nu_hat_expected() {
    Lattice z2 = Lattice::integers(2);
    Lattice dual_shifted =
        Lattice::diagonal({FieldElem::root_term(Rational(1), 2), FieldElem::integer(1)}).dual();
    Point offset{FieldElem::integer(0), FieldElem::rational(Rational(1, 2))};
    return {
        ExpectedCoset{z2, origin(2), FieldElem::integer(1)},
        ExpectedCoset{dual_shifted, offset, FieldElem::root_term(Rational(1, 2), 2)},
    };
}

SupportCheck check_support(const Comb& m, const std::vector<ExpectedCoset>& expected) {
    SupportCheck out;
    if (m.components().size() != expected.size()) {
        out.detail = "component count " + std::to_string(m.components().size()) + " != expected " +
                     std::to_string(expected.size());
        return out;
    }
    std::vector<bool> used(expected.size(), false);
    for (const auto& c : m.components()) {
        bool matched = false;
        for (size_t i = 0; i < expected.size() && !matched; ++i) {
            if (used[i]) continue;
            const auto& e = expected[i];
            if (!same_lattice(c.lattice, e.lattice)) continue;
            if (!c.lattice.contains(c.offset - e.offset)) continue;
            bool moduli_ok = true;
            for (const auto& t : c.terms) moduli_ok = moduli_ok && (t.coeff == e.modulus);
            if (!moduli_ok) {
                out.detail = "coset matched but a term modulus differs";
                return out;
            }
            used[i] = true;
            matched = true;
        }
        if (!matched) {
            out.detail = "unexpected support coset";
            return out;
        }
    }
    out.ok = true;
    return out;
}

namespace {

// exact dyadic lift of tan(theta); the tested direction is (1, slope)
Rational slope_of(double theta) {
    double t = std::tan(theta);
    if (!std::isfinite(t) || std::fabs(t) > 1e12)
        throw Error("direction too close to vertical");
    return Rational(t);
}

} // namespace

ClusterPair projection_cluster_certificate(double theta, double eps, double window_cap) {
    return projection_cluster_certificate_slope(FieldElem::root_term(Rational(1), 2),
                                                slope_of(theta), eps, window_cap);
}

ClusterPair projection_cluster_certificate_slope(const FieldElem& stretch, const Rational& slope,
                                                 double eps, double window_cap) {
    if (!(eps > 0)) throw Error("eps must be positive");
    double stretch_d = stretch.to_double();
    long s_cap = static_cast<long>(window_cap / std::max(1.0, std::fabs(stretch_d)));
    if (s_cap < 1) throw CapExceededError("window_cap too small for a single step");

    double slope_d = slope.get_d();
    double scale = std::sqrt(1.0 + slope_d * slope_d);
    // unit-direction gap < eps  <=>  |s*stretch + slope/2 + r| < eps * scale
    double eps_inner = eps * scale;
    Rational beta = slope / 2;

    // minimal |s| whose residual is nonzero in exact arithmetic
    FieldElem beta_f = FieldElem::rational(beta);
    for (long k = 1; k <= s_cap; ++k) {
        ClusterPair best;
        bool found = false;
        for (long s : {k, -k}) {
            double v = static_cast<double>(s) * stretch_d + beta.get_d();
            long r = static_cast<long>(-std::llround(v));
            FieldElem residual = FieldElem::integer(s) * stretch + beta_f + FieldElem::integer(r);
            if (residual.sign() == 0) continue;  // equal projections refute nothing
            double rd = residual.to_double();
            if (std::fabs(rd) >= eps_inner) continue;
            if (found && std::fabs(rd) >= std::fabs(best.projection_diff.to_double())) continue;
            // points: a = (-r, 0) in Z^2, b = (stretch*s, 1/2) in the shifted coset;
            // <a - b, (1, slope)> = -r - s*stretch - slope/2 = -residual
            Point a{FieldElem::integer(-r), FieldElem::integer(0)};
            Point b{FieldElem::integer(s) * stretch, FieldElem::rational(Rational(1, 2))};
            best = ClusterPair{std::move(a), std::move(b), -residual, std::fabs(rd) / scale, s, r};
            found = true;
        }
        if (found) return best;
    }
    throw CapExceededError("no cluster pair with |s| <= " + std::to_string(s_cap) +
                           "; raise window_cap");
}

std::vector<double> default_theta_grid(int count) {
    std::vector<double> grid;
    for (int k = 0; k < count; ++k) {
        // spread over (-pi/2, pi/2), symmetric, never hitting the vertical
        double theta = -std::numbers::pi / 2.0 +
                       std::numbers::pi * (static_cast<double>(k) + 0.5) / count;
        grid.push_back(theta);
    }
    return grid;
}

std::vector<double> default_eps_ladder() { return {1e-1, 1e-2, 1e-3, 1e-4}; }

namespace {

RefutationReport refute_impl(const FieldElem& stretch, const std::vector<Rational>& slopes,
                             const std::vector<double>& thetas,
                             const std::vector<double>& eps_ladder, double window_cap) {
    if (slopes.empty() || eps_ladder.empty()) throw Error("empty direction grid or eps ladder");
    RefutationReport report;
    Comb measure = nu_variant(stretch);

    for (size_t i = 0; i < slopes.size(); ++i) {
        DirectionReport dir;
        dir.slope = slopes[i];
        dir.theta = thetas.empty() ? std::atan(slopes[i].get_d()) : thetas[i];
        dir.complete = true;
        for (double eps : eps_ladder) {
            try {
                ClusterPair pair =
                    projection_cluster_certificate_slope(stretch, slopes[i], eps, window_cap);
                // re-verification: both points carry mass, the projection gap
                // is below eps and exactly nonzero
                if (atom_weight(measure, pair.a).is_zero() ||
                    atom_weight(measure, pair.b).is_zero())
                    throw CertificationError("certificate point is not in the support");
                if (pair.projection_diff.sign() == 0 || !(pair.unit_gap < eps))
                    throw CertificationError("certificate failed re-verification");
                dir.ladder.push_back(std::move(pair));
            } catch (const CapExceededError& e) {
                dir.complete = false;
                dir.detail = std::string("eps ") + std::to_string(eps) + ": " + e.what();
                break;
            }
        }
        report.refuted = report.directions.empty() ? dir.complete
                                                   : (report.refuted && dir.complete);
        report.directions.push_back(std::move(dir));
    }

    // vertical control: projections land in (1/2)Z, min positive gap exactly 1/2
    auto atoms = atoms_in_window(measure, 3.0);
    std::vector<Point> pts;
    for (auto& a : atoms) pts.push_back(a.location);
    FieldVec vertical{FieldElem::integer(0), FieldElem::integer(1)};
    FieldVec projections = project_exact(pts, vertical);
    std::sort(projections.begin(), projections.end(),
              [](const FieldElem& a, const FieldElem& b) { return compare(a, b) < 0; });
    FieldElem best_gap;
    bool have = false;
    for (size_t i = 0; i + 1 < projections.size(); ++i) {
        FieldElem gap = projections[i + 1] - projections[i];
        if (gap.is_zero()) continue;
        if (!have || compare(gap, best_gap) < 0) {
            best_gap = gap;
            have = true;
        }
    }
    report.vertical_gap = have ? best_gap.to_double() : 0.0;

    report.verdict =
        report.refuted
            ? "cover refuted on sampled directions: a lattice-coset cover needs two "
              "independent directions with uniformly discrete projections; the vertical "
              "direction keeps gap 1/2 but every sampled non-vertical direction clusters "
              "below the full eps ladder (sampled refutation, not a quantification over "
              "all lattices)"
            : "cover NOT refuted: some sampled direction keeps a positive projection gap";
    return report;
}

} // namespace

RefutationReport refute_lattice_cover(const std::vector<double>& theta_grid,
                                      const std::vector<double>& eps_ladder, double window_cap) {
    std::vector<Rational> slopes;
    for (double theta : theta_grid) slopes.push_back(slope_of(theta));
    return refute_impl(FieldElem::root_term(Rational(1), 2), slopes, theta_grid, eps_ladder,
                       window_cap);
}

RefutationReport refute_lattice_cover_slopes(const FieldElem& stretch,
                                             const std::vector<Rational>& slopes,
                                             const std::vector<double>& eps_ladder,
                                             double window_cap) {
    return refute_impl(stretch, slopes, {}, eps_ladder, window_cap);
}

std::vector<Point> lift_points(const std::vector<std::vector<double>>& pts) {
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        Point q(p.size());
        for (size_t i = 0; i < p.size(); ++i)
            q[i] = FieldElem::rational(Rational(p[i]));  // exact double lift
        out.push_back(std::move(q));
    }
    return out;
}

} // namespace qclat
