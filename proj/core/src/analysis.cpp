#include "qclat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace qclat {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

void CompensatedSum::add(double x) {
    double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
        comp += (sum - t) + x;
    else
        comp += (x - t) + sum;
    sum = t;
}

std::complex<double> GaussianProbe::operator()(const std::vector<double>& x) const {
    double q = 0.0, angle = 0.0;
    for (size_t i = 0; i < center.size(); ++i) {
        double u = (x[i] - center[i]) / sigma;
        q += u * u;
        angle += x[i] * modulation[i];
    }
    return std::exp(-kPi * q) * std::polar(1.0, kTwoPi * angle);
}

ScaledProbe probe_fourier(const GaussianProbe& f) {
    int p = f.dim();
    double ip = 0.0;
    for (int i = 0; i < p; ++i) ip += f.center[i] * f.modulation[i];
    std::complex<double> scale = std::pow(f.sigma, p) * std::polar(1.0, kTwoPi * ip);
    GaussianProbe hat;
    hat.center = f.modulation;
    hat.sigma = 1.0 / f.sigma;
    hat.modulation.resize(f.center.size());
    for (int i = 0; i < p; ++i) hat.modulation[i] = -f.center[i];
    return ScaledProbe{scale, std::move(hat)};
}

AtomTable build_atom_table(const Comb& m, double radius, size_t cap) {
    AtomTable t;
    t.radius = radius;
    t.atoms = numeric_atoms_in_window(m, radius, cap);
    for (const auto& c : m.components())
        for (const auto& term : c.terms) t.weight_bound += std::fabs(term.coeff.to_double());
    // measured near-origin gap, halved as a safety margin for the shell bound
    double g = std::numeric_limits<double>::infinity();
    std::vector<const NumericAtom*> near;
    for (const auto& a : t.atoms) {
        bool close = true;
        for (double c : a.x) close = close && std::fabs(c) <= 4.0;
        if (close) near.push_back(&a);
    }
    for (size_t i = 0; i < near.size(); ++i)
        for (size_t j = i + 1; j < near.size(); ++j) {
            double d2 = 0;
            for (size_t k = 0; k < near[i]->x.size(); ++k) {
                double dd = near[i]->x[k] - near[j]->x[k];
                d2 += dd * dd;
            }
            g = std::min(g, std::sqrt(d2));
        }
    t.gap_estimate = std::isfinite(g) ? g / 2.0 : 1.0;
    return t;
}

namespace {

// shell-count bound: atoms pairwise >= gamma apart, so a ball of radius rho
// holds at most (2 rho / gamma + 1)^p of them
double count_bound(double rho, double gamma, int p) {
    return std::pow(2.0 * rho / gamma + 1.0, p);
}

double tail_bound_at(double r_cut, double sigma, double weight_bound, double scale_abs,
                     double gamma, int p) {
    double total = 0.0;
    for (int k = 0; k < 10000; ++k) {
        double inner = r_cut + k;
        double term = weight_bound * scale_abs * count_bound(inner + 1.0, gamma, p) *
                      std::exp(-kPi * (inner / sigma) * (inner / sigma));
        total += term;
        if (term < 1e-300 || (k > 2 && term < total * 1e-12)) break;
    }
    return total;
}

double choose_cut_radius(double sigma, double weight_bound, double scale_abs, double gamma,
                         int p, double tol) {
    double r = sigma;
    while (tail_bound_at(r, sigma, weight_bound, scale_abs, gamma, p) >= tol / 2.0) {
        r += std::max(sigma / 4.0, 0.25);
        if (r > 1e6) throw CapExceededError("apply_measure cut radius exceeds 1e6");
    }
    return r;
}

} // namespace

ApplyResult apply_measure(const AtomTable& table, const ScaledProbe& f, double tol) {
    int p = f.probe.dim();
    double scale_abs = std::abs(f.scale);
    double r_cut = choose_cut_radius(f.probe.sigma, table.weight_bound, scale_abs,
                                     table.gap_estimate, p, tol);
    double need = 0.0;
    for (double c : f.probe.center) need = std::max(need, std::fabs(c));
    if (need + r_cut > table.radius + 1e-9)
        throw Error("atom table radius " + std::to_string(table.radius) +
                    " too small for cut " + std::to_string(need + r_cut));

    ComplexSum acc;
    size_t used = 0;
    for (const auto& a : table.atoms) {
        double d2 = 0.0;
        for (int i = 0; i < p; ++i) {
            double dd = a.x[i] - f.probe.center[i];
            d2 += dd * dd;
        }
        if (d2 > r_cut * r_cut) continue;
        acc.add(a.weight * f(a.x));
        ++used;
    }
    double tail = tail_bound_at(r_cut, f.probe.sigma, table.weight_bound, scale_abs,
                                table.gap_estimate, p);
    return ApplyResult{acc.value(), tail, r_cut, used};
}

ApplyResult apply_measure(const Comb& m, const ScaledProbe& f, double tol, size_t cap) {
    if (m.components().empty()) return ApplyResult{};
    // one bootstrap table to measure the gap, then the real table at the cut
    double w = 0.0;
    for (const auto& c : m.components())
        for (const auto& term : c.terms) w += std::fabs(term.coeff.to_double());
    AtomTable gap_table = build_atom_table(m, 4.0, cap);
    double r_cut = choose_cut_radius(f.probe.sigma, w, std::abs(f.scale),
                                     gap_table.gap_estimate, f.probe.dim(), tol);
    double need = 0.0;
    for (double c : f.probe.center) need = std::max(need, std::fabs(c));
    AtomTable table = build_atom_table(m, need + r_cut + 1.0, cap);
    return apply_measure(table, f, tol);
}

ApplyResult apply_measure(const Comb& m, const GaussianProbe& f, double tol, size_t cap) {
    return apply_measure(m, ScaledProbe{{1.0, 0.0}, f}, tol, cap);
}

PoissonReport poisson_check(const Comb& m, const std::vector<GaussianProbe>& probes,
                            double tol) {
    PoissonReport report;
    report.tol = tol;
    report.all_pass = true;
    report.max_residual = 0.0;
    if (probes.empty()) return report;

    Comb hat = fourier(m);
    // shared tables sized for the worst probe of the panel
    double gap_m = build_atom_table(m, 4.0).gap_estimate;
    double gap_hat = build_atom_table(hat, 4.0).gap_estimate;
    double w_m = 0.0, w_hat = 0.0;
    for (const auto& c : m.components())
        for (const auto& t : c.terms) w_m += std::fabs(t.coeff.to_double());
    for (const auto& c : hat.components())
        for (const auto& t : c.terms) w_hat += std::fabs(t.coeff.to_double());

    double need_m = 0.0, need_hat = 0.0;
    for (const auto& f : probes) {
        ScaledProbe fhat = probe_fourier(f);
        double r1 = choose_cut_radius(fhat.probe.sigma, w_m, std::abs(fhat.scale), gap_m,
                                      f.dim(), tol);
        double c1 = 0.0;
        for (double c : fhat.probe.center) c1 = std::max(c1, std::fabs(c));
        need_m = std::max(need_m, c1 + r1);
        double r2 = choose_cut_radius(f.sigma, w_hat, 1.0, gap_hat, f.dim(), tol);
        double c2 = 0.0;
        for (double c : f.center) c2 = std::max(c2, std::fabs(c));
        need_hat = std::max(need_hat, c2 + r2);
    }
    AtomTable table_m = build_atom_table(m, need_m + 1.0);
    AtomTable table_hat = build_atom_table(hat, need_hat + 1.0);

    for (const auto& f : probes) {
        ApplyResult lhs = apply_measure(table_m, probe_fourier(f), tol);
        ApplyResult rhs = apply_measure(table_hat, ScaledProbe{{1.0, 0.0}, f}, tol);
        double residual = std::abs(lhs.value - rhs.value);
        bool pass = residual < 2.0 * tol;
        report.max_residual = std::max(report.max_residual, residual);
        report.all_pass = report.all_pass && pass;
        report.checks.push_back(ProbeCheck{f, lhs.value, rhs.value, residual, pass});
    }
    return report;
}

OracleResult atom_oracle(const Comb& m, const Point& z, const std::vector<double>& sigma_ladder,
                         double tol, double convergence_eps) {
    if (sigma_ladder.size() < 2) throw Error("sigma ladder needs at least two rungs");
    OracleResult out;
    std::vector<double> zd = to_doubles(z);

    double w = 0.0;
    for (const auto& c : m.components())
        for (const auto& t : c.terms) w += std::fabs(t.coeff.to_double());
    if (m.components().empty()) {
        out.value = 0;
        out.converged = true;
        out.convergence = 0;
        return out;
    }
    double gap = build_atom_table(m, 4.0).gap_estimate;

    // all rungs share one table sized for the narrowest sigma
    double need = 0.0;
    for (double sigma : sigma_ladder) {
        GaussianProbe probe{zd, sigma, std::vector<double>(zd.size(), 0.0)};
        ScaledProbe hat = probe_fourier(probe);
        double r = choose_cut_radius(hat.probe.sigma, w, std::abs(hat.scale), gap,
                                     static_cast<int>(zd.size()), tol);
        double c0 = 0.0;
        for (double c : hat.probe.center) c0 = std::max(c0, std::fabs(c));
        need = std::max(need, c0 + r);
    }
    AtomTable table = build_atom_table(m, need + 1.0);

    for (double sigma : sigma_ladder) {
        GaussianProbe probe{zd, sigma, std::vector<double>(zd.size(), 0.0)};
        out.estimates.push_back(apply_measure(table, probe_fourier(probe), tol).value);
    }
    size_t n = out.estimates.size();
    out.convergence = std::abs(out.estimates[n - 1] - out.estimates[n - 2]);
    out.converged = out.convergence < convergence_eps;
    out.value = out.estimates.back();
    if (!out.converged)
        out.diagnostic = "ladder did not converge: last step " + std::to_string(out.convergence) +
                         " >= " + std::to_string(convergence_eps) +
                         " (spectrum gap too small for the ladder?)";
    return out;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double covering_radius_estimate(const std::vector<std::vector<double>>& pts, double window) {
    if (pts.empty()) return 0.0;
    size_t p = pts[0].size();
    double half = window / 2.0;
    int steps = 32;
    double h = 2.0 * half / steps;
    std::vector<int> idx(p, 0);
    double worst = 0.0;
    while (true) {
        std::vector<double> node(p);
        for (size_t i = 0; i < p; ++i) node[i] = -half + idx[i] * h;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : pts) best = std::min(best, sq_dist(node, q));
        worst = std::max(worst, std::sqrt(best));
        size_t j = p;
        bool done = true;
        while (j-- > 0) {
            if (idx[j] < steps) {
                ++idx[j];
                done = false;
                break;
            }
            idx[j] = 0;
        }
        if (done) break;
    }
    return worst + h * std::sqrt(static_cast<double>(p)) / 2.0;
}

} // namespace

DiscretenessProfile discreteness_profile(const std::vector<Point>& points, double window) {
    if (points.size() < 2) throw Error("discreteness profile needs >= 2 points");
    std::vector<std::vector<double>> pd(points.size());
    for (size_t i = 0; i < points.size(); ++i) pd[i] = to_doubles(points[i]);

    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pd.size(); ++i)
        for (size_t j = i + 1; j < pd.size(); ++j) best = std::min(best, sq_dist(pd[i], pd[j]));

    // exact refinement over the near-minimal candidates
    double cut = best * (1.0 + 1e-6) + 1e-12;
    FieldElem best_exact;
    bool have = false;
    for (size_t i = 0; i < pd.size(); ++i)
        for (size_t j = i + 1; j < pd.size(); ++j) {
            if (sq_dist(pd[i], pd[j]) > cut) continue;
            FieldVec d = points[i] - points[j];
            FieldElem n2 = inner_product(d, d);
            if (!have || compare(n2, best_exact) < 0) {
                best_exact = n2;
                have = true;
            }
        }
    DiscretenessProfile prof;
    prof.window = window;
    prof.min_gap = std::sqrt(best_exact.to_double());
    prof.separation_radius = prof.min_gap / 2.0;
    prof.fill_radius = covering_radius_estimate(pd, window);
    return prof;
}

DiscretenessProfile discreteness_profile_numeric(const std::vector<std::vector<double>>& points,
                                                 double window) {
    if (points.size() < 2) throw Error("discreteness profile needs >= 2 points");
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            best = std::min(best, sq_dist(points[i], points[j]));
    DiscretenessProfile prof;
    prof.window = window;
    prof.min_gap = std::sqrt(best);
    prof.separation_radius = prof.min_gap / 2.0;
    prof.fill_radius = covering_radius_estimate(points, window);
    return prof;
}

namespace {

// nearest-neighbor gap among distinct values via spatial hashing in doubles;
// near-ties re-certified exactly when exact values are supplied
struct GapScanner {
    double cell;
    std::unordered_map<long long, std::vector<size_t>> grid;
    const std::vector<std::vector<double>>& vals;

    GapScanner(const std::vector<std::vector<double>>& v, double cell_size)
        : cell(cell_size), vals(v) {
        for (size_t i = 0; i < vals.size(); ++i) grid[key(vals[i])].push_back(i);
    }
    long long key(const std::vector<double>& x) const {
        long long k = 0;
        for (double c : x) k = k * 1000003LL + static_cast<long long>(std::floor(c / cell));
        return k;
    }
    double min_gap() const {
        double best = std::numeric_limits<double>::infinity();
        size_t p = vals.empty() ? 0 : vals[0].size();
        std::vector<long long> offsets;
        int combos = 1;
        for (size_t i = 0; i < p; ++i) combos *= 3;
        for (size_t i = 0; i < vals.size(); ++i) {
            for (int c = 0; c < combos; ++c) {
                std::vector<double> probe = vals[i];
                int cc = c;
                for (size_t k = 0; k < p; ++k) {
                    probe[k] += cell * ((cc % 3) - 1);
                    cc /= 3;
                }
                auto it = grid.find(key(probe));
                if (it == grid.end()) continue;
                for (size_t j : it->second) {
                    if (j <= i) continue;
                    best = std::min(best, sq_dist(vals[i], vals[j]));
                }
            }
        }
        return std::sqrt(best);
    }
};

DifferenceProfile finish_profile(std::vector<std::vector<double>> vals) {
    DifferenceProfile prof;
    std::sort(vals.begin(), vals.end());
    prof.values = std::move(vals);
    prof.distinct_count = prof.values.size();
    if (prof.values.size() >= 2) {
        // pick a cell size that keeps occupancy near O(1)
        double span = 1.0;
        for (size_t k = 0; k < prof.values[0].size(); ++k) {
            double lo = prof.values.front()[k], hi = lo;
            for (const auto& v : prof.values) {
                lo = std::min(lo, v[k]);
                hi = std::max(hi, v[k]);
            }
            span = std::max(span, hi - lo);
        }
        double cell = std::max(span / std::pow(static_cast<double>(prof.values.size()),
                                               1.0 / prof.values[0].size()), 1e-9);
        GapScanner scan(prof.values, cell);
        double g = scan.min_gap();
        // shrink the cell until it cannot hide a closer pair
        while (std::isfinite(g) && g < cell / 2 && cell > 1e-9) {
            cell = std::max(g * 1.5, 1e-9);
            GapScanner finer(prof.values, cell);
            g = finer.min_gap();
            break;
        }
        prof.min_positive_gap = g;
    }
    return prof;
}

} // namespace

DifferenceProfile difference_profile(const std::vector<Point>& a, const std::vector<Point>& b,
                                     const FieldElem& alpha, double value_window) {
    if (a.empty() || b.empty()) return DifferenceProfile{};
    size_t p = a[0].size();
    std::vector<std::vector<double>> ad(a.size()), bd(b.size());
    for (size_t i = 0; i < a.size(); ++i) ad[i] = to_doubles(a[i]);
    for (size_t i = 0; i < b.size(); ++i) bd[i] = to_doubles(b[i]);
    double alpha_d = alpha.to_double();

    // double prefilter, exact window test and exact dedup on the survivors
    std::vector<FieldVec> exact_vals;
    FieldElem window = FieldElem::rational(Rational(value_window));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) {
            bool maybe = true;
            for (size_t k = 0; k < p && maybe; ++k)
                maybe = std::fabs(ad[i][k] + alpha_d * bd[j][k]) <= value_window + 1e-6;
            if (!maybe) continue;
            FieldVec v = a[i] + alpha * b[j];
            bool inside = true;
            for (size_t k = 0; k < p && inside; ++k)
                inside = compare(v[k].abs(), window) <= 0;
            if (inside) exact_vals.push_back(std::move(v));
        }

    // dedup: sort by double key, exact comparison inside near-equal runs
    std::vector<std::vector<double>> keys(exact_vals.size());
    for (size_t i = 0; i < exact_vals.size(); ++i) keys[i] = to_doubles(exact_vals[i]);
    std::vector<size_t> order(exact_vals.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t x, size_t y) { return keys[x] < keys[y]; });
    std::vector<size_t> kept;
    for (size_t idx : order) {
        bool dup = false;
        for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
            if (sq_dist(keys[*it], keys[idx]) > 1e-18) break;
            if (compare_vec(exact_vals[*it], exact_vals[idx]) == 0) {
                dup = true;
                break;
            }
        }
        if (!dup) kept.push_back(idx);
    }
    std::vector<std::vector<double>> vals;
    vals.reserve(kept.size());
    for (size_t idx : kept) vals.push_back(keys[idx]);
    return finish_profile(std::move(vals));
}

DifferenceProfile difference_profile(const std::vector<Point>& a, const std::vector<Point>& b,
                                     std::complex<double> alpha, double value_window) {
    if (a.empty() || b.empty()) return DifferenceProfile{};
    if (a[0].size() != 2) throw Error("complex alpha needs p = 2");
    std::vector<std::vector<double>> vals;
    for (const auto& pa : a) {
        auto av = to_doubles(pa);
        for (const auto& pb : b) {
            auto bv = to_doubles(pb);
            double x = av[0] + alpha.real() * bv[0] - alpha.imag() * bv[1];
            double y = av[1] + alpha.imag() * bv[0] + alpha.real() * bv[1];
            if (std::fabs(x) <= value_window && std::fabs(y) <= value_window)
                vals.push_back({x, y});
        }
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end(),
                           [](const auto& u, const auto& v) { return sq_dist(u, v) < 1e-20; }),
               vals.end());
    return finish_profile(std::move(vals));
}

std::vector<double> project(const std::vector<Point>& points, double theta) {
    std::vector<double> out;
    out.reserve(points.size());
    double c = std::cos(theta), s = std::sin(theta);
    for (const auto& p : points) {
        auto v = to_doubles(p);
        if (v.size() != 2) throw Error("theta projection needs p = 2");
        out.push_back(v[0] * c + v[1] * s);
    }
    return out;
}

std::vector<double> project(const std::vector<std::vector<double>>& points,
                            const std::vector<double>& direction) {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        double ip = 0;
        for (size_t i = 0; i < direction.size(); ++i) ip += p[i] * direction[i];
        out.push_back(ip);
    }
    return out;
}

FieldVec project_exact(const std::vector<Point>& points, const FieldVec& direction) {
    FieldVec out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(inner_product(p, direction));
    return out;
}

std::complex<double> idempotent_indicator(const std::vector<double>& moduli,
                                          std::complex<double> z) {
    std::complex<double> prod{1.0, 0.0};
    for (double beta : moduli) {
        if (!(beta > 0)) throw Error("moduli must be positive");
        prod *= (std::complex<double>{1.0, 0.0} - z * std::conj(z) / (beta * beta));
    }
    return std::complex<double>{1.0, 0.0} - prod;
}

} // namespace qclat
