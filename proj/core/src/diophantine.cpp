#include "qclat/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qclat {

double dist_to_int(double x) {
    double f = x - std::round(x);
    return std::fabs(f);
}

std::vector<std::pair<Integer, Integer>> CFExpansion::convergents(size_t count) const {
    count = std::min(count, partial_quotients.size());
    std::vector<std::pair<Integer, Integer>> out;
    Integer p_prev(1), p_prev2(0), q_prev(0), q_prev2(1);
    for (size_t k = 0; k < count; ++k) {
        Integer p = partial_quotients[k] * p_prev + p_prev2;
        Integer q = partial_quotients[k] * q_prev + q_prev2;
        out.emplace_back(p, q);
        p_prev2 = p_prev;
        p_prev = p;
        q_prev2 = q_prev;
        q_prev = q;
    }
    return out;
}

CFExpansion cf_expand(const FieldElem& x, int n_terms) {
    if (x.is_rational())
        throw Error("cf_expand needs a quadratic irrational; use exact rational arithmetic "
                    "for rational inputs");
    if (n_terms < 1) throw Error("n_terms must be >= 1");

    CFExpansion out;
    out.value = x;
    // complete quotients of a quadratic irrational recur; exact equality
    // detects the cycle
    std::map<FieldElem, int, decltype([](const FieldElem& a, const FieldElem& b) {
                 return compare(a, b) < 0;
             })>
        seen;
    FieldElem cur = x;
    for (int k = 0; k < n_terms; ++k) {
        if (auto it = seen.find(cur); it != seen.end()) {
            out.period_start = it->second;
            out.period_length = k - it->second;
            break;
        }
        seen.emplace(cur, k);
        Integer a = cur.floor();
        out.partial_quotients.push_back(a);
        cur = (cur - FieldElem::rational(Rational(a))).inverse();
    }
    if (out.period_start >= 0) {
        // replicate the cycle up to the requested length
        while (static_cast<int>(out.partial_quotients.size()) < n_terms) {
            int k = static_cast<int>(out.partial_quotients.size());
            int idx = out.period_start + (k - out.period_start) % out.period_length;
            out.partial_quotients.push_back(out.partial_quotients[idx]);
        }
    }
    return out;
}

HomogeneousApprox best_homogeneous(const FieldElem& x, double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw Error("best_homogeneous needs 0 < eps < 1/2");
    if (x.is_rational()) throw Error("best_homogeneous needs an irrational x");
    FieldElem bound = FieldElem::rational(Rational(eps));  // exact lift of the double

    Integer p_prev(1), p_prev2(0), q_prev(0), q_prev2(1);
    FieldElem prev_residual;
    bool have_prev = false;
    FieldElem cur = x;
    for (int k = 0; k < 1000; ++k) {
        Integer a = cur.floor();
        Integer p = a * p_prev + p_prev2;
        Integer q = a * q_prev + q_prev2;
        if (k > 0 || q > 0) {
            FieldElem residual =
                FieldElem::rational(Rational(q)) * x - FieldElem::rational(Rational(p));
            if (compare(residual.abs(), bound) < 0 && q > 0) {
                // the best-approximation property makes the previous failing
                // convergent a minimality certificate
                if (have_prev && compare(prev_residual.abs(), bound) < 0)
                    throw Error("convergent monotonicity violated");
                return HomogeneousApprox{q, -p, residual, residual.to_double()};
            }
            prev_residual = residual;
            have_prev = true;
        }
        p_prev2 = p_prev;
        p_prev = p;
        q_prev2 = q_prev;
        q_prev = q;
        cur = (cur - FieldElem::rational(Rational(a))).inverse();
    }
    throw CapExceededError("best_homogeneous: convergent walk did not reach eps");
}

InhomogeneousApprox best_inhomogeneous(double x, double beta, double eps, long s_cap) {
    if (!(eps > 0)) throw Error("eps must be positive");
    if (s_cap < 1) throw Error("s_cap must be >= 1");
    for (long k = 0; k <= s_cap; ++k) {
        InhomogeneousApprox best;
        for (long s : (k == 0 ? std::vector<long>{0} : std::vector<long>{k, -k})) {
            double v = static_cast<double>(s) * x + beta;
            double r = -std::round(v);
            double residual = v + r;
            if (s == 0 && residual == 0.0) continue;  // trivial identity, e.g. beta = 0
            if (std::fabs(residual) < eps &&
                (!best.found || std::fabs(residual) < std::fabs(best.residual)))
                best = InhomogeneousApprox{s, static_cast<long>(r), residual, true};
        }
        if (best.found) return best;
    }
    return InhomogeneousApprox{};
}

bool verify_inhomogeneous(const FieldElem& x, const Rational& beta, long s, long r, double eps) {
    FieldElem v = FieldElem::integer(s) * x + FieldElem::rational(beta) + FieldElem::integer(r);
    return compare(v.abs(), FieldElem::rational(Rational(eps))) < 0;
}

IntBasis int_basis(const std::vector<std::vector<long>>& rows) {
    IntBasis b;
    for (const auto& row : rows) {
        std::vector<Rational> r;
        r.reserve(row.size());
        for (long v : row) r.emplace_back(v);
        b.rows.push_back(std::move(r));
    }
    return b;
}

namespace {

double rat_to_d(const Rational& q) { return q.get_d(); }

Rational dot_exact(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct ExactGS {
    // mu[i][j] for j < i, and Bstar[i] = |b*_i|^2, exact
    std::vector<std::vector<Rational>> mu;
    std::vector<Rational> Bstar;
};

ExactGS exact_gram_schmidt(const std::vector<std::vector<Rational>>& rows) {
    size_t n = rows.size(), d = rows[0].size();
    std::vector<std::vector<Rational>> star = rows;
    ExactGS gs;
    gs.mu.assign(n, std::vector<Rational>(n, Rational(0)));
    gs.Bstar.assign(n, Rational(0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < i; ++j) {
            if (sgn(gs.Bstar[j]) == 0) throw Error("dependent rows in basis");
            gs.mu[i][j] = dot_exact(rows[i], star[j]) / gs.Bstar[j];
            for (size_t k = 0; k < d; ++k) star[i][k] -= gs.mu[i][j] * star[j][k];
        }
        gs.Bstar[i] = dot_exact(star[i], star[i]);
    }
    return gs;
}

struct DoubleGS {
    std::vector<std::vector<double>> mu;
    std::vector<double> Bstar;
};

DoubleGS double_gram_schmidt(const std::vector<std::vector<Rational>>& rows) {
    size_t n = rows.size(), d = rows[0].size();
    std::vector<std::vector<double>> r(n, std::vector<double>(d));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < d; ++k) r[i][k] = rat_to_d(rows[i][k]);
    std::vector<std::vector<double>> star = r;
    DoubleGS gs;
    gs.mu.assign(n, std::vector<double>(n, 0.0));
    gs.Bstar.assign(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < i; ++j) {
            double dot = 0;
            for (size_t k = 0; k < d; ++k) dot += r[i][k] * star[j][k];
            gs.mu[i][j] = dot / gs.Bstar[j];
            for (size_t k = 0; k < d; ++k) star[i][k] -= gs.mu[i][j] * star[j][k];
        }
        double b = 0;
        for (size_t k = 0; k < d; ++k) gs.Bstar[i] += star[i][k] * star[i][k];
        (void)b;
    }
    return gs;
}

} // namespace

LLLResult lll_reduce(const IntBasis& b, const Rational& delta) {
    if (!(delta > Rational(1, 4) && delta < Rational(1)))
        throw Error("LLL delta must lie in (1/4, 1)");
    if (b.rows.empty()) throw Error("empty basis");
    size_t n = b.rows.size(), d = b.rows[0].size();
    if (n > d) throw Error("more rows than dimensions: dependent input");

    std::vector<std::vector<Rational>> rows = b.rows;
    std::vector<std::vector<Integer>> u(n, std::vector<Integer>(n, Integer(0)));
    for (size_t i = 0; i < n; ++i) u[i][i] = 1;

    {
        // dependence is rejected up front, exactly
        ExactGS gs = exact_gram_schmidt(rows);
        for (size_t i = 0; i < n; ++i)
            if (sgn(gs.Bstar[i]) == 0) throw Error("dependent rows in basis");
    }

    double delta_d = rat_to_d(delta);
    const double kFuzz = 1e-9;

    size_t k = 1;
    size_t guard = 0;
    while (k < n) {
        if (++guard > 100000) throw Error("LLL failed to terminate");
        DoubleGS gs = double_gram_schmidt(rows);
        // size-reduce row k against rows k-1 .. 0
        for (size_t j = k; j-- > 0;) {
            double mu_kj = gs.mu[k][j];
            Integer q;
            if (std::fabs(mu_kj - std::round(mu_kj)) > 0.5 - kFuzz) {
                // rounding is ambiguous in doubles: recompute this mu exactly
                ExactGS egs = exact_gram_schmidt(rows);
                Rational shifted = egs.mu[k][j] + Rational(1, 2);
                Integer fl;
                mpz_fdiv_q(fl.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
                q = fl;  // floor(mu + 1/2); any q with |mu - q| <= 1/2 works
            } else {
                q = Integer(static_cast<long>(std::llround(mu_kj)));
            }
            if (q != 0) {
                for (size_t c = 0; c < d; ++c) rows[k][c] -= Rational(q) * rows[j][c];
                for (size_t c = 0; c < n; ++c) u[k][c] -= q * u[j][c];
                gs = double_gram_schmidt(rows);
            }
        }
        // Lovasz test with exact fallback near the threshold
        double lhs = gs.Bstar[k];
        double rhs = (delta_d - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.Bstar[k - 1];
        bool ok;
        double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
        if (std::fabs(lhs - rhs) < kFuzz * scale) {
            ExactGS egs = exact_gram_schmidt(rows);
            Rational mu = egs.mu[k][k - 1];
            ok = egs.Bstar[k] >= (delta - mu * mu) * egs.Bstar[k - 1];
        } else {
            ok = lhs >= rhs;
        }
        if (ok) {
            ++k;
        } else {
            std::swap(rows[k], rows[k - 1]);
            std::swap(u[k], u[k - 1]);
            k = std::max<size_t>(k - 1, 1);
        }
    }
    return LLLResult{IntBasis{rows}, std::move(u)};
}

bool verify_lll(const IntBasis& b, const Rational& delta) {
    ExactGS gs = exact_gram_schmidt(b.rows);
    Rational half(1, 2);
    for (size_t i = 0; i < b.rows.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (abs(gs.mu[i][j]) > half) return false;
    for (size_t k = 1; k < b.rows.size(); ++k) {
        Rational mu = gs.mu[k][k - 1];
        if (gs.Bstar[k] < (delta - mu * mu) * gs.Bstar[k - 1]) return false;
    }
    return true;
}

BabaiResult babai_nearest(const IntBasis& lll_basis, const std::vector<double>& target) {
    size_t n = lll_basis.rows.size(), d = lll_basis.dim();
    if (target.size() != d) throw Error("target dim mismatch");
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < d; ++k) rows[i][k] = rat_to_d(lll_basis.rows[i][k]);
    // Gram-Schmidt frame of the (already reduced) basis
    std::vector<std::vector<double>> star = rows;
    std::vector<double> Bstar(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < i; ++j) {
            double m = 0;
            for (size_t c = 0; c < d; ++c) m += rows[i][c] * star[j][c];
            m /= Bstar[j];
            for (size_t c = 0; c < d; ++c) star[i][c] -= m * star[j][c];
        }
        for (size_t c = 0; c < d; ++c) Bstar[i] += star[i][c] * star[i][c];
        if (Bstar[i] == 0.0) throw Error("dependent rows in basis");
    }

    std::vector<double> w = target;
    std::vector<Integer> coeffs(n, Integer(0));
    for (size_t i = n; i-- > 0;) {
        double m = 0;
        for (size_t c = 0; c < d; ++c) m += w[c] * star[i][c];
        m /= Bstar[i];
        long q = std::lround(m);
        coeffs[i] = q;
        for (size_t c = 0; c < d; ++c) w[c] -= static_cast<double>(q) * rows[i][c];
    }
    std::vector<Rational> point(d, Rational(0));
    for (size_t i = 0; i < n; ++i)
        for (size_t c = 0; c < d; ++c) point[c] += Rational(coeffs[i]) * lll_basis.rows[i][c];
    double dist2 = 0;
    for (size_t c = 0; c < d; ++c) {
        double diff = rat_to_d(point[c]) - target[c];
        dist2 += diff * diff;
    }
    return BabaiResult{std::move(coeffs), std::move(point), std::sqrt(dist2)};
}

namespace {

bool verify_kronecker(const KroneckerSystem& sys, const std::vector<double>& tau) {
    for (size_t n = 0; n < sys.freqs.size(); ++n) {
        double ip = 0;
        for (size_t i = 0; i < tau.size(); ++i) ip += tau[i] * sys.freqs[n][i];
        double z = sys.targets.empty() ? 0.0 : sys.targets[n];
        if (dist_to_int(ip - z) >= sys.tol) return false;
    }
    return true;
}

} // namespace

std::vector<double> kronecker_seed(const KroneckerSystem& sys) {
    if (sys.freqs.empty()) throw Error("empty Kronecker system");
    size_t q = sys.freqs[0].size(), N = sys.freqs.size();
    double M = 1.0 / sys.tol;
    // rows: (e_i, M w_.i) for tau steps and (0, M e_n) for the integer slack
    std::vector<std::vector<Rational>> rows;
    for (size_t i = 0; i < q; ++i) {
        std::vector<Rational> r(q + N, Rational(0));
        r[i] = 1;
        for (size_t n = 0; n < N; ++n) r[q + n] = Rational(M * sys.freqs[n][i]);
        rows.push_back(std::move(r));
    }
    for (size_t n = 0; n < N; ++n) {
        std::vector<Rational> r(q + N, Rational(0));
        r[q + n] = Rational(M);
        rows.push_back(std::move(r));
    }
    LLLResult red = lll_reduce(IntBasis{rows});
    std::vector<double> target(q + N, 0.0);
    for (size_t n = 0; n < N; ++n)
        target[q + n] = M * (sys.targets.empty() ? 0.0 : sys.targets[n]);
    BabaiResult nearest = babai_nearest(red.basis, target);
    std::vector<double> tau(q, 0.0);
    for (size_t i = 0; i < q; ++i) tau[i] = rat_to_d(nearest.point[i]);
    return tau;
}

std::vector<std::vector<double>> kronecker_solve(const KroneckerSystem& sys,
                                                 double search_radius, double grid_step,
                                                 size_t cap) {
    if (sys.freqs.empty()) throw Error("empty Kronecker system");
    if (!(sys.tol > 0)) throw Error("tol must be positive");
    if (!(grid_step > 0)) throw Error("grid_step must be positive");
    size_t q = sys.freqs[0].size();
    for (const auto& w : sys.freqs)
        if (w.size() != q) throw Error("ragged frequency list");
    if (!sys.targets.empty() && sys.targets.size() != sys.freqs.size())
        throw Error("targets/freqs size mismatch");

    long steps = static_cast<long>(std::floor(search_radius / grid_step));
    double total = std::pow(2.0 * static_cast<double>(steps) + 1.0, static_cast<double>(q));
    if (total > static_cast<double>(cap))
        throw CapExceededError("Kronecker grid of " + std::to_string(total) +
                               " points exceeds cap " + std::to_string(cap));

    std::vector<std::vector<double>> solutions;
    std::vector<long> idx(q, -steps);
    while (true) {
        std::vector<double> tau(q);
        for (size_t i = 0; i < q; ++i) tau[i] = static_cast<double>(idx[i]) * grid_step;
        if (verify_kronecker(sys, tau)) solutions.push_back(std::move(tau));

        size_t j = q;
        while (j-- > 0) {
            if (idx[j] < steps) {
                ++idx[j];
                break;
            }
            idx[j] = -steps;
            if (j == 0) {
                j = SIZE_MAX;
                break;
            }
        }
        if (j == SIZE_MAX) break;
    }
    std::sort(solutions.begin(), solutions.end(),
              [](const std::vector<double>& a, const std::vector<double>& b) {
                  double na = 0, nb = 0;
                  for (double v : a) na += v * v;
                  for (double v : b) nb += v * v;
                  if (na != nb) return na < nb;
                  return a < b;
              });
    return solutions;
}

std::vector<AlmostPeriod> almost_periods(const std::vector<std::vector<double>>& freqs,
                                         const std::vector<double>& coeffs, double eps,
                                         double search_radius) {
    if (freqs.size() != coeffs.size()) throw Error("freqs/coeffs size mismatch");
    if (!(eps > 0)) throw Error("eps must be positive");
    double coeff_sum = 0;
    for (double c : coeffs) coeff_sum += std::fabs(c);
    const double two_pi = 2.0 * std::acos(-1.0);
    if (coeff_sum == 0.0) {
        // degenerate: Q is constant; every grid point is a period with bound 0
        KroneckerSystem trivial{freqs, {}, 1.0};
        std::vector<AlmostPeriod> out;
        for (auto& tau : kronecker_solve(trivial, search_radius))
            out.push_back(AlmostPeriod{tau, 0.0});
        return out;
    }
    KroneckerSystem sys{freqs, {}, eps / (two_pi * coeff_sum)};
    std::vector<AlmostPeriod> out;
    for (auto& tau : kronecker_solve(sys, search_radius)) {
        double bound = 0;
        for (size_t n = 0; n < freqs.size(); ++n) {
            double ip = 0;
            for (size_t i = 0; i < tau.size(); ++i) ip += tau[i] * freqs[n][i];
            bound += std::fabs(coeffs[n]) * dist_to_int(ip);
        }
        bound *= two_pi;
        if (bound <= eps) out.push_back(AlmostPeriod{tau, bound});
    }
    return out;
}

} // namespace qclat
