#include "ramify/kpoly.hpp"

#include <algorithm>

namespace ramify {

KPoly kp_trim(KPoly a) {
    while (!a.empty() && a.back().looks_zero() && is_inf(a.back().cap)) a.pop_back();
    return a;
}

int kp_deg(const KPoly& a) {
    for (size_t i = a.size(); i-- > 0;)
        if (!a[i].looks_zero()) return static_cast<int>(i);
    return -1;
}

bool kp_looks_zero(const KPoly& a) {
    for (auto& c : a)
        if (!c.looks_zero()) return false;
    return true;
}

KPoly kp_add(const KPoly& a, const KPoly& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    const LFPtr& K = a.empty() ? b[0].K : a[0].K;
    KPoly c(std::max(a.size(), b.size()), l_zero(K));
    for (size_t i = 0; i < c.size(); ++i) {
        if (i < a.size() && i < b.size()) c[i] = l_add(a[i], b[i]);
        else if (i < a.size()) c[i] = a[i];
        else c[i] = b[i];
    }
    return c;
}

KPoly kp_neg(const KPoly& a) {
    KPoly c = a;
    for (auto& x : c) x = l_neg(x);
    return c;
}

KPoly kp_sub(const KPoly& a, const KPoly& b) { return kp_add(a, kp_neg(b)); }

KPoly kp_mul(const KPoly& a, const KPoly& b) {
    if (a.empty() || b.empty()) return {};
    const LFPtr& K = a[0].K;
    KPoly c(a.size() + b.size() - 1, l_zero(K));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].looks_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = l_add(c[i + j], l_mul(a[i], b[j]));
    }
    return c;
}

KPoly kp_scale(const KPoly& a, const LElem& c) {
    KPoly r = a;
    for (auto& x : r) x = l_mul(x, c);
    return r;
}

std::pair<KPoly, KPoly> kp_divmod(const KPoly& a, const KPoly& b) {
    int db = kp_deg(b);
    if (db < 0) throw DivisionByZero("polynomial division by zero");
    const LFPtr& K = b[0].K;
    LElem lcinv = l_inv(b[db]);
    KPoly rem = a;
    int da = kp_deg(rem);
    if (da < db) return {{}, rem};
    KPoly q(static_cast<size_t>(da - db + 1), l_zero(K));
    while ((da = kp_deg(rem)) >= db) {
        LElem c = l_mul(rem[da], lcinv);
        q[da - db] = c;
        for (int i = 0; i <= db; ++i)
            rem[da - db + i] = l_sub(rem[da - db + i], l_mul(c, b[i]));
        // the leading position is now zero at precision; kp_deg skips it
    }
    return {q, rem};
}

KPoly kp_derivative(const KPoly& a) {
    if (a.size() <= 1) return {};
    const LFPtr& K = a[0].K;
    KPoly d(a.size() - 1, l_zero(K));
    for (size_t i = 1; i < a.size(); ++i) d[i - 1] = l_mul(a[i], l_from_int(K, static_cast<long long>(i)));
    return d;
}

LElem kp_eval(const KPoly& a, const LElem& x) {
    LElem r = l_zero(x.K);
    for (size_t i = a.size(); i-- > 0;) r = l_add(l_mul(r, x), a[i]);
    return r;
}

// ---------------------------------------------------------------------------
// quotient ring

QuotCtx::QuotCtx(LFPtr K_, KPoly f_) : K(std::move(K_)), f(std::move(f_)) {
    n = static_cast<long long>(f.size()) - 1;
    if (n < 1) throw DegreeMismatch("quotient by a constant polynomial");
    if (!l_sub(f.back(), l_one(K)).looks_zero()) throw NotMonic("quotient modulus must be monic");
}

QV qv_zero(const QuotCtx& R) { return QV(static_cast<size_t>(R.n), l_zero(R.K)); }

QV qv_one(const QuotCtx& R) {
    QV v = qv_zero(R);
    v[0] = l_one(R.K);
    return v;
}

QV qv_gen(const QuotCtx& R) {
    QV v = qv_zero(R);
    if (R.n >= 2) v[1] = l_one(R.K);
    else v[0] = l_neg(R.f[0]); // degree-1 modulus: generator is a base element
    return v;
}

QV qv_scalar(const QuotCtx& R, const LElem& c) {
    QV v = qv_zero(R);
    v[0] = c;
    return v;
}

QV qv_add(const QuotCtx& R, const QV& a, const QV& b) {
    QV v = qv_zero(R);
    for (size_t i = 0; i < v.size(); ++i) v[i] = l_add(a[i], b[i]);
    return v;
}

QV qv_sub(const QuotCtx& R, const QV& a, const QV& b) {
    QV v = qv_zero(R);
    for (size_t i = 0; i < v.size(); ++i) v[i] = l_sub(a[i], b[i]);
    return v;
}

QV qv_neg(const QuotCtx& R, const QV& a) {
    (void)R;
    QV v = a;
    for (auto& c : v) c = l_neg(c);
    return v;
}

QV qv_scale(const QuotCtx& R, const QV& a, const LElem& c) {
    QV v = a;
    (void)R;
    for (auto& x : v) x = l_mul(x, c);
    return v;
}

QV qv_mul(const QuotCtx& R, const QV& a, const QV& b) {
    std::vector<LElem> conv(2 * R.n - 1, l_zero(R.K));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].looks_zero() && is_inf(a[i].cap)) continue;
        for (size_t j = 0; j < b.size(); ++j) conv[i + j] = l_add(conv[i + j], l_mul(a[i], b[j]));
    }
    // reduce by the monic modulus
    for (size_t k = conv.size(); k-- > static_cast<size_t>(R.n);) {
        LElem lead = conv[k];
        if (lead.looks_zero() && is_inf(lead.cap)) continue;
        size_t shift = k - static_cast<size_t>(R.n);
        for (size_t i = 0; i < static_cast<size_t>(R.n); ++i)
            conv[shift + i] = l_sub(conv[shift + i], l_mul(lead, R.f[i]));
        conv[k] = l_sub(conv[k], conv[k]);
    }
    conv.resize(static_cast<size_t>(R.n));
    return conv;
}

QV qv_pow(const QuotCtx& R, QV a, long long e) {
    QV r = qv_one(R);
    while (e > 0) {
        if (e & 1) r = qv_mul(R, r, a);
        a = qv_mul(R, a, a);
        e >>= 1;
    }
    return r;
}

bool qv_looks_zero(const QV& a) {
    for (auto& c : a)
        if (!c.looks_zero()) return false;
    return true;
}

bool qv_eq_at_prec(const QuotCtx& R, const QV& a, const QV& b) { return qv_looks_zero(qv_sub(R, a, b)); }

QV qv_inv(const QuotCtx& R, const QV& a) {
    // extended Euclid against the modulus in base[X]
    KPoly r0 = R.f;
    KPoly r1(a.begin(), a.end());
    r1 = kp_trim(r1);
    if (kp_deg(r1) < 0) throw DivisionByZero("inverse of zero in quotient ring");
    KPoly s0, s1{l_one(R.K)};
    while (kp_deg(r1) >= 0) {
        auto [q, rem] = kp_divmod(r0, r1);
        KPoly s2 = kp_sub(s0, kp_mul(q, s1));
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    if (kp_deg(r0) != 0)
        throw PrecisionExhausted("gcd with the modulus is nonconstant: not invertible at precision");
    LElem c = l_inv(r0[0]);
    QV out = qv_zero(R);
    for (size_t i = 0; i < s0.size() && i < out.size(); ++i) out[i] = l_mul(s0[i], c);
    return out;
}

QV qv_eval_poly(const QuotCtx& R, const KPoly& g, const QV& z) {
    QV r = qv_zero(R);
    for (size_t i = g.size(); i-- > 0;) {
        r = qv_mul(R, r, z);
        r[0] = l_add(r[0], g[i]);
    }
    return r;
}

std::vector<QV> qv_powers(const QuotCtx& R, const QV& z, long long k) {
    std::vector<QV> out{qv_one(R)};
    for (long long i = 1; i <= k; ++i) out.push_back(qv_mul(R, out.back(), z));
    return out;
}

// ---------------------------------------------------------------------------
// linear algebra

namespace {

struct PivotPick {
    size_t row = 0;
    bool found = false;
};

PivotPick pick_pivot(const std::vector<std::vector<LElem>>& A, size_t col,
                     const std::vector<bool>& used) {
    PivotPick best;
    long long bestv = VAL_INF;
    bool uncertain = false;
    for (size_t i = 0; i < A.size(); ++i) {
        if (used[i]) continue;
        const LElem& x = A[i][col];
        if (x.looks_zero()) continue;
        if (!l_cert_nonzero(x)) {
            uncertain = true;
            continue;
        }
        long long v = l_val_floor(x);
        if (v < bestv) {
            bestv = v;
            best.row = i;
            best.found = true;
        }
    }
    if (!best.found && uncertain)
        throw PrecisionExhausted("no certifiable pivot in linear elimination");
    return best;
}

} // namespace

std::vector<LElem> lin_solve(const LFPtr& K, std::vector<QV> cols, QV rhs) {
    size_t m = cols.size();
    size_t nrows = rhs.size();
    // A[i][j], augmented with rhs at column m
    std::vector<std::vector<LElem>> A(nrows, std::vector<LElem>(m + 1, l_zero(K)));
    for (size_t j = 0; j < m; ++j)
        for (size_t i = 0; i < nrows; ++i) A[i][j] = cols[j][i];
    for (size_t i = 0; i < nrows; ++i) A[i][m] = rhs[i];

    std::vector<bool> used(nrows, false);
    std::vector<long long> pivot_row_of_col(m, -1);
    for (size_t j = 0; j < m; ++j) {
        PivotPick pp = pick_pivot(A, j, used);
        if (!pp.found) continue; // free column
        size_t pr = pp.row;
        used[pr] = true;
        pivot_row_of_col[j] = static_cast<long long>(pr);
        LElem inv = l_inv(A[pr][j]);
        for (size_t jj = 0; jj <= m; ++jj) A[pr][jj] = l_mul(A[pr][jj], inv);
        for (size_t i = 0; i < nrows; ++i) {
            if (i == pr || A[i][j].looks_zero()) continue;
            LElem f = A[i][j];
            for (size_t jj = 0; jj <= m; ++jj) A[i][jj] = l_sub(A[i][jj], l_mul(f, A[pr][jj]));
        }
    }
    // rows without pivots must have vanishing rhs
    for (size_t i = 0; i < nrows; ++i) {
        if (used[i]) continue;
        if (l_cert_nonzero(A[i][m])) throw Error("inconsistent linear system");
    }
    std::vector<LElem> sol(m, l_zero(K));
    for (size_t j = 0; j < m; ++j) {
        if (pivot_row_of_col[j] < 0) continue; // free variable -> 0
        sol[j] = A[static_cast<size_t>(pivot_row_of_col[j])][m];
    }
    return sol;
}

KPoly min_poly_from_powers(const LFPtr& K, const std::vector<QV>& powers) {
    if (powers.empty()) throw Error("no powers supplied");
    size_t nrows = powers[0].size();
    struct Entry {
        QV vec;
        std::vector<LElem> combo;
        size_t piv;
    };
    std::vector<Entry> basis;
    size_t dmax = powers.size() - 1;
    for (size_t d = 0; d <= dmax; ++d) {
        QV w = powers[d];
        std::vector<LElem> combo(dmax + 1, l_zero(K));
        combo[d] = l_one(K);
        for (auto& e : basis) {
            const LElem& c = w[e.piv];
            if (c.looks_zero()) continue;
            LElem f = c;
            for (size_t i = 0; i < nrows; ++i) w[i] = l_sub(w[i], l_mul(f, e.vec[i]));
            for (size_t i = 0; i <= dmax; ++i) combo[i] = l_sub(combo[i], l_mul(f, e.combo[i]));
        }
        if (qv_looks_zero(w)) {
            if (d == 0) throw Error("power basis degenerate");
            // monic relation of degree d
            KPoly out(combo.begin(), combo.begin() + static_cast<long long>(d) + 1);
            return out;
        }
        // normalize on a certified pivot of smallest valuation
        size_t piv = nrows;
        long long bestv = VAL_INF;
        bool uncertain = false;
        for (size_t i = 0; i < nrows; ++i) {
            if (w[i].looks_zero()) continue;
            if (!l_cert_nonzero(w[i])) {
                uncertain = true;
                continue;
            }
            long long v = l_val_floor(w[i]);
            if (v < bestv) {
                bestv = v;
                piv = i;
            }
        }
        if (piv == nrows) {
            if (uncertain) throw PrecisionExhausted("no certifiable pivot in minimal-polynomial search");
            throw Error("unreachable: nonzero vector with no usable coordinate");
        }
        LElem inv = l_inv(w[piv]);
        for (auto& x : w) x = l_mul(x, inv);
        for (auto& x : combo) x = l_mul(x, inv);
        basis.push_back({std::move(w), std::move(combo), piv});
        // eliminate the new pivot from earlier basis vectors to keep reduction cheap
    }
    throw DegreeMismatch("no linear dependence found among the supplied powers");
}

} // namespace ramify
