#pragma once

#include <vector>

#include "ramify/localfield.hpp"

namespace ramify {

// Dense polynomials over a local field, index = degree.
using KPoly = std::vector<LElem>;

KPoly kp_trim(KPoly a);
int kp_deg(const KPoly& a);
bool kp_looks_zero(const KPoly& a);
KPoly kp_add(const KPoly& a, const KPoly& b);
KPoly kp_sub(const KPoly& a, const KPoly& b);
KPoly kp_neg(const KPoly& a);
KPoly kp_mul(const KPoly& a, const KPoly& b);
KPoly kp_scale(const KPoly& a, const LElem& c);
std::pair<KPoly, KPoly> kp_divmod(const KPoly& a, const KPoly& b);
KPoly kp_derivative(const KPoly& a);
LElem kp_eval(const KPoly& a, const LElem& x);

// ---------------------------------------------------------------------------
// The quotient ring A = K[X]/(f), elements as coordinate vectors of length n.

using QV = std::vector<LElem>;

struct QuotCtx {
    LFPtr K;
    KPoly f; // monic, degree n
    long long n = 0;

    QuotCtx() = default;
    QuotCtx(LFPtr K_, KPoly f_);
};

QV qv_zero(const QuotCtx& R);
QV qv_one(const QuotCtx& R);
QV qv_gen(const QuotCtx& R);
QV qv_scalar(const QuotCtx& R, const LElem& c);
QV qv_add(const QuotCtx& R, const QV& a, const QV& b);
QV qv_sub(const QuotCtx& R, const QV& a, const QV& b);
QV qv_neg(const QuotCtx& R, const QV& a);
QV qv_mul(const QuotCtx& R, const QV& a, const QV& b);
QV qv_scale(const QuotCtx& R, const QV& a, const LElem& c);
QV qv_pow(const QuotCtx& R, QV a, long long e);
QV qv_inv(const QuotCtx& R, const QV& a);
bool qv_looks_zero(const QV& a);
bool qv_eq_at_prec(const QuotCtx& R, const QV& a, const QV& b);

// g(z) for a polynomial g over K and z in the ring
QV qv_eval_poly(const QuotCtx& R, const KPoly& g, const QV& z);
// powers 1, z, ..., z^{k}
std::vector<QV> qv_powers(const QuotCtx& R, const QV& z, long long k);

// ---------------------------------------------------------------------------
// Linear algebra over K with certified-valuation pivoting.

// Solve sum_j cols[j] * c_j = rhs. Throws PrecisionExhausted when no pivot
// can be certified, Error when the system is inconsistent at precision.
std::vector<LElem> lin_solve(const LFPtr& K, std::vector<QV> cols, QV rhs);

// Monic minimal polynomial of z over K: smallest d with z^d dependent on
// lower powers. `powers` must contain 1, z, ..., z^{dmax}.
KPoly min_poly_from_powers(const LFPtr& K, const std::vector<QV>& powers);

} // namespace ramify
