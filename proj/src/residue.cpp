#include "ramify/residue.hpp"

#include <algorithm>
#include <sstream>

namespace ramify {

// ---------------------------------------------------------------------------
// F_p helpers

namespace {

long long pmod(long long x, long long p) {
    long long r = x % p;
    return r < 0 ? r + p : r;
}

long long fp_inv(long long a, long long p) {
    a = pmod(a, p);
    if (a == 0) throw DivisionByZero("inverse of 0 in F_p");
    long long t = 0, nt = 1, r = p, nr = a;
    while (nr != 0) {
        long long q = r / nr;
        long long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw Error("modulus not prime in fp_inv");
    return pmod(t, p);
}

using FpPoly = std::vector<long long>; // dense over F_p

FpPoly fpp_trim(FpPoly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

FpPoly fpp_mul(const FpPoly& a, const FpPoly& b, long long p) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = pmod(c[i + j] + a[i] * b[j], p);
    return fpp_trim(c);
}

FpPoly fpp_sub(const FpPoly& a, const FpPoly& b, long long p) {
    FpPoly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        long long x = i < a.size() ? a[i] : 0;
        long long y = i < b.size() ? b[i] : 0;
        c[i] = pmod(x - y, p);
    }
    return fpp_trim(c);
}

// remainder of a by monic-normalizable b
FpPoly fpp_rem(FpPoly a, const FpPoly& b, long long p) {
    a = fpp_trim(a);
    FpPoly bb = fpp_trim(b);
    if (bb.empty()) throw DivisionByZero("poly division by zero");
    long long lcinv = fp_inv(bb.back(), p);
    while (a.size() >= bb.size()) {
        long long c = pmod(a.back() * lcinv, p);
        size_t shift = a.size() - bb.size();
        for (size_t i = 0; i < bb.size(); ++i) a[shift + i] = pmod(a[shift + i] - c * bb[i], p);
        a = fpp_trim(a);
        if (a.empty()) break;
    }
    return a;
}

FpPoly fpp_gcd(FpPoly a, FpPoly b, long long p) {
    a = fpp_trim(a);
    b = fpp_trim(b);
    while (!b.empty()) {
        FpPoly r = fpp_rem(a, b, p);
        a = b;
        b = r;
    }
    if (!a.empty()) {
        long long c = fp_inv(a.back(), p);
        for (auto& x : a) x = pmod(x * c, p);
    }
    return a;
}

FpPoly fpp_powmod(FpPoly base, BigInt e, const FpPoly& mod, long long p) {
    FpPoly r{1};
    base = fpp_rem(base, mod, p);
    while (e > 0) {
        if ((e & 1) != 0) r = fpp_rem(fpp_mul(r, base, p), mod, p);
        base = fpp_rem(fpp_mul(base, base, p), mod, p);
        e >>= 1;
    }
    return r;
}

} // namespace

bool fp_poly_irreducible(long long p, const std::vector<long long>& m_in) {
    FpPoly m = fpp_trim(m_in);
    if (m.size() < 2) return false;
    int n = static_cast<int>(m.size()) - 1;
    if (n == 1) return true;
    // X^(p^n) == X mod m, and gcd(X^(p^(n/l)) - X, m) = 1 for primes l | n
    FpPoly X{0, 1};
    FpPoly xq = fpp_powmod(X, bip(p, n), m, p);
    if (!fpp_sub(xq, X, p).empty()) return false;
    for (int l = 2; l <= n; ++l) {
        if (n % l != 0) continue;
        bool lprime = true;
        for (int d = 2; d * d <= l; ++d)
            if (l % d == 0) lprime = false;
        if (!lprime) continue;
        FpPoly xql = fpp_powmod(X, bip(p, n / l), m, p);
        FpPoly g = fpp_gcd(fpp_sub(xql, X, p), m, p);
        if (g.size() != 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// F_q

FqCtx fq_make_with_minpoly(long long p, std::vector<long long> minpoly) {
    FqCtx F;
    F.p = p;
    for (auto& c : minpoly) c = pmod(c, p);
    minpoly = fpp_trim(minpoly);
    if (minpoly.empty() || minpoly.back() != 1)
        throw ValidationError("finite field minimal polynomial must be monic");
    F.r = static_cast<int>(minpoly.size()) - 1;
    if (F.r >= 1 && F.r > 1 && !fp_poly_irreducible(p, minpoly))
        throw ValidationError("finite field minimal polynomial is reducible");
    F.minpoly = std::move(minpoly);
    return F;
}

FqCtx fq_make(long long p, int r) {
    if (p < 2) throw ValidationError("characteristic must be a prime >= 2");
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw ValidationError("characteristic is not prime");
    if (r < 1 || r > 12) throw ValidationError("unsupported finite field degree");
    if (r == 1) return fq_make_with_minpoly(p, {0, 1});
    // first irreducible monic polynomial of degree r in lexicographic order
    std::vector<long long> m(r + 1, 0);
    m[r] = 1;
    while (true) {
        if (fp_poly_irreducible(p, m)) return fq_make_with_minpoly(p, m);
        int i = 0;
        while (i < r) {
            if (++m[i] < p) break;
            m[i] = 0;
            ++i;
        }
        if (i == r) throw Error("no irreducible polynomial found");
    }
}

static FqElem fq_trim(FqElem a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

FqElem fq_from_int(const FqCtx& F, long long c) {
    c = pmod(c, F.p);
    if (c == 0) return {};
    return {c};
}

FqElem fq_gen(const FqCtx& F) {
    if (F.r == 1) throw Error("prime field has no generator over itself");
    return FqElem{0, 1};
}

bool fq_is_zero(const FqElem& a) { return a.empty(); }
bool fq_is_one(const FqElem& a) { return a.size() == 1 && a[0] == 1; }

FqElem fq_add(const FqCtx& F, const FqElem& a, const FqElem& b) {
    FqElem c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        long long x = i < a.size() ? a[i] : 0;
        long long y = i < b.size() ? b[i] : 0;
        c[i] = pmod(x + y, F.p);
    }
    return fq_trim(c);
}

FqElem fq_neg(const FqCtx& F, const FqElem& a) {
    FqElem c = a;
    for (auto& x : c) x = pmod(-x, F.p);
    return c;
}

FqElem fq_sub(const FqCtx& F, const FqElem& a, const FqElem& b) { return fq_add(F, a, fq_neg(F, b)); }

FqElem fq_mul(const FqCtx& F, const FqElem& a, const FqElem& b) {
    return fpp_rem(fpp_mul(a, b, F.p), F.minpoly, F.p);
}

FqElem fq_inv(const FqCtx& F, const FqElem& a) {
    if (fq_is_zero(a)) throw DivisionByZero("inverse of 0 in F_q");
    if (F.r == 1) return {fp_inv(a[0], F.p)};
    // extended Euclid in F_p[X] against the minimal polynomial
    FpPoly r0 = F.minpoly, r1 = fq_trim(a);
    FpPoly s0{}, s1{1};
    while (!r1.empty()) {
        // q = r0 div r1
        FpPoly q;
        FpPoly rem = r0;
        long long lcinv = fp_inv(r1.back(), F.p);
        q.assign(rem.size() > r1.size() - 1 ? rem.size() - r1.size() + 1 : 1, 0);
        while (rem.size() >= r1.size() && !rem.empty()) {
            long long c = pmod(rem.back() * lcinv, F.p);
            size_t shift = rem.size() - r1.size();
            if (shift >= q.size()) q.resize(shift + 1, 0);
            q[shift] = c;
            for (size_t i = 0; i < r1.size(); ++i) rem[shift + i] = pmod(rem[shift + i] - c * r1[i], F.p);
            rem = fpp_trim(rem);
        }
        FpPoly s2 = fpp_sub(s0, fpp_mul(fpp_trim(q), s1, F.p), F.p);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    if (r0.size() != 1) throw Error("element not invertible (minpoly reducible?)");
    long long c = fp_inv(r0[0], F.p);
    for (auto& x : s0) x = pmod(x * c, F.p);
    return fpp_rem(s0, F.minpoly, F.p);
}

FqElem fq_pow(const FqCtx& F, FqElem a, BigInt e) {
    if (e < 0) {
        a = fq_inv(F, a);
        e = -e;
    }
    FqElem r{1};
    while (e > 0) {
        if ((e & 1) != 0) r = fq_mul(F, r, a);
        a = fq_mul(F, a, a);
        e >>= 1;
    }
    return r;
}

FqElem fq_pth_root(const FqCtx& F, const FqElem& a) {
    if (fq_is_zero(a)) return a;
    // x -> x^p is bijective with inverse x -> x^(q/p)
    return fq_pow(F, a, bip(F.p, F.r) / F.p);
}

// ---------------------------------------------------------------------------
// MPoly

int MPoly::deg(int var) const {
    int d = 0;
    for (auto& [m, c] : t) d = std::max(d, m.e[var]);
    return d;
}

MPoly mp_zero() { return {}; }

MPoly mp_const(const FqCtx& F, const FqElem& c) {
    MPoly r;
    (void)F;
    if (!fq_is_zero(c)) r.t[Mono{}] = c;
    return r;
}

MPoly mp_var(int var) {
    MPoly r;
    Mono m;
    m.e[var] = 1;
    r.t[m] = FqElem{1};
    return r;
}

MPoly mp_add(const FqCtx& F, const MPoly& a, const MPoly& b) {
    MPoly r = a;
    for (auto& [m, c] : b.t) {
        auto it = r.t.find(m);
        if (it == r.t.end()) {
            r.t[m] = c;
        } else {
            it->second = fq_add(F, it->second, c);
            if (fq_is_zero(it->second)) r.t.erase(it);
        }
    }
    return r;
}

MPoly mp_neg(const FqCtx& F, const MPoly& a) {
    MPoly r = a;
    for (auto& [m, c] : r.t) c = fq_neg(F, c);
    return r;
}

MPoly mp_sub(const FqCtx& F, const MPoly& a, const MPoly& b) { return mp_add(F, a, mp_neg(F, b)); }

MPoly mp_mul(const FqCtx& F, const MPoly& a, const MPoly& b) {
    MPoly r;
    for (auto& [ma, ca] : a.t)
        for (auto& [mb, cb] : b.t) {
            Mono m;
            m.e[0] = ma.e[0] + mb.e[0];
            m.e[1] = ma.e[1] + mb.e[1];
            FqElem c = fq_mul(F, ca, cb);
            auto it = r.t.find(m);
            if (it == r.t.end()) {
                if (!fq_is_zero(c)) r.t[m] = c;
            } else {
                it->second = fq_add(F, it->second, c);
                if (fq_is_zero(it->second)) r.t.erase(it);
            }
        }
    return r;
}

FqElem mp_lc(const MPoly& a) {
    if (a.is_zero()) return {};
    return a.t.rbegin()->second;
}

static Mono mp_lm(const MPoly& a) { return a.t.rbegin()->first; }

MPoly mp_divexact(const FqCtx& F, const MPoly& a, const MPoly& b) {
    if (b.is_zero()) throw DivisionByZero("mpoly division by zero");
    MPoly rem = a, q;
    FqElem lcinv = fq_inv(F, mp_lc(b));
    Mono lmb = mp_lm(b);
    while (!rem.is_zero()) {
        Mono lmr = mp_lm(rem);
        if (lmr.e[0] < lmb.e[0] || lmr.e[1] < lmb.e[1]) throw Error("mpoly division not exact");
        Mono m;
        m.e[0] = lmr.e[0] - lmb.e[0];
        m.e[1] = lmr.e[1] - lmb.e[1];
        FqElem c = fq_mul(F, mp_lc(rem), lcinv);
        MPoly term;
        term.t[m] = c;
        q = mp_add(F, q, term);
        rem = mp_sub(F, rem, mp_mul(F, term, b));
    }
    return q;
}

bool mp_eq(const MPoly& a, const MPoly& b) {
    if (a.t.size() != b.t.size()) return false;
    auto ia = a.t.begin();
    auto ib = b.t.begin();
    for (; ia != a.t.end(); ++ia, ++ib) {
        if (ia->first.e != ib->first.e || ia->second != ib->second) return false;
    }
    return true;
}

MPoly mp_monic(const FqCtx& F, const MPoly& a) {
    if (a.is_zero()) return a;
    FqElem c = fq_inv(F, mp_lc(a));
    MPoly r = a;
    for (auto& [m, cc] : r.t) cc = fq_mul(F, cc, c);
    return r;
}

namespace {

// coefficients of a w.r.t. main var, as MPoly in the other var
std::vector<MPoly> mp_coeffs(const MPoly& a, int main) {
    std::vector<MPoly> cs(a.deg(main) + 1);
    for (auto& [m, c] : a.t) {
        Mono mm;
        mm.e[1 - main] = m.e[1 - main];
        cs[m.e[main]].t[mm] = c;
    }
    return cs;
}

MPoly mp_content(const FqCtx& F, const MPoly& a, int main) {
    MPoly g;
    for (auto& c : mp_coeffs(a, main))
        if (!c.is_zero()) g = mp_gcd(F, g, c);
    return g;
}

// pseudo-remainder in the main variable
MPoly mp_prem(const FqCtx& F, MPoly a, const MPoly& b, int main) {
    int db = b.deg(main);
    auto bc = mp_coeffs(b, main);
    MPoly lb = bc[db];
    while (!a.is_zero() && a.deg(main) >= db) {
        int da = a.deg(main);
        auto ac = mp_coeffs(a, main);
        MPoly la = ac[da];
        // a <- lb*a - la*X^(da-db)*b
        MPoly shift;
        Mono m;
        m.e[main] = da - db;
        shift.t[m] = FqElem{1};
        a = mp_sub(F, mp_mul(F, lb, a), mp_mul(F, mp_mul(F, la, shift), b));
        if (!a.is_zero() && a.deg(main) >= da) throw Error("pseudo-division failed to reduce degree");
    }
    return a;
}

} // namespace

MPoly mp_gcd(const FqCtx& F, const MPoly& a, const MPoly& b) {
    if (a.is_zero()) return mp_monic(F, b);
    if (b.is_zero()) return mp_monic(F, a);
    int main = -1;
    for (int v = 1; v >= 0; --v) {
        if (a.deg(v) > 0 || b.deg(v) > 0) {
            main = v;
            break;
        }
    }
    if (main < 0) return mp_const(F, FqElem{1}); // both constants
    if (a.deg(main) == 0) return mp_gcd(F, a, mp_content(F, b, main));
    if (b.deg(main) == 0) return mp_gcd(F, mp_content(F, a, main), b);
    MPoly ca = mp_content(F, a, main), cb = mp_content(F, b, main);
    MPoly g0 = mp_gcd(F, ca, cb);
    MPoly pa = mp_divexact(F, a, ca), pb = mp_divexact(F, b, cb);
    while (!pb.is_zero() && pb.deg(main) > 0) {
        MPoly r = mp_prem(F, pa, pb, main);
        pa = pb;
        if (r.is_zero()) {
            pb = mp_zero();
        } else {
            pb = mp_divexact(F, r, mp_content(F, r, main));
        }
    }
    if (!pb.is_zero()) return mp_monic(F, g0); // primitive parts coprime
    return mp_monic(F, mp_mul(F, g0, pa));
}

// ---------------------------------------------------------------------------
// ResidueField

RFPtr ResidueField::finite(long long p, int r) {
    auto f = std::make_shared<ResidueField>();
    f->kind = RFKind::Finite;
    f->fq = fq_make(p, r);
    f->p = p;
    return f;
}

RFPtr ResidueField::finite_with_minpoly(long long p, std::vector<long long> minpoly) {
    auto f = std::make_shared<ResidueField>();
    f->kind = RFKind::Finite;
    f->fq = fq_make_with_minpoly(p, std::move(minpoly));
    f->p = p;
    return f;
}

RFPtr ResidueField::ratfun(long long p, int r, std::vector<std::string> vars, bool completion) {
    if (vars.empty() || vars.size() > 2)
        throw ValidationError("supported imperfection degrees are c in {0,1,2}");
    auto f = std::make_shared<ResidueField>();
    f->kind = RFKind::RatFun;
    f->fq = fq_make(p, r);
    f->p = p;
    f->vars = std::move(vars);
    f->completion = completion;
    return f;
}

RFPtr ResidueField::simple_ext(RFPtr base, std::vector<RElem> minpoly, std::string gen_name) {
    RPoly m = rp_trim(std::move(minpoly));
    if (rp_deg(m) < 1) throw ValidationError("extension minimal polynomial must be nonconstant");
    if (!m.back().is_one()) throw NotMonic("extension minimal polynomial must be monic");
    if (!rp_irreducible(base, m)) throw ValidationError("extension minimal polynomial is reducible");
    auto f = std::make_shared<ResidueField>();
    f->kind = RFKind::SimpleExt;
    f->p = base->p;
    f->base = std::move(base);
    f->ext_minpoly = std::move(m);
    f->gen_name = std::move(gen_name);
    return f;
}

int ResidueField::imperfection_degree() const {
    switch (kind) {
    case RFKind::Finite: return 0;
    case RFKind::RatFun: return static_cast<int>(vars.size());
    case RFKind::SimpleExt: return base->imperfection_degree(); // finite extensions preserve it
    }
    return 0;
}

std::string ResidueField::describe() const {
    std::ostringstream os;
    switch (kind) {
    case RFKind::Finite:
        os << "F_" << bip(p, fq.r).str();
        break;
    case RFKind::RatFun:
        os << "F_" << bip(p, fq.r).str() << (completion ? "((" : "(");
        for (size_t i = 0; i < vars.size(); ++i) os << (i ? "," : "") << vars[i];
        os << (completion ? "))" : ")");
        break;
    case RFKind::SimpleExt:
        os << base->describe() << "(" << gen_name << ")";
        break;
    }
    return os.str();
}

bool rf_equal(const RFPtr& a, const RFPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b || a->kind != b->kind || a->p != b->p) return false;
    switch (a->kind) {
    case RFKind::Finite: return a->fq == b->fq;
    case RFKind::RatFun: return a->fq == b->fq && a->vars == b->vars;
    case RFKind::SimpleExt:
        if (!rf_equal(a->base, b->base)) return false;
        if (a->ext_minpoly.size() != b->ext_minpoly.size()) return false;
        for (size_t i = 0; i < a->ext_minpoly.size(); ++i)
            if (a->ext_minpoly[i] != b->ext_minpoly[i]) return false;
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// RElem

static void check_same_field(const RElem& a, const RElem& b) {
    if (!rf_equal(a.F, b.F)) throw FieldMismatch("operands live in different residue fields");
}

bool RElem::is_zero() const {
    switch (F->kind) {
    case RFKind::Finite: return fq_is_zero(ff);
    case RFKind::RatFun: return num.is_zero();
    case RFKind::SimpleExt:
        for (auto& c : ext)
            if (!c.is_zero()) return false;
        return true;
    }
    return true;
}

bool RElem::is_one() const {
    switch (F->kind) {
    case RFKind::Finite: return fq_is_one(ff);
    case RFKind::RatFun: {
        MPoly one;
        one.t[Mono{}] = FqElem{1};
        return mp_eq(num, one) && mp_eq(den, one);
    }
    case RFKind::SimpleExt: return ext.size() == 1 && ext[0].is_one();
    }
    return false;
}

bool RElem::operator==(const RElem& o) const {
    if (!rf_equal(F, o.F)) return false;
    switch (F->kind) {
    case RFKind::Finite: return ff == o.ff;
    case RFKind::RatFun: return mp_eq(num, o.num) && mp_eq(den, o.den);
    case RFKind::SimpleExt: {
        if (ext.size() != o.ext.size()) return false;
        for (size_t i = 0; i < ext.size(); ++i)
            if (!(ext[i] == o.ext[i])) return false;
        return true;
    }
    }
    return false;
}

RElem r_zero(const RFPtr& F) {
    RElem e;
    e.F = F;
    if (F->kind == RFKind::RatFun) {
        e.den.t[Mono{}] = FqElem{1};
    }
    return e;
}

RElem r_from_int(const RFPtr& F, long long c) {
    RElem e = r_zero(F);
    switch (F->kind) {
    case RFKind::Finite:
        e.ff = fq_from_int(F->fq, c);
        break;
    case RFKind::RatFun:
        e.num = mp_const(F->fq, fq_from_int(F->fq, c));
        break;
    case RFKind::SimpleExt: {
        RElem b = r_from_int(F->base, c);
        if (!b.is_zero()) e.ext = {b};
        break;
    }
    }
    return e;
}

RElem r_one(const RFPtr& F) { return r_from_int(F, 1); }

RElem r_gen(const RFPtr& F, int var) {
    RElem e = r_zero(F);
    switch (F->kind) {
    case RFKind::Finite:
        e.ff = fq_gen(F->fq);
        break;
    case RFKind::RatFun:
        if (var < 0 || var >= static_cast<int>(F->vars.size()))
            throw Error("variable index out of range");
        e.num = mp_var(var);
        break;
    case RFKind::SimpleExt:
        e.ext = {r_zero(F->base), r_one(F->base)};
        break;
    }
    return e;
}

RElem r_embed(const RFPtr& F, const RElem& base_elem) {
    if (F->kind != RFKind::SimpleExt) throw FieldMismatch("embed target is not an extension");
    if (!rf_equal(F->base, base_elem.F)) throw FieldMismatch("embed source is not the base field");
    RElem e = r_zero(F);
    if (!base_elem.is_zero()) e.ext = {base_elem};
    return e;
}

static RElem frac_make(const RFPtr& F, MPoly n, MPoly d) {
    if (d.is_zero()) throw DivisionByZero("rational function with zero denominator");
    RElem e;
    e.F = F;
    if (n.is_zero()) {
        e.num = mp_zero();
        e.den.t[Mono{}] = FqElem{1};
        return e;
    }
    MPoly g = mp_gcd(F->fq, n, d);
    n = mp_divexact(F->fq, n, g);
    d = mp_divexact(F->fq, d, g);
    FqElem c = fq_inv(F->fq, mp_lc(d));
    MPoly cd = mp_const(F->fq, c);
    e.num = mp_mul(F->fq, n, cd);
    e.den = mp_mul(F->fq, d, cd);
    return e;
}

static RPoly ext_reduce(const RFPtr& F, RPoly v) {
    // reduce mod minpoly; coefficients over base
    v = rp_trim(std::move(v));
    if (rp_deg(v) >= rp_deg(F->ext_minpoly)) {
        auto [q, r] = rp_divmod(v, F->ext_minpoly);
        v = r;
    }
    return v;
}

RElem r_add(const RElem& a, const RElem& b) {
    check_same_field(a, b);
    RElem e = r_zero(a.F);
    switch (a.F->kind) {
    case RFKind::Finite:
        e.ff = fq_add(a.F->fq, a.ff, b.ff);
        break;
    case RFKind::RatFun: {
        const FqCtx& F = a.F->fq;
        MPoly n = mp_add(F, mp_mul(F, a.num, b.den), mp_mul(F, b.num, a.den));
        MPoly d = mp_mul(F, a.den, b.den);
        return frac_make(a.F, n, d);
    }
    case RFKind::SimpleExt: {
        RPoly v = rp_add(a.ext, b.ext);
        e.ext = ext_reduce(a.F, v);
        break;
    }
    }
    return e;
}

RElem r_neg(const RElem& a) {
    RElem e = r_zero(a.F);
    switch (a.F->kind) {
    case RFKind::Finite:
        e.ff = fq_neg(a.F->fq, a.ff);
        break;
    case RFKind::RatFun:
        e.num = mp_neg(a.F->fq, a.num);
        e.den = a.den;
        break;
    case RFKind::SimpleExt:
        for (auto& c : a.ext) e.ext.push_back(r_neg(c));
        break;
    }
    return e;
}

RElem r_sub(const RElem& a, const RElem& b) { return r_add(a, r_neg(b)); }

RElem r_mul(const RElem& a, const RElem& b) {
    check_same_field(a, b);
    RElem e = r_zero(a.F);
    switch (a.F->kind) {
    case RFKind::Finite:
        e.ff = fq_mul(a.F->fq, a.ff, b.ff);
        break;
    case RFKind::RatFun:
        return frac_make(a.F, mp_mul(a.F->fq, a.num, b.num), mp_mul(a.F->fq, a.den, b.den));
    case RFKind::SimpleExt:
        e.ext = ext_reduce(a.F, rp_mul(a.ext, b.ext));
        break;
    }
    return e;
}

RElem r_inv(const RElem& a) {
    if (a.is_zero()) throw DivisionByZero("inverse of zero residue element");
    RElem e = r_zero(a.F);
    switch (a.F->kind) {
    case RFKind::Finite:
        e.ff = fq_inv(a.F->fq, a.ff);
        break;
    case RFKind::RatFun:
        return frac_make(a.F, a.den, a.num);
    case RFKind::SimpleExt: {
        // extended Euclid against the minimal polynomial
        RPoly r0 = a.F->ext_minpoly, r1 = rp_trim(a.ext);
        RPoly s0, s1{r_one(a.F->base)};
        while (!rp_is_zero(r1)) {
            auto [q, rem] = rp_divmod(r0, r1);
            RPoly s2 = rp_sub(s0, rp_mul(q, s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        if (rp_deg(r0) != 0) throw Error("non-invertible element in simple extension");
        RElem c = r_inv(r0[0]);
        e.ext = ext_reduce(a.F, rp_scale(s0, c));
        break;
    }
    }
    return e;
}

RElem r_div(const RElem& a, const RElem& b) { return r_mul(a, r_inv(b)); }

RElem r_pow(const RElem& a, BigInt e) {
    RElem base = a;
    if (e < 0) {
        base = r_inv(a);
        e = -e;
    }
    RElem r = r_one(a.F);
    while (e > 0) {
        if ((e & 1) != 0) r = r_mul(r, base);
        base = r_mul(base, base);
        e >>= 1;
    }
    return r;
}

std::string RElem::str() const {
    std::ostringstream os;
    switch (F->kind) {
    case RFKind::Finite: {
        if (ff.empty()) return "0";
        bool first = true;
        for (size_t i = 0; i < ff.size(); ++i) {
            if (ff[i] == 0) continue;
            if (!first) os << "+";
            first = false;
            if (i == 0 || ff[i] != 1) os << ff[i];
            if (i >= 1) os << "g" << (i > 1 ? "^" + std::to_string(i) : "");
        }
        return os.str();
    }
    case RFKind::RatFun: {
        auto mp_str = [&](const MPoly& m) {
            if (m.is_zero()) return std::string("0");
            std::ostringstream s;
            bool first = true;
            for (auto it = m.t.rbegin(); it != m.t.rend(); ++it) {
                if (!first) s << "+";
                first = false;
                bool coeff1 = fq_is_one(it->second);
                bool unit_mono = it->first.total() == 0;
                if (!coeff1 || unit_mono) {
                    if (it->second.size() == 1) s << it->second[0];
                    else s << "(g-elt)";
                }
                for (size_t v = 0; v < F->vars.size(); ++v) {
                    int e = it->first.e[v];
                    if (e == 0) continue;
                    s << F->vars[v];
                    if (e != 1) s << "^" << e;
                }
            }
            return s.str();
        };
        MPoly one;
        one.t[Mono{}] = FqElem{1};
        if (mp_eq(den, one)) return mp_str(num);
        return "(" + mp_str(num) + ")/(" + mp_str(den) + ")";
    }
    case RFKind::SimpleExt: {
        if (is_zero()) return "0";
        bool first = true;
        for (size_t i = 0; i < ext.size(); ++i) {
            if (ext[i].is_zero()) continue;
            if (!first) os << "+";
            first = false;
            os << "(" << ext[i].str() << ")";
            if (i >= 1) {
                os << F->gen_name;
                if (i > 1) os << "^" << i;
            }
        }
        return os.str();
    }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// p-th roots

namespace {

// is every exponent divisible by p, with the coefficient p-th root applied
std::optional<MPoly> mp_pth_root(const FqCtx& F, const MPoly& a, long long p) {
    MPoly r;
    for (auto& [m, c] : a.t) {
        if (m.e[0] % p != 0 || m.e[1] % p != 0) return std::nullopt;
        Mono mm;
        mm.e[0] = m.e[0] / static_cast<int>(p);
        mm.e[1] = m.e[1] / static_cast<int>(p);
        r.t[mm] = fq_pth_root(F, c);
    }
    return r;
}

// residue class of the monomials of a class-pure polynomial, if pure
std::optional<std::array<int, 2>> mp_mono_class(const MPoly& a, long long p) {
    std::optional<std::array<int, 2>> cls;
    for (auto& [m, c] : a.t) {
        std::array<int, 2> r{static_cast<int>(m.e[0] % p), static_cast<int>(m.e[1] % p)};
        if (!cls) cls = r;
        else if (*cls != r) return std::nullopt;
    }
    return cls;
}

// split of a field element x = sum over exponent classes mod p; x is written
// with a p-th-power denominator first so classes live entirely in the numerator
std::map<std::array<int, 2>, RElem> frac_class_split(const RElem& x) {
    const FqCtx& F = x.F->fq;
    long long p = x.F->p;
    // x = num/den = (num*den^(p-1)) / den^p
    MPoly denp = x.den;
    MPoly nmul = x.num;
    for (long long i = 1; i < p; ++i) {
        nmul = mp_mul(F, nmul, x.den);
        denp = mp_mul(F, denp, x.den);
    }
    std::map<std::array<int, 2>, MPoly> buckets;
    for (auto& [m, c] : nmul.t) {
        std::array<int, 2> r{static_cast<int>(m.e[0] % p), static_cast<int>(m.e[1] % p)};
        buckets[r].t[m] = c;
    }
    std::map<std::array<int, 2>, RElem> out;
    for (auto& [r, poly] : buckets) out[r] = frac_make(x.F, poly, denp);
    return out;
}

std::optional<RElem> frac_pth_root(const RElem& a) {
    long long p = a.F->p;
    auto rn = mp_pth_root(a.F->fq, a.num, p);
    auto rd = mp_pth_root(a.F->fq, a.den, p);
    if (rn && rd) {
        return frac_make(a.F, *rn, *rd);
    }
    // reduced fractions only have roots when both parts do
    return std::nullopt;
}

} // namespace

std::optional<RElem> r_pth_root(const RElem& a) {
    const RFPtr& F = a.F;
    if (a.is_zero()) return a;
    switch (F->kind) {
    case RFKind::Finite:
        return [&] {
            RElem e = r_zero(F);
            e.ff = fq_pth_root(F->fq, a.ff);
            return std::optional<RElem>(e);
        }();
    case RFKind::RatFun:
        return frac_pth_root(a);
    case RFKind::SimpleExt: {
        long long p = F->p;
        const RPoly& m = F->ext_minpoly;
        long long d = rp_deg(m);
        // binomial X^{p^s} - a0 over the base: the only inseparable shape we build
        bool binomial = true;
        for (long long i = 1; i < d; ++i)
            if (!m[i].is_zero()) binomial = false;
        long long ps = d, s = 0;
        while (ps % p == 0) {
            ps /= p;
            ++s;
        }
        if (!binomial || ps != 1 || s < 1) {
            // separable extension of a perfect base is perfect again
            if (F->base->kind == RFKind::Finite) {
                BigInt q = bip(F->p, F->base->fq.r);
                BigInt size = 1;
                for (long long i = 0; i < d; ++i) size *= q;
                return r_pow(a, size / p);
            }
            throw Error("p-th root unsupported over this extension shape");
        }
        RElem a0 = r_neg(m[0]); // generator^{p^s} = a0 in the base
        // p-th powers have generator-coordinates only at exponents divisible by p
        for (size_t i = 0; i < a.ext.size(); ++i)
            if (i % p != 0 && !a.ext[i].is_zero()) return std::nullopt;
        if (F->base->kind != RFKind::RatFun)
            throw Error("p-th root unsupported: non-rational base under binomial extension");
        auto acls = mp_mono_class(a0.num, p);
        auto acls_d = mp_mono_class(a0.den, p);
        if (!acls || !acls_d) throw Error("p-th root unsupported: mixed-class binomial constant");
        int ip = static_cast<int>(p);
        std::array<int, 2> ca{((*acls)[0] - (*acls_d)[0] % ip + ip) % ip,
                              ((*acls)[1] - (*acls_d)[1] % ip + ip) % ip};
        if (ca[0] == 0 && ca[1] == 0)
            throw Error("p-th root unsupported: binomial constant in the trivial class");
        long long dps = d / p; // p^{s-1}
        RPoly root_coords(d, r_zero(F->base));
        for (size_t t = 0; t < a.ext.size(); t += p) {
            const RElem& c = a.ext[t];
            if (c.is_zero()) continue;
            auto split = frac_class_split(c);
            for (auto& [cls, comp] : split) {
                if (comp.is_zero()) continue;
                // match cls = j*ca mod p for some multiplier j of a0
                long long j = -1;
                for (long long jj = 0; jj < p; ++jj) {
                    std::array<int, 2> want{static_cast<int>((jj * ca[0]) % p),
                                            static_cast<int>((jj * ca[1]) % p)};
                    if (want == cls) {
                        j = jj;
                        break;
                    }
                }
                if (j < 0) return std::nullopt;
                RElem z = r_div(comp, r_pow(a0, j));
                auto y = r_pth_root(z);
                if (!y) return std::nullopt;
                long long idx = static_cast<long long>(t) / p + j * dps;
                if (idx >= d) throw Error("p-th root index overflow");
                root_coords[idx] = r_add(root_coords[idx], *y);
            }
        }
        RElem out = r_zero(F);
        out.ext = rp_trim(root_coords);
        // (sum y_j gen^{t'+j p^{s-1}})^p = sum y_j^p a0^j gen^{p t'} by construction
        return out;
    }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// RPoly

RPoly rp_trim(RPoly a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
    return a;
}

int rp_deg(const RPoly& a) { return static_cast<int>(a.size()) - 1; }

bool rp_is_zero(const RPoly& a) {
    for (auto& c : a)
        if (!c.is_zero()) return false;
    return true;
}

RPoly rp_add(const RPoly& a, const RPoly& b) {
    RPoly c(std::max(a.size(), b.size()));
    RFPtr F = !a.empty() ? a[0].F : (!b.empty() ? b[0].F : nullptr);
    if (!F) return {};
    for (size_t i = 0; i < c.size(); ++i) {
        RElem x = i < a.size() ? a[i] : r_zero(F);
        RElem y = i < b.size() ? b[i] : r_zero(F);
        c[i] = r_add(x, y);
    }
    return rp_trim(c);
}

RPoly rp_sub(const RPoly& a, const RPoly& b) {
    RPoly nb;
    nb.reserve(b.size());
    for (auto& c : b) nb.push_back(r_neg(c));
    return rp_add(a, nb);
}

RPoly rp_mul(const RPoly& a, const RPoly& b) {
    if (a.empty() || b.empty()) return {};
    RFPtr F = a[0].F;
    RPoly c(a.size() + b.size() - 1, r_zero(F));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = r_add(c[i + j], r_mul(a[i], b[j]));
    }
    return rp_trim(c);
}

RPoly rp_scale(const RPoly& a, const RElem& c) {
    RPoly r;
    r.reserve(a.size());
    for (auto& x : a) r.push_back(r_mul(x, c));
    return rp_trim(r);
}

std::pair<RPoly, RPoly> rp_divmod(const RPoly& a, const RPoly& b) {
    RPoly bb = rp_trim(b);
    if (bb.empty()) throw DivisionByZero("polynomial division by zero");
    RPoly rem = rp_trim(a);
    if (rem.empty()) return {{}, {}};
    RFPtr F = bb[0].F;
    RElem lcinv = r_inv(bb.back());
    RPoly q;
    if (rem.size() >= bb.size()) q.assign(rem.size() - bb.size() + 1, r_zero(F));
    while (rem.size() >= bb.size()) {
        RElem c = r_mul(rem.back(), lcinv);
        size_t shift = rem.size() - bb.size();
        q[shift] = c;
        for (size_t i = 0; i < bb.size(); ++i) rem[shift + i] = r_sub(rem[shift + i], r_mul(c, bb[i]));
        rem = rp_trim(rem);
        if (rem.empty()) break;
    }
    return {rp_trim(q), rem};
}

RPoly rp_gcd(RPoly a, RPoly b) {
    a = rp_trim(a);
    b = rp_trim(b);
    while (!b.empty()) {
        auto [q, r] = rp_divmod(a, b);
        a = b;
        b = r;
    }
    return rp_monic(a);
}

RPoly rp_derivative(const RPoly& a) {
    if (a.size() <= 1) return {};
    RFPtr F = a[0].F;
    RPoly d(a.size() - 1, r_zero(F));
    for (size_t i = 1; i < a.size(); ++i) d[i - 1] = r_mul(a[i], r_from_int(F, static_cast<long long>(i)));
    return rp_trim(d);
}

RPoly rp_monic(const RPoly& a) {
    RPoly t = rp_trim(a);
    if (t.empty() || t.back().is_one()) return t;
    return rp_scale(t, r_inv(t.back()));
}

RElem rp_eval(const RPoly& a, const RElem& x) {
    RElem r = r_zero(x.F);
    for (size_t i = a.size(); i-- > 0;) r = r_add(r_mul(r, x), a[i]);
    return r;
}

RPoly rp_powmod(const RPoly& base0, BigInt e, const RPoly& mod) {
    RFPtr F = mod[0].F;
    RPoly r{r_one(F)};
    RPoly base = rp_divmod(base0, mod).second;
    while (e > 0) {
        if ((e & 1) != 0) r = rp_divmod(rp_mul(r, base), mod).second;
        base = rp_divmod(rp_mul(base, base), mod).second;
        e >>= 1;
    }
    return r;
}

bool rp_eq(const RPoly& a, const RPoly& b) {
    RPoly x = rp_trim(a), y = rp_trim(b);
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
        if (!(x[i] == y[i])) return false;
    return true;
}

std::pair<RPoly, long long> separable_split(const RPoly& m_in) {
    RPoly m = rp_trim(m_in);
    if (m.empty() || rp_deg(m) < 1) throw ValidationError("separable_split needs a nonconstant polynomial");
    if (!m.back().is_one()) throw NotMonic("separable_split needs a monic polynomial");
    long long p = m[0].F->p;
    long long s = 0;
    while (true) {
        bool divisible = true;
        for (size_t i = 0; i < m.size(); ++i)
            if (i % p != 0 && !m[i].is_zero()) divisible = false;
        if (!divisible || rp_deg(m) < static_cast<int>(p)) break;
        RPoly sub(m.size() / p + 1, r_zero(m[0].F));
        for (size_t i = 0; i < m.size(); i += p) sub[i / p] = m[i];
        m = rp_trim(sub);
        ++s;
    }
    return {m, s};
}

bool rp_irreducible(const RFPtr& F, const RPoly& m_in) {
    RPoly m = rp_trim(m_in);
    int n = rp_deg(m);
    if (n < 1) return false;
    if (n == 1) return true;
    if (F->kind == RFKind::Finite) {
        BigInt q = bip(F->p, F->fq.r);
        RPoly X{r_zero(F), r_one(F)};
        BigInt qn = 1;
        for (int i = 0; i < n; ++i) qn *= q;
        RPoly xq = rp_powmod(X, qn, m);
        if (!rp_eq(xq, X)) return false;
        for (int l = 2; l <= n; ++l) {
            if (n % l != 0) continue;
            bool lprime = true;
            for (int d = 2; d * d <= l; ++d)
                if (l % d == 0) lprime = false;
            if (!lprime) continue;
            BigInt qd = 1;
            for (int i = 0; i < n / l; ++i) qd *= q;
            RPoly g = rp_gcd(rp_sub(rp_powmod(X, qd, m), X), m);
            if (rp_deg(g) != 0) return false;
        }
        return true;
    }
    // imperfect bases: decide purely-inseparable binomials X^{p^s} - a
    long long p = F->p;
    bool binomial = true;
    for (int i = 1; i < n; ++i)
        if (!m[i].is_zero()) binomial = false;
    long long d = n, s = 0;
    while (d % p == 0) {
        d /= p;
        ++s;
    }
    if (binomial && d == 1 && s >= 1) {
        RElem a = r_neg(m[0]);
        return !r_pth_root(a).has_value();
    }
    throw Error("irreducibility test unsupported over " + F->describe() +
                " for this polynomial shape");
}

std::optional<RPoly> rp_coeff_pth_root(const RPoly& m) {
    RPoly r;
    r.reserve(m.size());
    for (auto& c : m) {
        auto rc = r_pth_root(c);
        if (!rc) return std::nullopt;
        r.push_back(*rc);
    }
    return rp_trim(r);
}

} // namespace ramify
