#include "ramify/localfield.hpp"

#include <algorithm>
#include <sstream>

#include "ramify/kpoly.hpp"

namespace ramify {

// ---------------------------------------------------------------------------
// PAdic tower elements

namespace {

PadE pe_zero(int depth) {
    PadE e;
    e.c = 0;
    (void)depth;
    return e;
}

bool pe_is_zero(const PadE& a, int depth) {
    if (depth == 0) return a.c == 0;
    for (auto& s : a.sub)
        if (!pe_is_zero(s, depth - 1)) return false;
    return true;
}

BigInt pmod_big(const BigInt& x, const BigInt& m) {
    BigInt r = x % m;
    if (r < 0) r += m;
    return r;
}

void pe_mod(const LocalField& K, PadE& a, int depth) {
    if (depth == 0) {
        a.c = pmod_big(a.c, bip(K.p, K.prec.Np));
        return;
    }
    for (auto& s : a.sub) pe_mod(K, s, depth - 1);
    while (!a.sub.empty() && pe_is_zero(a.sub.back(), depth - 1)) a.sub.pop_back();
}

PadE pe_add(const LocalField& K, const PadE& a, const PadE& b, int depth) {
    PadE r = pe_zero(depth);
    if (depth == 0) {
        r.c = a.c + b.c;
        pe_mod(K, r, 0);
        return r;
    }
    size_t n = std::max(a.sub.size(), b.sub.size());
    r.sub.resize(n, pe_zero(depth - 1));
    for (size_t i = 0; i < n; ++i) {
        if (i < a.sub.size() && i < b.sub.size()) r.sub[i] = pe_add(K, a.sub[i], b.sub[i], depth - 1);
        else if (i < a.sub.size()) r.sub[i] = a.sub[i];
        else r.sub[i] = b.sub[i];
    }
    pe_mod(K, r, depth);
    return r;
}

PadE pe_neg(const LocalField& K, const PadE& a, int depth) {
    PadE r = a;
    if (depth == 0) {
        r.c = -r.c;
        pe_mod(K, r, 0);
        return r;
    }
    for (auto& s : r.sub) s = pe_neg(K, s, depth - 1);
    return r;
}

PadE pe_mul(const LocalField& K, const PadE& a, const PadE& b, int depth);

void pe_reduce_step(const LocalField& K, std::vector<PadE>& v, int depth) {
    const PadStep& st = K.steps[depth - 1];
    size_t deg = static_cast<size_t>(st.degree);
    while (v.size() > deg) {
        PadE lead = v.back();
        v.pop_back();
        if (pe_is_zero(lead, depth - 1)) continue;
        size_t shift = v.size() - deg;
        for (size_t i = 0; i < deg; ++i) {
            PadE t = pe_mul(K, lead, st.minpoly[i], depth - 1);
            v[shift + i] = pe_add(K, v[shift + i], pe_neg(K, t, depth - 1), depth - 1);
        }
    }
}

PadE pe_mul(const LocalField& K, const PadE& a, const PadE& b, int depth) {
    PadE r = pe_zero(depth);
    if (depth == 0) {
        r.c = a.c * b.c;
        pe_mod(K, r, 0);
        return r;
    }
    if (a.sub.empty() || b.sub.empty()) return r;
    std::vector<PadE> conv(a.sub.size() + b.sub.size() - 1, pe_zero(depth - 1));
    for (size_t i = 0; i < a.sub.size(); ++i) {
        if (pe_is_zero(a.sub[i], depth - 1)) continue;
        for (size_t j = 0; j < b.sub.size(); ++j) {
            PadE t = pe_mul(K, a.sub[i], b.sub[j], depth - 1);
            conv[i + j] = pe_add(K, conv[i + j], t, depth - 1);
        }
    }
    pe_reduce_step(K, conv, depth);
    r.sub = std::move(conv);
    pe_mod(K, r, depth);
    return r;
}

long long vp_big(const BigInt& x, long long p, long long maxv) {
    if (x == 0) return VAL_INF;
    BigInt y = x;
    long long v = 0;
    while (v < maxv && y % p == 0) {
        y /= p;
        ++v;
    }
    return v;
}

// valuation in v_K units of a reduced tower body; VAL_INF when nothing stored
long long pe_val(const LocalField& K, const PadE& a, int depth) {
    if (depth == 0) {
        long long v = vp_big(pmod_big(a.c, bip(K.p, K.prec.Np)), K.p, K.prec.Np);
        return is_inf(v) ? VAL_INF : K.eabs * v;
    }
    long long gw = 0;
    if (K.steps[depth - 1].eisenstein) {
        gw = 1;
        for (size_t j = depth; j < K.steps.size(); ++j)
            if (K.steps[j].eisenstein) gw *= K.steps[j].degree;
    }
    long long best = VAL_INF;
    for (size_t i = 0; i < a.sub.size(); ++i) {
        long long sv = pe_val(K, a.sub[i], depth - 1);
        if (is_inf(sv)) continue;
        best = std::min(best, sv + gw * static_cast<long long>(i));
    }
    return best;
}

PadE pe_from_bigint(const LocalField& K, const BigInt& c, int depth) {
    PadE r = pe_zero(depth);
    if (depth == 0) {
        r.c = c;
        pe_mod(K, r, 0);
        return r;
    }
    PadE inner = pe_from_bigint(K, c, depth - 1);
    if (!pe_is_zero(inner, depth - 1)) r.sub = {inner};
    return r;
}

PadE pe_gen(const LocalField& K, size_t stage, int depth) {
    PadE r = pe_zero(depth);
    if (static_cast<size_t>(depth) == stage + 1) {
        r.sub = {pe_zero(depth - 1), pe_from_bigint(K, 1, depth - 1)};
        return r;
    }
    PadE inner = pe_gen(K, stage, depth - 1);
    r.sub = {inner};
    return r;
}

PadE pe_div_p(const LocalField& K, const PadE& a, int depth, long long k) {
    if (k == 0) return a;
    PadE r = a;
    if (depth == 0) {
        BigInt q = bip(K.p, k);
        BigInt c = pmod_big(a.c, bip(K.p, K.prec.Np));
        if (c % q != 0) throw PrecisionExhausted("element not divisible by p^k at stored precision");
        r.c = c / q;
        return r;
    }
    for (auto& s : r.sub) s = pe_div_p(K, s, depth - 1, k);
    return r;
}

size_t last_eis_index(const LocalField& K) {
    size_t last = 0;
    bool found = false;
    for (size_t i = 0; i < K.steps.size(); ++i)
        if (K.steps[i].eisenstein) {
            last = i;
            found = true;
        }
    if (!found) throw Error("tower has no Eisenstein step");
    return last;
}

PadE pe_mul_pi_pow(const LocalField& K, PadE x, long long k, int depth) {
    // multiply by pi^k, k >= 0; pi = last Eisenstein generator, or p itself
    if (k == 0) return x;
    if (K.eabs > 1) {
        PadE gen = pe_gen(K, last_eis_index(K), depth);
        for (long long i = 0; i < k; ++i) x = pe_mul(K, x, gen, depth);
    } else {
        for (long long i = 0; i < k; ++i) x = pe_mul(K, x, pe_from_bigint(K, K.p, depth), depth);
    }
    return x;
}

} // namespace

// ---------------------------------------------------------------------------
// LocalField constructors

LFPtr LocalField::equal_char(RFPtr residue, std::string var, Precision prec) {
    auto K = std::make_shared<LocalField>();
    K->kind = LFKind::EqualChar;
    K->prec = prec;
    K->p = residue->p;
    K->ec_residue = std::move(residue);
    K->var = std::move(var);
    return K;
}

LFPtr LocalField::padic(long long p, std::vector<PadStep> steps, Precision prec) {
    auto K = std::make_shared<LocalField>();
    K->kind = LFKind::PAdic;
    K->prec = prec;
    K->p = p;
    if (p < 2) throw ValidationError("p-adic characteristic must be at least 2");
    for (size_t i = 0; i < steps.size(); ++i) {
        if (!steps[i].eisenstein && i != 0)
            throw ValidationError("unramified step must come first in a p-adic tower");
        steps[i].degree = static_cast<long long>(steps[i].minpoly.size()) - 1;
        if (steps[i].degree < 1) throw ValidationError("tower step of degree < 1");
    }
    K->steps = std::move(steps);
    K->eabs = 1;
    for (auto& st : K->steps)
        if (st.eisenstein) K->eabs *= st.degree;
    for (int d = 1; d <= static_cast<int>(K->steps.size()); ++d) {
        const PadStep& st = K->steps[d - 1];
        PadE lead = st.minpoly.back();
        PadE one = pe_from_bigint(*K, 1, d - 1);
        if (!pe_is_zero(pe_add(*K, lead, pe_neg(*K, one, d - 1), d - 1), d - 1))
            throw ValidationError("tower step polynomial must be monic");
        if (st.eisenstein) {
            long long gw = 1;
            for (size_t j = static_cast<size_t>(d); j < K->steps.size(); ++j)
                if (K->steps[j].eisenstein) gw *= K->steps[j].degree;
            long long want = gw * st.degree; // v_K of the previous stage's uniformizer
            long long v0 = pe_val(*K, st.minpoly[0], d - 1);
            if (v0 != want) throw ValidationError("Eisenstein step: constant term has wrong valuation");
            for (long long i = 1; i < st.degree; ++i) {
                long long vi = pe_val(*K, st.minpoly[i], d - 1);
                if (!is_inf(vi) && vi < want)
                    throw ValidationError("Eisenstein step: middle coefficient below the constant term");
            }
        } else {
            if (d != 1) throw ValidationError("unramified step must sit over Q_p");
            std::vector<long long> red;
            for (auto& c : st.minpoly) red.push_back(to_ll(pmod_big(c.c, BigInt(p))));
            if (!fp_poly_irreducible(p, red))
                throw ValidationError("unramified step polynomial is reducible mod p");
        }
    }
    if (K->eabs > 1) {
        int depth = static_cast<int>(K->steps.size());
        PadE pie = pe_mul_pi_pow(*K, pe_from_bigint(*K, 1, depth), K->eabs, depth);
        K->p_over_pi = pe_div_p(*K, pie, depth, 1);
    }
    return K;
}

LFPtr LocalField::mixed(LFPtr coeff, std::string var, Precision prec) {
    if (!coeff || coeff->kind != LFKind::PAdic)
        throw ValidationError("mixed T-series require a p-adic coefficient field");
    auto K = std::make_shared<LocalField>();
    K->kind = LFKind::Mixed;
    K->prec = prec;
    K->p = coeff->p;
    K->eabs = coeff->eabs;
    K->coeff = std::move(coeff);
    K->var = std::move(var);
    return K;
}

RFPtr LocalField::residue_field() const {
    switch (kind) {
    case LFKind::EqualChar: return ec_residue;
    case LFKind::PAdic: {
        if (!steps.empty() && !steps[0].eisenstein) {
            std::vector<long long> red;
            for (auto& c : steps[0].minpoly) {
                BigInt r = c.c % p;
                if (r < 0) r += p;
                red.push_back(to_ll(r));
            }
            return ResidueField::finite_with_minpoly(p, red);
        }
        return ResidueField::finite(p, 1);
    }
    case LFKind::Mixed: {
        auto kc = coeff->residue_field();
        return ResidueField::ratfun(p, kc->fq.r, {var}, true);
    }
    case LFKind::Quot: return q_kL;
    }
    throw Error("unreachable");
}

long long LocalField::fresh_cap() const {
    switch (kind) {
    case LFKind::EqualChar: return VAL_INF;
    case LFKind::PAdic:
    case LFKind::Mixed: return eabs * prec.Np;
    case LFKind::Quot: {
        long long b = base->fresh_cap();
        return is_inf(b) ? VAL_INF : q_e * b;
    }
    }
    return VAL_INF;
}

std::string LocalField::describe() const {
    std::ostringstream os;
    switch (kind) {
    case LFKind::EqualChar: os << ec_residue->describe() << "((" << var << "))"; break;
    case LFKind::PAdic: {
        os << "Q_" << p;
        long long d = 1;
        for (auto& s : steps) d *= s.degree;
        if (d > 1) os << "[deg " << d << ", e=" << eabs << "]";
        break;
    }
    case LFKind::Mixed: os << coeff->describe() << "{{" << var << "}}"; break;
    case LFKind::Quot: os << base->describe() << "(" << gen_name << ")"; break;
    }
    return os.str();
}

bool lf_equal(const LFPtr& a, const LFPtr& b) { return a.get() == b.get(); }

// ---------------------------------------------------------------------------
// element construction

static void check_same(const LElem& a, const LElem& b) {
    if (!lf_equal(a.K, b.K)) throw FieldMismatch("operands live in different local fields");
}

LElem l_zero(const LFPtr& K) {
    LElem e;
    e.K = K;
    e.cap = K->fresh_cap();
    if (K->kind == LFKind::PAdic) e.pad = pe_zero(static_cast<int>(K->steps.size()));
    if (K->kind == LFKind::Quot)
        e.coords.assign(static_cast<size_t>(K->q_minpoly.size() - 1), l_zero(K->base));
    return e;
}

LElem l_from_bigint(const LFPtr& K, const BigInt& c) {
    LElem e = l_zero(K);
    switch (K->kind) {
    case LFKind::EqualChar: {
        BigInt m = c % K->p;
        if (m < 0) m += K->p;
        RElem r = r_from_int(K->ec_residue, to_ll(m));
        if (!r.is_zero()) e.ec.push_back({0, r});
        break;
    }
    case LFKind::PAdic:
        e.pad = pe_from_bigint(*K, c, static_cast<int>(K->steps.size()));
        break;
    case LFKind::Mixed: {
        LElem cc = l_from_bigint(K->coeff, c);
        if (!cc.looks_zero()) {
            e.mix_e.push_back(0);
            e.mix_c.push_back(cc);
        }
        break;
    }
    case LFKind::Quot:
        e.coords[0] = l_from_bigint(K->base, c);
        break;
    }
    return e;
}

LElem l_from_int(const LFPtr& K, long long c) { return l_from_bigint(K, BigInt(c)); }

LElem l_one(const LFPtr& K) { return l_from_int(K, 1); }

LElem l_ec_term(const LFPtr& K, long long e0, const RElem& c) {
    if (K->kind != LFKind::EqualChar) throw FieldMismatch("series term in a non-series field");
    if (!rf_equal(c.F, K->ec_residue)) throw FieldMismatch("coefficient from the wrong residue field");
    LElem e = l_zero(K);
    if (!c.is_zero()) e.ec.push_back({e0, c});
    return e;
}

LElem l_mixed_term(const LFPtr& K, long long e0, const LElem& coeffv) {
    if (K->kind != LFKind::Mixed) throw FieldMismatch("mixed term in a non-mixed field");
    if (!lf_equal(coeffv.K, K->coeff)) throw FieldMismatch("coefficient from the wrong field");
    LElem e = l_zero(K);
    if (!coeffv.looks_zero()) {
        e.mix_e.push_back(e0);
        e.mix_c.push_back(coeffv);
        e.cap = std::min(e.cap, coeffv.cap);
    }
    return e;
}

LElem l_quot_coords(const LFPtr& K, std::vector<LElem> coords) {
    if (K->kind != LFKind::Quot) throw FieldMismatch("coordinates require an extension field");
    LElem e = l_zero(K);
    if (coords.size() != e.coords.size()) throw DegreeMismatch("wrong coordinate count");
    // coordinate data lives in base-field units; the element cap is
    // extension-normalized
    for (auto& c : coords)
        e.cap = std::min(e.cap, is_inf(c.cap) ? VAL_INF : K->q_e * c.cap);
    e.coords = std::move(coords);
    return e;
}

LElem l_embed_base(const LFPtr& K, const LElem& b) {
    if (K->kind != LFKind::Quot) throw FieldMismatch("embedding target is not an extension field");
    if (!lf_equal(b.K, K->base)) throw FieldMismatch("embedding source is not the base field");
    LElem e = l_zero(K);
    e.coords[0] = b;
    e.cap = std::min(e.cap, is_inf(b.cap) ? VAL_INF : K->q_e * b.cap);
    return e;
}

LElem l_pgen(const LFPtr& K, size_t stage) {
    if (K->kind == LFKind::Mixed) return l_mixed_term(K, 0, l_pgen(K->coeff, stage));
    if (K->kind != LFKind::PAdic) throw FieldMismatch("tower generator of a non-p-adic field");
    if (stage >= K->steps.size()) throw Error("tower stage out of range");
    LElem e = l_zero(K);
    e.pad = pe_gen(*K, stage, static_cast<int>(K->steps.size()));
    return e;
}

LElem l_tvar(const LFPtr& K) {
    if (K->kind == LFKind::Mixed) return l_mixed_term(K, 1, l_one(K->coeff));
    if (K->kind == LFKind::EqualChar) return l_ec_term(K, 1, r_one(K->ec_residue));
    throw FieldMismatch("no series variable in this field");
}

LElem l_uniformizer(const LFPtr& K) {
    switch (K->kind) {
    case LFKind::EqualChar: return l_ec_term(K, 1, r_one(K->ec_residue));
    case LFKind::PAdic: {
        LElem e = l_one(K);
        e.pshift = 1;
        e.cap = K->fresh_cap() + 1;
        return e;
    }
    case LFKind::Mixed: return l_mixed_term(K, 0, l_uniformizer(K->coeff));
    case LFKind::Quot: return l_quot_coords(K, K->q_pi);
    }
    throw Error("unreachable");
}

bool LElem::looks_zero() const {
    switch (K->kind) {
    case LFKind::EqualChar:
        for (auto& [e, c] : ec)
            if (!c.is_zero() && e < cap) return false;
        return true;
    case LFKind::PAdic: {
        long long v = pe_val(*K, pad, static_cast<int>(K->steps.size()));
        return is_inf(v) || v + pshift >= cap;
    }
    case LFKind::Mixed:
        for (auto& c : mix_c)
            if (!c.looks_zero() && l_val_floor(c) < cap) return false;
        return true;
    case LFKind::Quot:
        for (auto& c : coords)
            if (!c.looks_zero()) return false;
        return true;
    }
    return true;
}

// ---------------------------------------------------------------------------
// valuation floors, caps, certification

long long l_val_floor(const LElem& a) {
    switch (a.K->kind) {
    case LFKind::EqualChar: {
        long long best = a.cap;
        for (auto& [e, c] : a.ec)
            if (!c.is_zero()) best = std::min(best, e);
        return best;
    }
    case LFKind::PAdic: {
        long long v = pe_val(*a.K, a.pad, static_cast<int>(a.K->steps.size()));
        if (is_inf(v)) return a.cap;
        return std::min(add_val(v, a.pshift), a.cap);
    }
    case LFKind::Mixed: {
        long long best = a.cap;
        for (auto& c : a.mix_c) best = std::min(best, l_val_floor(c));
        return best;
    }
    case LFKind::Quot: {
        long long best = a.cap;
        for (auto& c : a.coords) {
            long long f = l_val_floor(c);
            best = std::min(best, is_inf(f) ? VAL_INF : a.K->q_e * f);
        }
        return best;
    }
    }
    return a.cap;
}

static long long quot_val(const LElem& a);

long long l_val(const LElem& a) {
    if (a.K->kind == LFKind::Quot) return quot_val(a);
    if (a.looks_zero()) {
        if (is_inf(a.cap)) throw ZeroElement("valuation of exact zero");
        throw PrecisionExhausted("element indistinguishable from zero at current precision");
    }
    long long v = l_val_floor(a);
    if (!is_inf(a.cap) && v + a.K->prec.guard > a.cap)
        throw PrecisionExhausted("valuation claim lacks guard slack");
    return v;
}

bool l_cert_nonzero(const LElem& a) {
    if (a.looks_zero()) return false;
    try {
        (void)l_val(a);
        return true;
    } catch (const PrecisionExhausted&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// arithmetic

static LElem ec_normalize(LElem e) {
    std::sort(e.ec.begin(), e.ec.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::pair<long long, RElem>> out;
    for (auto& [ex, c] : e.ec) {
        if (c.is_zero()) continue;
        if (!is_inf(e.cap) && ex >= e.cap) continue;
        if (!out.empty() && out.back().first == ex) {
            out.back().second = r_add(out.back().second, c);
            if (out.back().second.is_zero()) out.pop_back();
        } else {
            out.push_back({ex, c});
        }
    }
    e.ec = std::move(out);
    return e;
}

static LElem mix_normalize(LElem e) {
    // every kept coefficient's own cap bounds what the element can certify,
    // dead coefficients included; anything entirely above the cap is noise
    for (auto& c : e.mix_c) e.cap = std::min(e.cap, c.cap);
    std::vector<long long> xe;
    std::vector<LElem> xc;
    for (size_t i = 0; i < e.mix_e.size(); ++i) {
        if (l_val_floor(e.mix_c[i]) >= e.cap) continue;
        xe.push_back(e.mix_e[i]);
        xc.push_back(e.mix_c[i]);
    }
    e.mix_e = std::move(xe);
    e.mix_c = std::move(xc);
    return e;
}

LElem l_add(const LElem& a, const LElem& b) {
    check_same(a, b);
    LElem e = l_zero(a.K);
    e.cap = std::min(a.cap, b.cap);
    switch (a.K->kind) {
    case LFKind::EqualChar:
        e.ec = a.ec;
        for (auto& t : b.ec) e.ec.push_back(t);
        return ec_normalize(std::move(e));
    case LFKind::PAdic: {
        long long s = std::min(a.pshift, b.pshift);
        int depth = static_cast<int>(a.K->steps.size());
        PadE pa = pe_mul_pi_pow(*a.K, a.pad, a.pshift - s, depth);
        PadE pb = pe_mul_pi_pow(*a.K, b.pad, b.pshift - s, depth);
        e.pad = pe_add(*a.K, pa, pb, depth);
        e.pshift = s;
        e.cap = std::min(e.cap, a.K->fresh_cap() + s);
        return e;
    }
    case LFKind::Mixed: {
        e.mix_e = a.mix_e;
        e.mix_c = a.mix_c;
        for (size_t i = 0; i < b.mix_e.size(); ++i) {
            bool merged = false;
            for (size_t j = 0; j < e.mix_e.size(); ++j) {
                if (e.mix_e[j] == b.mix_e[i]) {
                    e.mix_c[j] = l_add(e.mix_c[j], b.mix_c[i]);
                    merged = true;
                    break;
                }
            }
            if (!merged) {
                e.mix_e.push_back(b.mix_e[i]);
                e.mix_c.push_back(b.mix_c[i]);
            }
        }
        return mix_normalize(std::move(e));
    }
    case LFKind::Quot: {
        e.coords.clear();
        for (size_t i = 0; i < a.coords.size(); ++i) e.coords.push_back(l_add(a.coords[i], b.coords[i]));
        return e;
    }
    }
    throw Error("unreachable");
}

LElem l_neg(const LElem& a) {
    LElem e = a;
    switch (a.K->kind) {
    case LFKind::EqualChar:
        for (auto& [ex, c] : e.ec) c = r_neg(c);
        return e;
    case LFKind::PAdic:
        e.pad = pe_neg(*a.K, e.pad, static_cast<int>(a.K->steps.size()));
        return e;
    case LFKind::Mixed:
        for (auto& c : e.mix_c) c = l_neg(c);
        return e;
    case LFKind::Quot:
        for (auto& c : e.coords) c = l_neg(c);
        return e;
    }
    throw Error("unreachable");
}

LElem l_sub(const LElem& a, const LElem& b) { return l_add(a, l_neg(b)); }

LElem l_mul(const LElem& a, const LElem& b) {
    check_same(a, b);
    long long va = l_val_floor(a), vb = l_val_floor(b);
    long long cap = std::min(add_val(a.cap, vb), add_val(b.cap, va));
    LElem e = l_zero(a.K);
    e.cap = cap;
    switch (a.K->kind) {
    case LFKind::EqualChar: {
        for (auto& [ea, ca] : a.ec)
            for (auto& [eb, cb] : b.ec) e.ec.push_back({ea + eb, r_mul(ca, cb)});
        return ec_normalize(std::move(e));
    }
    case LFKind::PAdic: {
        int depth = static_cast<int>(a.K->steps.size());
        e.pad = pe_mul(*a.K, a.pad, b.pad, depth);
        e.pshift = a.pshift + b.pshift;
        e.cap = std::min(e.cap, a.K->fresh_cap() + e.pshift);
        return e;
    }
    case LFKind::Mixed: {
        for (size_t i = 0; i < a.mix_e.size(); ++i) {
            for (size_t j = 0; j < b.mix_e.size(); ++j) {
                long long ex = a.mix_e[i] + b.mix_e[j];
                LElem c = l_mul(a.mix_c[i], b.mix_c[j]);
                bool merged = false;
                for (size_t k = 0; k < e.mix_e.size(); ++k) {
                    if (e.mix_e[k] == ex) {
                        e.mix_c[k] = l_add(e.mix_c[k], c);
                        merged = true;
                        break;
                    }
                }
                if (!merged) {
                    e.mix_e.push_back(ex);
                    e.mix_c.push_back(c);
                }
            }
        }
        return mix_normalize(std::move(e));
    }
    case LFKind::Quot: {
        QuotCtx R(a.K->base, a.K->q_minpoly);
        QV r = qv_mul(R, a.coords, b.coords);
        LElem out = l_quot_coords(a.K, std::move(r));
        out.cap = std::min(out.cap, cap);
        return out;
    }
    }
    throw Error("unreachable");
}

LElem l_scale_uniformizer(const LElem& a, long long k) {
    LElem e = a;
    switch (a.K->kind) {
    case LFKind::EqualChar:
        for (auto& [ex, c] : e.ec) ex += k;
        if (!is_inf(e.cap)) e.cap += k;
        return e;
    case LFKind::PAdic:
        e.pshift += k;
        if (!is_inf(e.cap)) e.cap += k;
        return e;
    case LFKind::Mixed:
        for (auto& c : e.mix_c) c = l_scale_uniformizer(c, k);
        if (!is_inf(e.cap)) e.cap += k;
        return e;
    case LFKind::Quot: {
        LElem r = a;
        LElem pi = l_uniformizer(a.K);
        if (k < 0) pi = l_inv(pi);
        for (long long i = 0; i < std::llabs(k); ++i) r = l_mul(r, pi);
        return r;
    }
    }
    throw Error("unreachable");
}

LElem l_pow(const LElem& a, long long e) {
    if (e < 0) return l_pow(l_inv(a), -e);
    LElem r = l_one(a.K);
    LElem base = a;
    while (e > 0) {
        if (e & 1) r = l_mul(r, base);
        base = l_mul(base, base);
        e >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// inversion

static LElem ec_inv(const LElem& a) {
    long long v = l_val(a);
    const LFPtr& K = a.K;
    RElem c0 = r_zero(K->ec_residue);
    for (auto& [e, c] : a.ec)
        if (e == v) c0 = c;
    RElem ic0 = r_inv(c0);
    LElem w = l_zero(K);
    for (auto& [e, c] : a.ec)
        if (e != v) w.ec.push_back({e - v, r_mul(c, ic0)});
    w.cap = is_inf(a.cap) ? VAL_INF : a.cap - v;
    w = ec_normalize(std::move(w));
    long long window = K->prec.Nt;
    LElem geom = l_one(K);
    LElem term = l_one(K);
    LElem negw = l_neg(w);
    for (long long k = 1; k <= window && !negw.looks_zero(); ++k) {
        term = l_mul(term, negw);
        LElem t2 = l_zero(K);
        t2.cap = term.cap;
        for (auto& [e, c] : term.ec)
            if (e <= window) t2.ec.push_back({e, c});
        term = ec_normalize(std::move(t2));
        if (term.looks_zero()) break;
        geom = l_add(geom, term);
    }
    LElem out = l_zero(K);
    for (auto& [e, c] : geom.ec) out.ec.push_back({e - v, r_mul(c, ic0)});
    long long cap_err = is_inf(a.cap) ? VAL_INF : a.cap - 2 * v;
    out.cap = std::min(window + 1 - v, cap_err);
    if (negw.looks_zero() && is_inf(a.cap)) out.cap = VAL_INF; // exact monomial
    return ec_normalize(std::move(out));
}

static RElem padic_residue_body(const LFPtr& K, const PadE& body) {
    auto kk = K->residue_field();
    const PadE* cur = &body;
    int d = static_cast<int>(K->steps.size());
    while (d > 0 && K->steps[d - 1].eisenstein) {
        if (cur->sub.empty()) return r_zero(kk);
        cur = &cur->sub[0];
        --d;
    }
    if (d == 0) {
        BigInt r = cur->c % K->p;
        if (r < 0) r += K->p;
        return r_from_int(kk, to_ll(r));
    }
    // unramified bottom step: coefficients are leaves
    RElem acc = r_zero(kk);
    RElem g = kk->fq.r > 1 ? r_gen(kk) : r_one(kk);
    RElem gp = r_one(kk);
    for (size_t i = 0; i < cur->sub.size(); ++i) {
        BigInt r = cur->sub[i].c % K->p;
        if (r < 0) r += K->p;
        acc = r_add(acc, r_mul(r_from_int(kk, to_ll(r)), gp));
        gp = r_mul(gp, g);
    }
    return acc;
}

static LElem padic_inv(const LElem& a) {
    const LFPtr& K = a.K;
    int depth = static_cast<int>(K->steps.size());
    long long v = l_val(a);
    long long vb = v - a.pshift; // valuation of the body, >= 0
    long long t = (K->eabs - (vb % K->eabs + K->eabs) % K->eabs) % K->eabs;
    PadE z = pe_mul_pi_pow(*K, a.pad, t, depth);
    long long zk = (vb + t) / K->eabs;
    PadE u = pe_div_p(*K, z, depth, zk);
    pe_mod(*K, u, depth);
    RElem ru = padic_residue_body(K, u);
    if (ru.is_zero()) throw PrecisionExhausted("unit extraction failed in p-adic inversion");
    PadE y = l_lift(K, r_inv(ru)).pad;
    PadE one = pe_from_bigint(*K, 1, depth);
    for (int it = 0; it < 64; ++it) {
        PadE r = pe_add(*K, one, pe_neg(*K, pe_mul(*K, u, y, depth), depth), depth);
        if (pe_is_zero(r, depth)) break;
        y = pe_mul(*K, y, pe_add(*K, one, r, depth), depth);
    }
    LElem out = l_zero(K);
    out.pad = y;
    if (K->eabs > 1) {
        for (long long i = 0; i < zk; ++i) out.pad = pe_mul(*K, out.pad, K->p_over_pi, depth);
        out.pshift = -K->eabs * zk + t - a.pshift;
    } else {
        out.pshift = -zk - a.pshift;
    }
    long long cap_err = is_inf(a.cap) ? VAL_INF : a.cap - 2 * v;
    out.cap = std::min(K->fresh_cap() + out.pshift, cap_err);
    if (zk > 0 && K->eabs > 1)
        out.cap = std::min(out.cap, K->eabs * (K->prec.Np - 1) + out.pshift);
    return out;
}

static LElem mixed_inv(const LElem& a) {
    const LFPtr& K = a.K;
    long long v = l_val(a);
    std::vector<size_t> mins;
    for (size_t i = 0; i < a.mix_c.size(); ++i)
        if (l_val_floor(a.mix_c[i]) == v) mins.push_back(i);
    if (mins.size() != 1)
        throw PrecisionExhausted(
            "mixed-series inverse with several leading terms is not representable at a finite window");
    size_t lead = mins[0];
    LElem ic = l_inv(a.mix_c[lead]);
    LElem y = l_mixed_term(K, -a.mix_e[lead], ic);
    long long target = std::min(a.cap, K->fresh_cap());
    for (int it = 0; it < 64; ++it) {
        LElem r = l_sub(l_one(K), l_mul(a, y));
        if (r.looks_zero()) break;
        y = l_mul(y, l_add(l_one(K), r));
        if (l_val_floor(r) >= target - v) break;
    }
    long long cap_err = is_inf(a.cap) ? K->fresh_cap() - 2 * v : a.cap - 2 * v;
    y.cap = std::min(y.cap, cap_err);
    return mix_normalize(std::move(y));
}

LElem l_inv(const LElem& a) {
    if (a.looks_zero()) {
        if (is_inf(a.cap)) throw DivisionByZero("inverse of exact zero");
        throw PrecisionExhausted("inverse of an element indistinguishable from zero");
    }
    switch (a.K->kind) {
    case LFKind::EqualChar: return ec_inv(a);
    case LFKind::PAdic: return padic_inv(a);
    case LFKind::Mixed: return mixed_inv(a);
    case LFKind::Quot: {
        QuotCtx R(a.K->base, a.K->q_minpoly);
        return l_quot_coords(a.K, qv_inv(R, a.coords));
    }
    }
    throw Error("unreachable");
}

LElem l_div(const LElem& a, const LElem& b) { return l_mul(a, l_inv(b)); }

bool l_eq_at_prec(const LElem& a, const LElem& b) { return l_sub(a, b).looks_zero(); }

// ---------------------------------------------------------------------------
// residue and lift

RElem l_residue(const LElem& a) {
    const LFPtr& K = a.K;
    if (a.looks_zero()) {
        if (!is_inf(a.cap) && a.cap < K->prec.guard)
            throw PrecisionExhausted("residue cannot be certified");
        return r_zero(K->residue_field());
    }
    long long v = l_val(a);
    if (v < 0) throw NegativeValuation("residue of an element with negative valuation");
    switch (K->kind) {
    case LFKind::EqualChar: {
        for (auto& [e, c] : a.ec)
            if (e == 0) return c;
        return r_zero(K->ec_residue);
    }
    case LFKind::PAdic: {
        PadE body = a.pad;
        if (a.pshift != 0) {
            // normalize to shift 0: multiply by pi^r and divide by p^q
            long long s = a.pshift;
            long long q = (-s + K->eabs - 1) / K->eabs; // ceil(-s / eabs), may be negative
            if (s > 0) {
                body = pe_mul_pi_pow(*K, body, s, static_cast<int>(K->steps.size()));
            } else {
                long long r = s + q * K->eabs; // in [0, eabs)
                body = pe_mul_pi_pow(*K, body, r, static_cast<int>(K->steps.size()));
                if (K->eabs > 1) {
                    for (long long i = 0; i < q; ++i)
                        body = pe_mul(*K, body, K->p_over_pi, static_cast<int>(K->steps.size()));
                }
                body = pe_div_p(*K, body, static_cast<int>(K->steps.size()), q);
            }
        }
        return padic_residue_body(K, body);
    }
    case LFKind::Mixed: {
        auto kk = K->residue_field();
        long long minexp = 0;
        std::vector<std::pair<long long, RElem>> terms;
        for (size_t i = 0; i < a.mix_e.size(); ++i) {
            if (a.mix_c[i].looks_zero()) continue;
            if (l_val(a.mix_c[i]) > 0) continue;
            RElem rc = l_residue(a.mix_c[i]);
            if (rc.is_zero()) continue;
            terms.push_back({a.mix_e[i], rc});
            minexp = std::min(minexp, a.mix_e[i]);
        }
        RElem out = r_zero(kk);
        RElem T = r_gen(kk);
        for (auto& [e, rc] : terms) {
            RElem lifted = r_zero(kk);
            lifted.num = mp_const(kk->fq, rc.ff);
            out = r_add(out, r_mul(lifted, r_pow(T, e - minexp)));
        }
        if (minexp < 0) out = r_div(out, r_pow(T, -minexp));
        return out;
    }
    case LFKind::Quot: {
        auto kk = K->q_kL;
        RElem acc = r_zero(kk);
        RElem gp = r_one(kk);
        bool ext_over_base = kk->kind == RFKind::SimpleExt && rf_equal(kk->base, K->base->residue_field());
        for (size_t i = 0; i < a.coords.size(); ++i) {
            RElem rc = l_residue(a.coords[i]);
            RElem rin = ext_over_base ? r_embed(kk, rc) : rc;
            acc = r_add(acc, r_mul(rin, gp));
            gp = r_mul(gp, K->q_resgen);
        }
        return acc;
    }
    }
    throw Error("unreachable");
}

LElem l_lift(const LFPtr& K, const RElem& r) {
    switch (K->kind) {
    case LFKind::EqualChar:
        return l_ec_term(K, 0, r);
    case LFKind::PAdic: {
        if (r.F->kind != RFKind::Finite)
            throw FieldMismatch("p-adic lift needs a finite residue element");
        LElem out = l_zero(K);
        int depth = static_cast<int>(K->steps.size());
        if (r.ff.empty()) return out;
        if (r.F->fq.r == 1) {
            out.pad = pe_from_bigint(*K, r.ff[0], depth);
            return out;
        }
        if (K->steps.empty() || K->steps[0].eisenstein)
            throw FieldMismatch("residue element needs an unramified step to lift");
        PadE acc = pe_zero(depth);
        PadE gen = pe_gen(*K, 0, depth);
        PadE gp = pe_from_bigint(*K, 1, depth);
        for (size_t i = 0; i < r.ff.size(); ++i) {
            acc = pe_add(*K, acc, pe_mul(*K, gp, pe_from_bigint(*K, r.ff[i], depth), depth), depth);
            gp = pe_mul(*K, gp, gen, depth);
        }
        out.pad = acc;
        return out;
    }
    case LFKind::Mixed: {
        if (!rf_equal(r.F, K->residue_field())) throw FieldMismatch("lift from the wrong residue field");
        if (r.is_zero()) return l_zero(K);
        if (r.den.t.size() != 1 || !fq_is_one(r.den.t.begin()->second))
            throw Error("lift of a residue with non-monomial denominator is not supported");
        long long k = r.den.t.begin()->first.e[0];
        LElem out = l_zero(K);
        auto kc = K->coeff->residue_field();
        for (auto& [m, c] : r.num.t) {
            RElem cf;
            cf.F = kc;
            cf.ff = c;
            out = l_add(out, l_mixed_term(K, m.e[0] - k, l_lift(K->coeff, cf)));
        }
        return out;
    }
    case LFKind::Quot: {
        auto kk = K->q_kL;
        if (rf_equal(r.F, kk) && kk->kind == RFKind::SimpleExt &&
            rf_equal(kk->base, K->base->residue_field())) {
            LElem acc = l_zero(K);
            LElem gen = l_zero(K);
            gen.coords[1] = l_one(K->base);
            LElem gp = l_one(K);
            for (size_t i = 0; i < r.ext.size(); ++i) {
                acc = l_add(acc, l_mul(l_embed_base(K, l_lift(K->base, r.ext[i])), gp));
                gp = l_mul(gp, gen);
            }
            return acc;
        }
        if (rf_equal(r.F, K->base->residue_field())) return l_embed_base(K, l_lift(K->base, r));
        throw FieldMismatch("lift from the wrong residue field");
    }
    }
    throw Error("unreachable");
}

// ---------------------------------------------------------------------------
// Quot valuation via norms / adapted coordinates

static long long quot_val(const LElem& a) {
    const LFPtr& K = a.K;
    if (a.looks_zero()) {
        if (is_inf(a.cap)) throw ZeroElement("valuation of exact zero");
        throw PrecisionExhausted("element indistinguishable from zero at current precision");
    }
    long long n = static_cast<long long>(a.coords.size());
    if (!K->q_action.empty()) {
        QuotCtx R(K->base, K->q_minpoly);
        QV prod = qv_one(R);
        for (size_t s = 0; s < K->q_action.size(); ++s) {
            QV img = qv_zero(R);
            for (size_t i = 0; i < a.coords.size(); ++i) {
                if (a.coords[i].looks_zero()) continue;
                img = qv_add(R, img, qv_scale(R, K->q_action[s][i], a.coords[i]));
            }
            prod = qv_mul(R, prod, img);
        }
        for (size_t i = 1; i < prod.size(); ++i) {
            if (l_cert_nonzero(prod[i]))
                throw PrecisionExhausted("norm did not collapse into the base field at precision");
        }
        long long vN = l_val(prod[0]);
        if ((K->q_e * vN) % n != 0)
            throw PrecisionExhausted("norm valuation incompatible with the ramification index");
        long long v = K->q_e * vN / n;
        if (!is_inf(a.cap) && v + K->prec.guard > a.cap)
            throw PrecisionExhausted("extension-field valuation claim lacks guard slack");
        return v;
    }
    if (K->q_e == 1) {
        long long best = VAL_INF;
        for (auto& c : a.coords) {
            if (c.looks_zero()) continue;
            best = std::min(best, l_val(c));
        }
        if (is_inf(best)) throw PrecisionExhausted("no certified coordinate");
        return best;
    }
    throw Error("extension-field valuation needs a Galois action or trivial ramification");
}

// ---------------------------------------------------------------------------
// Newton polygon and Hensel lifting

std::vector<std::pair<Rat, long long>> newton_polygon(const std::vector<LElem>& f) {
    long long n = static_cast<long long>(f.size()) - 1;
    if (n < 1) throw ValidationError("newton polygon of a constant");
    std::vector<std::pair<long long, long long>> pts;
    for (long long i = 0; i <= n; ++i) {
        if (f[i].looks_zero()) continue;
        pts.push_back({i, l_val(f[i])});
    }
    if (pts.empty() || pts.back().first != n) throw NotMonic("leading coefficient vanishes");
    std::vector<std::pair<long long, long long>> hull;
    for (auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            BigInt lhs = BigInt(b.second - a.second) * (pt.first - b.first);
            BigInt rhs = BigInt(pt.second - b.second) * (b.first - a.first);
            if (lhs < rhs) break; // keep b: slope(a,b) < slope(b,pt)
            hull.pop_back();
        }
        hull.push_back(pt);
    }
    std::vector<std::pair<Rat, long long>> out;
    for (size_t i = 0; i + 1 < hull.size(); ++i) {
        long long dx = hull[i + 1].first - hull[i].first;
        long long dy = hull[i + 1].second - hull[i].second;
        out.push_back({make_rat(-dy, dx), dx}); // root valuation = -segment slope
    }
    std::reverse(out.begin(), out.end()); // ascending root valuations
    return out;
}

LElem hensel_root(const std::vector<LElem>& f, const LElem& x0, long long m0) {
    KPoly fp = kp_derivative(f);
    LElem x = x0;
    LElem fx = kp_eval(f, x);
    LElem fpx = kp_eval(fp, x);
    long long vf = fx.looks_zero() ? fx.cap : l_val(fx);
    long long vfp = l_val(fpx);
    if (!(vf > 2 * vfp)) throw HenselHypothesisFailed("v(f(x0)) <= 2 v(f'(x0))");
    for (int it = 0; it < 64; ++it) {
        fx = kp_eval(f, x);
        if (fx.looks_zero()) break;
        fpx = kp_eval(fp, x);
        x = l_sub(x, l_div(fx, fpx));
    }
    if (m0 > 0) {
        LElem d = l_sub(x, x0);
        if (!d.looks_zero() && l_val(d) < m0)
            throw HenselHypothesisFailed("lifted root strayed from the starting approximation");
    }
    return x;
}

std::string LElem::str() const {
    std::ostringstream os;
    switch (K->kind) {
    case LFKind::EqualChar: {
        if (ec.empty()) return "0";
        bool first = true;
        for (auto& [e, c] : ec) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")";
            if (e != 0) os << "*" << K->var << "^" << e;
        }
        return os.str();
    }
    case LFKind::PAdic:
        os << "[padic, vfloor=" << l_val_floor(*this) << "]";
        return os.str();
    case LFKind::Mixed: {
        if (mix_e.empty()) return "0";
        for (size_t i = 0; i < mix_e.size(); ++i) {
            if (i) os << " + ";
            os << "(" << mix_c[i].str() << ")*" << K->var << "^" << mix_e[i];
        }
        return os.str();
    }
    case LFKind::Quot: {
        os << "[";
        for (size_t i = 0; i < coords.size(); ++i) os << (i ? ", " : "") << coords[i].str();
        os << "]";
        return os.str();
    }
    }
    return "?";
}

} // namespace ramify
