#include "ramify/extension.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace ramify {

// ---------------------------------------------------------------------------
// GroupSpec

GroupSpec GroupSpec::parse(const std::string& s) {
    GroupSpec g;
    auto colon = s.find(':');
    if (colon == std::string::npos)
        throw ValidationError("group spec must be 'cyclic:n' or 'product:axb'");
    std::string kind = s.substr(0, colon);
    std::string rest = s.substr(colon + 1);
    if (kind == "cyclic") {
        g.factors = {std::stoll(rest)};
    } else if (kind == "product") {
        size_t pos = 0;
        while (pos <= rest.size()) {
            size_t x = rest.find('x', pos);
            std::string tok = rest.substr(pos, x == std::string::npos ? std::string::npos : x - pos);
            if (tok.empty()) throw ValidationError("malformed product group spec");
            g.factors.push_back(std::stoll(tok));
            if (x == std::string::npos) break;
            pos = x + 1;
        }
    } else {
        throw ValidationError("unknown group kind: " + kind);
    }
    std::sort(g.factors.begin(), g.factors.end(), std::greater<>());
    for (auto f : g.factors)
        if (f < 1) throw ValidationError("group factor < 1");
    return g;
}

std::string GroupSpec::str() const {
    if (factors.size() == 1) return "cyclic:" + std::to_string(factors[0]);
    std::string s = "product:";
    for (size_t i = 0; i < factors.size(); ++i) s += (i ? "x" : "") + std::to_string(factors[i]);
    return s;
}

std::vector<long long> GroupSpec::order_multiset() const {
    std::vector<long long> orders;
    std::vector<long long> idx(factors.size(), 0);
    long long total = order();
    for (long long cnt = 0; cnt < total; ++cnt) {
        long long o = 1;
        for (size_t i = 0; i < factors.size(); ++i) {
            long long m = factors[i], a = idx[i];
            long long comp = (a == 0) ? 1 : m / std::gcd(a, m);
            o = std::lcm(o, comp);
        }
        orders.push_back(o);
        for (size_t i = 0; i < factors.size(); ++i) {
            if (++idx[i] < factors[i]) break;
            idx[i] = 0;
        }
    }
    std::sort(orders.begin(), orders.end());
    return orders;
}

static GroupSpec infer_group_from_orders(std::vector<long long> orders, long long n, long long p) {
    std::sort(orders.begin(), orders.end());
    std::vector<std::vector<long long>> cands;
    std::vector<long long> cur;
    std::function<void(long long, long long)> rec = [&](long long rem, long long maxf) {
        if (rem == 1) {
            cands.push_back(cur);
            return;
        }
        for (long long f = maxf; f >= p; f /= p) {
            if (rem % f) continue;
            cur.push_back(f);
            rec(rem / f, f);
            cur.pop_back();
        }
    };
    long long top = 1;
    while (top < n) top *= p;
    rec(n, top);
    for (auto& c : cands) {
        GroupSpec g;
        g.factors = c;
        if (g.order_multiset() == orders) return g;
    }
    throw Error("could not identify the abelian group type from element orders");
}

// ---------------------------------------------------------------------------
// GaloisExtension basics

QV GaloisExtension::gen() const { return qv_gen(ring); }

QV GaloisExtension::apply(size_t s, const QV& z) const {
    QV out = qv_zero(ring);
    for (size_t i = 0; i < z.size(); ++i) {
        if (z[i].looks_zero() && is_inf(z[i].cap)) continue;
        out = qv_add(ring, out, qv_scale(ring, pow_tables[s][i], z[i]));
    }
    return out;
}

LElem GaloisExtension::norm(const QV& z) const {
    QV prod = qv_one(ring);
    for (size_t s = 0; s < action.size(); ++s) prod = qv_mul(ring, prod, apply(s, z));
    for (size_t i = 1; i < prod.size(); ++i)
        if (l_cert_nonzero(prod[i]))
            throw PrecisionExhausted("norm did not collapse into the base field at precision");
    return prod[0];
}

Rat GaloisExtension::V(const QV& z) const {
    LElem N = norm(z);
    long long v = l_val(N);
    return make_rat(v, n);
}

long long GaloisExtension::vL(const QV& z) const {
    Rat v = V(z) * e;
    if (!rat_is_int(v)) throw PrecisionExhausted("valuation incompatible with ramification index");
    return to_ll(rat_num(v));
}

RElem GaloisExtension::residue(const QV& z) const {
    RElem acc = r_zero(kL);
    RElem gp = r_one(kL);
    bool ext = kL->kind == RFKind::SimpleExt && rf_equal(kL->base, base->residue_field());
    for (size_t i = 0; i < z.size(); ++i) {
        RElem rc = l_residue(z[i]);
        acc = r_add(acc, r_mul(ext ? r_embed(kL, rc) : rc, gp));
        gp = r_mul(gp, resgen);
    }
    return acc;
}

QV GaloisExtension::lift_res(const RElem& r) const {
    if (rf_equal(r.F, base->residue_field())) {
        QV v = qv_zero(ring);
        v[0] = l_lift(base, r);
        return v;
    }
    if (!rf_equal(r.F, kL)) throw FieldMismatch("lift from the wrong residue field");
    QV acc = qv_zero(ring);
    QV gp = qv_one(ring);
    QV g = gen();
    for (size_t i = 0; i < r.ext.size(); ++i) {
        QV c = qv_zero(ring);
        c[0] = l_lift(base, r.ext[i]);
        acc = qv_add(ring, acc, qv_mul(ring, c, gp));
        gp = qv_mul(ring, gp, g);
    }
    return acc;
}

bool GaloisExtension::is_abelian() const {
    for (size_t i = 0; i < table.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (table[i][j] != table[j][i]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// structure finding

namespace {

RPoly extract_residue_minpoly(const RFPtr& kK, const RPoly& fbar, long long p) {
    std::vector<RPoly> hs{fbar};
    RPoly h = fbar;
    while (true) {
        bool divisible = rp_deg(h) >= static_cast<int>(p);
        for (size_t i = 0; i < h.size() && divisible; ++i)
            if (i % p != 0 && !h[i].is_zero()) divisible = false;
        if (!divisible) break;
        RPoly sub(h.size() / p + 1, r_zero(kK));
        for (size_t i = 0; i < h.size(); i += p) sub[i / p] = h[i];
        h = rp_trim(sub);
        hs.push_back(h);
    }
    for (long long j = static_cast<long long>(hs.size()) - 1; j >= 0; --j) {
        RPoly cand = hs[static_cast<size_t>(j)];
        bool ok = true;
        for (long long t = 0; t < j && ok; ++t) {
            auto root = rp_coeff_pth_root(cand);
            if (!root) ok = false;
            else cand = *root;
        }
        if (!ok) continue;
        try {
            if (rp_irreducible(kK, cand)) return cand;
        } catch (const Error&) {
            // undecidable shape at this level; try the next
        }
    }
    throw NotMonogenic("no irreducible factor of the reduced minimal polynomial was identified");
}

void ext_gcd_ll(long long a, long long b, long long& g, long long& s, long long& t) {
    long long s0 = 1, t0 = 0, s1 = 0, t1 = 1;
    while (b != 0) {
        long long q = a / b;
        long long r = a - q * b;
        a = b;
        b = r;
        long long s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = s1;
        t0 = t1;
        s1 = s2;
        t1 = t2;
    }
    g = a;
    s = s0;
    t = t0;
}

QV qv_pow_signed(const QuotCtx& R, const QV& a, long long e) {
    if (e >= 0) return qv_pow(R, a, e);
    return qv_pow(R, qv_inv(R, a), -e);
}

void find_structure(GaloisExtension& E) {
    const LFPtr& K = E.base;
    RFPtr kK = K->residue_field();
    long long p = K->p;
    QV x = E.gen();
    Rat vx = E.V(x);
    if (vx < 0) throw NotMonogenic("generator is not integral");
    RPoly m;
    if (vx > 0) {
        m = RPoly{r_zero(kK), r_one(kK)};
        E.kL = kK;
        E.resgen = r_zero(kK);
    } else {
        RPoly fbar;
        for (auto& c : E.ring.f) fbar.push_back(l_residue(c));
        fbar = rp_trim(fbar);
        m = extract_residue_minpoly(kK, fbar, p);
        if (rp_deg(m) == 1) {
            E.kL = kK;
            E.resgen = r_neg(m[0]);
        } else {
            E.kL = ResidueField::simple_ext(kK, m, "xb");
            E.resgen = r_gen(E.kL);
        }
    }
    E.residue_minpoly = m;
    long long fdeg = rp_deg(m);
    auto split = separable_split(m);
    if (rp_deg(split.first) != 1)
        throw NotMonogenic("separable residue subextension present; unramified parts are not supported");
    E.f_ins = fdeg;
    E.f_sep = 1;
    if (E.n % fdeg != 0) throw NotMonogenic("residue degree does not divide the extension degree");
    E.e = E.n / fdeg;

    if (E.e == 1) {
        E.pi = qv_zero(E.ring);
        E.pi[0] = l_uniformizer(K);
    } else {
        KPoly mlift;
        for (auto& c : m) mlift.push_back(l_lift(K, c));
        QV delta = qv_eval_poly(E.ring, mlift, x);
        QV gelem = qv_zero(E.ring);
        gelem[0] = l_uniformizer(K);
        long long gval = E.e; // v_L(pi_K)
        bool done = false;
        for (int iter = 0; iter < 64 && !done; ++iter) {
            if (qv_looks_zero(delta)) throw NotMonogenic("refinement collapsed to zero");
            Rat vl_rat = E.V(delta) * E.e;
            if (!rat_is_int(vl_rat))
                throw NotMonogenic("element valuation has a denominator beyond the ramification index");
            long long v = to_ll(rat_num(vl_rat));
            if (v <= 0) throw NotMonogenic("refinement produced a unit");
            long long g, se, te;
            ext_gcd_ll(gval, v, g, se, te);
            if (g < gval) {
                gelem = qv_mul(E.ring, qv_pow_signed(E.ring, gelem, se),
                               qv_pow_signed(E.ring, delta, te));
                gval = g;
            }
            if (gval == 1) {
                done = true;
                break;
            }
            long long g2 = std::gcd(v, E.e);
            QV u = qv_pow(E.ring, delta, E.e / g2);
            u = qv_scale(E.ring, u, l_pow(l_uniformizer(K), -(v / g2)));
            RElem rho = E.residue(u);
            if (rho.is_zero()) throw NotMonogenic("unit residue vanished during refinement");
            delta = qv_sub(E.ring, u, E.lift_res(rho));
        }
        if (!done) throw NotMonogenic("no uniformizer found in the refinement schedule");
        E.pi = gelem;
    }
    if (E.V(E.pi) != make_rat(1, E.e)) throw NotMonogenic("uniformizer certification failed");
    E.structure_ok = true;
}

void build_as_field(GaloisExtension& E) {
    auto F = std::make_shared<LocalField>();
    F->kind = LFKind::Quot;
    F->prec = E.base->prec;
    F->p = E.base->p;
    F->eabs = E.base->eabs;
    F->base = E.base;
    F->q_minpoly = E.ring.f;
    F->gen_name = E.name.empty() ? "x" : E.name + ".x";
    F->q_e = E.e;
    F->q_kL = E.kL;
    F->q_resgen = E.resgen;
    F->q_pi = E.pi;
    F->q_action = E.pow_tables;
    E.as_field = F;
}

GaloisExtension build_verified(LFPtr base, KPoly f, std::vector<KPoly> polys, GroupSpec group,
                               std::string name, std::string gen_desc) {
    GaloisExtension E;
    E.base = std::move(base);
    E.name = std::move(name);
    E.gen_desc = std::move(gen_desc);
    E.group = std::move(group);
    long long p = E.base->p;
    E.n = E.group.order();
    {
        long long m = E.n;
        while (m % p == 0) m /= p;
        if (m != 1 || E.n < 2)
            throw ValidationError("only p-extensions are supported (group order must be a power of "
                                  "the residue characteristic)");
    }
    f = kp_trim(std::move(f));
    if (kp_deg(f) != E.n)
        throw DegreeMismatch("minimal polynomial degree differs from the group order");
    if (!l_sub(f.back(), l_one(E.base)).looks_zero())
        throw NotMonic("minimal polynomial must be monic");
    for (int i = 0; i < kp_deg(f); ++i)
        if (!f[i].looks_zero() && l_val(f[i]) < 0)
            throw ValidationError("minimal polynomial must have integral coefficients");
    E.ring = QuotCtx(E.base, f);
    if (static_cast<long long>(polys.size()) != E.n)
        throw DegreeMismatch("need one action polynomial per group element");

    std::vector<QV> images;
    for (auto& g : polys) {
        QV img = qv_zero(E.ring);
        for (size_t i = 0; i < g.size(); ++i) {
            if (static_cast<long long>(i) >= E.n) throw DegreeMismatch("action polynomial degree too large");
            img[i] = g[i];
        }
        QV fimg = qv_eval_poly(E.ring, E.ring.f, img);
        if (!qv_looks_zero(fimg))
            throw NotARoot("action polynomial is not a root of the minimal polynomial");
        images.push_back(std::move(img));
    }
    E.action = std::move(polys);
    if (!qv_eq_at_prec(E.ring, images[0], qv_gen(E.ring)))
        throw ActionNotClosed("identity image must come first");
    for (size_t i = 0; i < images.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (qv_eq_at_prec(E.ring, images[i], images[j]))
                throw ActionNotClosed("two action polynomials coincide at precision");

    for (auto& img : images) E.pow_tables.push_back(qv_powers(E.ring, img, E.n - 1));

    E.table.assign(images.size(), std::vector<size_t>(images.size(), 0));
    for (size_t i = 0; i < images.size(); ++i) {
        for (size_t j = 0; j < images.size(); ++j) {
            // (sigma_i sigma_j)(x) = g_j evaluated at sigma_i(x)
            QV comp = qv_zero(E.ring);
            for (size_t d = 0; d < E.action[j].size(); ++d) {
                if (E.action[j][d].looks_zero() && is_inf(E.action[j][d].cap)) continue;
                comp = qv_add(E.ring, comp, qv_scale(E.ring, E.pow_tables[i][d], E.action[j][d]));
            }
            bool found = false;
            for (size_t k = 0; k < images.size(); ++k) {
                if (qv_eq_at_prec(E.ring, comp, images[k])) {
                    E.table[i][j] = k;
                    found = true;
                    break;
                }
            }
            if (!found) throw ActionNotClosed("composition leaves the supplied automorphism list");
        }
    }
    E.inverse_of.assign(images.size(), 0);
    for (size_t i = 0; i < images.size(); ++i) {
        std::vector<bool> seen(images.size(), false);
        bool inv = false;
        for (size_t j = 0; j < images.size(); ++j) {
            if (seen[E.table[i][j]]) throw ActionNotClosed("group table row is not a permutation");
            seen[E.table[i][j]] = true;
            if (E.table[i][j] == 0) {
                E.inverse_of[i] = j;
                inv = true;
            }
        }
        if (!inv) throw ActionNotClosed("element without inverse");
        if (E.table[0][i] != i || E.table[i][0] != i) throw ActionNotClosed("identity misbehaves");
    }
    E.order_of.assign(images.size(), 1);
    for (size_t i = 1; i < images.size(); ++i) {
        size_t cur = i;
        long long o = 1;
        while (cur != 0) {
            cur = E.table[cur][i];
            ++o;
            if (o > E.n) throw ActionNotClosed("element order exceeds the group order");
        }
        E.order_of[i] = o;
    }
    {
        std::vector<long long> orders = E.order_of;
        std::sort(orders.begin(), orders.end());
        if (orders != E.group.order_multiset())
            throw ActionNotClosed("group table is not isomorphic to the claimed group");
    }
    if (!E.is_abelian()) throw ActionNotClosed("non-abelian table for a claimed abelian group");

    // f = prod over sigma of (X - sigma(x)) at precision
    {
        std::vector<QV> prod{qv_one(E.ring)};
        for (auto& img : images) {
            std::vector<QV> next(prod.size() + 1, qv_zero(E.ring));
            for (size_t d = 0; d < prod.size(); ++d) {
                next[d + 1] = qv_add(E.ring, next[d + 1], prod[d]);
                next[d] = qv_sub(E.ring, next[d], qv_mul(E.ring, prod[d], img));
            }
            prod = std::move(next);
        }
        for (size_t d = 0; d < prod.size(); ++d) {
            QV want = qv_zero(E.ring);
            if (d < E.ring.f.size()) want[0] = E.ring.f[d];
            if (!qv_eq_at_prec(E.ring, prod[d], want))
                throw NotARoot("minimal polynomial is not the product of its conjugate factors");
        }
    }

    // every non-identity element must certifiably move the generator
    for (size_t s1 = 1; s1 < images.size(); ++s1)
        (void)E.V(qv_sub(E.ring, images[s1], qv_gen(E.ring)));

    try {
        find_structure(E);
    } catch (const PrecisionExhausted&) {
        throw;
    } catch (const Error& err) {
        E.structure_ok = false;
        E.structure_msg = err.what();
    }
    if (E.structure_ok) build_as_field(E);
    return E;
}

std::vector<KPoly> enumerate_action_polys(const QuotCtx& ring, const std::vector<KPoly>& gen_images,
                                          const GroupSpec& group) {
    if (gen_images.size() != group.factors.size())
        throw ValidationError("need one generator image per group factor");
    // apply an automorphism (given by its image of x) to an arbitrary element
    auto apply_img = [&](const QV& img, const QV& z) {
        QV out = qv_zero(ring);
        std::vector<QV> img_pows = qv_powers(ring, img, ring.n - 1);
        for (size_t d = 0; d < z.size(); ++d) {
            if (z[d].looks_zero() && is_inf(z[d].cap)) continue;
            out = qv_add(ring, out, qv_scale(ring, img_pows[d], z[d]));
        }
        return out;
    };
    std::vector<QV> gens;
    for (auto& g : gen_images) {
        QV img = qv_zero(ring);
        for (size_t d = 0; d < g.size(); ++d) img[d] = g[d];
        gens.push_back(img);
    }
    std::vector<KPoly> out;
    std::vector<long long> idx(group.factors.size(), 0);
    long long total = group.order();
    for (long long cnt = 0; cnt < total; ++cnt) {
        QV cur = qv_gen(ring);
        for (size_t i = 0; i < idx.size(); ++i)
            for (long long k = 0; k < idx[i]; ++k) cur = apply_img(gens[i], cur);
        out.push_back(KPoly(cur.begin(), cur.end()));
        for (size_t i = 0; i < idx.size(); ++i) {
            if (++idx[i] < group.factors[i]) break;
            idx[i] = 0;
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// builtin families

namespace {

struct Resolved {
    KPoly f;
    std::vector<KPoly> polys;
    std::string gen_desc;
};

Resolved resolve_kummer(const ExtensionSpec& spec, const ActionKummer& a) {
    const LFPtr& K = spec.base;
    long long n = spec.group.order();
    if (a.exponent != n) throw ValidationError("kummer exponent must equal the group order");
    KPoly f = kp_trim(spec.minpoly);
    if (kp_deg(f) != n) throw DegreeMismatch("kummer polynomial degree mismatch");
    for (int i = 1; i < kp_deg(f); ++i)
        if (!f[i].looks_zero()) throw ValidationError("kummer polynomial must be X^n - b");
    LElem z = a.zeta;
    if (!lf_equal(z.K, K)) throw FieldMismatch("root of unity from the wrong field");
    if (!l_sub(l_pow(z, n), l_one(K)).looks_zero())
        throw ValidationError("zeta^n differs from 1");
    if (!l_cert_nonzero(l_sub(l_pow(z, n / K->p), l_one(K))))
        throw ValidationError("zeta has multiplicative order below the kummer exponent");
    Resolved R;
    R.f = f;
    for (long long j = 0; j < n; ++j) {
        KPoly g(2, l_zero(K));
        g[1] = l_pow(z, j);
        R.polys.push_back(g);
    }
    R.gen_desc = "x with x^" + std::to_string(n) + " = b, sigma: x -> zeta*x";
    return R;
}

Resolved resolve_artin_schreier(const ExtensionSpec& spec, const ActionArtinSchreier& a) {
    const LFPtr& K = spec.base;
    if (K->kind != LFKind::EqualChar)
        throw ValidationError("artin-schreier models require an equal-characteristic base");
    long long p = K->p;
    if (spec.group.order() != p)
        throw ValidationError("artin-schreier group must be cyclic of order p");
    LElem rhs = a.rhs;
    if (!lf_equal(rhs.K, K)) throw FieldMismatch("artin-schreier right-hand side from the wrong field");
    long long va = l_val(rhs);
    if (va >= 0) throw ValidationError("artin-schreier right-hand side must have negative valuation");
    long long nb = -va;
    Resolved R;
    if (nb % p != 0) {
        // totally ramified break nb; integral generator w = x^a0 t^b0 of valuation 1
        long long a0 = 0;
        for (long long c = 1; c < p; ++c)
            if (((-c * nb) % p + p) % p == 1 % p) a0 = c;
        if (a0 == 0) throw Error("no inverse exponent found");
        long long b0 = (1 + a0 * nb) / p;
        KPoly fraw(static_cast<size_t>(p) + 1, l_zero(K));
        fraw[0] = l_neg(rhs);
        fraw[1] = l_neg(l_one(K));
        fraw[static_cast<size_t>(p)] = l_one(K);
        QuotCtx A(K, fraw);
        QV w = qv_pow(A, qv_gen(A), a0);
        w = qv_scale(A, w, l_pow(l_uniformizer(K), b0));
        auto pows = qv_powers(A, w, p);
        KPoly g = min_poly_from_powers(K, pows);
        if (kp_deg(g) != p)
            throw DegreeMismatch("artin-schreier polynomial is reducible (rhs lies in the image of "
                                 "x^p - x)");
        R.f = g;
        std::vector<QV> wcols(pows.begin(), pows.begin() + p);
        for (long long j = 0; j < p; ++j) {
            QV xj = qv_gen(A);
            xj[0] = l_add(xj[0], l_from_int(K, j));
            QV img = qv_pow(A, xj, a0);
            img = qv_scale(A, img, l_pow(l_uniformizer(K), b0));
            auto coeffs = lin_solve(K, wcols, img);
            coeffs.resize(static_cast<size_t>(p), l_zero(K));
            R.polys.push_back(coeffs);
        }
        R.gen_desc = "w = x^" + std::to_string(a0) + "*" + K->var + "^" + std::to_string(b0) +
                     " for x^" + std::to_string(p) + " - x = rhs, break " + std::to_string(nb);
    } else {
        // ferocious model y = x t^m with a unit obstruction
        long long m = nb / p;
        LElem c = l_mul(rhs, l_pow(l_uniformizer(K), nb));
        RElem rbar = l_residue(c);
        if (r_pth_root(rbar).has_value())
            throw ValidationError("artin-schreier residue obstruction is a p-th power; the model "
                                  "reduces to a smaller break");
        KPoly f(static_cast<size_t>(p) + 1, l_zero(K));
        f[0] = l_neg(c);
        f[1] = l_neg(l_pow(l_uniformizer(K), (p - 1) * m));
        f[static_cast<size_t>(p)] = l_one(K);
        R.f = f;
        for (long long j = 0; j < p; ++j) {
            KPoly g(2, l_zero(K));
            g[1] = l_one(K);
            g[0] = l_mul(l_from_int(K, j), l_pow(l_uniformizer(K), m));
            R.polys.push_back(g);
        }
        R.gen_desc = "y = x*" + K->var + "^" + std::to_string(m) + " for x^" + std::to_string(p) +
                     " - x = rhs";
    }
    return R;
}

Resolved resolve_cyclotomic(const ExtensionSpec& spec, const ActionCyclotomic& a) {
    const LFPtr& K = spec.base;
    if (K->kind != LFKind::PAdic) throw ValidationError("cyclotomic steps require a p-adic base");
    long long p = K->p;
    if (spec.group.order() != p)
        throw ValidationError("cyclotomic relative step is cyclic of order p");
    long long pk = a.pk;
    long long pk1 = pk / p;
    if (pk1 < p || pk1 * p != pk)
        throw ValidationError("cyclotomic step needs p^k with k >= 2");
    if (K->steps.empty()) throw ValidationError("base must contain zeta_{p^{k-1}}");
    LElem theta = l_pgen(K, K->steps.size() - 1);
    LElem zprev = l_add(l_one(K), theta);
    if (!l_sub(l_pow(zprev, pk1), l_one(K)).looks_zero())
        throw ValidationError("base generator + 1 is not a p^{k-1}-th root of unity");
    KPoly f(static_cast<size_t>(p) + 1, l_zero(K));
    BigInt binom = 1;
    for (long long i = 1; i <= p; ++i) {
        binom = binom * (p - i + 1) / i;
        f[static_cast<size_t>(i)] = l_from_bigint(K, binom);
    }
    f[0] = l_neg(theta);
    Resolved R;
    R.f = f;
    QuotCtx ring(K, f);
    long long gena = 1 + pk1;
    long long aj = 1;
    for (long long j = 0; j < p; ++j) {
        QV onex = qv_gen(ring);
        onex[0] = l_add(onex[0], l_one(K));
        QV img = qv_pow(ring, onex, aj);
        img[0] = l_sub(img[0], l_one(K));
        KPoly g(img.begin(), img.end());
        R.polys.push_back(g);
        aj = (aj * gena) % pk;
    }
    R.gen_desc = "lambda = zeta_" + std::to_string(pk) + " - 1, sigma: 1+lambda -> (1+lambda)^" +
                 std::to_string(gena);
    return R;
}

} // namespace

GaloisExtension build_extension(const ExtensionSpec& spec) {
    Resolved R;
    long long expected_e = 0, expected_f = 0;
    if (std::holds_alternative<ActionKummer>(spec.action)) {
        R = resolve_kummer(spec, std::get<ActionKummer>(spec.action));
    } else if (std::holds_alternative<ActionArtinSchreier>(spec.action)) {
        R = resolve_artin_schreier(spec, std::get<ActionArtinSchreier>(spec.action));
        long long va = l_val(std::get<ActionArtinSchreier>(spec.action).rhs);
        if ((-va) % spec.base->p != 0) {
            expected_e = spec.base->p;
            expected_f = 1;
        } else {
            expected_e = 1;
            expected_f = spec.base->p;
        }
    } else if (std::holds_alternative<ActionCyclotomic>(spec.action)) {
        R = resolve_cyclotomic(spec, std::get<ActionCyclotomic>(spec.action));
        expected_e = spec.base->p;
        expected_f = 1;
    } else {
        const auto& ex = std::get<ActionExplicit>(spec.action);
        R.f = kp_trim(spec.minpoly);
        QuotCtx ring(spec.base, R.f);
        R.polys = enumerate_action_polys(ring, ex.gen_images, spec.group);
        R.gen_desc = "x as supplied";
    }
    GaloisExtension E = build_verified(spec.base, R.f, R.polys, spec.group, spec.name, R.gen_desc);
    if (expected_e && E.structure_ok && (E.e != expected_e || E.f_ins != expected_f))
        throw AssertionFailed("structure disagrees with the analytic invariants of the family");
    return E;
}

std::tuple<long long, long long, long long> ext_invariants(const GaloisExtension& E) {
    if (!E.structure_ok) throw NotMonogenic("invariants unavailable: " + E.structure_msg);
    return {E.e, E.f_sep, E.f_ins};
}

const char* case_label_str(CaseLabel c) {
    switch (c) {
    case CaseLabel::CaseI: return "I";
    case CaseLabel::CaseII: return "II";
    case CaseLabel::CaseIII: return "III";
    case CaseLabel::NotWellRamified: return "not-well-ramified";
    case CaseLabel::Undetermined: return "undetermined";
    }
    return "?";
}

CaseLabel classify_case(const GaloisExtension& E) {
    if (!E.structure_ok) return CaseLabel::NotWellRamified;
    if (E.f_ins == 1) return CaseLabel::CaseI;
    if (E.e == 1) return CaseLabel::CaseII;
    long long p = E.residue_char();
    if (E.e < p || E.f_ins < p) throw AssertionFailed("case III with e or f_ins below p");
    return CaseLabel::CaseIII;
}

// ---------------------------------------------------------------------------
// subgroups and fixed fields

bool is_subgroup(const GaloisExtension& E, const std::vector<size_t>& H) {
    if (std::find(H.begin(), H.end(), 0) == H.end()) return false;
    for (auto a : H)
        for (auto b : H)
            if (std::find(H.begin(), H.end(), E.table[a][b]) == H.end()) return false;
    return true;
}

std::vector<std::vector<size_t>> all_subgroups(const GaloisExtension& E) {
    size_t n = E.table.size();
    auto closure = [&](std::vector<size_t> gens) {
        std::vector<bool> in(n, false);
        in[0] = true;
        for (auto g : gens) in[g] = true;
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t a = 0; a < n; ++a) {
                if (!in[a]) continue;
                for (size_t b = 0; b < n; ++b) {
                    if (!in[b]) continue;
                    if (!in[E.table[a][b]]) {
                        in[E.table[a][b]] = true;
                        changed = true;
                    }
                }
            }
        }
        std::vector<size_t> h;
        for (size_t i = 0; i < n; ++i)
            if (in[i]) h.push_back(i);
        return h;
    };
    std::vector<std::vector<size_t>> seen;
    auto add = [&](std::vector<size_t> h) {
        std::sort(h.begin(), h.end());
        if (std::find(seen.begin(), seen.end(), h) == seen.end()) seen.push_back(h);
    };
    add(closure({}));
    for (size_t a = 1; a < n; ++a) {
        add(closure({a}));
        for (size_t b = a + 1; b < n; ++b) add(closure({a, b}));
    }
    std::sort(seen.begin(), seen.end(), [](const auto& x, const auto& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        return x < y;
    });
    return seen;
}

FixedField fixed_field(const GaloisExtension& E, const std::vector<size_t>& H_in) {
    std::vector<size_t> H = H_in;
    std::sort(H.begin(), H.end());
    if (!is_subgroup(E, H)) throw ValidationError("not a subgroup");
    FixedField out;
    out.H = H;
    size_t n = E.table.size();
    if (H.size() == n) {
        out.whole = true;
        return out;
    }
    if (H.size() == 1) {
        out.trivial_sub = true;
        out.T = E;
        out.beta = E.gen();
        out.to_quotient.resize(n);
        for (size_t i = 0; i < n; ++i) out.to_quotient[i] = i;
        return out;
    }
    long long d = static_cast<long long>(n / H.size());

    std::vector<std::vector<size_t>> cosets;
    std::vector<long long> coset_of(n, -1);
    for (size_t g = 0; g < n; ++g) {
        if (coset_of[g] >= 0) continue;
        std::vector<size_t> c;
        for (auto h : H) c.push_back(E.table[g][h]);
        std::sort(c.begin(), c.end());
        for (auto mem : c) coset_of[mem] = static_cast<long long>(cosets.size());
        cosets.push_back(c);
    }
    std::vector<std::vector<size_t>> qtable(cosets.size(), std::vector<size_t>(cosets.size()));
    for (size_t i = 0; i < cosets.size(); ++i)
        for (size_t j = 0; j < cosets.size(); ++j)
            qtable[i][j] = static_cast<size_t>(coset_of[E.table[cosets[i][0]][cosets[j][0]]]);
    std::vector<long long> qorders;
    for (size_t i = 0; i < cosets.size(); ++i) {
        long long o = 1;
        size_t cur = i;
        while (cur != 0) {
            cur = qtable[cur][i];
            ++o;
        }
        qorders.push_back(o);
    }
    GroupSpec qgroup = infer_group_from_orders(qorders, d, E.residue_char());

    auto try_candidate = [&](const QV& beta, const std::string& desc) -> bool {
        if (qv_looks_zero(beta)) return false;
        std::vector<QV> pows;
        KPoly g;
        try {
            pows = qv_powers(E.ring, beta, d);
            g = min_poly_from_powers(E.base, pows);
        } catch (const Error&) {
            return false;
        }
        if (kp_deg(g) != d) return false;
        std::vector<QV> cols(pows.begin(), pows.begin() + d);
        std::vector<KPoly> qpolys;
        for (auto& c : cosets) {
            QV img = E.apply(c[0], beta);
            for (size_t k = 1; k < c.size(); ++k)
                if (!qv_eq_at_prec(E.ring, img, E.apply(c[k], beta))) return false;
            try {
                auto coeffs = lin_solve(E.base, cols, img);
                coeffs.resize(static_cast<size_t>(d), l_zero(E.base));
                qpolys.push_back(coeffs);
            } catch (const Error&) {
                return false;
            }
        }
        GaloisExtension T;
        try {
            T = build_verified(E.base, g, qpolys, qgroup, E.name + "^H", desc);
        } catch (const Error&) {
            return false;
        }
        if (!T.structure_ok) return false;
        out.T = std::move(T);
        out.beta = beta;
        out.to_quotient.resize(n);
        for (size_t i = 0; i < n; ++i) out.to_quotient[i] = static_cast<size_t>(coset_of[i]);
        return true;
    };

    QV x = E.gen();
    for (long long j = 1; j < static_cast<long long>(n); ++j) {
        QV xj = qv_pow(E.ring, x, j);
        QV beta = qv_zero(E.ring);
        for (auto h : H) beta = qv_add(E.ring, beta, E.apply(h, xj));
        if (try_candidate(beta, "sum over H of x^" + std::to_string(j))) return out;
    }
    for (long long c = 0; c < 4; ++c) {
        QV xc = x;
        xc[0] = l_add(xc[0], l_from_int(E.base, c));
        QV beta = qv_one(E.ring);
        for (auto h : H) beta = qv_mul(E.ring, beta, E.apply(h, xc));
        if (try_candidate(beta, "product over H of (x + " + std::to_string(c) + ")")) return out;
    }
    throw GeneratorSearchFailed("no candidate generated the fixed field with a certified structure");
}

// ---------------------------------------------------------------------------
// Kummer compositum

Compositum kummer_compositum(const GaloisExtension& E, const LElem& alpha) {
    if (classify_case(E) != CaseLabel::CaseIII)
        throw NotCaseIII("compositum construction requires a case III extension");
    long long f = E.f_ins;
    const RPoly& m = E.residue_minpoly;
    for (int i = 1; i < rp_deg(m); ++i)
        if (!m[i].is_zero()) throw NotCaseIII("residue minimal polynomial is not a binomial");
    RElem a = r_neg(m[0]);
    if (!lf_equal(alpha.K, E.base)) throw FieldMismatch("lift from the wrong base field");
    if (l_val(alpha) != 0) throw ValidationError("the lift of the residue generator must be a unit");
    if (!(l_residue(alpha) == a)) throw ValidationError("alpha does not lift the residue p-generator");

    const LFPtr& K = E.base;
    KPoly g(static_cast<size_t>(f) + 1, l_zero(K));
    g[0] = l_neg(alpha);
    g[static_cast<size_t>(f)] = l_one(K);

    auto M = std::make_shared<LocalField>();
    M->kind = LFKind::Quot;
    M->prec = K->prec;
    M->p = K->p;
    M->eabs = K->eabs;
    M->base = K;
    M->q_minpoly = g;
    M->gen_name = "b";
    M->q_e = 1;
    M->q_kL = E.kL;
    M->q_resgen = E.resgen;
    M->q_pi.assign(static_cast<size_t>(f), l_zero(K));
    M->q_pi[0] = l_uniformizer(K);
    LFPtr Mc = M;

    KPoly fM;
    for (auto& c : E.ring.f) fM.push_back(l_embed_base(Mc, c));
    std::vector<KPoly> polysM;
    for (auto& gpoly : E.action) {
        KPoly gm;
        for (auto& c : gpoly) gm.push_back(l_embed_base(Mc, c));
        polysM.push_back(gm);
    }
    GaloisExtension LM =
        build_verified(Mc, fM, polysM, E.group, E.name + "*M", "x over M = K(alpha^{1/f})");
    if (!LM.structure_ok) throw IdentityViolation("compositum structure failed: " + LM.structure_msg);
    if (LM.f_ins != 1) throw IdentityViolation("compositum over M is not totally ramified");
    if (LM.e % E.e != 0) throw IdentityViolation("e(LM|M) is not a multiple of e(L|K)");
    Compositum out;
    out.M = Mc;
    out.LM = std::move(LM);
    out.e_LM_over_L = out.LM.e / E.e;
    return out;
}

} // namespace ramify
