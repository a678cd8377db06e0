#include "ramify/ramfilt.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace ramify {

// ---------------------------------------------------------------------------
// HerbrandFn

Rat HerbrandFn::eval(const Rat& u) const {
    Rat acc = 0;
    for (auto i : ivals) {
        if (is_inf(i)) acc += u;
        else acc += std::min(Rat(i), u);
    }
    return acc / e;
}

long long HerbrandFn::order_at(long long t) const {
    long long c = 0;
    for (auto i : ivals)
        if (i >= t) ++c;
    return c;
}

std::vector<long long> HerbrandFn::jumps() const {
    std::vector<long long> out;
    long long maxi = 0;
    for (auto i : ivals)
        if (!is_inf(i)) maxi = std::max(maxi, i);
    for (long long t = 1; t <= maxi; ++t)
        if (order_at(t) != order_at(t + 1)) out.push_back(t);
    return out;
}

Rat HerbrandFn::inverse(const Rat& v) const {
    if (v < 0) throw ValidationError("inverse of the Herbrand function below 0");
    long long maxi = 1;
    for (auto i : ivals)
        if (!is_inf(i)) maxi = std::max(maxi, i);
    for (long long m = 0; m <= maxi + 1; ++m) {
        Rat cur = eval(Rat(m));
        Rat next = eval(Rat(m + 1));
        if (v <= next || m == maxi + 1) {
            Rat slope = next - cur;
            if (slope == 0) throw Error("non-increasing Herbrand segment");
            return Rat(m) + (v - cur) / slope;
        }
    }
    throw Error("unreachable");
}

std::vector<std::pair<long long, Rat>> HerbrandFn::breakpoints(long long upto) const {
    std::vector<std::pair<long long, Rat>> out;
    for (long long m = 0; m <= upto; ++m) out.push_back({m, eval(Rat(m))});
    return out;
}

std::vector<Rat> HerbrandFn::slopes(long long upto) const {
    std::vector<Rat> out;
    for (long long m = 0; m < upto; ++m) out.push_back(make_rat(order_at(m + 1), e));
    return out;
}

// ---------------------------------------------------------------------------
// elementwise data

RamificationData compute_iG(const GaloisExtension& E) {
    if (!E.structure_ok) throw NotMonogenic("i_G needs a certified structure: " + E.structure_msg);
    RamificationData R;
    R.iG.assign(E.table.size(), VAL_INF);
    R.sG.assign(E.table.size(), VAL_INF);
    QV x = E.gen();
    for (size_t s = 1; s < E.table.size(); ++s) {
        QV d = qv_sub(E.ring, E.apply(s, x), x);
        R.iG[s] = E.vL(d);
        if (R.iG[s] < 1) throw AssertionFailed("i_G below 1 on the inertia group");
    }
    return R;
}

// O_K-basis of M^m: { x^r pi^s : r < f_ins, s in [m, m+e) }
static std::vector<QV> ideal_basis(const GaloisExtension& E, long long m) {
    std::vector<QV> basis;
    QV x = E.gen();
    std::vector<QV> xpow = qv_powers(E.ring, x, E.f_ins - 1);
    std::vector<QV> pipow{qv_one(E.ring)};
    for (long long s = 1; s < m + E.e; ++s) pipow.push_back(qv_mul(E.ring, pipow.back(), E.pi));
    for (long long r = 0; r < E.f_ins; ++r)
        for (long long s = m; s < m + E.e; ++s)
            basis.push_back(
                qv_mul(E.ring, xpow[static_cast<size_t>(r)], pipow[static_cast<size_t>(s)]));
    return basis;
}

long long displacement_depth(const GaloisExtension& E, size_t sigma, long long m) {
    long long best = VAL_INF;
    for (auto& b : ideal_basis(E, m)) {
        QV d = qv_sub(E.ring, E.apply(sigma, b), b);
        if (qv_looks_zero(d)) continue; // fixed basis element
        best = std::min(best, E.vL(d));
    }
    return best;
}

void compute_sG(const GaloisExtension& E, RamificationData& R) {
    for (size_t s = 1; s < E.table.size(); ++s) {
        long long best = VAL_INF;
        for (long long m = 0; m < E.e; ++m) {
            long long d = displacement_depth(E, s, m);
            if (!is_inf(d)) best = std::min(best, d - m);
        }
        R.sG[s] = best;
        if (best != R.iG[s] && best != R.iG[s] - 1)
            throw AssertionFailed("s_G outside {i_G - 1, i_G}");
        if (best < 1) throw AssertionFailed("s_G below 1 on the inertia group");
    }
}

HerbrandFn make_sfun(const GaloisExtension& E, const RamificationData& R) {
    HerbrandFn H;
    H.e = E.e;
    H.ivals = R.iG;
    return H;
}

// ---------------------------------------------------------------------------
// filtrations

FiltrationReport filtrations(const GaloisExtension& E, const RamificationData& R) {
    FiltrationReport F;
    F.R = R;
    F.sfun = make_sfun(E, R);
    long long maxi = 1;
    for (auto i : R.iG)
        if (!is_inf(i)) maxi = std::max(maxi, i);
    long long nmax = maxi + 2;

    std::map<long long, std::vector<long long>> dm;
    for (long long m = 0; m <= E.e; ++m) {
        std::vector<long long> col(E.table.size(), VAL_INF);
        for (size_t s = 1; s < E.table.size(); ++s) col[s] = displacement_depth(E, s, m);
        dm[m] = col;
    }
    for (long long n = 0; n <= nmax; ++n) {
        for (long long m = 0; m <= E.e; ++m) {
            std::vector<size_t> g;
            for (size_t s = 0; s < E.table.size(); ++s)
                if (s == 0 || dm[m][s] >= n + m) g.push_back(s);
            F.two_index[{n, m}] = g;
        }
    }
    for (long long i = 0; i <= nmax - 1; ++i) {
        F.lower.push_back(F.two_index[{i + 1, 0}]);
        F.shifted.push_back(F.two_index[{i, 1}]);
    }
    for (long long t = 1; t <= maxi + 1; ++t) {
        std::vector<size_t> g;
        for (size_t s = 0; s < E.table.size(); ++s)
            if (s == 0 || R.iG[s] >= t) g.push_back(s);
        F.modified.push_back(g);
    }
    F.modified_jumps = F.sfun.jumps();
    for (auto m : F.modified_jumps) F.upper_jumps.push_back(F.sfun.eval(Rat(m)));

    // G_i from the two-index definition must match the i_G description
    for (size_t i = 0; i < F.lower.size(); ++i) {
        std::vector<size_t> via_i;
        for (size_t s = 0; s < E.table.size(); ++s)
            if (s == 0 || R.iG[s] >= static_cast<long long>(i) + 1) via_i.push_back(s);
        if (via_i != F.lower[i])
            throw AssertionFailed("two-index G_{i+1,0} disagrees with the i_G description");
    }
    return F;
}

// ---------------------------------------------------------------------------
// different, Hilbert, Herbrand

DifferentReport different_and_hilbert(const GaloisExtension& E, const RamificationData& R) {
    DifferentReport D;
    KPoly fp = kp_derivative(E.ring.f);
    QV fpx = qv_eval_poly(E.ring, fp, E.gen());
    D.v_different = E.vL(fpx);
    D.sum_iG = 0;
    for (auto i : R.iG)
        if (!is_inf(i)) D.sum_iG += i;
    long long maxi = 0;
    for (auto i : R.iG)
        if (!is_inf(i)) maxi = std::max(maxi, i);
    D.sum_lower = 0;
    for (long long i = 0; i <= maxi + 1; ++i) {
        long long gi = 0;
        for (auto iv : R.iG)
            if (is_inf(iv) || iv >= i + 1) ++gi;
        D.sum_lower += gi - 1;
    }
    D.hilbert_holds = (D.v_different == D.sum_iG) && (D.sum_iG == D.sum_lower);
    return D;
}

HerbrandLedger herbrand_check(const GaloisExtension& E, const RamificationData& R) {
    HerbrandLedger L;
    L.ok = true;
    for (auto& H : all_subgroups(E)) {
        if (H.size() == 1 || H.size() == E.table.size()) continue;
        FixedField FF = fixed_field(E, H);
        RamificationData RT = compute_iG(FF.T);
        long long e_top = E.e / FF.T.e;
        for (size_t tau = 1; tau < FF.T.table.size(); ++tau) {
            long long lhs = RT.iG[tau];
            long long acc = 0;
            for (size_t s = 0; s < E.table.size(); ++s)
                if (FF.to_quotient[s] == tau) acc += R.iG[s];
            bool ok = (acc % e_top == 0) && (lhs == acc / e_top);
            std::ostringstream os;
            os << "H={";
            for (size_t i = 0; i < H.size(); ++i) os << (i ? "," : "") << "s" << H[i];
            os << "} tau=s" << tau << ": i_{G/H}=" << lhs << " vs (1/" << e_top << ")*" << acc;
            L.items.push_back({os.str(), ok, ""});
            L.ok = L.ok && ok;
        }
    }
    if (L.items.empty()) L.items.push_back({"no proper subgroups", true, ""});
    return L;
}

WellRamifiedVerdict well_ramified_verdict(const GaloisExtension& E, const RamificationData& R) {
    WellRamifiedVerdict V;
    DifferentReport D = different_and_hilbert(E, R);
    HerbrandLedger H = herbrand_check(E, R);
    V.hilbert = D.hilbert_holds;
    V.herbrand = H.ok;
    if (V.hilbert != V.herbrand)
        throw EquivalenceViolation("the Hilbert formula and the Herbrand property disagree");
    V.well_ramified = V.hilbert && V.herbrand && E.structure_ok;
    if (!E.structure_ok) V.note = E.structure_msg;
    return V;
}

TowerReport tower_decomposition(const GaloisExtension& E) {
    if (!E.structure_ok) throw NotMonogenic("tower decomposition needs a certified structure");
    for (auto& H : all_subgroups(E)) {
        FixedField FF = fixed_field(E, H);
        long long e_bot, f_bot;
        if (FF.whole) {
            e_bot = 1;
            f_bot = 1;
        } else {
            e_bot = FF.T.e;
            f_bot = FF.T.f_ins;
        }
        long long e_top = E.e / e_bot;
        long long f_top = E.f_ins / f_bot;
        bool bottom_ok = (f_bot == 1); // T/K in case I (or trivial)
        bool top_ok = (e_top == 1);    // L/T in case II (or trivial)
        if (bottom_ok && top_ok) {
            TowerReport T;
            T.H = H;
            T.T = std::move(FF);
            T.bottom = CaseLabel::CaseI;
            T.top = CaseLabel::CaseII;
            T.e_top = e_top;
            T.f_top = f_top;
            return T;
        }
    }
    throw NoDecomposition("no case I / case II tower found for a well ramified extension");
}

std::pair<std::vector<Rat>, bool> upper_jumps_modified(const GaloisExtension& E,
                                                       const RamificationData& R) {
    if (!E.is_abelian())
        throw NotAbelian("modified upper jumps are computed for abelian extensions");
    HerbrandFn s = make_sfun(E, R);
    std::vector<Rat> out;
    bool all_int = true;
    for (auto m : s.jumps()) {
        Rat v = s.eval(Rat(m));
        out.push_back(v);
        if (!rat_is_int(v)) all_int = false;
    }
    return {out, all_int};
}

HerbrandFn sub_sfun(const GaloisExtension& E, const RamificationData& R,
                    const std::vector<size_t>& H, long long e_top) {
    (void)E;
    HerbrandFn S;
    S.e = e_top;
    for (auto s : H) S.ivals.push_back(R.iG[s]);
    return S;
}

// ---------------------------------------------------------------------------
// theorem suites

std::vector<CheckItem> check_theorem1(const GaloisExtension& E, const RamificationData& R) {
    std::vector<CheckItem> out;
    DifferentReport D = different_and_hilbert(E, R);
    {
        std::ostringstream os;
        os << "v_L(different)=" << D.v_different << " sum i_G=" << D.sum_iG
           << " sum(|G_i|-1)=" << D.sum_lower;
        out.push_back({"hilbert formula", D.hilbert_holds, os.str()});
    }
    HerbrandLedger H = herbrand_check(E, R);
    for (auto& it : H.items) out.push_back({"herbrand: " + it.name, it.ok, it.detail});
    try {
        WellRamifiedVerdict V = well_ramified_verdict(E, R);
        out.push_back({"equivalence (ii)<->(iii)", true, ""});
        out.push_back({"well ramified verdict", V.well_ramified, V.note});
    } catch (const EquivalenceViolation& e) {
        out.push_back({"equivalence (ii)<->(iii)", false, e.what()});
    }
    return out;
}

namespace {

std::vector<Rat> sample_rationals(long long maxnum, size_t count, unsigned seed) {
    std::vector<Rat> out;
    unsigned long long state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    for (size_t i = 0; i < count; ++i) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        long long a =
            static_cast<long long>((state >> 33) % static_cast<unsigned long long>(4 * maxnum + 1));
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        long long b = 1 + static_cast<long long>((state >> 33) % 12);
        out.push_back(make_rat(a, b));
    }
    return out;
}

bool pl_equal(const std::function<Rat(const Rat&)>& f, const std::function<Rat(const Rat&)>& g,
              long long upto) {
    // grid finer than any breakpoint spacing, plus the far tail
    for (long long num = 0; num <= 24 * upto; ++num) {
        Rat u = make_rat(num, 24);
        if (f(u) != g(u)) return false;
    }
    for (long long t = upto + 1; t <= upto + 3; ++t)
        if (f(Rat(t)) != g(Rat(t))) return false;
    return true;
}

} // namespace

std::vector<CheckItem> check_lemmas234(const GaloisExtension& E, const RamificationData& R) {
    std::vector<CheckItem> out;
    HerbrandFn S = make_sfun(E, R);
    long long maxi = 1;
    for (auto i : R.iG)
        if (!is_inf(i)) maxi = std::max(maxi, i);

    {
        bool ok = true;
        for (auto& u : sample_rationals(maxi + 2, 200, 17)) {
            long long m = to_ll(rat_floor(u));
            Rat acc = 0;
            for (long long t = 1; t <= m; ++t) acc += Rat(S.order_at(t));
            acc += Rat(S.order_at(m + 1)) * (u - Rat(m));
            acc /= E.e;
            if (acc != S.eval(u)) ok = false;
        }
        out.push_back({"lemma 2: closed form = elementwise sum (200 samples)", ok, ""});
    }

    for (auto& H : all_subgroups(E)) {
        if (H.size() == 1 || H.size() == E.table.size()) continue;
        FixedField FF = fixed_field(E, H);
        RamificationData RT = compute_iG(FF.T);
        long long e_top = E.e / FF.T.e;
        HerbrandFn Stop = sub_sfun(E, R, H, e_top);
        {
            bool ok = true;
            for (size_t tau = 1; tau < FF.T.table.size(); ++tau) {
                long long j = 0;
                for (size_t s = 0; s < E.table.size(); ++s)
                    if (FF.to_quotient[s] == tau) j = std::max(j, R.iG[s]);
                if (Rat(RT.iG[tau]) != Stop.eval(Rat(j))) ok = false;
            }
            out.push_back({"lemma 3 on H of order " + std::to_string(H.size()), ok, ""});
        }
        {
            HerbrandFn Sbot = make_sfun(FF.T, RT);
            auto lhs = [&](const Rat& u) { return S.eval(u); };
            auto rhs = [&](const Rat& u) { return Sbot.eval(Stop.eval(u)); };
            bool ok = pl_equal(lhs, rhs, maxi + 2);
            out.push_back({"lemma 4 on H of order " + std::to_string(H.size()), ok, ""});
        }
        {
            bool ok = true;
            HerbrandFn Sbot = make_sfun(FF.T, RT);
            for (auto& v : sample_rationals(maxi + 2, 40, 23)) {
                Rat u = S.inverse(v);
                long long tu = std::max<long long>(1, to_ll(rat_ceil(u)));
                std::set<size_t> img;
                for (size_t s = 0; s < E.table.size(); ++s)
                    if (s == 0 || R.iG[s] >= tu) img.insert(FF.to_quotient[s]);
                Rat uq = Sbot.inverse(v);
                long long tq = std::max<long long>(1, to_ll(rat_ceil(uq)));
                std::set<size_t> quo;
                for (size_t tau = 0; tau < FF.T.table.size(); ++tau)
                    if (tau == 0 || RT.iG[tau] >= tq) quo.insert(tau);
                if (img != quo) ok = false;
            }
            out.push_back({"herbrand corollary on H of order " + std::to_string(H.size()), ok, ""});
        }
    }

    if (E.group.factors.size() == 1) {
        size_t rho = 0;
        for (size_t s = 0; s < E.order_of.size(); ++s)
            if (E.order_of[s] == E.n) rho = s;
        bool ok = rho != 0;
        long long p = E.residue_char();
        if (ok) {
            long long tdeg = 1;
            try {
                TowerReport TW = tower_decomposition(E);
                tdeg = TW.T.whole ? 1 : TW.T.T.n;
            } catch (const Error&) {
                tdeg = 1;
            }
            size_t cur = rho;
            long long pm = 1;
            long long prev_i = R.iG[rho];
            while (pm * p <= E.n) {
                size_t nxt = cur;
                for (long long k = 1; k < p; ++k) nxt = E.table[nxt][cur];
                pm *= p;
                long long cur_i = R.iG[nxt];
                if (pm >= tdeg && !(cur_i > prev_i)) ok = false;
                cur = nxt;
                prev_i = cur_i;
            }
        }
        out.push_back({"i_G monotonicity along rho^(p^m)", ok, ""});
    }

    {
        FiltrationReport F = filtrations(E, R);
        CaseLabel c = classify_case(E);
        bool ok = true;
        for (size_t i = 0; i < F.lower.size(); ++i) {
            const auto& Gi = F.lower[i];
            if (c == CaseLabel::CaseI) {
                if (Gi != F.shifted[i]) ok = false;
            } else {
                const auto& Hi1 = F.two_index.at({static_cast<long long>(i) + 1, 1});
                if (Gi != Hi1) ok = false;
            }
        }
        std::string name = std::string("case ") + case_label_str(c) +
                           (c == CaseLabel::CaseI ? ": G_i = H_i" : ": G_i = H_{i+1}");
        out.push_back({name, ok, ""});
    }
    return out;
}

std::vector<CheckItem> check_borger(const GaloisExtension& E, const RamificationData& R) {
    std::vector<CheckItem> out;
    auto [ups, ok] = upper_jumps_modified(E, R);
    std::ostringstream os;
    for (size_t i = 0; i < ups.size(); ++i) os << (i ? "," : "") << rat_str(ups[i]);
    out.push_back({"modified upper jumps are integers", ok, os.str()});
    return out;
}

} // namespace ramify
