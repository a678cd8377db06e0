#include "ramify/report.hpp"

#include <limits>
#include <sstream>

namespace ramify {

Json rat_json(const Rat& r) {
    Json j;
    j["num"] = to_ll(rat_num(r));
    j["den"] = to_ll(rat_den(r));
    return j;
}

// ---------------------------------------------------------------------------
// residue fields and elements

Json rf_to_json(const RFPtr& F) {
    Json j;
    switch (F->kind) {
    case RFKind::Finite:
        j["kind"] = "finite";
        j["p"] = F->p;
        j["r"] = F->fq.r;
        if (F->fq.r > 1) j["minpoly"] = F->fq.minpoly;
        break;
    case RFKind::RatFun:
        j["kind"] = "ratfun";
        j["p"] = F->p;
        j["r"] = F->fq.r;
        j["vars"] = F->vars;
        if (F->completion) j["completion"] = true;
        break;
    case RFKind::SimpleExt: {
        j["kind"] = "ext";
        j["base"] = rf_to_json(F->base);
        Json mp = Json::array();
        for (auto& c : F->ext_minpoly) mp.push_back(relem_to_json(c));
        j["minpoly"] = mp;
        j["gen"] = F->gen_name;
        break;
    }
    }
    return j;
}

RFPtr rf_from_json(const Json& j) {
    std::string kind = j.at("kind");
    if (kind == "finite") {
        long long p = j.at("p");
        int r = j.value("r", 1);
        if (j.contains("minpoly"))
            return ResidueField::finite_with_minpoly(p, j.at("minpoly").get<std::vector<long long>>());
        return ResidueField::finite(p, r);
    }
    if (kind == "ratfun") {
        long long p = j.at("p");
        int r = j.value("r", 1);
        auto vars = j.at("vars").get<std::vector<std::string>>();
        return ResidueField::ratfun(p, r, vars, j.value("completion", false));
    }
    if (kind == "ext") {
        RFPtr base = rf_from_json(j.at("base"));
        std::vector<RElem> mp;
        for (auto& c : j.at("minpoly")) mp.push_back(relem_from_json(c, base));
        return ResidueField::simple_ext(base, mp, j.value("gen", "a"));
    }
    throw ValidationError("unknown residue field kind: " + kind);
}

static Json mpoly_to_json(const MPoly& m) {
    Json arr = Json::array();
    for (auto& [mono, c] : m.t) {
        Json t;
        t["e"] = std::vector<int>{mono.e[0], mono.e[1]};
        t["c"] = c;
        arr.push_back(t);
    }
    return arr;
}

static MPoly mpoly_from_json(const Json& j, const FqCtx& F) {
    MPoly m;
    for (auto& t : j) {
        Mono mono;
        auto e = t.at("e").get<std::vector<int>>();
        for (size_t i = 0; i < e.size() && i < 2; ++i) mono.e[i] = e[i];
        FqElem c = t.at("c").get<std::vector<long long>>();
        for (auto& x : c) x = ((x % F.p) + F.p) % F.p;
        while (!c.empty() && c.back() == 0) c.pop_back();
        if (!c.empty()) m.t[mono] = c;
    }
    return m;
}

Json relem_to_json(const RElem& x) {
    switch (x.F->kind) {
    case RFKind::Finite: return Json(x.ff);
    case RFKind::RatFun: {
        Json j;
        j["num"] = mpoly_to_json(x.num);
        j["den"] = mpoly_to_json(x.den);
        return j;
    }
    case RFKind::SimpleExt: {
        Json j;
        Json coords = Json::array();
        for (auto& c : x.ext) coords.push_back(relem_to_json(c));
        j["coords"] = coords;
        return j;
    }
    }
    throw Error("unreachable");
}

RElem relem_from_json(const Json& j, const RFPtr& F) {
    RElem x = r_zero(F);
    switch (F->kind) {
    case RFKind::Finite: {
        // accept an int or a coefficient list
        if (j.is_number_integer()) return r_from_int(F, j.get<long long>());
        FqElem c = j.get<std::vector<long long>>();
        for (auto& v : c) v = ((v % F->p) + F->p) % F->p;
        while (!c.empty() && c.back() == 0) c.pop_back();
        x.ff = c;
        return x;
    }
    case RFKind::RatFun: {
        if (j.is_number_integer()) return r_from_int(F, j.get<long long>());
        MPoly num = mpoly_from_json(j.at("num"), F->fq);
        MPoly den;
        if (j.contains("den")) den = mpoly_from_json(j.at("den"), F->fq);
        else den.t[Mono{}] = FqElem{1};
        if (den.is_zero()) throw ValidationError("zero denominator in a rational function");
        RElem n = r_zero(F), d = r_zero(F);
        n.num = num;
        d.num = den;
        return r_div(n, d);
    }
    case RFKind::SimpleExt: {
        if (j.is_number_integer()) return r_from_int(F, j.get<long long>());
        RPoly coords;
        for (auto& c : j.at("coords")) coords.push_back(relem_from_json(c, F->base));
        RElem acc = r_zero(F);
        RElem g = r_gen(F), gp = r_one(F);
        for (auto& c : coords) {
            acc = r_add(acc, r_mul(r_embed(F, c), gp));
            gp = r_mul(gp, g);
        }
        return acc;
    }
    }
    throw Error("unreachable");
}

// ---------------------------------------------------------------------------
// local fields and elements

static Json pade_to_json(const LFPtr& K, const PadE& e, int depth) {
    if (depth == 0) {
        // balanced representative mod p^Np keeps emitted files readable
        BigInt m = bip(K->p, K->prec.Np);
        BigInt c = e.c % m;
        if (c < 0) c += m;
        if (c > m / 2) c -= m;
        if (c > std::numeric_limits<long long>::max() || c < std::numeric_limits<long long>::min())
            return Json(c.str());
        return Json(to_ll(c));
    }
    Json arr = Json::array();
    for (auto& s : e.sub) arr.push_back(pade_to_json(K, s, depth - 1));
    return arr;
}

static PadE pade_from_json(const Json& j, int depth) {
    PadE e;
    if (depth == 0) {
        if (j.is_string()) e.c = BigInt(j.get<std::string>());
        else e.c = j.get<long long>();
        return e;
    }
    if (j.is_number_integer() || j.is_string()) {
        // scalar shorthand at any depth
        PadE inner = pade_from_json(j, depth - 1);
        e.sub = {inner};
        return e;
    }
    for (auto& s : j) e.sub.push_back(pade_from_json(s, depth - 1));
    return e;
}

Json lf_to_json(const LFPtr& K) {
    Json j;
    switch (K->kind) {
    case LFKind::EqualChar:
        j["kind"] = "laurent";
        j["residue"] = rf_to_json(K->ec_residue);
        j["var"] = K->var;
        break;
    case LFKind::PAdic: {
        j["kind"] = "padic";
        j["p"] = K->p;
        Json tower = Json::array();
        for (size_t i = 0; i < K->steps.size(); ++i) {
            Json st;
            st["type"] = K->steps[i].eisenstein ? "eisenstein" : "unramified";
            Json poly = Json::array();
            for (auto& c : K->steps[i].minpoly) poly.push_back(pade_to_json(K, c, static_cast<int>(i)));
            st["poly"] = poly;
            tower.push_back(st);
        }
        j["tower"] = tower;
        break;
    }
    case LFKind::Mixed:
        j["kind"] = "mixed_tseries";
        j["coeff"] = lf_to_json(K->coeff);
        j["var"] = K->var;
        break;
    case LFKind::Quot:
        throw ValidationError("extension-generated fields have no file form");
    }
    return j;
}

LFPtr lf_from_json(const Json& j, Precision prec) {
    std::string kind = j.at("kind");
    if (kind == "laurent") {
        return LocalField::equal_char(rf_from_json(j.at("residue")), j.value("var", "t"), prec);
    }
    if (kind == "padic") {
        long long p = j.at("p");
        std::vector<PadStep> steps;
        if (j.contains("tower")) {
            int depth = 0;
            for (auto& st : j.at("tower")) {
                PadStep step;
                step.eisenstein = st.value("type", "eisenstein") == std::string("eisenstein");
                for (auto& c : st.at("poly")) step.minpoly.push_back(pade_from_json(c, depth));
                steps.push_back(std::move(step));
                ++depth;
            }
        }
        return LocalField::padic(p, std::move(steps), prec);
    }
    if (kind == "mixed_tseries") {
        return LocalField::mixed(lf_from_json(j.at("coeff"), prec), j.value("var", "T"), prec);
    }
    throw ValidationError("unknown local field kind: " + kind);
}

Json lelem_to_json(const LElem& x) {
    switch (x.K->kind) {
    case LFKind::EqualChar: {
        Json j = Json::object();
        for (auto& [e, c] : x.ec) j[std::to_string(e)] = relem_to_json(c);
        return j;
    }
    case LFKind::PAdic: {
        Json j;
        j["body"] = pade_to_json(x.K, x.pad, static_cast<int>(x.K->steps.size()));
        j["shift"] = x.pshift;
        return j;
    }
    case LFKind::Mixed: {
        Json j = Json::object();
        for (size_t i = 0; i < x.mix_e.size(); ++i)
            j[std::to_string(x.mix_e[i])] = lelem_to_json(x.mix_c[i]);
        return j;
    }
    case LFKind::Quot:
        throw ValidationError("extension-field elements have no file form");
    }
    throw Error("unreachable");
}

LElem lelem_from_json(const Json& j, const LFPtr& K) {
    switch (K->kind) {
    case LFKind::EqualChar: {
        if (j.is_number_integer()) return l_from_int(K, j.get<long long>());
        LElem acc = l_zero(K);
        for (auto it = j.begin(); it != j.end(); ++it) {
            long long e = std::stoll(it.key());
            RElem c = relem_from_json(it.value(), K->ec_residue);
            acc = l_add(acc, l_ec_term(K, e, c));
        }
        return acc;
    }
    case LFKind::PAdic: {
        if (j.is_number_integer()) return l_from_int(K, j.get<long long>());
        LElem x = l_zero(K);
        if (j.is_array() || j.is_string()) {
            x.pad = pade_from_json(j, static_cast<int>(K->steps.size()));
            return x;
        }
        x.pad = pade_from_json(j.at("body"), static_cast<int>(K->steps.size()));
        x.pshift = j.value("shift", 0LL);
        x.cap = K->fresh_cap() + x.pshift;
        return x;
    }
    case LFKind::Mixed: {
        if (j.is_number_integer()) return l_from_int(K, j.get<long long>());
        LElem acc = l_zero(K);
        for (auto it = j.begin(); it != j.end(); ++it) {
            long long e = std::stoll(it.key());
            LElem c = lelem_from_json(it.value(), K->coeff);
            acc = l_add(acc, l_mixed_term(K, e, c));
        }
        return acc;
    }
    case LFKind::Quot:
        throw ValidationError("extension-field elements have no file form");
    }
    throw Error("unreachable");
}

// ---------------------------------------------------------------------------
// extension specifications

static Json kpoly_to_json(const KPoly& f) {
    Json j = Json::object();
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i].looks_zero() && is_inf(f[i].cap)) continue;
        j[std::to_string(i)] = lelem_to_json(f[i]);
    }
    return j;
}

static KPoly kpoly_from_json(const Json& j, const LFPtr& K) {
    long long maxdeg = 0;
    for (auto it = j.begin(); it != j.end(); ++it) maxdeg = std::max(maxdeg, std::stoll(it.key()));
    KPoly f(static_cast<size_t>(maxdeg) + 1, l_zero(K));
    for (auto it = j.begin(); it != j.end(); ++it)
        f[static_cast<size_t>(std::stoll(it.key()))] = lelem_from_json(it.value(), K);
    return f;
}

Json spec_to_json(const ExtensionSpec& spec) {
    Json j;
    j["schema"] = "ramify/1";
    j["name"] = spec.name;
    j["base"] = lf_to_json(spec.base);
    j["group"] = spec.group.str();
    if (!spec.minpoly.empty()) j["minpoly"] = kpoly_to_json(spec.minpoly);
    Json a;
    if (std::holds_alternative<ActionKummer>(spec.action)) {
        const auto& k = std::get<ActionKummer>(spec.action);
        a["builtin"] = "kummer";
        a["exponent"] = k.exponent;
        a["zeta"] = lelem_to_json(k.zeta);
    } else if (std::holds_alternative<ActionArtinSchreier>(spec.action)) {
        const auto& k = std::get<ActionArtinSchreier>(spec.action);
        a["builtin"] = "artin_schreier";
        a["rhs"] = lelem_to_json(k.rhs);
    } else if (std::holds_alternative<ActionCyclotomic>(spec.action)) {
        a["builtin"] = "cyclotomic";
        a["pk"] = std::get<ActionCyclotomic>(spec.action).pk;
    } else {
        const auto& k = std::get<ActionExplicit>(spec.action);
        Json imgs = Json::array();
        for (auto& g : k.gen_images) imgs.push_back(kpoly_to_json(g));
        a["explicit"] = Json{{"gen_images", imgs}};
    }
    j["action"] = a;
    return j;
}

ExtensionSpec spec_from_json(const Json& j, Precision prec) {
    if (j.value("schema", "") != std::string("ramify/1"))
        throw ValidationError("input schema must be \"ramify/1\"");
    ExtensionSpec spec;
    spec.name = j.value("name", "input");
    spec.base = lf_from_json(j.at("base"), prec);
    spec.group = GroupSpec::parse(j.at("group"));
    if (j.contains("minpoly")) spec.minpoly = kpoly_from_json(j.at("minpoly"), spec.base);
    const Json& a = j.at("action");
    if (a.contains("builtin")) {
        std::string b = a.at("builtin");
        if (b == "kummer") {
            ActionKummer k;
            k.exponent = a.at("exponent");
            k.zeta = lelem_from_json(a.at("zeta"), spec.base);
            spec.action = k;
        } else if (b == "artin_schreier") {
            ActionArtinSchreier k;
            k.rhs = lelem_from_json(a.at("rhs"), spec.base);
            spec.action = k;
        } else if (b == "cyclotomic") {
            ActionCyclotomic k;
            k.pk = a.at("pk");
            spec.action = k;
        } else {
            throw ValidationError("unknown builtin action: " + b);
        }
    } else if (a.contains("explicit")) {
        ActionExplicit k;
        for (auto& g : a.at("explicit").at("gen_images"))
            k.gen_images.push_back(kpoly_from_json(g, spec.base));
        spec.action = k;
    } else {
        throw ValidationError("action must be a builtin or an explicit image list");
    }
    return spec;
}

// ---------------------------------------------------------------------------
// the full report

namespace {

Json group_sets_json(const std::vector<std::vector<size_t>>& sets) {
    Json arr = Json::array();
    for (auto& s : sets) {
        Json e = Json::array();
        for (auto i : s) e.push_back(i);
        arr.push_back(e);
    }
    return arr;
}

Json ram_table_json(const std::vector<long long>& t) {
    Json j = Json::object();
    for (size_t i = 0; i < t.size(); ++i) {
        std::string key = "s" + std::to_string(i);
        if (is_inf(t[i])) j[key] = "inf";
        else j[key] = t[i];
    }
    return j;
}

} // namespace

Json full_report(const ExtensionSpec& spec, const std::string& digest) {
    Json j;
    j["schema"] = "ramify/1";
    j["tool_version"] = "0.1.0";
    j["input_digest"] = digest;
    j["name"] = spec.name;
    j["precision"] = {{"Nt", spec.base->prec.Nt},
                      {"Np", spec.base->prec.Np},
                      {"guard", spec.base->prec.guard}};
    j["timing_ms"] = nullptr; // suppressed: reports must be byte-identical

    GaloisExtension E = build_extension(spec);
    Json je;
    je["degree"] = E.n;
    je["group"] = E.group.str();
    je["base_field"] = E.base->describe();
    je["generator"] = E.gen_desc;
    if (!E.structure_ok) {
        je["structure_error"] = E.structure_msg;
        j["extension"] = je;
        j["case"] = case_label_str(CaseLabel::NotWellRamified);
        return j;
    }
    je["e"] = E.e;
    je["f_sep"] = E.f_sep;
    je["f_ins"] = E.f_ins;
    je["residue_field"] = E.kL->describe();
    j["extension"] = je;
    j["case"] = case_label_str(classify_case(E));

    RamificationData R = compute_iG(E);
    compute_sG(E, R);
    FiltrationReport F = filtrations(E, R);
    {
        Json jr;
        jr["iG"] = ram_table_json(R.iG);
        jr["sG"] = ram_table_json(R.sG);
        jr["lower"] = group_sets_json(F.lower);
        jr["shifted"] = group_sets_json(F.shifted);
        jr["modified"] = group_sets_json(F.modified);
        jr["jumps"] = F.modified_jumps;
        Json ups = Json::array();
        for (auto& u : F.upper_jumps) ups.push_back(rat_json(u));
        jr["upper_jumps"] = ups;
        long long upto = F.modified_jumps.empty() ? 1 : F.modified_jumps.back() + 1;
        Json breaks = Json::array(), slopes = Json::array();
        for (auto& [m, v] : F.sfun.breakpoints(upto)) {
            Json b;
            b["u"] = m;
            b["s"] = rat_json(v);
            breaks.push_back(b);
        }
        for (auto& s : F.sfun.slopes(upto)) slopes.push_back(rat_json(s));
        jr["sfun"] = {{"breaks", breaks}, {"slopes", slopes}};
        j["ramification"] = jr;
    }

    DifferentReport D = different_and_hilbert(E, R);
    j["different"] = {{"v_L", D.v_different},
                      {"sum_iG", D.sum_iG},
                      {"sum_lower", D.sum_lower},
                      {"hilbert", D.hilbert_holds}};

    WellRamifiedVerdict V = well_ramified_verdict(E, R);
    auto [ups, borger_ok] = upper_jumps_modified(E, R);
    (void)ups;
    Json checks = Json::object();
    checks["hilbert"] = V.hilbert;
    checks["herbrand"] = V.herbrand;
    checks["well_ramified"] = V.well_ramified;
    checks["borger_integral"] = borger_ok;

    if (E.group.factors.size() == 1) {
        Character chi = faithful_character(E);
        ConductorReport C = conductor_report(E, R, chi);
        j["conductors"] = {{"sw", rat_json(C.sw)},           {"artin", rat_json(C.artin)},
                           {"ksw", C.ksw},                   {"t", C.t},
                           {"s_at_t", rat_json(C.s_at_t)},   {"case", case_label_str(C.label)}};
        DepthReport dep = depth(E, R);
        HyodoReport H = hyodo_bounds(E, R);
        Json jj = Json::array();
        for (auto& v : H.jumping) jj.push_back(rat_json(v));
        j["depth"] = {{"d_K", rat_json(dep.d_K)},
                      {"d_L", rat_json(dep.d_L)},
                      {"sum_sG", dep.sum_sG},
                      {"M", rat_json(dep.M_LK)},
                      {"jumping", jj},
                      {"jumping_derived", H.derived},
                      {"hyodo_lhs", rat_json(H.lhs)},
                      {"hyodo_rhs", rat_json(H.rhs)},
                      {"hyodo_lower_ok", H.lower_ok},
                      {"hyodo_upper_ok", H.upper_ok},
                      {"hyodo_first_equality", H.first_equality}};
        ConductorBoundReport S = conductor_depth_bound(E, R, chi);
        j["bounds"] = {{"theorem6_rhs", rat_json(S.thm6_rhs)},
                       {"theorem6_ok", S.thm6_ok},
                       {"theorem6_slack", rat_json(S.thm6_slack)},
                       {"star_bound", rat_json(S.star_bound)},
                       {"star_ok", S.star_ok},
                       {"star_slack", rat_json(S.star_slack)}};
        checks["depth_cross_check"] = dep.closed_form_ok;
        checks["ksw_depth_relation"] = dep.ksw_relation_ok;
        checks["conductor_routes_agree"] = true; // enforced inside kato_conductor
    }

    TowerReport TW = tower_decomposition(E);
    Json jt;
    jt["bottom_case"] = case_label_str(TW.bottom);
    jt["top_case"] = case_label_str(TW.top);
    jt["t_degree"] = TW.T.whole ? 1 : (TW.T.trivial_sub ? E.n : TW.T.T.n);
    jt["t_generator"] = TW.T.whole ? "base field" : (TW.T.trivial_sub ? E.gen_desc : TW.T.T.gen_desc);
    j["tower"] = jt;
    j["checks"] = checks;
    return j;
}

std::string fnv1a_hex(const std::string& data) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return "fnv1a:" + os.str();
}

} // namespace ramify
