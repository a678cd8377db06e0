#include "ramify/catalog.hpp"

namespace ramify {

namespace {

PadE pe(long long c) {
    PadE e;
    e.c = c;
    return e;
}

PadE pe2(long long c0, long long c1) {
    PadE e;
    e.sub = {pe(c0), pe(c1)};
    return e;
}

LFPtr base_f_p_t(long long p, Precision prec) {
    return LocalField::equal_char(ResidueField::finite(p, 1), "t", prec);
}

LFPtr base_f_p_u_t(long long p, Precision prec) {
    return LocalField::equal_char(ResidueField::ratfun(p, 1, {"u"}), "t", prec);
}

// Q_2(i), generator g = i - 1 Eisenstein for X^2 + 2X + 2
LFPtr base_q2i(Precision prec) {
    PadStep st;
    st.eisenstein = true;
    st.minpoly = {pe(2), pe(2), pe(1)};
    return LocalField::padic(2, {st}, prec);
}

LFPtr base_q2i_T(Precision prec) { return LocalField::mixed(base_q2i(prec), "T", prec); }

// Q_2(i, sqrt(2+i)): second Eisenstein step X^2 + 2X - (1+i), theta = sqrt(2+i) - 1
LFPtr base_q2i_sqrt_T(Precision prec) {
    PadStep st1;
    st1.eisenstein = true;
    st1.minpoly = {pe(2), pe(2), pe(1)};
    PadStep st2;
    st2.eisenstein = true;
    st2.minpoly = {pe2(-2, -1), pe2(2, 0), pe2(1, 0)};
    auto coeff = LocalField::padic(2, {st1, st2}, prec);
    return LocalField::mixed(coeff, "T", prec);
}

ExtensionSpec as_spec(LFPtr K, long long p, long long nb, const RElem& obstruction,
                      const std::string& name) {
    // x^p - x = obstruction * t^{-nb}
    ExtensionSpec spec;
    spec.base = K;
    ActionArtinSchreier a;
    a.rhs = l_mul(l_ec_term(K, 0, obstruction), l_pow(l_uniformizer(K), -nb));
    spec.action = a;
    spec.group = GroupSpec::parse("cyclic:" + std::to_string(p));
    spec.name = name;
    return spec;
}

} // namespace

std::vector<CatalogEntry> catalog_list() {
    return {
        {"e1_as_p2_n1", "Artin-Schreier over F_2((t)), break 1: case I"},
        {"e1_as_p3_n1", "Artin-Schreier over F_3((t)), break 1: case I"},
        {"e1_as_p3_n2", "Artin-Schreier over F_3((t)), break 2: case I"},
        {"e1_as_p3_n4", "Artin-Schreier over F_3((t)), break 4: case I"},
        {"e2_ferocious_p2", "x^2 - x = u t^{-2} over F_2(u)((t)): case II"},
        {"e2_ferocious_p3", "x^3 - x = u t^{-3} over F_3(u)((t)): case II"},
        {"e3_cyclotomic_q3", "Q_3(zeta_9) over Q_3(zeta_3): case I, cyclotomic"},
        {"e4_case3", "X^4 - (2+i)T^2 over Q_2(i){{T}}: flagship case III"},
        {"e4_tower_t", "Y^2 - (2+i)T^2 over Q_2(i){{T}}: the case I floor of e4"},
        {"e4_tower_lt", "X^2 - sqrt(2+i) T over Q_2(i, sqrt(2+i)){{T}}: the case II top of e4"},
    };
}

ExtensionSpec catalog_spec(const std::string& name, Precision prec) {
    if (name == "e1_as_p2_n1") {
        auto K = base_f_p_t(2, prec);
        return as_spec(K, 2, 1, r_one(K->ec_residue), name);
    }
    if (name == "e1_as_p3_n1") {
        auto K = base_f_p_t(3, prec);
        return as_spec(K, 3, 1, r_one(K->ec_residue), name);
    }
    if (name == "e1_as_p3_n2") {
        auto K = base_f_p_t(3, prec);
        return as_spec(K, 3, 2, r_one(K->ec_residue), name);
    }
    if (name == "e1_as_p3_n4") {
        auto K = base_f_p_t(3, prec);
        return as_spec(K, 3, 4, r_one(K->ec_residue), name);
    }
    if (name == "e2_ferocious_p2") {
        auto K = base_f_p_u_t(2, prec);
        return as_spec(K, 2, 2, r_gen(K->ec_residue), name);
    }
    if (name == "e2_ferocious_p3") {
        auto K = base_f_p_u_t(3, prec);
        return as_spec(K, 3, 3, r_gen(K->ec_residue), name);
    }
    if (name == "e3_cyclotomic_q3") {
        PadStep st;
        st.eisenstein = true;
        st.minpoly = {pe(3), pe(3), pe(1)}; // zeta_3 - 1
        auto K = LocalField::padic(3, {st}, prec);
        ExtensionSpec spec;
        spec.base = K;
        ActionCyclotomic a;
        a.pk = 9;
        spec.action = a;
        spec.group = GroupSpec::parse("cyclic:3");
        spec.name = name;
        return spec;
    }
    if (name == "e4_case3") {
        auto K = base_q2i_T(prec);
        ExtensionSpec spec;
        spec.base = K;
        LElem i = l_add(l_one(K), l_pgen(K, 0));
        LElem b = l_mul(l_add(l_from_int(K, 2), i), l_mul(l_tvar(K), l_tvar(K)));
        spec.minpoly.assign(5, l_zero(K));
        spec.minpoly[0] = l_neg(b);
        spec.minpoly[4] = l_one(K);
        ActionKummer a;
        a.exponent = 4;
        a.zeta = i;
        spec.action = a;
        spec.group = GroupSpec::parse("cyclic:4");
        spec.name = name;
        return spec;
    }
    if (name == "e4_tower_t") {
        auto K = base_q2i_T(prec);
        ExtensionSpec spec;
        spec.base = K;
        LElem i = l_add(l_one(K), l_pgen(K, 0));
        LElem b = l_mul(l_add(l_from_int(K, 2), i), l_mul(l_tvar(K), l_tvar(K)));
        spec.minpoly.assign(3, l_zero(K));
        spec.minpoly[0] = l_neg(b);
        spec.minpoly[2] = l_one(K);
        ActionKummer a;
        a.exponent = 2;
        a.zeta = l_from_int(K, -1);
        spec.action = a;
        spec.group = GroupSpec::parse("cyclic:2");
        spec.name = name;
        return spec;
    }
    if (name == "e4_tower_lt") {
        auto K = base_q2i_sqrt_T(prec);
        ExtensionSpec spec;
        spec.base = K;
        LElem sq = l_add(l_one(K), l_pgen(K, 1)); // sqrt(2+i) = 1 + theta
        LElem b = l_mul(sq, l_tvar(K));           // x^2 = sqrt(2+i) T
        spec.minpoly.assign(3, l_zero(K));
        spec.minpoly[0] = l_neg(b);
        spec.minpoly[2] = l_one(K);
        ActionKummer a;
        a.exponent = 2;
        a.zeta = l_from_int(K, -1);
        spec.action = a;
        spec.group = GroupSpec::parse("cyclic:2");
        spec.name = name;
        return spec;
    }
    throw UnknownName("unknown catalog entry: " + name);
}


} // namespace ramify
