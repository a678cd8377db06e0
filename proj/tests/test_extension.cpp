#include <doctest.h>

#include <set>

#include "ramify/catalog.hpp"
#include "ramify/extension.hpp"
#include "ramify/ramfilt.hpp"

using namespace ramify;

namespace {
GaloisExtension build(const std::string& name) { return build_extension(catalog_spec(name)); }
} // namespace

TEST_CASE("E1: Artin-Schreier break 2 over F_3((t))") {
    GaloisExtension E = build("e1_as_p3_n2");
    REQUIRE(E.structure_ok);
    auto [e, fs, fi] = ext_invariants(E);
    CHECK(e == 3);
    CHECK(fs == 1);
    CHECK(fi == 1);
    CHECK(classify_case(E) == CaseLabel::CaseI);
    // cleared model y = x t is Eisenstein: v(y) = 1
    CHECK(E.vL(E.gen()) == 1);
}

TEST_CASE("E1: break 4 needs the power-product generator") {
    GaloisExtension E = build("e1_as_p3_n4");
    REQUIRE(E.structure_ok);
    CHECK(E.e == 3);
    CHECK(E.f_ins == 1);
    CHECK(classify_case(E) == CaseLabel::CaseI);
    CHECK(E.vL(E.gen()) == 1);
}

TEST_CASE("E2: ferocious Artin-Schreier") {
    GaloisExtension E = build("e2_ferocious_p3");
    REQUIRE(E.structure_ok);
    auto [e, fs, fi] = ext_invariants(E);
    CHECK(e == 1);
    CHECK(fs == 1);
    CHECK(fi == 3);
    CHECK(classify_case(E) == CaseLabel::CaseII);
    CHECK(E.kL->kind == RFKind::SimpleExt);
    CHECK(E.kL->imperfection_degree() == 1);
}

TEST_CASE("E3: cyclotomic relative step") {
    GaloisExtension E = build("e3_cyclotomic_q3");
    REQUIRE(E.structure_ok);
    CHECK(E.e == 3);
    CHECK(E.f_ins == 1);
    CHECK(classify_case(E) == CaseLabel::CaseI);
}

TEST_CASE("E4: flagship quartic") {
    GaloisExtension E = build("e4_case3");
    REQUIRE(E.structure_ok);
    auto [e, fs, fi] = ext_invariants(E);
    CHECK(e == 2);
    CHECK(fs == 1);
    CHECK(fi == 2);
    CHECK(classify_case(E) == CaseLabel::CaseIII);
    CHECK(E.vL(E.gen()) == 0);
    QV pik = qv_zero(E.ring);
    pik[0] = l_uniformizer(E.base);
    CHECK(E.vL(pik) == 2);
}

TEST_CASE("E4 tower floors as standalone extensions") {
    GaloisExtension T = build("e4_tower_t");
    REQUIRE(T.structure_ok);
    CHECK(T.e == 2);
    CHECK(T.f_ins == 1);
    CHECK(classify_case(T) == CaseLabel::CaseI);

    GaloisExtension LT = build("e4_tower_lt");
    REQUIRE(LT.structure_ok);
    CHECK(LT.e == 1);
    CHECK(LT.f_ins == 2);
    CHECK(classify_case(LT) == CaseLabel::CaseII);
}

TEST_CASE("fixed fields of the flagship") {
    GaloisExtension E = build("e4_case3");
    auto subs = all_subgroups(E);
    REQUIRE(subs.size() == 3);
    FixedField whole = fixed_field(E, subs[2]);
    CHECK(whole.whole);
    FixedField triv = fixed_field(E, subs[0]);
    CHECK(triv.trivial_sub);
    FixedField mid = fixed_field(E, subs[1]);
    REQUIRE(!mid.whole);
    CHECK(mid.T.n == 2);
    CHECK(mid.T.e == 2);
    CHECK(mid.T.f_ins == 1);
    CHECK(classify_case(mid.T) == CaseLabel::CaseI);
}

TEST_CASE("fixed-field invariants multiply on every catalog entry") {
    for (auto& entry : catalog_list()) {
        GaloisExtension E = build(entry.name);
        REQUIRE(E.structure_ok);
        for (auto& H : all_subgroups(E)) {
            FixedField FF = fixed_field(E, H);
            if (FF.whole || FF.trivial_sub) continue;
            long long e_top = E.e / FF.T.e;
            long long f_top = E.f_ins / FF.T.f_ins;
            CHECK(E.e == FF.T.e * e_top);
            CHECK(E.f_ins == FF.T.f_ins * f_top);
            CHECK(static_cast<long long>(H.size()) == e_top * f_top);
        }
    }
}

TEST_CASE("kummer compositum of the flagship") {
    GaloisExtension E = build("e4_case3");
    LElem alpha = l_tvar(E.base);
    Compositum C = kummer_compositum(E, alpha);
    CHECK(C.LM.e == 4);
    CHECK(C.LM.f_ins == 1);
    CHECK(C.e_LM_over_L == 2);
    CHECK(classify_case(C.LM) == CaseLabel::CaseI);
    QV xL = E.gen();
    QV xM = C.LM.gen();
    for (size_t s = 1; s < E.table.size(); ++s) {
        long long iL = E.vL(qv_sub(E.ring, E.apply(s, xL), xL));
        long long iM = C.LM.vL(qv_sub(C.LM.ring, C.LM.apply(s, xM), xM));
        CHECK(iM == C.e_LM_over_L * iL);
    }
    GaloisExtension E1 = build("e1_as_p3_n2");
    CHECK_THROWS_AS(kummer_compositum(E1, l_one(E1.base)), NotCaseIII);
}

TEST_CASE("p-extension guard rejects tame inputs") {
    auto K = LocalField::equal_char(ResidueField::finite(3, 1), "t");
    ExtensionSpec spec;
    spec.base = K;
    spec.minpoly.assign(3, l_zero(K));
    spec.minpoly[0] = l_neg(l_uniformizer(K));
    spec.minpoly[2] = l_one(K);
    ActionExplicit a;
    KPoly img(2, l_zero(K));
    img[1] = l_neg(l_one(K));
    a.gen_images = {img};
    spec.action = a;
    spec.group = GroupSpec::parse("cyclic:2");
    spec.name = "tame";
    CHECK_THROWS_AS(build_extension(spec), ValidationError);
}

TEST_CASE("wrong action polynomial is rejected") {
    auto spec = catalog_spec("e4_case3");
    ActionExplicit a;
    KPoly img(2, l_zero(spec.base));
    img[0] = l_one(spec.base);
    img[1] = l_one(spec.base);
    a.gen_images = {img};
    spec.action = a;
    CHECK_THROWS_AS(build_extension(spec), NotARoot);
}

TEST_CASE("kummer validation") {
    auto spec = catalog_spec("e4_case3");
    auto k = std::get<ActionKummer>(spec.action);
    k.zeta = l_from_int(spec.base, -1);
    spec.action = k;
    CHECK_THROWS_AS(build_extension(spec), ValidationError);
}

TEST_CASE("artin-schreier rejects a p-th power obstruction") {
    auto K = LocalField::equal_char(ResidueField::ratfun(3, 1, {"u"}), "t");
    ExtensionSpec spec;
    spec.base = K;
    ActionArtinSchreier a;
    RElem u3 = r_pow(r_gen(K->ec_residue), 3);
    a.rhs = l_mul(l_ec_term(K, 0, u3), l_pow(l_uniformizer(K), -3));
    spec.action = a;
    spec.group = GroupSpec::parse("cyclic:3");
    spec.name = "bad";
    CHECK_THROWS_AS(build_extension(spec), ValidationError);
}

TEST_CASE("explicit action path reproduces the builtin model") {
    // same integral model as the break-2 family, action supplied explicitly
    auto spec = catalog_spec("e1_as_p3_n2");
    GaloisExtension viaAS = build_extension(spec);
    ExtensionSpec ex;
    ex.base = spec.base;
    ex.minpoly = viaAS.ring.f;
    ActionExplicit a;
    a.gen_images = {viaAS.action[1]};
    ex.action = a;
    ex.group = GroupSpec::parse("cyclic:3");
    ex.name = "explicit";
    GaloisExtension E = build_extension(ex);
    REQUIRE(E.structure_ok);
    CHECK(E.e == viaAS.e);
    CHECK(E.f_ins == viaAS.f_ins);
    RamificationData R1 = compute_iG(viaAS);
    RamificationData R2 = compute_iG(E);
    std::multiset<long long> s1(R1.iG.begin(), R1.iG.end()), s2(R2.iG.begin(), R2.iG.end());
    CHECK(s1 == s2);
}

TEST_CASE("product group plumbing") {
    GroupSpec g = GroupSpec::parse("product:2x2");
    CHECK(g.order() == 4);
    CHECK(g.order_multiset() == std::vector<long long>({1, 2, 2, 2}));
    GroupSpec c4 = GroupSpec::parse("cyclic:4");
    CHECK(c4.order_multiset() == std::vector<long long>({1, 2, 4, 4}));
    CHECK_THROWS_AS(GroupSpec::parse("dihedral:8"), ValidationError);
}
