#include <doctest.h>

#include "ramify/catalog.hpp"
#include "ramify/conductor.hpp"

using namespace ramify;

namespace {

GaloisExtension build(const std::string& name) { return build_extension(catalog_spec(name)); }

RamificationData full_R(const GaloisExtension& E) {
    RamificationData R = compute_iG(E);
    compute_sG(E, R);
    return R;
}

// ---------------------------------------------------------------------------
// test-only oracle: exact arithmetic in Q(zeta_{p^k}) as Q[X]/Phi_{p^k}

struct Cyclo {
    long long d;          // p^k
    std::vector<Rat> phi; // cyclotomic polynomial, dense
    Cyclo(long long p, long long pk) : d(pk) {
        long long prev = pk / p;
        phi.assign(static_cast<size_t>(prev * (p - 1)) + 1, Rat(0));
        for (long long j = 0; j < p; ++j) phi[static_cast<size_t>(j * prev)] = Rat(1);
    }
    std::vector<Rat> zeta_pow(long long k) const {
        k = ((k % d) + d) % d;
        std::vector<Rat> v(static_cast<size_t>(k) + 1, Rat(0));
        v[static_cast<size_t>(k)] = Rat(1);
        return reduce(v);
    }
    std::vector<Rat> reduce(std::vector<Rat> v) const {
        size_t deg = phi.size() - 1;
        while (v.size() > deg) {
            Rat lead = v.back();
            v.pop_back();
            if (lead == 0) continue;
            size_t shift = v.size() - deg;
            for (size_t i = 0; i < deg; ++i) v[shift + i] -= lead * phi[i];
        }
        return v;
    }
    static std::vector<Rat> add(std::vector<Rat> a, const std::vector<Rat>& b) {
        if (a.size() < b.size()) a.resize(b.size(), Rat(0));
        for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
        return a;
    }
    static std::vector<Rat> scale(std::vector<Rat> a, const Rat& c) {
        for (auto& x : a) x *= c;
        return a;
    }
    static bool is_constant(const std::vector<Rat>& a, Rat& out) {
        out = a.empty() ? Rat(0) : a[0];
        for (size_t i = 1; i < a.size(); ++i)
            if (a[i] != 0) return false;
        return true;
    }
};

// Swan conductor straight from the character pairing with root-of-unity values
Rat sw_oracle(const GaloisExtension& E, const RamificationData& R, const Character& chi) {
    Cyclo C(E.residue_char(), chi.d);
    long long f = E.f_ins;
    std::vector<Rat> acc{Rat(0)};
    long long sum_s = 0;
    for (size_t s = 1; s < R.sG.size(); ++s) sum_s += R.sG[s];
    acc = Cyclo::add(acc, Cyclo::scale(C.zeta_pow(0), Rat(f * sum_s)));
    for (size_t s = 1; s < R.sG.size(); ++s)
        acc = Cyclo::add(acc, Cyclo::scale(C.zeta_pow(chi.exps[s]), Rat(-f * R.sG[s])));
    Rat val;
    REQUIRE(Cyclo::is_constant(C.reduce(acc), val));
    return val / E.n;
}

// Artin analogue: (1/e) sum over sigma != 1 of i(sigma)(1 - chi(sigma))
Rat artin_oracle(const GaloisExtension& E, const RamificationData& R, const Character& chi) {
    Cyclo C(E.residue_char(), chi.d);
    std::vector<Rat> acc{Rat(0)};
    for (size_t s = 1; s < R.iG.size(); ++s) {
        acc = Cyclo::add(acc, Cyclo::scale(C.zeta_pow(0), Rat(R.iG[s])));
        acc = Cyclo::add(acc, Cyclo::scale(C.zeta_pow(chi.exps[s]), Rat(-R.iG[s])));
    }
    Rat val;
    REQUIRE(Cyclo::is_constant(C.reduce(acc), val));
    return val / E.e;
}

} // namespace

TEST_CASE("strata formula matches the root-of-unity pairing on the catalog") {
    for (auto& entry : catalog_list()) {
        GaloisExtension E = build(entry.name);
        RamificationData R = full_R(E);
        Character chi = faithful_character(E);
        for (long long k = 1; k < E.n; ++k) {
            Character ck = character_power(chi, k);
            INFO(entry.name, " chi^", k);
            CHECK(swan_conductor(E, R, ck) == sw_oracle(E, R, ck));
            CHECK(artin_conductor(E, R, ck) == artin_oracle(E, R, ck));
        }
    }
}

TEST_CASE("E1 conductors") {
    GaloisExtension E = build("e1_as_p3_n2");
    RamificationData R = full_R(E);
    Character chi = faithful_character(E);
    CHECK(swan_conductor(E, R, chi) == Rat(2));
    CHECK(artin_conductor(E, R, chi) == Rat(3));
    CHECK(kato_conductor(E, R, chi) == 2); // = s(3) - 1

    GaloisExtension E2 = build("e1_as_p2_n1");
    RamificationData R2 = full_R(E2);
    CHECK(kato_conductor(E2, R2, faithful_character(E2)) == 1);

    GaloisExtension E4 = build("e1_as_p3_n4");
    RamificationData R4 = full_R(E4);
    CHECK(swan_conductor(E4, R4, faithful_character(E4)) == Rat(4));
    CHECK(kato_conductor(E4, R4, faithful_character(E4)) == 4);
}

TEST_CASE("E2 conductors and depth") {
    GaloisExtension E = build("e2_ferocious_p3");
    RamificationData R = full_R(E);
    Character chi = faithful_character(E);
    CHECK(swan_conductor(E, R, chi) == Rat(3));
    CHECK(artin_conductor(E, R, chi) == Rat(3));
    CHECK(kato_conductor(E, R, chi) == 3); // = s(1) in case II
    DepthReport D = depth(E, R);
    CHECK(D.d_K == Rat(2));
    CHECK(D.ksw_relation_ok); // 1*3 = 2 + 1

    GaloisExtension Eb = build("e2_ferocious_p2");
    RamificationData Rb = full_R(Eb);
    CHECK(kato_conductor(Eb, Rb, faithful_character(Eb)) == 2);
    CHECK(depth(Eb, Rb).d_K == Rat(1));
}

TEST_CASE("E3 conductors") {
    GaloisExtension E = build("e3_cyclotomic_q3");
    RamificationData R = full_R(E);
    Character chi = faithful_character(E);
    CHECK(artin_conductor(E, R, chi) == Rat(3));
    CHECK(swan_conductor(E, R, chi) == Rat(2));
    CHECK(kato_conductor(E, R, chi) == 2); // p - 1
}

TEST_CASE("E4 conductors, depth, bounds") {
    GaloisExtension E = build("e4_case3");
    RamificationData R = full_R(E);
    Character chi = faithful_character(E);
    CHECK(swan_conductor(E, R, chi) == Rat(6));
    CHECK(artin_conductor(E, R, chi) == Rat(6));
    CHECK(kato_conductor(E, R, chi) == 5); // sw - 1 = s(4) - 1

    DepthReport D = depth(E, R);
    CHECK(D.d_K == make_rat(7, 2));
    CHECK(D.sum_sG == 8);
    CHECK(D.M_LK == Rat(1));
    CHECK(D.ksw_relation_ok); // 2*5 = 7 + 4 - 1

    HyodoReport H = hyodo_bounds(E, R);
    REQUIRE(H.jumping.size() == 2);
    CHECK(H.jumping[0] == Rat(5));
    CHECK(H.jumping[1] == Rat(3));
    CHECK(H.lhs == make_rat(13, 4));
    CHECK(H.rhs == Rat(4));
    CHECK(H.lower_ok);
    CHECK(H.upper_ok);
    CHECK_FALSE(H.first_equality); // strict in case III
    CHECK(H.derived);

    ConductorBoundReport S = conductor_depth_bound(E, R, chi);
    CHECK(S.thm6_rhs == make_rat(11, 2));
    CHECK(S.thm6_ok);
    CHECK(S.thm6_slack == make_rat(1, 2));
    CHECK(S.star_bound == Rat(12)); // ceil((4*6 - 1)/2)
    CHECK(S.star_ok);

    // non-faithful character of order 2 lands on the quadratic floor
    Character chi2 = character_power(chi, 2);
    CHECK(kato_conductor(E, R, chi2) == 3);
    GaloisExtension T = build("e4_tower_t");
    RamificationData RT = full_R(T);
    CHECK(kato_conductor(T, RT, faithful_character(T)) == 3);
}

TEST_CASE("hyodo equality in case I, tight cases in degree p") {
    for (auto& name : {"e1_as_p2_n1", "e1_as_p3_n1", "e1_as_p3_n2", "e1_as_p3_n4",
                       "e3_cyclotomic_q3", "e4_tower_t"}) {
        GaloisExtension E = build(name);
        RamificationData R = full_R(E);
        HyodoReport H = hyodo_bounds(E, R);
        INFO(name);
        CHECK(H.first_equality);
        CHECK(H.upper_ok);
    }
    for (auto& name : {"e2_ferocious_p2", "e2_ferocious_p3", "e4_tower_lt"}) {
        GaloisExtension E = build(name);
        RamificationData R = full_R(E);
        HyodoReport H = hyodo_bounds(E, R);
        INFO(name);
        CHECK(H.lower_ok);
        CHECK(H.upper_ok);
        CHECK(H.lhs == H.d_K);
        CHECK(H.rhs == H.d_K);
    }
}

TEST_CASE("E1 hyodo and bound numbers") {
    GaloisExtension E = build("e1_as_p3_n2");
    RamificationData R = full_R(E);
    HyodoReport H = hyodo_bounds(E, R);
    REQUIRE(H.jumping.size() == 1);
    CHECK(H.jumping[0] == Rat(2));
    CHECK(H.lhs == make_rat(4, 3));
    CHECK(H.d_K == make_rat(4, 3));

    ConductorBoundReport S = conductor_depth_bound(E, R, faithful_character(E));
    CHECK(S.thm6_rhs == make_rat(7, 3));
    CHECK(S.thm6_slack == make_rat(1, 3));
    CHECK(S.star_bound == Rat(2)); // tight
    CHECK(S.M_LK == Rat(0));
}

TEST_CASE("closed forms of the quartic family") {
    auto C = case3_closed_forms(2, 2);
    CHECK(C.ksw == Rat(5));
    CHECK(C.j2 == Rat(3));
    CHECK(C.d == make_rat(7, 2));
    CHECK(C.lhs3 == make_rat(13, 4));
    CHECK(C.lhs3_differs_from_d);

    auto C2 = case3_closed_forms(3, 6);
    CHECK(C2.ksw == Rat(14));
    CHECK(C2.j2 == Rat(8));
    CHECK(C2.d == make_rat(34, 3));
    CHECK(C2.lhs3 == make_rat(100, 9));
    CHECK(C2.lhs3_differs_from_d);

    auto C3 = case3_closed_forms(5, 20);
    CHECK(C3.ksw == Rat(44));
    CHECK(C3.j2 == Rat(24));
    CHECK(C3.d == make_rat(196, 5));
    CHECK(C3.lhs3 == make_rat(976, 25));
    CHECK(C3.lhs3_differs_from_d);

    CHECK_THROWS_AS(case3_closed_forms(2, 1), NonIntegralInstance);
}

TEST_CASE("flagship closed forms match the pipeline") {
    GaloisExtension E = build("e4_case3");
    RamificationData R = full_R(E);
    auto C = case3_closed_forms(2, 2);
    CHECK(Rat(kato_conductor(E, R, faithful_character(E))) == C.ksw);
    CHECK(depth(E, R).d_K == C.d);
    HyodoReport H = hyodo_bounds(E, R);
    CHECK(H.jumping[1] == C.j2);
    CHECK(H.lhs == C.lhs3);
}

TEST_CASE("compositum conductor routes") {
    GaloisExtension E = build("e4_case3");
    RamificationData R = full_R(E);
    Character chi = faithful_character(E);
    Compositum C = kummer_compositum(E, l_tvar(E.base));
    CompositumArtin CA = artin_via_compositum(E, R, chi, C);
    CHECK(CA.a_via_lm == Rat(6));
    CHECK(CA.a_via_lk == Rat(6));
    CHECK(CA.integral);
    CHECK(CA.equal);
    CHECK(CA.ksw_matches);
    for (auto& [lm, lk] : CA.lemma5) CHECK(lm == lk);

    Character chi2 = character_power(chi, 2);
    CHECK(kato_conductor(E, R, chi2) == 3);
}

TEST_CASE("conductor/depth/hyodo/bound suites run green on the catalog") {
    for (auto& entry : catalog_list()) {
        GaloisExtension E = build(entry.name);
        RamificationData R = full_R(E);
        for (auto& item : check_conductors(E, R)) {
            INFO(entry.name, ": ", item.name, " ", item.detail);
            CHECK(item.ok);
        }
        for (auto& item : check_depth(E, R)) {
            INFO(entry.name, ": ", item.name, " ", item.detail);
            CHECK(item.ok);
        }
        for (auto& item : check_hyodo(E, R)) {
            INFO(entry.name, ": ", item.name, " ", item.detail);
            CHECK(item.ok);
        }
        for (auto& item : check_bounds(E, R)) {
            INFO(entry.name, ": ", item.name, " ", item.detail);
            CHECK(item.ok);
        }
    }
}

TEST_CASE("trivial character short-circuits to zero") {
    GaloisExtension E = build("e1_as_p3_n2");
    RamificationData R = full_R(E);
    Character chi = character_power(faithful_character(E), 3); // trivial
    CHECK(kato_conductor(E, R, chi) == 0);
}
