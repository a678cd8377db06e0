#pragma once

#include "ramify/ramfilt.hpp"

namespace ramify {

// A degree-1 character of the Galois group, with values in (1/d)Z/Z stored as
// exponents modulo d.
struct Character {
    long long d = 1;
    std::vector<long long> exps;

    bool trivial_on(const std::vector<size_t>& S) const {
        for (auto s : S)
            if (exps[s] % d != 0) return false;
        return true;
    }
    std::vector<size_t> kernel() const {
        std::vector<size_t> k;
        for (size_t s = 0; s < exps.size(); ++s)
            if (exps[s] % d == 0) k.push_back(s);
        return k;
    }
    bool faithful() const { return kernel().size() == 1; }
    long long order() const;
};

// the canonical faithful character of a cyclic group; powers give the rest
Character faithful_character(const GaloisExtension& E);
Character character_power(const Character& chi, long long k);

// subgroup strata S_n = {s_G >= n} + 1 and G[n] = {i_G >= n}; both must be
// subgroups, which is asserted
std::vector<size_t> swan_stratum(const GaloisExtension& E, const RamificationData& R, long long n);
std::vector<size_t> modified_stratum(const GaloisExtension& E, const RamificationData& R,
                                     long long n);

Rat swan_conductor(const GaloisExtension& E, const RamificationData& R, const Character& chi);
Rat artin_conductor(const GaloisExtension& E, const RamificationData& R, const Character& chi);
// dispatches on the case label and cross-checks the s-function route exactly
long long kato_conductor(const GaloisExtension& E, const RamificationData& R, const Character& chi);

struct ConductorReport {
    Rat sw;
    Rat artin;
    long long ksw = 0;
    CaseLabel label = CaseLabel::Undetermined;
    long long t = 0; // maximal modified jump
    Rat s_at_t;
};
ConductorReport conductor_report(const GaloisExtension& E, const RamificationData& R,
                                 const Character& chi);

struct DepthReport {
    Rat d_K;
    Rat d_L;
    long long sum_sG = 0;
    Rat M_LK;
    long long t = 0;
    long long ksw = 0;
    bool closed_form_ok = false;  // e d_K = sum s_G - (e - 1 in case III)
    bool ksw_relation_ok = false; // e ksw = d_L + t - (1 in case III)
};
DepthReport depth(const GaloisExtension& E, const RamificationData& R);

struct HyodoReport {
    std::vector<Rat> jumping; // j(1), j(2), ...
    Rat lhs;                  // (p-1) sum j(l)/p^l
    Rat rhs;                  // (1 - 1/p) sum j(l)
    Rat d_K;
    bool lower_ok = false;
    bool upper_ok = false;
    bool first_equality = false;
    bool derived = false; // jumping numbers taken from the floor tower
};
HyodoReport hyodo_bounds(const GaloisExtension& E, const RamificationData& R);

struct ConductorBoundReport {
    Rat M_LK;
    Rat star_bound; // ceiling bound on ksw
    Rat thm6_rhs;   // d_K + t/e
    long long ksw = 0;
    bool star_ok = false;
    bool thm6_ok = false;
    Rat star_slack;
    Rat thm6_slack;
};
ConductorBoundReport conductor_depth_bound(const GaloisExtension& E, const RamificationData& R,
                            const Character& chi);

struct Case3ClosedForms {
    Rat ksw;
    Rat j2;
    Rat d;
    Rat lhs3;
    bool lhs3_differs_from_d = false;
};
// closed forms of the quartic family at (p, e); requires p(p-1) | e
Case3ClosedForms case3_closed_forms(long long p, long long e);

struct CompositumArtin {
    Rat a_via_lm; // strata on LM/M
    Rat a_via_lk; // strata route on L/K
    bool integral = false;
    bool equal = false;
    bool ksw_matches = false; // ksw = A - 1
    std::vector<std::pair<long long, long long>> lemma5; // (i_{LM/M}, e(LM|L) i_{L/K}) per sigma
};
CompositumArtin artin_via_compositum(const GaloisExtension& E, const RamificationData& R,
                                     const Character& chi, const Compositum& C);

// check suites
std::vector<CheckItem> check_conductors(const GaloisExtension& E, const RamificationData& R);
std::vector<CheckItem> check_depth(const GaloisExtension& E, const RamificationData& R);
std::vector<CheckItem> check_hyodo(const GaloisExtension& E, const RamificationData& R);
std::vector<CheckItem> check_bounds(const GaloisExtension& E, const RamificationData& R);

} // namespace ramify
