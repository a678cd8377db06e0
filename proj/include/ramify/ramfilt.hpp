#pragma once

#include <map>
#include <string>
#include <vector>

#include "ramify/extension.hpp"

namespace ramify {

// elementwise ramification data, indexed like the group table
struct RamificationData {
    std::vector<long long> iG; // VAL_INF at the identity
    std::vector<long long> sG; // VAL_INF at the identity
};

// The modified Hasse-Herbrand function: s(u) = (1/e) sum_sigma min(i(sigma), u),
// continuous piecewise linear increasing convex, s(0) = 0.
struct HerbrandFn {
    long long e = 1;
    std::vector<long long> ivals; // i_G over all group elements, VAL_INF at 1

    Rat eval(const Rat& u) const;
    Rat inverse(const Rat& v) const;
    std::vector<long long> jumps() const; // modified ramification jumps
    long long order_at(long long t) const; // |G[t]| = #{i >= t}
    // (breakpoint, value) pairs out to `upto`, plus per-interval slopes
    std::vector<std::pair<long long, Rat>> breakpoints(long long upto) const;
    std::vector<Rat> slopes(long long upto) const;
};

struct FiltrationReport {
    RamificationData R;
    std::vector<std::vector<size_t>> lower;    // G_i, i = 0..imax
    std::vector<std::vector<size_t>> shifted;  // H_i = G_{i,1}, i = 0..imax
    std::vector<std::vector<size_t>> modified; // G[t], t = 1..tmax
    // two-index groups on the grid n in [0, last jump + 2], m in [0, e]
    std::map<std::pair<long long, long long>, std::vector<size_t>> two_index;
    std::vector<long long> modified_jumps;
    std::vector<Rat> upper_jumps; // s(m) at the modified jumps
    HerbrandFn sfun;
};

struct DifferentReport {
    long long v_different = 0; // v_L(f'(x))
    long long sum_iG = 0;
    long long sum_lower = 0; // sum over i of (|G_i| - 1)
    bool hilbert_holds = false;
};

struct CheckItem {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct HerbrandLedger {
    bool ok = false;
    std::vector<CheckItem> items; // per (subgroup, coset) entries
};

struct WellRamifiedVerdict {
    bool well_ramified = false;
    bool hilbert = false;
    bool herbrand = false;
    std::string note;
};

struct TowerReport {
    std::vector<size_t> H; // Gal(L/T)
    FixedField T;          // the case I floor (T.whole when T = K)
    CaseLabel bottom = CaseLabel::Undetermined; // T/K
    CaseLabel top = CaseLabel::Undetermined;    // L/T
    long long e_top = 1, f_top = 1;
};

RamificationData compute_iG(const GaloisExtension& E);
void compute_sG(const GaloisExtension& E, RamificationData& R);
// d_m(sigma) = min over an O_K-basis of M^m of v_L(sigma b - b)
long long displacement_depth(const GaloisExtension& E, size_t sigma, long long m);

FiltrationReport filtrations(const GaloisExtension& E, const RamificationData& R);
HerbrandFn make_sfun(const GaloisExtension& E, const RamificationData& R);

DifferentReport different_and_hilbert(const GaloisExtension& E, const RamificationData& R);
HerbrandLedger herbrand_check(const GaloisExtension& E, const RamificationData& R);
WellRamifiedVerdict well_ramified_verdict(const GaloisExtension& E, const RamificationData& R);
TowerReport tower_decomposition(const GaloisExtension& E);
std::pair<std::vector<Rat>, bool> upper_jumps_modified(const GaloisExtension& E,
                                                       const RamificationData& R);

// theorem/lemma suites (exact; used by `check` and the tests)
std::vector<CheckItem> check_theorem1(const GaloisExtension& E, const RamificationData& R);
std::vector<CheckItem> check_lemmas234(const GaloisExtension& E, const RamificationData& R);
std::vector<CheckItem> check_borger(const GaloisExtension& E, const RamificationData& R);

// s-function of L over the fixed field of H, from the restricted i-table
HerbrandFn sub_sfun(const GaloisExtension& E, const RamificationData& R,
                    const std::vector<size_t>& H, long long e_top);

} // namespace ramify
