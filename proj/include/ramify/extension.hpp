#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ramify/kpoly.hpp"

namespace ramify {

// ---------------------------------------------------------------------------
// Abelian p-group presentations.

struct GroupSpec {
    std::vector<long long> factors; // cyclic factor orders, largest first

    long long order() const {
        long long o = 1;
        for (auto f : factors) o *= f;
        return o;
    }
    static GroupSpec parse(const std::string& s); // "cyclic:4", "product:2x2"
    std::string str() const;
    // multiset of element orders, the abelian p-group isomorphism invariant
    std::vector<long long> order_multiset() const;
};

// ---------------------------------------------------------------------------
// Extension specifications.

struct ActionKummer {
    long long exponent = 0;
    LElem zeta;
};
struct ActionArtinSchreier {
    LElem rhs;
};
struct ActionCyclotomic {
    long long pk = 0; // relative step of Q_p(zeta_{p^k}) over Q_p(zeta_{p^{k-1}})
};
struct ActionExplicit {
    std::vector<KPoly> gen_images; // one image of the ring generator per group factor
};
using ActionSpec = std::variant<ActionKummer, ActionArtinSchreier, ActionCyclotomic, ActionExplicit>;

struct ExtensionSpec {
    LFPtr base;
    KPoly minpoly; // monic over O_K; Artin-Schreier models construct their own
    ActionSpec action;
    GroupSpec group;
    std::string name;
};

// ---------------------------------------------------------------------------
// A verified monogenic Galois extension L = K[X]/(f) with explicit action.

class GaloisExtension {
  public:
    LFPtr base;
    QuotCtx ring;
    std::string name;
    std::string gen_desc; // how the integral generator was derived
    GroupSpec group;

    std::vector<KPoly> action;               // sigma_s(x), s = 0 the identity
    std::vector<std::vector<QV>> pow_tables; // pow_tables[s][i] = sigma_s(x)^i
    std::vector<std::vector<size_t>> table;  // composition table
    std::vector<size_t> inverse_of;
    std::vector<long long> order_of;

    long long n = 0, e = 1, f_ins = 1, f_sep = 1;
    RFPtr kL;
    RElem resgen;          // residue of the generator
    RPoly residue_minpoly; // minimal polynomial of resgen over k_K ("X" if v(x) > 0)
    QV pi;                 // uniformizer of L in generator coordinates

    LFPtr as_field; // the same extension wrapped as a base field

    bool structure_ok = false;
    std::string structure_msg;

    QV gen() const;
    QV apply(size_t s, const QV& z) const;
    LElem norm(const QV& z) const; // element of K
    Rat V(const QV& z) const;      // exact valuation in v_K units
    long long vL(const QV& z) const;
    RElem residue(const QV& z) const;
    QV lift_res(const RElem& r) const;
    bool is_abelian() const;
    long long residue_char() const { return base->p; }
};

GaloisExtension build_extension(const ExtensionSpec& spec);

// invariants (e, f_sep, f_ins); requires a successfully built extension
std::tuple<long long, long long, long long> ext_invariants(const GaloisExtension& E);

enum class CaseLabel { CaseI, CaseII, CaseIII, NotWellRamified, Undetermined };
const char* case_label_str(CaseLabel c);
// I: separable residue extension; II: ferocious with purely inseparable
// monogenic residue extension; III: certified monogenic with e > 1, f_ins > 1.
CaseLabel classify_case(const GaloisExtension& E);

// ---------------------------------------------------------------------------
// Subgroups and fixed fields.

std::vector<std::vector<size_t>> all_subgroups(const GaloisExtension& E);
bool is_subgroup(const GaloisExtension& E, const std::vector<size_t>& H);

struct FixedField {
    bool whole = false;       // H = G: the fixed field is K itself
    bool trivial_sub = false; // H = {1}: the fixed field is L
    GaloisExtension T;        // valid when !whole
    QV beta;                  // generator of T inside L
    std::vector<size_t> to_quotient; // G index -> Gal(T/K) index
    std::vector<size_t> H;
};

FixedField fixed_field(const GaloisExtension& E, const std::vector<size_t>& H);

// ---------------------------------------------------------------------------
// The Kummer compositum M = K(alpha^{1/f}), LM over M.

struct Compositum {
    LFPtr M;
    GaloisExtension LM; // indexes automorphisms exactly like E
    long long e_LM_over_L = 1;
};

Compositum kummer_compositum(const GaloisExtension& E, const LElem& alpha);

} // namespace ramify
