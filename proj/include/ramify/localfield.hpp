#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ramify/residue.hpp"

namespace ramify {

// All invariants downstream are exact integers and rationals; this layer is
// the only approximate one. Every element carries `cap`: the element is known
// modulo terms of valuation >= cap (v_K-normalized). A valuation claim is
// certified only with `guard` digits of slack below cap, otherwise
// PrecisionExhausted is raised.
struct Precision {
    long long Nt = 64;    // series window length
    long long Np = 64;    // p-adic digit precision
    long long guard = 8;  // certification slack

    bool operator==(const Precision&) const = default;
};

enum class LFKind { EqualChar, PAdic, Mixed, Quot };

class LocalField;
using LFPtr = std::shared_ptr<const LocalField>;

// One stage of a p-adic tower: a monic polynomial over the previous stage,
// either the lift of an irreducible polynomial over F_p (unramified) or an
// Eisenstein polynomial.
struct PadE {
    BigInt c;                // leaf coefficient (depth 0)
    std::vector<PadE> sub;   // coefficients over the previous stage (depth > 0)
};

struct PadStep {
    bool eisenstein = true;
    std::vector<PadE> minpoly; // monic, coefficients at the previous depth
    long long degree = 0;
};

class LElem;

class LocalField : public std::enable_shared_from_this<LocalField> {
  public:
    LFKind kind;
    Precision prec;
    long long p = 0;

    // EqualChar: residue((t))
    RFPtr ec_residue;
    std::string var;

    // PAdic: tower over Q_p, at most one unramified step then Eisenstein steps
    std::vector<PadStep> steps;
    long long eabs = 1;      // v_K(p) for PAdic/Mixed kinds
    PadE p_over_pi;          // the unit pi^eabs / p, precomputed

    // Mixed: coeff{{T}}, Gauss valuation, v(T) = 0
    LFPtr coeff;

    // Quot: monogenic extension of `base` serving as a base field itself
    LFPtr base;
    std::vector<LElem> q_minpoly;    // monic over base
    std::string gen_name;
    long long q_e = 1;               // e(this | base)
    RFPtr q_kL;
    RElem q_resgen;                  // residue of the generator in q_kL
    std::vector<LElem> q_pi;         // uniformizer, coords in generator powers
    // automorphism power tables for norm-based valuations (Galois case):
    // q_action[s][k] = sigma_s(gen)^k as coords over base
    std::vector<std::vector<std::vector<LElem>>> q_action;

    static LFPtr equal_char(RFPtr residue, std::string var, Precision prec = {});
    static LFPtr padic(long long p, std::vector<PadStep> steps, Precision prec = {});
    static LFPtr mixed(LFPtr coeff, std::string var, Precision prec = {});

    RFPtr residue_field() const;
    long long depth() const { return static_cast<long long>(steps.size()); }
    std::string describe() const;
    // capacity of fresh integral data in v_K units (VAL_INF when exact)
    long long fresh_cap() const;
};

bool lf_equal(const LFPtr& a, const LFPtr& b);

class LElem {
  public:
    LFPtr K;
    long long cap = VAL_INF;

    // EqualChar: sorted Laurent terms exponent -> residue coefficient
    std::vector<std::pair<long long, RElem>> ec;

    // PAdic: body * pi^shift, body leaves reduced mod p^Np
    PadE pad;
    long long pshift = 0;

    // Mixed: sorted T-terms, coefficients in the p-adic coefficient field
    std::vector<long long> mix_e;
    std::vector<LElem> mix_c;

    // Quot: coordinates over the base field in generator powers
    std::vector<LElem> coords;

    bool looks_zero() const; // nothing nonzero stored below cap
    std::string str() const;
};

// construction
LElem l_zero(const LFPtr& K);
LElem l_one(const LFPtr& K);
LElem l_from_int(const LFPtr& K, long long c);
LElem l_from_bigint(const LFPtr& K, const BigInt& c);
LElem l_uniformizer(const LFPtr& K);
LElem l_tvar(const LFPtr& K);                     // Mixed series variable
LElem l_pgen(const LFPtr& K, size_t stage);       // PAdic tower generator
LElem l_ec_term(const LFPtr& K, long long e, const RElem& c);
LElem l_mixed_term(const LFPtr& K, long long e, const LElem& coeff);
LElem l_quot_coords(const LFPtr& K, std::vector<LElem> coords);
LElem l_embed_base(const LFPtr& K, const LElem& base_elem); // base -> Quot

// arithmetic
LElem l_add(const LElem& a, const LElem& b);
LElem l_sub(const LElem& a, const LElem& b);
LElem l_neg(const LElem& a);
LElem l_mul(const LElem& a, const LElem& b);
LElem l_inv(const LElem& a);
LElem l_div(const LElem& a, const LElem& b);
LElem l_pow(const LElem& a, long long e);
LElem l_scale_uniformizer(const LElem& a, long long k); // a * pi^k, exact

// valuation / certification
// lowest valuation visible in the representation, cap if nothing stored
long long l_val_floor(const LElem& a);
// certified valuation; throws ZeroElement on exact zero, PrecisionExhausted
// when the claim lacks guard slack
long long l_val(const LElem& a);
bool l_cert_nonzero(const LElem& a);
bool l_eq_at_prec(const LElem& a, const LElem& b);

// residue ring
RElem l_residue(const LElem& a);
LElem l_lift(const LFPtr& K, const RElem& r);

// Newton polygon of a monic polynomial: (root valuation, multiplicity) pairs,
// root valuations ascending, in v_K units.
std::vector<std::pair<Rat, long long>> newton_polygon(const std::vector<LElem>& f);

// Newton lifting from a starting point satisfying v(f(x0)) > 2 v(f'(x0)).
LElem hensel_root(const std::vector<LElem>& f, const LElem& x0, long long m0 = 0);

} // namespace ramify
