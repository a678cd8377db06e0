#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ramify/errors.hpp"
#include "ramify/rational.hpp"

namespace ramify {

// ---------------------------------------------------------------------------
// Finite field F_q, q = p^r, as F_p[g]/(minpoly).

struct FqCtx {
    long long p = 0;
    int r = 1;
    std::vector<long long> minpoly; // monic, degree r, coeffs in [0, p)

    bool operator==(const FqCtx& o) const = default;
};

// Dense coefficient vector in the g-power basis, trailing zeros trimmed.
using FqElem = std::vector<long long>;

FqCtx fq_make(long long p, int r);
FqCtx fq_make_with_minpoly(long long p, std::vector<long long> minpoly);

FqElem fq_from_int(const FqCtx& F, long long c);
FqElem fq_gen(const FqCtx& F);
FqElem fq_add(const FqCtx& F, const FqElem& a, const FqElem& b);
FqElem fq_sub(const FqCtx& F, const FqElem& a, const FqElem& b);
FqElem fq_neg(const FqCtx& F, const FqElem& a);
FqElem fq_mul(const FqCtx& F, const FqElem& a, const FqElem& b);
FqElem fq_inv(const FqCtx& F, const FqElem& a);
FqElem fq_pow(const FqCtx& F, FqElem a, BigInt e);
bool fq_is_zero(const FqElem& a);
bool fq_is_one(const FqElem& a);
// Unique p-th root (Frobenius is bijective on finite fields).
FqElem fq_pth_root(const FqCtx& F, const FqElem& a);
bool fp_poly_irreducible(long long p, const std::vector<long long>& m);

// ---------------------------------------------------------------------------
// Multivariate polynomials over F_q, at most 2 variables, graded-lex order.

struct Mono {
    std::array<int, 2> e{0, 0};
    int total() const { return e[0] + e[1]; }
};

struct MonoCmp {
    bool operator()(const Mono& a, const Mono& b) const {
        if (a.total() != b.total()) return a.total() < b.total();
        if (a.e[0] != b.e[0]) return a.e[0] > b.e[0]; // lex within a degree block
        return a.e[1] < b.e[1];
    }
};

struct MPoly {
    std::map<Mono, FqElem, MonoCmp> t;

    bool is_zero() const { return t.empty(); }
    int deg(int var) const;
};

MPoly mp_zero();
MPoly mp_const(const FqCtx& F, const FqElem& c);
MPoly mp_var(int var);
MPoly mp_add(const FqCtx& F, const MPoly& a, const MPoly& b);
MPoly mp_neg(const FqCtx& F, const MPoly& a);
MPoly mp_sub(const FqCtx& F, const MPoly& a, const MPoly& b);
MPoly mp_mul(const FqCtx& F, const MPoly& a, const MPoly& b);
MPoly mp_divexact(const FqCtx& F, const MPoly& a, const MPoly& b);
MPoly mp_gcd(const FqCtx& F, const MPoly& a, const MPoly& b);
MPoly mp_monic(const FqCtx& F, const MPoly& a); // scale so graded-lex leading coeff is 1
FqElem mp_lc(const MPoly& a);
bool mp_eq(const MPoly& a, const MPoly& b);

// ---------------------------------------------------------------------------
// Residue field descriptors.

enum class RFKind { Finite, RatFun, SimpleExt };

class ResidueField;
using RFPtr = std::shared_ptr<const ResidueField>;

class RElem;

class ResidueField : public std::enable_shared_from_this<ResidueField> {
  public:
    RFKind kind;
    long long p = 0;

    // Finite
    FqCtx fq;

    // RatFun: fractions of MPoly over the base finite field. `completion`
    // marks the field as standing in for the T-adic completion F_q((T)); the
    // arithmetic is identical, only the descriptor display changes.
    std::vector<std::string> vars;
    bool completion = false;

    // SimpleExt: base(gen), gen a root of minpoly (monic, irreducible).
    RFPtr base;
    std::vector<RElem> ext_minpoly;
    std::string gen_name;

    int imperfection_degree() const;
    long long characteristic() const { return p; }
    // Size of the F_p-coefficient field for RatFun kinds; q for Finite.
    std::string describe() const;

    static RFPtr finite(long long p, int r);
    static RFPtr finite_with_minpoly(long long p, std::vector<long long> minpoly);
    static RFPtr ratfun(long long p, int r, std::vector<std::string> vars, bool completion = false);
    // Checks irreducibility of minpoly; throws ValidationError on failure.
    static RFPtr simple_ext(RFPtr base, std::vector<RElem> minpoly, std::string gen_name);
};

bool rf_equal(const RFPtr& a, const RFPtr& b);

// ---------------------------------------------------------------------------
// Residue field elements: canonical forms, structural equality.

class RElem {
  public:
    RFPtr F;
    // exactly one payload active, selected by F->kind
    FqElem ff;
    MPoly num, den;          // RatFun, den monic under graded-lex, gcd-reduced
    std::vector<RElem> ext;  // SimpleExt coeffs over base, deg < deg minpoly

    RElem() = default;

    bool is_zero() const;
    bool is_one() const;
    bool operator==(const RElem& o) const;
    bool operator!=(const RElem& o) const { return !(*this == o); }
    std::string str() const;
};

RElem r_zero(const RFPtr& F);
RElem r_one(const RFPtr& F);
RElem r_from_int(const RFPtr& F, long long c);
// Generator of the field over its prime/base structure: F_q's g, variable i
// of a rational function field, or the SimpleExt generator.
RElem r_gen(const RFPtr& F, int var = 0);
RElem r_embed(const RFPtr& F, const RElem& base_elem); // base -> SimpleExt

RElem r_add(const RElem& a, const RElem& b);
RElem r_sub(const RElem& a, const RElem& b);
RElem r_neg(const RElem& a);
RElem r_mul(const RElem& a, const RElem& b);
RElem r_inv(const RElem& a);
RElem r_div(const RElem& a, const RElem& b);
RElem r_pow(const RElem& a, BigInt e);

// p-th root if one exists in the owner field.
std::optional<RElem> r_pth_root(const RElem& a);

// ---------------------------------------------------------------------------
// Univariate polynomials over a residue field (dense, index = degree).

using RPoly = std::vector<RElem>;

RPoly rp_trim(RPoly a);
int rp_deg(const RPoly& a);
bool rp_is_zero(const RPoly& a);
RPoly rp_add(const RPoly& a, const RPoly& b);
RPoly rp_sub(const RPoly& a, const RPoly& b);
RPoly rp_mul(const RPoly& a, const RPoly& b);
RPoly rp_scale(const RPoly& a, const RElem& c);
// division by polynomial with invertible leading coefficient
std::pair<RPoly, RPoly> rp_divmod(const RPoly& a, const RPoly& b);
RPoly rp_gcd(RPoly a, RPoly b); // monic gcd
RPoly rp_derivative(const RPoly& a);
RPoly rp_monic(const RPoly& a);
RElem rp_eval(const RPoly& a, const RElem& x);
RPoly rp_powmod(const RPoly& base, BigInt e, const RPoly& mod);
bool rp_eq(const RPoly& a, const RPoly& b);

// m(X) = m_sep(X^{p^s}) with s maximal; coefficients are unchanged.
// For irreducible m the returned m_sep is separable.
std::pair<RPoly, long long> separable_split(const RPoly& m);

// Irreducibility over the supported field shapes. Finite fields get the full
// test; over rational-function fields only linear polynomials and
// purely-inseparable binomials X^{p^s} - a are decided, anything else throws.
bool rp_irreducible(const RFPtr& F, const RPoly& m);

// Coefficient-wise p-th root: inverse of m -> m^[p] = (Frobenius on coeffs).
std::optional<RPoly> rp_coeff_pth_root(const RPoly& m);

} // namespace ramify
