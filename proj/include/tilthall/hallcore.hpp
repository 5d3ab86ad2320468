#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "tilthall/tiltdual.hpp"

namespace tilthall {

/// Finitely supported rational combination of isomorphism classes.
struct HallElement {
    std::map<ClassKey, mpq_class> coef;

    static HallElement unit() { return of(ClassKey{}); }
    static HallElement of(const ClassKey& k, const mpq_class& c = 1);

    void add(const ClassKey& k, const mpq_class& c);
    HallElement& operator+=(const HallElement& o);
    HallElement operator+(const HallElement& o) const;
    HallElement operator-(const HallElement& o) const;
    HallElement scaled(const mpq_class& c) const;
    bool is_zero() const { return coef.empty(); }
    bool operator==(const HallElement& o) const { return coef == o.coef; }

    nlohmann::json to_json() const;
    std::string to_string() const;
};

/// q^e as an exact rational.
mpq_class q_power(const Field& f, long e);

// ---------------------------------------------------------------- counting

/// |Ext^1(M, N)_L| = g^L_{M,N} |Hom(M, N)| a_M a_N / a_L from the catalog.
mpq_class ext_count(const IsoCatalog& cat, int l, int m, int n);

/// Extension classes of Ext^1(M, N) realized one by one and sorted by the
/// class of the middle term.  nullopt when |Ext^1| exceeds the cap.
struct ExtOracle {
    int ext_dim = 0;
    int hom_dim = 0;
    std::map<ClassKey, mpz_class> by_middle;
};
std::optional<ExtOracle> ext_count_oracle(Lab& lab, const Rep& m, const Rep& n, std::uint64_t cap);

/// Both counting routes on every catalog pair, plus the total q^{dim Ext^1}.
Report verify_counting(Lab& lab, const IsoCatalog& cat, std::uint64_t cap);

// ---------------------------------------------------------- Hall algebras

/// Structure constants c^L_{M,N} = |Ext^1(M,N)_L| / |Hom(M,N)| for all pairs
/// with total(M) + total(N) <= D.  Products above D are zero.
class TruncatedHall {
public:
    explicit TruncatedHall(const IsoCatalog& cat, bool allow_incomplete = false);

    const IsoCatalog& catalog() const { return *cat_; }
    int bound() const { return cat_->dim_bound; }
    /// [M] * [N] by catalog ids; zero above the bound.
    const std::map<int, mpq_class>& product(int m, int n) const;
    /// Truncated product; `overflow` is set when a nonzero term was dropped.
    HallElement mul(const HallElement& x, const HallElement& y, bool* overflow = nullptr) const;
    int total(const ClassKey& k) const;

    /// Grade additivity and associativity on all admissible triples.
    Report verify() const;
    /// Replace one structure constant (fault injection).
    void corrupt(int m, int n, int l, const mpq_class& c);

    nlohmann::json to_json() const;
    std::string to_text() const;

private:
    const IsoCatalog* cat_;
    std::vector<std::vector<std::map<int, mpq_class>>> table_;
    std::map<int, mpq_class> empty_;
};

// --------------------------------------------------------- exact structures

/// A full subcategory of the catalog carrying the ambient exact structure,
/// with its objects of Ext-projective / Ext-injective dimension <= 1 and < oo.
struct ExactStructure {
    enum class Kind { Module, GP, PerpGP1 };
    Kind kind = Kind::Module;
    ClassKey t;  // PerpGP1 only
    int bound = 24;
    std::map<int, Status> member, ple1, ile1, pfin, ifin;  // per indecomposable id
    nlohmann::json notes = nlohmann::json::object();

    /// Class-level flags: a sum has the flag when every summand does.
    Status flag(const std::map<int, Status>& f, const ClassKey& k) const;
    bool in(const ClassKey& k) const { return flag(member, k) == Status::Yes; }
    bool is_ple1(const ClassKey& k) const { return flag(ple1, k) == Status::Yes; }
    bool is_ile1(const ClassKey& k) const { return flag(ile1, k) == Status::Yes; }
    std::string name() const;
};

ExactStructure module_structure(Lab& lab, const IsoCatalog& cat, int bound);
ExactStructure gp_structure(Lab& lab, const IsoCatalog& cat, int bound);
/// perp(T) meet GP<=1.
ExactStructure perp_gp1_structure(Lab& lab, const IsoCatalog& cat, const ClassKey& t, int bound);
/// All, GP, or perp(T) meet GPdim<=1; anything else is UnsupportedSpec.
ExactStructure structure_from_spec(Lab& lab, const IsoCatalog& cat, const SubcatSpec& spec, int bound);
/// Membership of any class, including ones outside the catalog.
Status structure_member(Lab& lab, const ExactStructure& s, const ClassKey& k);

/// <X, M> = dim Hom - dim Ext^1.  Left side needs X in P<=1, right side
/// needs M in I<=1; otherwise NotPLE1.
enum class EulerSide { Left, Right };
long euler_form(Lab& lab, const ExactStructure& s, const ClassKey& x, const ClassKey& m, EulerSide side);
/// Unchecked Hom - Ext^1.
long euler_raw(Lab& lab, const ClassKey& x, const ClassKey& m);

/// Verdict on (E-a)-(E-d) over the catalog indecomposables of the structure.
Verdict weakly_gorenstein_check(Lab& lab, const IsoCatalog& cat, const ExactStructure& s, int bound);

// ------------------------------------------------------------------ ideals

/// Rational subspace in reduced echelon form, keyed by pivot class.
class IdealBasis {
public:
    enum class Which { I, J, IJ };
    Which which = Which::I;

    /// Reduce `x` to its normal form; returns true when it was added.
    bool insert(const HallElement& x);
    HallElement reduce(const HallElement& x) const;
    bool contains(const HallElement& x) const { return reduce(x).is_zero(); }
    int dim() const { return int(rows_.size()); }
    std::vector<HallElement> basis() const;

private:
    std::map<ClassKey, HallElement> rows_;  // pivot -> row with coefficient 1 at pivot
};

/// Generators from the conflation index, closed under truncated left and
/// right multiplication by the classes of the structure.
IdealBasis ideal_basis(const TruncatedHall& h, const ExactStructure& s, IdealBasis::Which which);
HallElement quotient_reduce(const HallElement& x, const IdealBasis& ideal);
/// Every basis element times every class (both sides) lies in the ideal.
bool ideal_closed(const TruncatedHall& h, const ExactStructure& s, const IdealBasis& ideal);

// ------------------------------------------------------------ SDH algebras

/// [den]^{-1} * num.
struct SdhElement {
    ClassKey den;
    HallElement num;

    static SdhElement of(const ClassKey& k, const mpq_class& c = 1) { return {{}, HallElement::of(k, c)}; }
    nlohmann::json to_json() const;
};

/// Hall algebra quotient with localizable denominators.
class SdhContext {
public:
    explicit SdhContext(Lab& lab) : lab_(&lab) {}
    virtual ~SdhContext() = default;

    Lab& lab() { return *lab_; }
    mpq_class qpow(long e) const { return q_power(lab_->field(), e); }

    virtual HallElement mul(const HallElement& x, const HallElement& y) = 0;
    virtual HallElement reduce(const HallElement& x) = 0;
    virtual bool is_denominator(const ClassKey& k) = 0;
    virtual long euler(const ClassKey& x, const ClassKey& y) = 0;
    /// Commutation and absorption for the pair; cached.
    virtual bool check_commutation(const ClassKey& k, const ClassKey& m) = 0;

    /// check_commutation or CommutationNotCertified.
    void require_commutation(const ClassKey& k, const ClassKey& m);
    /// a [K]^{-1} = [K]^{-1} a'.
    HallElement swap_past(const HallElement& a, const ClassKey& k);

protected:
    Lab* lab_;
};

SdhElement sdh_mul(SdhContext& c, const SdhElement& x, const SdhElement& y);
bool sdh_eq(SdhContext& c, const SdhElement& x, const SdhElement& y);
SdhElement sdh_add(SdhContext& c, const SdhElement& x, const SdhElement& y);

/// Truncated H(A)/(I + J) over an exact structure of the catalog.
class TruncatedSdh : public SdhContext {
public:
    TruncatedSdh(Lab& lab, const TruncatedHall& h, const ExactStructure& s);

    HallElement mul(const HallElement& x, const HallElement& y) override;  // TruncationOverflow
    HallElement reduce(const HallElement& x) override { return ij_.reduce(x); }
    bool is_denominator(const ClassKey& k) override { return s_->is_ple1(k); }
    long euler(const ClassKey& x, const ClassKey& y) override;
    bool check_commutation(const ClassKey& k, const ClassKey& m) override;

    const IdealBasis& ideal(IdealBasis::Which w) const;
    const TruncatedHall& hall() const { return *h_; }
    const ExactStructure& structure() const { return *s_; }
    /// All pairs K in P<=1, M in the structure, total <= D.
    Report verify_commutation();

private:
    const TruncatedHall* h_;
    const ExactStructure* s_;
    IdealBasis i_, j_, ij_;
    std::map<std::pair<ClassKey, ClassKey>, bool> certified_;
    nlohmann::json last_failure_;
};

/// H(GP(A)) with exact products computed on demand.  Projectives are
/// projective-injective here, so I = J = 0 and the denominators are the
/// projective classes.
class FrobeniusSdh : public SdhContext {
public:
    FrobeniusSdh(Lab& lab, std::uint64_t ext_cap = 1u << 16);

    HallElement product(const ClassKey& m, const ClassKey& n);
    HallElement mul(const HallElement& x, const HallElement& y) override;
    HallElement reduce(const HallElement& x) override { return x; }
    bool is_denominator(const ClassKey& k) override;
    long euler(const ClassKey& x, const ClassKey& y) override;
    bool check_commutation(const ClassKey& k, const ClassKey& m) override;

    int products_computed() const { return int(products_.size()); }

private:
    std::uint64_t cap_;
    std::map<std::pair<ClassKey, ClassKey>, HallElement> products_;
    std::map<std::pair<ClassKey, ClassKey>, bool> certified_;
    std::map<std::pair<ClassKey, ClassKey>, long> euler_;
};

// ------------------------------------------------------------ psi and Xi

/// 0 -> H -> G -> M -> 0 with H projective and G Gorenstein-projective.
struct PsiData {
    Rep h, g;
    ClassKey h_key, g_key;
    FMatrix h_to_g, g_to_m;
    SdhElement value;  // left fraction in the GP context
};
/// psi([M]) = q^{-<M,H>} [G][H]^{-1}; NotGPdim1 when Omega M is not GP.
PsiData psi_map(Lab& lab, FrobeniusSdh& gp, const Rep& m, int bound);
/// psi([M]) from the sequence keys; the sequence of M + M' is the sum of theirs.
SdhElement psi_value(Lab& lab, FrobeniusSdh& gp, const ClassKey& m, const ClassKey& h, const ClassKey& g);

/// psi fixes GP classes, and psi is multiplicative on catalog pairs of the
/// structure within the bound.
Report verify_prop47(Lab& lab, const IsoCatalog& cat, const TruncatedHall& h, const ExactStructure& s, FrobeniusSdh& gp,
                     int bound);

/// Xi([G]) = q^{-<L,G>} [Hom_A(T, L)]^{-1} [Hom_A(T, Z)] over B.
struct XiData {
    PerpApprox approx;
    ClassKey z_key, l_key;  // B-classes of Hom_A(T, Z), Hom_A(T, L)
    long euler_lg = 0;
    SdhElement value;
};
struct XiSetup {
    Lab* lab_a = nullptr;
    Lab* lab_e = nullptr;
    Lab* lab_b = nullptr;
    const IsoCatalog* cat_a = nullptr;
    BimoduleData data;
    int bound = 24;
};
XiData xi_map(const XiSetup& s, FrobeniusSdh& gp_b, const Rep& g);

/// Xi multiplicative on GP pairs within the bound, Euler forms transferred,
/// the factorization through the duality spot-checked, and Xi the identity
/// for T = A.
Report verify_thm410(const XiSetup& s, FrobeniusSdh& gp_a, FrobeniusSdh& gp_b, bool identity_tilt);

/// Restriction of a B-module along the algebra map A -> B, a -> right
/// multiplication by a (T = A only).
Rep restrict_to_a(const Rep& y, const BimoduleData& d);

// ------------------------------------------------------------------- K_0

struct K0Result {
    int generators = 0;
    int relations = 0;
    int free_rank = 0;
    std::vector<mpz_class> torsion;  // invariant factors > 1
    std::vector<mpz_class> factors;  // all nonzero invariant factors
    nlohmann::json to_json() const;
};
/// Smith normal form of the truncated presentation of K_0 of a subcategory.
K0Result k0_presentation(Lab& lab, const IsoCatalog& cat, const SubcatSpec& spec, int bound);
/// Same free rank and torsion.
bool k0_equal(const K0Result& a, const K0Result& b);
/// Invariant factors of an integer matrix.
std::vector<mpz_class> smith_invariants(std::vector<std::vector<mpz_class>> m);

}  // namespace tilthall
