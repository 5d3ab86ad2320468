#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tilthall/lab.hpp"

namespace tilthall {

struct ProjResolution {
    Rep target;
    std::vector<Rep> terms;      // P_0 .. P_n
    std::vector<FMatrix> maps;   // maps[0]: P_0 -> M, maps[i]: P_i -> P_{i-1}
    std::vector<Rep> kernels;    // Omega^1 .. Omega^{n+1}
    std::vector<FMatrix> incls;  // Omega^{i+1} -> P_i
};

ProjResolution projective_resolution(Lab& lab, const Rep& m, int n);

struct ExtSpace {
    int dim = 0;
    /// i = 1 only: maps Omega M -> N whose classes form a basis of Ext^1.
    std::vector<FMatrix> cocycles;
    Cover cover;
};

/// Ext^i(M, N) as cohomology of Hom(P_*, N).
ExtSpace ext_space(Lab& lab, const Rep& m, const Rep& n, int i);

/// Middle term of the extension given by a cocycle Omega M -> N:
/// 0 -> N -> E -> M -> 0 with E = (P + N) / {(incl k, -xi k)}.
struct Extension {
    Rep middle;
    FMatrix from_n;  // N -> E
    FMatrix to_m;    // E -> M
};
Extension extension_from_cocycle(const Cover& cover, const Rep& m, const Rep& n, const FMatrix& xi);

// Cached invariants over registered ids.
ClassKey omega_key(Lab& lab, int id);
ClassKey omega_key(Lab& lab, const ClassKey& k);
int ext1_dim(Lab& lab, int i, int j);
int ext1_dim(Lab& lab, const ClassKey& a, const ClassKey& b);
int ext_dim(Lab& lab, const ClassKey& a, const ClassKey& b, int i);

/// Syzygy level sets L_0 = ids(M), L_{k+1} = ids(Omega L_k).  The run stops
/// when a level is empty, repeats an earlier level, or the bound is reached.
struct SyzygyChain {
    std::vector<std::vector<int>> levels;
    int repeat_from = -1;  // index of the earlier level equal to the last one
    bool terminated = false;
    bool exhausted = false;

    nlohmann::json to_json() const;
};
SyzygyChain syzygy_chain(Lab& lab, const ClassKey& start, int bound);

/// Projective dimension: Yes with value, or Unknown; `infinite` when the
/// chain cycles through nonzero levels.
struct DimVerdict {
    Status status = Status::Unknown;
    int value = -1;
    bool infinite = false;
    int bound_used = 0;
    nlohmann::json certificate = nlohmann::json::object();
};

DimVerdict proj_dim(Lab& lab, const ClassKey& k, int bound);

/// Ext^i(M, T) = 0 for all i >= 1.
Verdict in_perp(Lab& lab, const ClassKey& m, const ClassKey& t, int bound);
Verdict in_perp(Lab& lab, const Rep& m, const Rep& t, int bound);
Verdict sgp_verdict(Lab& lab, const ClassKey& m, int bound);
Verdict gp_verdict(Lab& lab, int id, int bound);
Verdict gp_verdict(Lab& lab, const ClassKey& m, int bound);

/// Hom_R(X, T) as a module over S, where phi[s] is an R-endomorphism of T and
/// s acts by post-composition (phi must be multiplicative).
struct HomModule {
    Rep rep;
    std::vector<FMatrix> maps;  // X -> T per basis vector of rep
    FMatrix flat;               // flattened maps as columns
};
HomModule hom_into(const Rep& x, const Rep& t, const AlgebraPtr& s, const std::vector<FMatrix>& phi);
/// Hom_R(T, X) as a module over S acting by pre-composition (phi
/// anti-multiplicative).
HomModule hom_from(const Rep& t, const Rep& x, const AlgebraPtr& s, const std::vector<FMatrix>& phi);
/// Hom(h, T): F(X') -> F(X) for h: X -> X'.
FMatrix hom_into_map(const HomModule& fx, const HomModule& fx2, const FMatrix& h);
/// Hom(T, h): G(X) -> G(X') for h: X -> X'.
FMatrix hom_from_map(const HomModule& gx, const HomModule& gx2, const FMatrix& h);

/// Evaluation X -> Hom_S(Hom_R(X, T), T).
struct SigmaResult {
    HomModule fx;
    Rep ts;              // T over S
    FMatrix ts_basis;    // T coordinates of the ts basis
    HomModule gfx;       // module over R
    FMatrix sigma;       // gfx x X
    bool iso = false;
};
SigmaResult sigma_map(const Rep& x, const Rep& t, const AlgebraPtr& s, const std::vector<FMatrix>& phi);

/// Hom_A(X, A) over A^op.
HomModule a_dual(Lab& lab, const Rep& x);

/// Auslander transpose: cokernel of P_0* -> P_1* for a minimal presentation.
Rep transpose_dual(Lab& lab, const Rep& m);

/// T with its endomorphism algebra.  `e` multiplies by composition and
/// b = e^op; T is a left E-module (the right B-module T_B).
struct BimoduleData {
    AlgebraPtr a;
    Rep t;
    AlgebraPtr b;
    AlgebraPtr e;
    std::vector<FMatrix> endo;  // basis of End_A(T), T coordinates
    Rep t_e;
    FMatrix t_e_basis;
    std::vector<FMatrix> a_on_te;  // action of A's basis on t_e, t_e coordinates
    Verdict balanced;
};

/// M in cogen*(T): sigma_M bijective and Hom_A(M, T) in perp(T_B).
Verdict cogen_star_test(Lab& lab_a, Lab& lab_e, const BimoduleData& data, int id, int bound);
Verdict w_membership(Lab& lab_a, Lab& lab_e, const BimoduleData& data, int id, int bound);

struct SubcatSpec {
    enum class Tag { All, Projectives, GP, SGP, PerpT, WT, PdimLE, GPdimLE, SGPdimLE, AddOf, Intersection };
    Tag tag = Tag::All;
    int n = 0;
    ClassKey t;
    std::vector<SubcatSpec> parts;
    /// Membership of an indecomposable for WT; set by the tilting layer.
    std::function<Verdict(int)> wt;

    bool resolving() const;
    std::string name() const;

    static SubcatSpec all() { return {}; }
    static SubcatSpec of(Tag tag, int n = 0) {
        SubcatSpec s;
        s.tag = tag;
        s.n = n;
        return s;
    }
    static SubcatSpec perp(ClassKey t) {
        SubcatSpec s = of(Tag::PerpT);
        s.t = std::move(t);
        return s;
    }
    static SubcatSpec add_of(ClassKey t) {
        SubcatSpec s = of(Tag::AddOf);
        s.t = std::move(t);
        return s;
    }
    static SubcatSpec meet(std::vector<SubcatSpec> parts) {
        SubcatSpec s = of(Tag::Intersection);
        s.parts = std::move(parts);
        return s;
    }
};

/// Membership of a module; every shipped tag is closed under sums and summands.
Verdict member(Lab& lab, const SubcatSpec& x, int id, int bound);
Verdict member(Lab& lab, const SubcatSpec& x, const ClassKey& k, int bound);

/// Smallest n with Omega^n M in X.
DimVerdict res_dim(Lab& lab, const ClassKey& m, const SubcatSpec& x, int bound);

/// Conjunction: any No gives No, all Yes gives Yes.
Verdict verdict_and(std::vector<Verdict> parts);

}  // namespace tilthall
