#pragma once

#include <optional>
#include <vector>

#include "tilthall/algebra.hpp"

namespace tilthall {

/// Left module with a vertex-adapted basis: the total space is the
/// concatenation of e_v M over the vertices, and `act[b]` is the matrix of
/// the basis element b.
struct Rep {
    AlgebraPtr alg;
    std::vector<int> dims;
    std::vector<FMatrix> act;

    int total() const;
    int offset(int v) const;
    const Field& field() const { return alg->field; }
    FMatrix act_elem(const std::vector<Elem>& x) const;
    bool is_zero() const { return total() == 0; }
};

/// Module maps are total matrices (target x source), block diagonal by vertex.
struct RepMorphism {
    Rep source;
    Rep target;
    FMatrix mat;
};

struct Conflation {
    RepMorphism inclusion;
    RepMorphism projection;
};

Rep zero_rep(const AlgebraPtr& alg);

/// Module given by arbitrary actions of every basis element.  `basis` receives
/// the old coordinates of the new (vertex-adapted) basis.
Rep rep_from_actions(const AlgebraPtr& alg, const std::vector<FMatrix>& act, FMatrix* basis = nullptr,
                     bool check = true);
/// Quiver representation: arrow_mats[a] is dims[to] x dims[from].
Rep rep_from_quiver(const AlgebraPtr& alg, const std::vector<int>& dims, const std::vector<FMatrix>& arrow_mats);
/// Throws MalformedRelation when the actions do not define a module.
void check_module(const Rep& m);

/// Left regular module; `basis` maps module coordinates to algebra coordinates.
Rep regular_module(const AlgebraPtr& alg, FMatrix* basis = nullptr);

std::vector<FMatrix> hom_basis(const Rep& m, const Rep& n);
int hom_dim(const Rep& m, const Rep& n);
bool is_hom(const Rep& m, const Rep& n, const FMatrix& f);

struct SubRep {
    Rep rep;
    FMatrix incl;  // M-coords of the sub basis
};
struct QuotRep {
    Rep rep;
    FMatrix proj;     // M -> M/U
    FMatrix section;  // complement columns in M
};

/// Vertex-homogeneous basis of an A-stable subspace.
FMatrix adapt_subspace(const Rep& m, const FMatrix& s);
/// Smallest submodule containing the columns of v.
FMatrix spin(const Rep& m, const FMatrix& v);
bool is_stable(const Rep& m, const FMatrix& s);
SubRep submodule(const Rep& m, const FMatrix& s);
QuotRep quotient(const Rep& m, const FMatrix& s);

SubRep kernel(const Rep& m, const Rep& n, const FMatrix& f);
SubRep image(const Rep& m, const Rep& n, const FMatrix& f);
QuotRep cokernel(const Rep& m, const Rep& n, const FMatrix& f);

struct SumRep {
    Rep rep;
    std::vector<FMatrix> incl;
    std::vector<FMatrix> proj;
};
SumRep direct_sum(const std::vector<Rep>& parts);
Rep direct_sum(const Rep& a, const Rep& b);
Rep power(const Rep& a, int n);

/// (X + Y) / {(f k, -g k)} for f: K -> X, g: K -> Y.
struct Pushout {
    Rep rep;
    FMatrix from_x, from_y;
};
Pushout pushout(const Rep& k, const Rep& x, const Rep& y, const FMatrix& f, const FMatrix& g);
/// {(x, y) : f x = g y} for f: X -> Z, g: Y -> Z.
struct Pullback {
    Rep rep;
    FMatrix to_x, to_y;
};
Pullback pullback(const Rep& x, const Rep& y, const Rep& z, const FMatrix& f, const FMatrix& g);

/// Radical J M and top M / J M.
FMatrix radical_subspace(const Rep& m);

struct SubmoduleCaps {
    int cap_f2 = 8;
    int cap_other = 6;
};
/// All submodules as vertex-adapted bases, including 0 and M.
std::vector<FMatrix> submodule_bases(const Rep& m, const SubmoduleCaps& caps = {});
std::vector<SubRep> submodules(const Rep& m, const SubmoduleCaps& caps = {});

/// Hom_k(M, k) over A^op.
Rep k_dual(const Rep& m);
/// Transport a module over A to A^op^op == A when the algebra objects differ.
Rep rebase(const Rep& m, const AlgebraPtr& alg);

std::vector<int> dim_vector(const Rep& m);
bool same_algebra(const Rep& a, const Rep& b);
FMatrix block_of(const Rep& m, const FMatrix& f, const Rep& n, int v);

nlohmann::json rep_to_json(const Rep& m);
Rep rep_from_json(const AlgebraPtr& alg, const nlohmann::json& j);
Rep load_rep(const AlgebraPtr& alg, const std::string& path);

}  // namespace tilthall
