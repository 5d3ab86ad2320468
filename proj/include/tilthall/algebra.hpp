#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "tilthall/ffla.hpp"

namespace tilthall {

struct Arrow {
    std::string name;
    int from = 0;
    int to = 0;
};

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Finite-dimensional F_q-algebra with explicit structure constants.
///
/// Quiver algebras use the path basis; a path is stored in traversal order
/// (first arrow applied first) and the product u*v means "v, then u", so that
/// left modules are ordinary quiver representations.  Table algebras get their
/// vertices from a complete set of primitive orthogonal idempotents.
class Algebra {
public:
    Field field;
    int dim = 0;
    std::vector<std::string> labels;
    std::vector<Elem> table;  // b_i b_j = sum_k table[(i*dim+j)*dim+k] b_k
    std::vector<Elem> unit;

    std::vector<std::string> vertex_labels;
    std::vector<std::vector<Elem>> idempotents;  // one per vertex, coordinates
    /// Elements whose actions determine module maps (arrows, or the full basis).
    std::vector<int> hom_gens;
    /// Elements whose actions generate submodules together with the idempotents.
    std::vector<int> span_gens;
    FMatrix radical;  // dim x r, basis of J(A) in coordinates

    bool quiver = false;
    std::vector<Arrow> arrows;
    std::vector<std::vector<int>> paths;  // per basis element, arrow indices (quiver)
    std::vector<int> path_source, path_target;
    std::vector<int> arrow_basis;  // basis index of each arrow

    std::string canonical;  // canonical algebra document
    std::string hash;

    int num_vertices() const { return static_cast<int>(idempotents.size()); }
    Elem c(int i, int j, int k) const { return table[(std::size_t(i) * dim + j) * dim + k]; }
    std::vector<Elem> mul(const std::vector<Elem>& x, const std::vector<Elem>& y) const;
    std::vector<Elem> basis_vector(int i) const;
    /// Matrix of x -> b x and x -> x b on coordinates.
    FMatrix left_mult(const std::vector<Elem>& b) const;
    FMatrix right_mult(const std::vector<Elem>& b) const;

    nlohmann::json to_json() const;

private:
    friend AlgebraPtr opposite(const AlgebraPtr& a);
    mutable std::weak_ptr<const Algebra> op_;
    AlgebraPtr base_;  // set on opposites: the algebra this is the opposite of
};

struct ParseOptions {
    int path_cap = 32;
    int path_count_cap = 4096;
};

AlgebraPtr parse_algebra(const nlohmann::json& doc, const ParseOptions& opt = {});
AlgebraPtr load_algebra(const std::string& path, const ParseOptions& opt = {});

/// Table presentation; vertices and radical are computed.  Throws NonAssociative
/// or MalformedRelation (bad unit).
AlgebraPtr make_table_algebra(const Field& f, std::vector<std::string> labels, std::vector<Elem> table,
                              std::vector<Elem> unit);

AlgebraPtr opposite(const AlgebraPtr& a);

/// Serialization of field elements: integers for prime fields, coefficient arrays otherwise.
nlohmann::json elem_to_json(const Field& f, Elem a);
Elem elem_from_json(const Field& f, const nlohmann::json& j);
nlohmann::json matrix_to_json(const FMatrix& m);
FMatrix matrix_from_json(const Field& f, const nlohmann::json& j, int rows, int cols);

std::string fnv_hash(const std::string& s);

}  // namespace tilthall
