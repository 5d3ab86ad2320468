#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "tilthall/homlab.hpp"

namespace tilthall {

struct CatalogOptions {
    int dim_bound = 4;
    bool index_conflations = true;
    /// Largest |End| for which units are also counted one by one.
    std::uint64_t aut_exhaust_cap = 1u << 14;
    /// Largest |Ext^1(X, S)| walked while closing under extensions.
    std::uint64_t ext_enum_cap = 1u << 12;
};

struct CatalogClass {
    ClassKey key;
    int total = 0;
    std::vector<int> dims;
    mpz_class aut;
    bool aut_crosschecked = false;
};

/// One submodule type U <= L with U ~ sub and L/U ~ quot, counted.
struct ConflationRec {
    int sub = 0, mid = 0, quot = 0;  // catalog ids
    long count = 0;
    FMatrix sub_basis;  // first witness, coordinates of realize(mid)
};

/// Isomorphism classes of modules of total dimension <= D.
struct IsoCatalog {
    Lab* lab = nullptr;
    int dim_bound = 0;
    std::string algebra_hash;
    bool complete = true;
    std::vector<std::string> notes;

    std::vector<CatalogClass> classes;  // sorted by (total, dims, key); classes[0] is zero
    std::map<ClassKey, int> index;
    std::vector<int> indecomposables;  // lab ids, dimension <= D
    std::vector<ConflationRec> conflations;
    std::map<std::tuple<int, int, int>, long> hall;  // (mid, quot, sub) -> g

    int size() const { return int(classes.size()); }
    int id_of(const ClassKey& k) const;
    const ClassKey& key(int id) const { return classes.at(id).key; }
    int total(int id) const { return classes.at(id).total; }
    /// Number of submodules U of L with U ~ n and L/U ~ m.
    long hall_number(int l, int m, int n) const;

    nlohmann::json to_json() const;
};

IsoCatalog build_catalog(Lab& lab, const CatalogOptions& opt = {});

/// |Aut M| counted by brute force over End M; nullopt above the cap.
std::optional<mpz_class> aut_order_exhaustive(const Rep& m, std::uint64_t cap);

}  // namespace tilthall
