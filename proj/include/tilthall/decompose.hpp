#pragma once

#include <cstdint>
#include <vector>

#include "tilthall/rep.hpp"

namespace tilthall {

struct DecomposeOptions {
    std::uint64_t seed = 0x5eed;
    int random_tries = 64;
    std::uint64_t exhaust_cap = 1u << 16;
    std::uint64_t spin_cap = 1u << 18;
};

/// Jacobson radical of the algebra spanned by `basis` (n x n matrices closed
/// under products and containing the identity).  Columns are coordinates with
/// respect to `basis`.  Uses a composition series of F^n.
FMatrix matrix_algebra_radical(const std::vector<FMatrix>& basis, int n, const DecomposeOptions& opt = {});

/// Composition series 0 = V_0 < ... < V_m = F^n of F^n under the given
/// matrices.  Each entry is a basis of V_i (n x dim V_i).
std::vector<FMatrix> composition_series(const std::vector<FMatrix>& gens, int n, const DecomposeOptions& opt = {});

struct EndInfo {
    std::vector<FMatrix> basis;  // End(M)
    FMatrix radical;             // coordinates of J(End M)
    int top_dim = 0;             // dim End/J
    bool local = false;
};
EndInfo end_info(const Rep& m, const DecomposeOptions& opt = {});

struct Summand {
    Rep rep;
    FMatrix incl;  // M <- X
    FMatrix proj;  // X <- M, proj * incl = 1
};

/// Krull-Schmidt decomposition into indecomposable summands with split
/// inclusions and projections.  Summand order is deterministic.
std::vector<Summand> decompose(const Rep& m, const DecomposeOptions& opt = {});

}  // namespace tilthall
