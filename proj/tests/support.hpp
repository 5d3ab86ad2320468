#pragma once

#include <string>
#include <vector>

#include "tilthall/homlab.hpp"

namespace fx {

inline tilthall::AlgebraPtr load(const std::string& name) {
    return tilthall::load_algebra(std::string(TILTHALL_FIXTURES) + "/" + name + ".json");
}

inline tilthall::Rep load_rep(const tilthall::AlgebraPtr& a, const std::string& name) {
    return tilthall::load_rep(a, std::string(TILTHALL_FIXTURES) + "/" + name + ".json");
}

/// Representation from row lists, one matrix per arrow.
inline tilthall::Rep quiver(const tilthall::AlgebraPtr& a, std::vector<int> dims,
                            const std::vector<std::vector<std::vector<tilthall::Elem>>>& mats) {
    std::vector<tilthall::FMatrix> m;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        const auto& ar = a->arrows[i];
        tilthall::FMatrix x(a->field, dims[ar.to], dims[ar.from]);
        for (std::size_t r = 0; r < mats[i].size(); ++r)
            for (std::size_t c = 0; c < mats[i][r].size(); ++c) x.at(int(r), int(c)) = mats[i][r][c];
        m.push_back(x);
    }
    return tilthall::rep_from_quiver(a, dims, m);
}

}  // namespace fx
