#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "tilthall/decompose.hpp"

namespace tilthall {

/// Isomorphism class of a module: sorted multiset of indecomposable ids.
using ClassKey = std::vector<int>;

ClassKey key_sum(const ClassKey& a, const ClassKey& b);
std::string key_string(const ClassKey& k);

struct LabOptions {
    std::uint64_t seed = 0x5eed;
    std::uint64_t exhaust_cap = 1u << 16;
    int retry_cap = 64;
    SubmoduleCaps submodule_caps;
    int syzygy_bound = 24;
};

enum class Status { Yes, No, Unknown };
const char* status_name(Status s);

/// Three-valued answer with a replayable certificate.
struct Verdict {
    Status status = Status::Unknown;
    int bound_used = 0;
    nlohmann::json certificate = nlohmann::json::object();

    bool yes() const { return status == Status::Yes; }
    bool no() const { return status == Status::No; }
};

struct Fingerprint {
    std::vector<int> dims, top, soc, layers;
    int end_dim = 0;
    auto operator<=>(const Fingerprint&) const = default;
};

struct IndecInfo {
    Rep rep;
    Fingerprint fp;
    int end_top = 0;  // dim End / J
    bool projective = false;
};

struct Classified {
    ClassKey key;
    std::vector<Summand> parts;
    std::vector<int> ids;         // per part
    std::vector<FMatrix> to_canon;  // canonical rep(id) <- part, invertible
};

/// Left regular module with right multiplications as module endomorphisms.
struct RegularData {
    Rep rep;
    FMatrix basis;               // module coordinates -> algebra coordinates
    std::vector<FMatrix> right;  // R_b in module coordinates, one per basis element
};

/// Minimal projective cover P -> M with kernel inclusion.
struct Cover {
    Rep p;
    FMatrix epi;
    std::vector<int> vertices;  // summands P_v of P, in order
    Rep syzygy;
    FMatrix incl;  // syzygy -> P
};

struct ProjInfo {
    int vertex = 0;
    Rep rep;
    FMatrix emb;  // module coordinates -> algebra coordinates
    int id = -1;
};

/// Per-algebra registry of indecomposables with cached invariants.  Ids are
/// assigned in discovery order, so a fixed sequence of calls is reproducible.
class Lab {
public:
    explicit Lab(AlgebraPtr alg, LabOptions opt = {});

    AlgebraPtr alg;
    LabOptions opt;

    const Field& field() const { return alg->field; }
    int size() const { return int(indecs_.size()); }
    const IndecInfo& indec(int id) const { return indecs_.at(id); }

    /// Id of an indecomposable module, registering it when new; `iso`
    /// receives an isomorphism canonical rep <- x.
    int register_indec(const Rep& x, FMatrix* iso = nullptr);
    Classified classify(const Rep& m);
    ClassKey key_of(const Rep& m);
    Rep realize(const ClassKey& k);
    std::vector<int> dims_of(const ClassKey& k) const;
    int total_of(const ClassKey& k) const;

    /// Witness isomorphism n <- m, if any.
    std::optional<FMatrix> iso(const Rep& m, const Rep& n);

    int hom(int i, int j);
    int hom(const ClassKey& a, const ClassKey& b);
    int end_dim(const ClassKey& a) { return hom(a, a); }
    mpz_class aut_order(const ClassKey& k);
    mpz_class q_pow(long e) const;

    const std::vector<ProjInfo>& projectives();
    /// Simple tops of the indecomposable projectives, by vertex.
    const std::vector<int>& simples();
    int regular_id_count();
    ClassKey regular_key();
    bool is_projective(int id);

    Lab& op();
    const RegularData& regular();

    /// Cover of a registered indecomposable (cached).
    const Cover& cover(int id);

    // caches filled by homlab
    std::map<std::pair<int, int>, int> ext1_cache;
    std::map<int, ClassKey> omega_cache;
    std::map<int, Verdict> gp_cache;
    std::map<int, ClassKey> dual_cache;  // a-dual over the opposite algebra

private:
    Fingerprint fingerprint(const Rep& x, int end_dim);
    std::deque<IndecInfo> indecs_;  // stable references across registration
    std::multimap<Fingerprint, int> by_fp_;
    std::map<std::pair<int, int>, int> hom_cache_;
    std::optional<std::vector<ProjInfo>> proj_;
    std::optional<std::vector<int>> simples_;
    std::unique_ptr<Lab> op_;
    std::optional<RegularData> regular_;
    std::map<int, Cover> cover_cache_;
};

/// Projective cover built from a basis of the top, one P_v per top vector.
Cover projective_cover(Lab& lab, const Rep& m);

/// GL_n(F_Q) order.
mpz_class gl_order(long n, const mpz_class& Q);

}  // namespace tilthall
