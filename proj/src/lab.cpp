#include "tilthall/lab.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace tilthall {

ClassKey key_sum(const ClassKey& a, const ClassKey& b) {
    ClassKey r;
    r.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

std::string key_string(const ClassKey& k) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
    os << "]";
    return os.str();
}

mpz_class gl_order(long n, const mpz_class& Q) {
    mpz_class r = 1, qn, qk = 1;
    mpz_pow_ui(qn.get_mpz_t(), Q.get_mpz_t(), static_cast<unsigned long>(n));
    for (long k = 0; k < n; ++k) {
        r *= qn - qk;
        qk *= Q;
    }
    return r;
}

const char* status_name(Status s) {
    switch (s) {
        case Status::Yes: return "yes";
        case Status::No: return "no";
        default: return "unknown";
    }
}

Lab::Lab(AlgebraPtr a, LabOptions o) : alg(std::move(a)), opt(o) {}

namespace {

DecomposeOptions dopt(const LabOptions& o) {
    DecomposeOptions d;
    d.seed = o.seed;
    d.exhaust_cap = o.exhaust_cap;
    d.random_tries = o.retry_cap;
    return d;
}

FMatrix socle_subspace(const Rep& m) {
    const FMatrix& rad = m.alg->radical;
    FMatrix stack(m.field(), 0, m.total());
    for (int c = 0; c < rad.cols(); ++c) stack = FMatrix::vstack(stack, m.act_elem(rad.column_values(c)));
    if (stack.rows() == 0) return FMatrix::identity(m.field(), m.total());
    return adapt_subspace(m, nullspace(stack));
}

std::vector<int> per_vertex(const Rep& m, const FMatrix& adapted) {
    std::vector<int> d(m.alg->num_vertices(), 0);
    for (int c = 0; c < adapted.cols(); ++c)
        for (int v = 0; v < m.alg->num_vertices(); ++v) {
            bool hit = false;
            for (int i = 0; i < m.dims[v]; ++i)
                if (adapted(m.offset(v) + i, c)) hit = true;
            if (hit) {
                ++d[v];
                break;
            }
        }
    return d;
}

}  // namespace

Fingerprint Lab::fingerprint(const Rep& x, int end_dim) {
    Fingerprint fp;
    fp.dims = x.dims;
    fp.end_dim = end_dim;
    FMatrix r = radical_subspace(x);
    auto rd = per_vertex(x, r);
    for (std::size_t v = 0; v < rd.size(); ++v) fp.top.push_back(x.dims[v] - rd[v]);
    fp.soc = per_vertex(x, socle_subspace(x));
    // Loewy layers: dims of J^k M
    FMatrix cur = FMatrix::identity(x.field(), x.total());
    const FMatrix& rad = alg->radical;
    while (cur.cols() > 0) {
        fp.layers.push_back(cur.cols());
        FMatrix next(x.field(), x.total(), 0);
        for (int c = 0; c < rad.cols(); ++c) next = FMatrix::hstack(next, x.act_elem(rad.column_values(c)) * cur);
        FMatrix nb = column_basis(next);
        if (nb.cols() == cur.cols()) break;
        cur = nb;
    }
    return fp;
}

int Lab::register_indec(const Rep& x, FMatrix* iso) {
    if (!same_algebra(x, Rep{alg, {}, {}})) throw Error("AlgebraMismatch", "module over a different algebra");
    const int ed = hom_dim(x, x);
    Fingerprint fp = fingerprint(x, ed);
    auto range = by_fp_.equal_range(fp);
    for (auto it = range.first; it != range.second; ++it) {
        const Rep& canon = indecs_[it->second].rep;
        for (auto& f : hom_basis(x, canon)) {
            if (rank(f) == x.total()) {
                if (iso) *iso = f;
                return it->second;
            }
        }
    }
    IndecInfo info;
    info.rep = x;
    info.rep.alg = alg;
    info.fp = fp;
    EndInfo e = end_info(x, dopt(opt));
    if (!e.local) throw Error("Internal", "register_indec called on a decomposable module");
    info.end_top = e.top_dim;
    const int id = int(indecs_.size());
    indecs_.push_back(info);
    by_fp_.insert({fp, id});
    hom_cache_[{id, id}] = ed;
    if (iso) *iso = FMatrix::identity(field(), x.total());
    return id;
}

Classified Lab::classify(const Rep& m) {
    Classified c;
    c.parts = decompose(m, dopt(opt));
    for (auto& p : c.parts) {
        FMatrix w;
        c.ids.push_back(register_indec(p.rep, &w));
        c.to_canon.push_back(w);
    }
    c.key = c.ids;
    std::sort(c.key.begin(), c.key.end());
    return c;
}

ClassKey Lab::key_of(const Rep& m) { return classify(m).key; }

Rep Lab::realize(const ClassKey& k) {
    if (k.empty()) return zero_rep(alg);
    std::vector<Rep> parts;
    for (int id : k) parts.push_back(indecs_.at(id).rep);
    if (parts.size() == 1) return parts[0];
    return direct_sum(parts).rep;
}

std::vector<int> Lab::dims_of(const ClassKey& k) const {
    std::vector<int> d(alg->num_vertices(), 0);
    for (int id : k)
        for (std::size_t v = 0; v < d.size(); ++v) d[v] += indecs_.at(id).rep.dims[v];
    return d;
}

int Lab::total_of(const ClassKey& k) const {
    int t = 0;
    for (int id : k) t += indecs_.at(id).rep.total();
    return t;
}

std::optional<FMatrix> Lab::iso(const Rep& m, const Rep& n) {
    if (!same_algebra(m, n)) throw Error("AlgebraMismatch", "modules over different algebras");
    if (m.dims != n.dims) return std::nullopt;
    const int t = m.total();
    if (t == 0) return FMatrix(field(), 0, 0);
    auto hb = hom_basis(m, n);
    const int h = int(hb.size());
    if (h == 0) return std::nullopt;
    const Elem q = field().q();
    long double size = 1;
    for (int i = 0; i < h && size <= opt.exhaust_cap; ++i) size *= q;
    if (size <= static_cast<long double>(opt.exhaust_cap)) {
        std::vector<Elem> co(h, 0);
        for (;;) {
            int k = 0;
            while (k < h && ++co[k] == q) co[k++] = 0;
            if (k == h) break;
            FMatrix f(field(), n.total(), t);
            for (int i = 0; i < h; ++i)
                if (co[i]) f.add_scaled(hb[i], co[i]);
            if (rank(f) == t) return f;
        }
        return std::nullopt;
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<Elem> dist(0, q - 1);
    for (int r = 0; r < opt.retry_cap; ++r) {
        FMatrix f(field(), n.total(), t);
        for (int i = 0; i < h; ++i) f.add_scaled(hb[i], dist(rng));
        if (rank(f) == t) return f;
    }
    // Krull-Schmidt decision: exact, with an assembled witness
    Classified a = classify(m), b = classify(n);
    if (a.key != b.key) return std::nullopt;
    std::vector<char> used(b.parts.size(), 0);
    FMatrix w(field(), n.total(), t);
    for (std::size_t i = 0; i < a.parts.size(); ++i) {
        std::size_t j = 0;
        while (used[j] || b.ids[j] != a.ids[i]) ++j;
        used[j] = 1;
        // n <- part_j <- canon <- part_i <- m
        w = w + b.parts[j].incl * inverse(b.to_canon[j]) * a.to_canon[i] * a.parts[i].proj;
    }
    return w;
}

int Lab::hom(int i, int j) {
    auto it = hom_cache_.find({i, j});
    if (it != hom_cache_.end()) return it->second;
    int d = hom_dim(indecs_.at(i).rep, indecs_.at(j).rep);
    hom_cache_[{i, j}] = d;
    return d;
}

int Lab::hom(const ClassKey& a, const ClassKey& b) {
    int s = 0;
    for (int i : a)
        for (int j : b) s += hom(i, j);
    return s;
}

mpz_class Lab::q_pow(long e) const {
    if (e < 0) throw Error("Internal", "negative exponent in q_pow");
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), field().q(), static_cast<unsigned long>(e));
    return r;
}

mpz_class Lab::aut_order(const ClassKey& k) {
    std::map<int, long> mult;
    for (int id : k) ++mult[id];
    long dim_end = 0;
    for (auto& [i, ni] : mult)
        for (auto& [j, nj] : mult) dim_end += ni * nj * hom(i, j);
    long expo = dim_end;
    mpz_class prod = 1;
    for (auto& [i, ni] : mult) {
        long r = indecs_.at(i).end_top;
        expo -= ni * ni * r;
        prod *= gl_order(ni, q_pow(r));
    }
    return q_pow(expo) * prod;
}

const std::vector<ProjInfo>& Lab::projectives() {
    if (proj_) return *proj_;
    std::vector<ProjInfo> out;
    const Algebra& a = *alg;
    for (int v = 0; v < a.num_vertices(); ++v) {
        FMatrix s = column_basis(a.right_mult(a.idempotents[v]));
        std::vector<FMatrix> act;
        for (int b = 0; b < a.dim; ++b) act.push_back(coordinates(s, a.left_mult(a.basis_vector(b)) * s));
        FMatrix p;
        ProjInfo info;
        info.vertex = v;
        info.rep = rep_from_actions(alg, act, &p, false);
        info.emb = s * p;
        info.id = register_indec(info.rep);
        // keep the computed basis so that emb stays valid for the registered id
        if (indecs_[info.id].rep.act != info.rep.act) {
            FMatrix w;
            register_indec(info.rep, &w);
            info.rep = indecs_[info.id].rep;
            info.emb = info.emb * inverse(w);
        }
        indecs_[info.id].projective = true;
        out.push_back(info);
    }
    proj_ = out;
    return *proj_;
}

const std::vector<int>& Lab::simples() {
    if (simples_) return *simples_;
    std::vector<int> out;
    for (auto& p : projectives()) {
        QuotRep top = quotient(p.rep, radical_subspace(p.rep));
        out.push_back(register_indec(top.rep));
    }
    simples_ = out;
    return *simples_;
}

ClassKey Lab::regular_key() {
    ClassKey k;
    for (auto& p : projectives()) k.push_back(p.id);
    std::sort(k.begin(), k.end());
    return k;
}

int Lab::regular_id_count() { return int(regular_key().size()); }

bool Lab::is_projective(int id) {
    projectives();
    return indecs_.at(id).projective;
}

Lab& Lab::op() {
    if (!op_) op_ = std::make_unique<Lab>(opposite(alg), opt);
    return *op_;
}

const RegularData& Lab::regular() {
    if (regular_) return *regular_;
    RegularData r;
    r.rep = regular_module(alg, &r.basis);
    FMatrix inv = inverse(r.basis);
    for (int b = 0; b < alg->dim; ++b) r.right.push_back(inv * alg->right_mult(alg->basis_vector(b)) * r.basis);
    regular_ = std::move(r);
    return *regular_;
}

Cover projective_cover(Lab& lab, const Rep& m) {
    Cover c;
    const Field& f = m.field();
    const auto& projs = lab.projectives();
    FMatrix span = radical_subspace(m);
    std::vector<Rep> parts;
    std::vector<FMatrix> cols;
    for (int v = 0; v < m.alg->num_vertices(); ++v) {
        for (int i = 0; i < m.dims[v]; ++i) {
            FMatrix e(f, m.total(), 1);
            e.at(m.offset(v) + i, 0) = 1;
            if (in_span(span, e)) continue;
            span = FMatrix::hstack(span, e);
            const ProjInfo& p = projs[v];
            FMatrix map(f, m.total(), p.rep.total());
            for (int j = 0; j < p.rep.total(); ++j) {
                FMatrix img = m.act_elem(p.emb.column_values(j)) * e;
                for (int r = 0; r < m.total(); ++r) map.at(r, j) = img(r, 0);
            }
            parts.push_back(p.rep);
            cols.push_back(map);
            c.vertices.push_back(v);
        }
    }
    if (parts.empty()) {
        c.p = zero_rep(m.alg);
        c.epi = FMatrix(f, m.total(), 0);
    } else {
        SumRep s = direct_sum(parts);
        c.p = s.rep;
        c.epi = FMatrix(f, m.total(), c.p.total());
        for (std::size_t k = 0; k < parts.size(); ++k) c.epi = c.epi + cols[k] * s.proj[k];
    }
    SubRep k = kernel(c.p, m, c.epi);
    c.syzygy = k.rep;
    c.incl = k.incl;
    return c;
}

const Cover& Lab::cover(int id) {
    auto it = cover_cache_.find(id);
    if (it != cover_cache_.end()) return it->second;
    Cover c = projective_cover(*this, indecs_.at(id).rep);
    return cover_cache_.emplace(id, std::move(c)).first->second;
}

}  // namespace tilthall
