#include "tilthall/catalog.hpp"

#include <algorithm>
#include <functional>

namespace tilthall {

using nlohmann::json;

int IsoCatalog::id_of(const ClassKey& k) const {
    auto it = index.find(k);
    return it == index.end() ? -1 : it->second;
}

long IsoCatalog::hall_number(int l, int m, int n) const {
    auto it = hall.find({l, m, n});
    return it == hall.end() ? 0 : it->second;
}

json IsoCatalog::to_json() const {
    json cls = json::array();
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const auto& c = classes[i];
        cls.push_back({{"id", i}, {"key", c.key}, {"dims", c.dims}, {"aut", c.aut.get_str()},
                       {"aut_crosschecked", c.aut_crosschecked}});
    }
    json conf = json::array();
    for (auto& r : conflations) conf.push_back({r.sub, r.mid, r.quot, r.count});
    return {{"algebra", algebra_hash}, {"dim_bound", dim_bound}, {"complete", complete},
            {"notes", notes},          {"classes", cls},         {"conflations", conf}};
}

std::optional<mpz_class> aut_order_exhaustive(const Rep& m, std::uint64_t cap) {
    const int t = m.total();
    if (t == 0) return mpz_class(1);
    auto hb = hom_basis(m, m);
    const int h = int(hb.size());
    const Elem q = m.field().q();
    long double size = 1;
    for (int i = 0; i < h; ++i) size *= q;
    if (size > static_cast<long double>(cap)) return std::nullopt;
    mpz_class count = 0;
    std::vector<Elem> co(h, 0);
    for (;;) {
        FMatrix f(m.field(), t, t);
        for (int i = 0; i < h; ++i)
            if (co[i]) f.add_scaled(hb[i], co[i]);
        if (rank(f) == t) ++count;
        int k = 0;
        while (k < h && ++co[k] == q) co[k++] = 0;
        if (k == h) break;
    }
    return count;
}

namespace {

// Sorted multisets of `pool` entries with the given total.
void multisets(const std::vector<std::pair<int, int>>& pool, int total, std::size_t start, ClassKey& cur,
               const std::function<void(const ClassKey&)>& emit) {
    if (total == 0) {
        ClassKey k = cur;
        std::sort(k.begin(), k.end());
        emit(k);
        return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
        if (pool[i].second > total) continue;
        cur.push_back(pool[i].first);
        multisets(pool, total - pool[i].second, i, cur, emit);
        cur.pop_back();
    }
}

}  // namespace

IsoCatalog build_catalog(Lab& lab, const CatalogOptions& opt) {
    if (opt.dim_bound < 1) throw Error("ShapeMismatch", "dimension bound must be positive");
    IsoCatalog cat;
    cat.lab = &lab;
    cat.dim_bound = opt.dim_bound;
    cat.algebra_hash = lab.alg->hash;
    const int D = opt.dim_bound;
    const Field& f = lab.field();
    const Elem q = f.q();

    // pool entries: (lab id, total)
    std::vector<std::pair<int, int>> pool;
    std::set<int> known;
    auto learn = [&](int id) {
        if (known.insert(id).second) pool.push_back({id, lab.indec(id).rep.total()});
    };
    for (int s : lab.simples()) learn(s);

    // every module of dimension n extends a simple socle summand by a
    // module of dimension n - 1, so closing under Ext^1(-, S) is complete
    for (int n = 2; n <= D; ++n) {
        std::vector<ClassKey> lower;
        ClassKey cur;
        auto snapshot = pool;
        multisets(snapshot, n - 1, 0, cur, [&](const ClassKey& k) { lower.push_back(k); });
        for (auto& xk : lower) {
            Rep x = lab.realize(xk);
            for (int s : lab.simples()) {
                const Rep sr = lab.indec(s).rep;
                ExtSpace es = ext_space(lab, x, sr, 1);
                const int e = es.dim;
                if (e == 0) continue;
                long double size = 1;
                for (int i = 0; i < e; ++i) size *= q;
                if (size > static_cast<long double>(opt.ext_enum_cap)) {
                    cat.complete = false;
                    cat.notes.push_back("Ext^1(" + key_string(xk) + ", " + std::to_string(s) + ") too large to walk");
                    continue;
                }
                // projective points suffice: scaling a cocycle keeps the middle term
                std::vector<Elem> co(e, 0);
                for (;;) {
                    int k = 0;
                    while (k < e && ++co[k] == q) co[k++] = 0;
                    if (k == e) break;
                    int lead = e - 1;
                    while (co[lead] == 0) --lead;
                    if (co[lead] != 1) continue;
                    FMatrix xi(f, sr.total(), es.cover.syzygy.total());
                    for (int i = 0; i < e; ++i)
                        if (co[i]) xi.add_scaled(es.cocycles[i], co[i]);
                    Extension ext = extension_from_cocycle(es.cover, x, sr, xi);
                    for (int id : lab.classify(ext.middle).ids) learn(id);
                }
            }
        }
    }
    std::sort(pool.begin(), pool.end());
    for (auto& [id, t] : pool)
        if (t <= D) cat.indecomposables.push_back(id);

    std::vector<std::pair<int, int>> small;
    for (auto& p : pool)
        if (p.second <= D) small.push_back(p);
    std::vector<ClassKey> keys{ClassKey{}};
    for (int n = 1; n <= D; ++n) {
        ClassKey cur;
        multisets(small, n, 0, cur, [&](const ClassKey& k) { keys.push_back(k); });
    }
    for (auto& k : keys) {
        CatalogClass c;
        c.key = k;
        c.total = lab.total_of(k);
        c.dims = lab.dims_of(k);
        cat.classes.push_back(std::move(c));
    }
    std::stable_sort(cat.classes.begin(), cat.classes.end(), [](const CatalogClass& a, const CatalogClass& b) {
        return std::tie(a.total, a.dims, a.key) < std::tie(b.total, b.dims, b.key);
    });
    for (int i = 0; i < cat.size(); ++i) cat.index[cat.classes[i].key] = i;

    for (auto& c : cat.classes) {
        c.aut = lab.aut_order(c.key);
        if (auto ex = aut_order_exhaustive(lab.realize(c.key), opt.aut_exhaust_cap)) {
            if (*ex != c.aut)
                throw Error("Internal", "automorphism counts disagree for " + key_string(c.key) + ": " +
                                            c.aut.get_str() + " vs " + ex->get_str());
            c.aut_crosschecked = true;
        }
    }

    if (!opt.index_conflations) return cat;
    for (int l = 1; l < cat.size(); ++l) {
        Rep lr = lab.realize(cat.key(l));
        std::vector<FMatrix> subs;
        try {
            subs = submodule_bases(lr, lab.opt.submodule_caps);
        } catch (const Error& e) {
            if (e.kind() != "CapExceeded") throw;
            cat.complete = false;
            cat.notes.push_back("submodules of class " + std::to_string(l) + ": " + e.what());
            continue;
        }
        std::map<std::pair<int, int>, ConflationRec> found;
        for (auto& u : subs) {
            const int sub = cat.id_of(lab.key_of(submodule(lr, u).rep));
            const int quot = cat.id_of(lab.key_of(quotient(lr, u).rep));
            if (sub < 0 || quot < 0) throw Error("Internal", "submodule class missing from the catalog");
            auto [it, fresh] = found.try_emplace({sub, quot});
            if (fresh) {
                it->second.sub = sub;
                it->second.mid = l;
                it->second.quot = quot;
                it->second.sub_basis = u;
            }
            ++it->second.count;
        }
        for (auto& [k, r] : found) {
            cat.hall[{l, r.quot, r.sub}] = r.count;
            cat.conflations.push_back(std::move(r));
        }
    }
    return cat;
}

}  // namespace tilthall
