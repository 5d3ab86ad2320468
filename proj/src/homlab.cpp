#include "tilthall/homlab.hpp"

#include <algorithm>

namespace tilthall {

using nlohmann::json;

ProjResolution projective_resolution(Lab& lab, const Rep& m, int n) {
    ProjResolution r;
    r.target = m;
    Rep cur = m;
    for (int i = 0; i <= n; ++i) {
        Cover c = projective_cover(lab, cur);
        r.terms.push_back(c.p);
        if (i == 0)
            r.maps.push_back(c.epi);
        else
            r.maps.push_back(r.incls.back() * c.epi);
        r.kernels.push_back(c.syzygy);
        r.incls.push_back(c.incl);
        cur = c.syzygy;
    }
    return r;
}

namespace {

// rank of {f o d : f in Hom(P, N)} inside the matrix space
int precompose_rank(const Rep& p, const Rep& n, const FMatrix& d) {
    auto hb = hom_basis(p, n);
    if (hb.empty() || d.cols() == 0) return 0;
    FMatrix flat(n.field(), n.total() * d.cols(), 0);
    for (auto& f : hb) flat = FMatrix::hstack(flat, flatten(f * d));
    return rank(flat);
}

}  // namespace

ExtSpace ext_space(Lab& lab, const Rep& m, const Rep& n, int i) {
    if (i < 0) throw Error("ShapeMismatch", "negative Ext degree");
    if (!same_algebra(m, n)) throw Error("AlgebraMismatch", "modules over different algebras");
    ExtSpace out;
    if (i == 0) {
        out.dim = hom_dim(m, n);
        return out;
    }
    ProjResolution res = projective_resolution(lab, m, i + 1);
    const Rep& pi = res.terms[i];
    const int h = hom_dim(pi, n);
    out.dim = h - precompose_rank(pi, n, res.maps[i + 1]) - precompose_rank(res.terms[i - 1], n, res.maps[i]);
    if (i == 1) {
        out.cover = projective_cover(lab, m);
        const Cover& c = out.cover;
        const Rep& om = c.syzygy;
        FMatrix span(n.field(), n.total() * om.total(), 0);
        for (auto& f : hom_basis(c.p, n)) span = FMatrix::hstack(span, flatten(f * c.incl));
        span = column_basis(span);
        for (auto& g : hom_basis(om, n)) {
            FMatrix fg = flatten(g);
            if (in_span(span, fg)) continue;
            span = FMatrix::hstack(span, fg);
            out.cocycles.push_back(g);
        }
        if (int(out.cocycles.size()) != out.dim)
            throw Error("Internal", "Ext^1 from the syzygy disagrees with the resolution complex");
    }
    return out;
}

Extension extension_from_cocycle(const Cover& cover, const Rep& m, const Rep& n, const FMatrix& xi) {
    Pushout po = pushout(cover.syzygy, cover.p, n, cover.incl, xi);
    Extension e;
    e.middle = po.rep;
    e.from_n = po.from_y;
    FMatrix w = FMatrix::hstack(po.from_x, po.from_y);
    FMatrix rhs = FMatrix::hstack(cover.epi, FMatrix(m.field(), m.total(), n.total()));
    SolveResult s = solve(w.transpose(), rhs.transpose());
    if (!s.consistent) throw Error("Internal", "projection of the middle term does not factor");
    e.to_m = s.particular.transpose();
    return e;
}

ClassKey omega_key(Lab& lab, int id) {
    auto it = lab.omega_cache.find(id);
    if (it != lab.omega_cache.end()) return it->second;
    ClassKey k = lab.key_of(lab.cover(id).syzygy);
    lab.omega_cache[id] = k;
    return k;
}

ClassKey omega_key(Lab& lab, const ClassKey& k) {
    ClassKey r;
    for (int id : k) r = key_sum(r, omega_key(lab, id));
    return r;
}

int ext1_dim(Lab& lab, int i, int j) {
    auto it = lab.ext1_cache.find({i, j});
    if (it != lab.ext1_cache.end()) return it->second;
    ClassKey p;
    for (int v : lab.cover(i).vertices) p.push_back(lab.projectives()[v].id);
    std::sort(p.begin(), p.end());
    const int d = lab.hom(omega_key(lab, i), ClassKey{j}) - lab.hom(p, ClassKey{j}) + lab.hom(i, j);
    lab.ext1_cache[{i, j}] = d;
    return d;
}

int ext1_dim(Lab& lab, const ClassKey& a, const ClassKey& b) {
    int s = 0;
    for (int i : a)
        for (int j : b) s += ext1_dim(lab, i, j);
    return s;
}

int ext_dim(Lab& lab, const ClassKey& a, const ClassKey& b, int i) {
    if (i == 0) return lab.hom(a, b);
    ClassKey cur = a;
    for (int k = 1; k < i; ++k) cur = omega_key(lab, cur);
    return ext1_dim(lab, cur, b);
}

json SyzygyChain::to_json() const {
    json j;
    j["levels"] = levels;
    j["repeat_from"] = repeat_from;
    j["terminated"] = terminated;
    j["exhausted"] = exhausted;
    return j;
}

namespace {

std::vector<int> unique_ids(const ClassKey& k) {
    std::vector<int> u(k);
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
}

// Walks the level sets; visit returns false to stop early.
template <class Visit>
SyzygyChain walk(Lab& lab, const ClassKey& start, int bound, Visit visit) {
    SyzygyChain ch;
    ch.levels.push_back(unique_ids(start));
    for (;;) {
        const int k = int(ch.levels.size()) - 1;
        const auto& cur = ch.levels.back();
        if (cur.empty()) {
            ch.terminated = true;
            break;
        }
        for (int j = 0; j < k; ++j)
            if (ch.levels[j] == cur) ch.repeat_from = j;
        if (ch.repeat_from >= 0) break;
        if (!visit(k, cur)) break;
        if (k >= bound) {
            ch.exhausted = true;
            break;
        }
        ClassKey next;
        for (int id : cur) next = key_sum(next, omega_key(lab, id));
        ch.levels.push_back(unique_ids(next));
    }
    return ch;
}

}  // namespace

SyzygyChain syzygy_chain(Lab& lab, const ClassKey& start, int bound) {
    return walk(lab, start, bound, [](int, const std::vector<int>&) { return true; });
}

DimVerdict proj_dim(Lab& lab, const ClassKey& k, int bound) {
    DimVerdict d;
    SyzygyChain ch = syzygy_chain(lab, k, bound);
    d.bound_used = int(ch.levels.size()) - 1;
    d.certificate["chain"] = ch.to_json();
    if (ch.terminated) {
        d.status = Status::Yes;
        d.value = int(ch.levels.size()) - 2;
    } else if (ch.repeat_from >= 0) {
        d.infinite = true;
    }
    return d;
}

Verdict in_perp(Lab& lab, const ClassKey& m, const ClassKey& t, int bound) {
    Verdict v;
    json table = json::array();
    const ClassKey tu = unique_ids(t);
    SyzygyChain ch = walk(lab, m, bound, [&](int k, const std::vector<int>& level) {
        for (int l : level)
            for (int j : tu) {
                const int d = ext1_dim(lab, l, j);
                table.push_back({k + 1, l, j, d});
                if (d > 0 && v.status != Status::No) {
                    v.status = Status::No;
                    v.certificate["witness"] = {{"degree", k + 1}, {"syzygy_class", l}, {"target_class", j}, {"ext_dim", d}};
                }
            }
        return v.status != Status::No;
    });
    v.bound_used = int(ch.levels.size()) - 1;
    v.certificate["chain"] = ch.to_json();
    v.certificate["ext_table"] = table;
    if (v.status != Status::No && (ch.terminated || ch.repeat_from >= 0)) v.status = Status::Yes;
    return v;
}

Verdict in_perp(Lab& lab, const Rep& m, const Rep& t, int bound) {
    if (!same_algebra(m, t)) throw Error("AlgebraMismatch", "modules over different algebras");
    return in_perp(lab, lab.key_of(m), lab.key_of(t), bound);
}

Verdict sgp_verdict(Lab& lab, const ClassKey& m, int bound) { return in_perp(lab, m, lab.regular_key(), bound); }

Verdict verdict_and(std::vector<Verdict> parts) {
    Verdict out;
    out.status = Status::Yes;
    json certs = json::array();
    for (auto& p : parts) {
        out.bound_used = std::max(out.bound_used, p.bound_used);
        if (p.status == Status::No) {
            out.status = Status::No;
        } else if (p.status == Status::Unknown && out.status == Status::Yes) {
            out.status = Status::Unknown;
        }
        certs.push_back({{"status", status_name(p.status)}, {"certificate", p.certificate}});
    }
    out.certificate["parts"] = certs;
    return out;
}

HomModule hom_into(const Rep& x, const Rep& t, const AlgebraPtr& s, const std::vector<FMatrix>& phi) {
    const Field& f = x.field();
    auto hb = hom_basis(x, t);
    HomModule out;
    const int h = int(hb.size());
    FMatrix flat(f, t.total() * x.total(), 0);
    for (auto& g : hb) flat = FMatrix::hstack(flat, flatten(g));
    if (h == 0) {
        out.rep = zero_rep(s);
        out.flat = flat;
        return out;
    }
    std::vector<FMatrix> act;
    for (int b = 0; b < s->dim; ++b) {
        FMatrix img(f, flat.rows(), 0);
        for (auto& g : hb) img = FMatrix::hstack(img, flatten(phi[b] * g));
        act.push_back(coordinates(flat, img));
    }
    FMatrix p;
    out.rep = rep_from_actions(s, act, &p, true);
    out.flat = flat * p;
    for (int j = 0; j < h; ++j) out.maps.push_back(unflatten(out.flat.column(j), t.total(), x.total()));
    return out;
}

HomModule hom_from(const Rep& t, const Rep& x, const AlgebraPtr& s, const std::vector<FMatrix>& phi) {
    const Field& f = x.field();
    auto hb = hom_basis(t, x);
    HomModule out;
    const int h = int(hb.size());
    FMatrix flat(f, x.total() * t.total(), 0);
    for (auto& g : hb) flat = FMatrix::hstack(flat, flatten(g));
    if (h == 0) {
        out.rep = zero_rep(s);
        out.flat = flat;
        return out;
    }
    std::vector<FMatrix> act;
    for (int b = 0; b < s->dim; ++b) {
        FMatrix img(f, flat.rows(), 0);
        for (auto& g : hb) img = FMatrix::hstack(img, flatten(g * phi[b]));
        act.push_back(coordinates(flat, img));
    }
    FMatrix p;
    out.rep = rep_from_actions(s, act, &p, true);
    out.flat = flat * p;
    for (int j = 0; j < h; ++j) out.maps.push_back(unflatten(out.flat.column(j), x.total(), t.total()));
    return out;
}

FMatrix hom_into_map(const HomModule& fx, const HomModule& fx2, const FMatrix& h) {
    FMatrix out(h.field(), fx.rep.total(), fx2.rep.total());
    for (int j = 0; j < fx2.rep.total(); ++j) {
        FMatrix c = coordinates(fx.flat, flatten(fx2.maps[j] * h));
        out.set_block(0, j, c);
    }
    return out;
}

FMatrix hom_from_map(const HomModule& gx, const HomModule& gx2, const FMatrix& h) {
    FMatrix out(h.field(), gx2.rep.total(), gx.rep.total());
    for (int j = 0; j < gx.rep.total(); ++j) {
        FMatrix c = coordinates(gx2.flat, flatten(h * gx.maps[j]));
        out.set_block(0, j, c);
    }
    return out;
}

SigmaResult sigma_map(const Rep& x, const Rep& t, const AlgebraPtr& s, const std::vector<FMatrix>& phi) {
    SigmaResult r;
    const Field& f = x.field();
    r.fx = hom_into(x, t, s, phi);
    r.ts = rep_from_actions(s, phi, &r.ts_basis, true);
    FMatrix pinv = inverse(r.ts_basis);
    std::vector<FMatrix> phi_r;
    for (auto& a : t.act) phi_r.push_back(pinv * a * r.ts_basis);
    r.gfx = hom_into(r.fx.rep, r.ts, x.alg, phi_r);
    const int ny = r.fx.rep.total();
    r.sigma = FMatrix(f, r.gfx.rep.total(), x.total());
    for (int j = 0; j < x.total(); ++j) {
        FMatrix g(f, r.ts.total(), ny);
        for (int i = 0; i < ny; ++i) g.set_block(0, i, pinv * r.fx.maps[i].column(j));
        r.sigma.set_block(0, j, coordinates(r.gfx.flat, flatten(g)));
    }
    r.iso = r.sigma.rows() == r.sigma.cols() && rank(r.sigma) == x.total();
    return r;
}

HomModule a_dual(Lab& lab, const Rep& x) {
    const RegularData& reg = lab.regular();
    return hom_into(x, reg.rep, lab.op().alg, reg.right);
}

Rep transpose_dual(Lab& lab, const Rep& m) {
    Cover c0 = projective_cover(lab, m);
    Cover c1 = projective_cover(lab, c0.syzygy);
    FMatrix d = c0.incl * c1.epi;
    HomModule f0 = a_dual(lab, c0.p), f1 = a_dual(lab, c1.p);
    FMatrix fd = hom_into_map(f1, f0, d);
    return cokernel(f0.rep, f1.rep, fd).rep;
}

Verdict gp_verdict(Lab& lab, int id, int bound) {
    auto it = lab.gp_cache.find(id);
    if (it != lab.gp_cache.end() && it->second.status != Status::Unknown) return it->second;
    Verdict v;
    if (lab.is_projective(id)) {
        v.status = Status::Yes;
        v.certificate["projective"] = true;
        lab.gp_cache[id] = v;
        return v;
    }
    Verdict sgp = sgp_verdict(lab, ClassKey{id}, bound);
    if (sgp.no()) {
        v = verdict_and({sgp});
        lab.gp_cache[id] = v;
        return v;
    }
    const RegularData& reg = lab.regular();
    Lab& op = lab.op();
    SigmaResult sr = sigma_map(lab.indec(id).rep, reg.rep, op.alg, reg.right);
    Verdict refl;
    refl.status = sr.iso ? Status::Yes : Status::No;
    refl.certificate["sigma"] = matrix_to_json(sr.sigma);
    ClassKey dual = op.key_of(sr.fx.rep);
    lab.dual_cache[id] = dual;
    Verdict dual_sgp = sgp_verdict(op, dual, bound);
    dual_sgp.certificate["dual_key"] = dual;
    v = verdict_and({sgp, dual_sgp, refl});
    lab.gp_cache[id] = v;
    return v;
}

Verdict gp_verdict(Lab& lab, const ClassKey& m, int bound) {
    std::vector<Verdict> parts;
    for (int id : unique_ids(m)) {
        parts.push_back(gp_verdict(lab, id, bound));
        if (parts.back().no()) break;
    }
    return verdict_and(parts);
}

Verdict cogen_star_test(Lab& lab_a, Lab& lab_e, const BimoduleData& data, int id, int bound) {
    SigmaResult sr = sigma_map(lab_a.indec(id).rep, data.t, data.e, data.endo);
    Verdict refl;
    refl.status = sr.iso ? Status::Yes : Status::No;
    refl.certificate["sigma"] = matrix_to_json(sr.sigma);
    if (refl.no()) return verdict_and({refl});
    Verdict perp = in_perp(lab_e, lab_e.key_of(sr.fx.rep), lab_e.key_of(data.t_e), bound);
    return verdict_and({refl, perp});
}

Verdict w_membership(Lab& lab_a, Lab& lab_e, const BimoduleData& data, int id, int bound) {
    Verdict perp = in_perp(lab_a, ClassKey{id}, lab_a.key_of(data.t), bound);
    if (perp.no()) return verdict_and({perp});
    return verdict_and({perp, cogen_star_test(lab_a, lab_e, data, id, bound)});
}

bool SubcatSpec::resolving() const {
    switch (tag) {
        case Tag::AddOf: return false;
        case Tag::Intersection:
            return std::all_of(parts.begin(), parts.end(), [](const SubcatSpec& p) { return p.resolving(); });
        default: return true;
    }
}

std::string SubcatSpec::name() const {
    switch (tag) {
        case Tag::All: return "all";
        case Tag::Projectives: return "proj";
        case Tag::GP: return "GP";
        case Tag::SGP: return "SGP";
        case Tag::PerpT: return "perp" + key_string(t);
        case Tag::WT: return "W(T)";
        case Tag::PdimLE: return "P<=" + std::to_string(n);
        case Tag::GPdimLE: return "GP<=" + std::to_string(n);
        case Tag::SGPdimLE: return "SGP<=" + std::to_string(n);
        case Tag::AddOf: return "add" + key_string(t);
        case Tag::Intersection: {
            std::string s;
            for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " & " : "") + parts[i].name();
            return "(" + s + ")";
        }
    }
    return "?";
}

namespace {

Verdict from_bool(bool b) {
    Verdict v;
    v.status = b ? Status::Yes : Status::No;
    return v;
}

Verdict dim_at_most(const DimVerdict& d, int n) {
    Verdict v;
    v.bound_used = d.bound_used;
    v.certificate = d.certificate;
    if (d.status == Status::Yes)
        v.status = d.value <= n ? Status::Yes : Status::No;
    else if (d.infinite)
        v.status = Status::No;
    return v;
}

}  // namespace

Verdict member(Lab& lab, const SubcatSpec& x, int id, int bound) {
    using Tag = SubcatSpec::Tag;
    switch (x.tag) {
        case Tag::All: return from_bool(true);
        case Tag::Projectives: return from_bool(lab.is_projective(id));
        case Tag::GP: return gp_verdict(lab, id, bound);
        case Tag::SGP: return sgp_verdict(lab, ClassKey{id}, bound);
        case Tag::PerpT: return in_perp(lab, ClassKey{id}, x.t, bound);
        case Tag::WT:
            if (!x.wt) throw Error("UnsupportedSpec", "W(T) membership needs bimodule data");
            return x.wt(id);
        case Tag::PdimLE: return dim_at_most(proj_dim(lab, ClassKey{id}, bound), x.n);
        case Tag::GPdimLE: return dim_at_most(res_dim(lab, ClassKey{id}, SubcatSpec::of(Tag::GP), bound), x.n);
        case Tag::SGPdimLE: return dim_at_most(res_dim(lab, ClassKey{id}, SubcatSpec::of(Tag::SGP), bound), x.n);
        case Tag::AddOf: return from_bool(std::binary_search(x.t.begin(), x.t.end(), id));
        case Tag::Intersection: {
            std::vector<Verdict> parts;
            for (auto& p : x.parts) {
                parts.push_back(member(lab, p, id, bound));
                if (parts.back().no()) break;
            }
            return verdict_and(parts);
        }
    }
    throw Error("UnsupportedSpec", "unknown subcategory tag");
}

Verdict member(Lab& lab, const SubcatSpec& x, const ClassKey& k, int bound) {
    std::vector<Verdict> parts;
    for (int id : unique_ids(k)) {
        parts.push_back(member(lab, x, id, bound));
        if (parts.back().no()) break;
    }
    return verdict_and(parts);
}

DimVerdict res_dim(Lab& lab, const ClassKey& m, const SubcatSpec& x, int bound) {
    if (!x.resolving()) throw Error("NotResolvingSpec", x.name() + " is not resolving");
    DimVerdict d;
    bool undecided = false;
    json trail = json::array();
    SyzygyChain ch = walk(lab, m, bound, [&](int k, const std::vector<int>& level) {
        Verdict v = member(lab, x, ClassKey(level.begin(), level.end()), bound);
        trail.push_back({{"level", k}, {"status", status_name(v.status)}});
        if (v.yes()) {
            d.status = Status::Yes;
            d.value = k;
            return false;
        }
        if (v.status == Status::Unknown) {
            undecided = true;
            return false;
        }
        return true;
    });
    d.bound_used = int(ch.levels.size()) - 1;
    d.certificate["chain"] = ch.to_json();
    d.certificate["levels"] = trail;
    if (d.status == Status::Yes || undecided) return d;
    if (ch.terminated) {
        d.status = Status::Yes;
        d.value = int(ch.levels.size()) - 1;
    } else if (ch.repeat_from >= 0) {
        d.infinite = true;
    }
    return d;
}

}  // namespace tilthall
