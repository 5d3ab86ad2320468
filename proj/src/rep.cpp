#include "tilthall/rep.hpp"

#include <fstream>
#include <cmath>
#include <functional>

namespace tilthall {

using nlohmann::json;

int Rep::total() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
}

int Rep::offset(int v) const {
    int t = 0;
    for (int i = 0; i < v; ++i) t += dims[i];
    return t;
}

FMatrix Rep::act_elem(const std::vector<Elem>& x) const {
    FMatrix r(field(), total(), total());
    for (int b = 0; b < alg->dim; ++b)
        if (x[b]) r.add_scaled(act[b], x[b]);
    return r;
}

Rep zero_rep(const AlgebraPtr& alg) {
    Rep r;
    r.alg = alg;
    r.dims.assign(alg->num_vertices(), 0);
    for (int b = 0; b < alg->dim; ++b) r.act.emplace_back(alg->field, 0, 0);
    return r;
}

void check_module(const Rep& m) {
    const Algebra& a = *m.alg;
    const int n = m.total();
    if (int(m.act.size()) != a.dim) throw Error("ShapeMismatch", "one action matrix per basis element expected");
    for (auto& x : m.act)
        if (x.rows() != n || x.cols() != n) throw Error("ShapeMismatch", "action matrix has wrong size");
    if (m.act_elem(a.unit) != FMatrix::identity(a.field, n))
        throw Error("MalformedRelation", "unit does not act as the identity");
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) {
            FMatrix lhs = m.act[i] * m.act[j];
            FMatrix rhs(a.field, n, n);
            for (int k = 0; k < a.dim; ++k)
                if (Elem c = a.c(i, j, k)) rhs.add_scaled(m.act[k], c);
            if (lhs != rhs)
                throw Error("MalformedRelation", "actions violate the product " + a.labels[i] + "*" + a.labels[j]);
        }
    for (int v = 0; v < a.num_vertices(); ++v) {
        FMatrix e = m.act_elem(a.idempotents[v]);
        FMatrix want(a.field, n, n);
        for (int i = 0; i < m.dims[v]; ++i) want.at(m.offset(v) + i, m.offset(v) + i) = 1;
        if (e != want) throw Error("MalformedRelation", "basis is not vertex-adapted");
    }
}

Rep rep_from_actions(const AlgebraPtr& alg, const std::vector<FMatrix>& act, FMatrix* basis, bool check) {
    if (int(act.size()) != alg->dim) throw Error("ShapeMismatch", "one action matrix per basis element expected");
    const int n = act.empty() ? 0 : act[0].rows();
    Rep raw;
    raw.alg = alg;
    raw.act = act;
    raw.dims = {n};
    std::vector<int> dims;
    FMatrix p(alg->field, n, 0);
    for (int v = 0; v < alg->num_vertices(); ++v) {
        FMatrix bv = column_basis(raw.act_elem(alg->idempotents[v]));
        dims.push_back(bv.cols());
        p = FMatrix::hstack(p, bv);
    }
    if (p.cols() != n) throw Error("MalformedRelation", "vertex idempotents do not decompose the module");
    FMatrix pinv = inverse(p);
    Rep r;
    r.alg = alg;
    r.dims = dims;
    for (auto& x : act) r.act.push_back(pinv * x * p);
    if (check) check_module(r);
    if (basis) *basis = p;
    return r;
}

Rep rep_from_quiver(const AlgebraPtr& alg, const std::vector<int>& dims, const std::vector<FMatrix>& arrow_mats) {
    const Algebra& a = *alg;
    if (!a.quiver) throw Error("AlgebraMismatch", "not a quiver algebra");
    if (int(dims.size()) != a.num_vertices() || arrow_mats.size() != a.arrows.size())
        throw Error("ShapeMismatch", "dimension vector or arrow list has wrong length");
    Rep r;
    r.alg = alg;
    r.dims = dims;
    const int n = r.total();
    std::vector<FMatrix> emb;
    for (std::size_t i = 0; i < a.arrows.size(); ++i) {
        const Arrow& ar = a.arrows[i];
        const FMatrix& m = arrow_mats[i];
        if (m.rows() != dims[ar.to] || m.cols() != dims[ar.from])
            throw Error("ShapeMismatch", "arrow " + ar.name + " has a matrix of the wrong shape");
        FMatrix t(a.field, n, n);
        t.set_block(r.offset(ar.to), r.offset(ar.from), m);
        emb.push_back(t);
    }
    for (int b = 0; b < a.dim; ++b) {
        if (a.paths[b].empty()) {
            int v = a.path_source[b];
            FMatrix e(a.field, n, n);
            for (int i = 0; i < dims[v]; ++i) e.at(r.offset(v) + i, r.offset(v) + i) = 1;
            r.act.push_back(e);
        } else {
            FMatrix m = emb[a.paths[b][0]];
            for (std::size_t k = 1; k < a.paths[b].size(); ++k) m = emb[a.paths[b][k]] * m;
            r.act.push_back(m);
        }
    }
    try {
        check_module(r);
    } catch (const Error& e) {
        throw Error("MalformedRelation", std::string("representation violates the relations (") + e.what() + ")");
    }
    return r;
}

Rep regular_module(const AlgebraPtr& alg, FMatrix* basis) {
    std::vector<FMatrix> act;
    for (int b = 0; b < alg->dim; ++b) act.push_back(alg->left_mult(alg->basis_vector(b)));
    return rep_from_actions(alg, act, basis, false);
}

// ---------------------------------------------------------------- Hom

std::vector<FMatrix> hom_basis(const Rep& m, const Rep& n) {
    if (!same_algebra(m, n)) throw Error("AlgebraMismatch", "modules over different algebras");
    const Algebra& a = *m.alg;
    const Field& f = a.field;
    const int nv = a.num_vertices();
    std::vector<int> uoff(nv + 1, 0);
    for (int v = 0; v < nv; ++v) uoff[v + 1] = uoff[v] + n.dims[v] * m.dims[v];
    const int nu = uoff[nv];
    if (nu == 0) return {};
    // unknown index of F_v[r][c]
    auto var = [&](int v, int r, int c) { return uoff[v] + r * m.dims[v] + c; };
    std::vector<std::vector<Elem>> rows;
    for (int g : a.hom_gens) {
        const FMatrix& ng = n.act[g];
        const FMatrix& mg = m.act[g];
        for (int u = 0; u < nv; ++u)
            for (int v = 0; v < nv; ++v) {
                // block (u, v): N(g)_{uv} F_v - F_u M(g)_{uv}
                if (n.dims[u] == 0 || m.dims[v] == 0) continue;
                const int nu0 = n.offset(u), nv0 = n.offset(v), mu0 = m.offset(u), mv0 = m.offset(v);
                bool nz = false, mz = false;
                for (int i = 0; i < n.dims[u] && !nz; ++i)
                    for (int k = 0; k < n.dims[v]; ++k)
                        if (ng(nu0 + i, nv0 + k)) {
                            nz = true;
                            break;
                        }
                for (int i = 0; i < m.dims[u] && !mz; ++i)
                    for (int k = 0; k < m.dims[v]; ++k)
                        if (mg(mu0 + i, mv0 + k)) {
                            mz = true;
                            break;
                        }
                if (!nz && !mz) continue;
                for (int r = 0; r < n.dims[u]; ++r)
                    for (int c = 0; c < m.dims[v]; ++c) {
                        std::vector<Elem> row(nu, 0);
                        for (int k = 0; k < n.dims[v]; ++k)
                            if (Elem x = ng(nu0 + r, nv0 + k)) row[var(v, k, c)] = f.add(row[var(v, k, c)], x);
                        for (int k = 0; k < m.dims[u]; ++k)
                            if (Elem x = mg(mu0 + k, mv0 + c))
                                row[var(u, r, k)] = f.sub(row[var(u, r, k)], x);
                        rows.push_back(std::move(row));
                    }
            }
    }
    FMatrix sys(f, int(rows.size()), nu);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < nu; ++j) sys.at(int(i), j) = rows[i][j];
    FMatrix ker = nullspace(sys);
    std::vector<FMatrix> out;
    for (int k = 0; k < ker.cols(); ++k) {
        FMatrix h(f, n.total(), m.total());
        for (int v = 0; v < nv; ++v)
            for (int r = 0; r < n.dims[v]; ++r)
                for (int c = 0; c < m.dims[v]; ++c) h.at(n.offset(v) + r, m.offset(v) + c) = ker(var(v, r, c), k);
        out.push_back(h);
    }
    return out;
}

int hom_dim(const Rep& m, const Rep& n) { return int(hom_basis(m, n).size()); }

bool is_hom(const Rep& m, const Rep& n, const FMatrix& f) {
    if (f.rows() != n.total() || f.cols() != m.total()) return false;
    const int nv = m.alg->num_vertices();
    for (int u = 0; u < nv; ++u)
        for (int v = 0; v < nv; ++v) {
            if (u == v) continue;
            for (int r = 0; r < n.dims[u]; ++r)
                for (int c = 0; c < m.dims[v]; ++c)
                    if (f(n.offset(u) + r, m.offset(v) + c)) return false;
        }
    for (int g : m.alg->hom_gens)
        if (n.act[g] * f != f * m.act[g]) return false;
    return true;
}

// ------------------------------------------------------ subquotients

FMatrix adapt_subspace(const Rep& m, const FMatrix& s) {
    const Field& f = m.field();
    FMatrix out(f, m.total(), 0);
    for (int v = 0; v < m.alg->num_vertices(); ++v) {
        if (m.dims[v] == 0) continue;
        FMatrix blk = s.block(m.offset(v), 0, m.dims[v], s.cols());
        FMatrix b = column_basis(blk);
        FMatrix full(f, m.total(), b.cols());
        full.set_block(m.offset(v), 0, b);
        out = FMatrix::hstack(out, full);
    }
    return out;
}

bool is_stable(const Rep& m, const FMatrix& s) {
    for (int g : m.alg->span_gens)
        if (!in_span(s, m.act[g] * s)) return false;
    for (int v = 0; v < m.alg->num_vertices(); ++v)
        if (!in_span(s, m.act_elem(m.alg->idempotents[v]) * s)) return false;
    return true;
}

FMatrix spin(const Rep& m, const FMatrix& v) {
    FMatrix b = column_basis(v);
    for (;;) {
        FMatrix all = b;
        for (int g : m.alg->span_gens) all = FMatrix::hstack(all, m.act[g] * b);
        FMatrix nb = column_basis(all);
        if (nb.cols() == b.cols()) break;
        b = nb;
    }
    return adapt_subspace(m, b);
}

namespace {

std::vector<int> block_dims(const Rep& m, const FMatrix& adapted) {
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

SubRep submodule(const Rep& m, const FMatrix& s) {
    FMatrix b = adapt_subspace(m, s);
    SubRep out;
    out.incl = b;
    out.rep.alg = m.alg;
    out.rep.dims = block_dims(m, b);
    for (auto& x : m.act) out.rep.act.push_back(b.cols() ? coordinates(b, x * b) : FMatrix(m.field(), 0, 0));
    return out;
}

QuotRep quotient(const Rep& m, const FMatrix& s) {
    const Field& f = m.field();
    FMatrix b = adapt_subspace(m, s);
    FMatrix c(f, m.total(), 0);
    std::vector<int> qd(m.alg->num_vertices(), 0);
    for (int v = 0; v < m.alg->num_vertices(); ++v) {
        if (m.dims[v] == 0) continue;
        FMatrix blk = b.block(m.offset(v), 0, m.dims[v], b.cols());
        FMatrix cb = complement_basis(column_basis(blk), m.dims[v]);
        FMatrix full(f, m.total(), cb.cols());
        full.set_block(m.offset(v), 0, cb);
        c = FMatrix::hstack(c, full);
        qd[v] = cb.cols();
    }
    QuotRep out;
    out.section = c;
    FMatrix all = FMatrix::hstack(b, c);
    FMatrix inv = all.rows() ? inverse(all) : all;
    out.proj = inv.block(b.cols(), 0, c.cols(), m.total());
    out.rep.alg = m.alg;
    out.rep.dims = qd;
    for (auto& x : m.act) out.rep.act.push_back(out.proj * x * c);
    return out;
}

SubRep kernel(const Rep& m, const Rep& n, const FMatrix& f) {
    (void)n;
    return submodule(m, nullspace(f));
}

SubRep image(const Rep& m, const Rep& n, const FMatrix& f) {
    (void)m;
    return submodule(n, column_basis(f));
}

QuotRep cokernel(const Rep& m, const Rep& n, const FMatrix& f) {
    (void)m;
    return quotient(n, column_basis(f));
}

SumRep direct_sum(const std::vector<Rep>& parts) {
    if (parts.empty()) throw Error("ShapeMismatch", "empty direct sum");
    const AlgebraPtr& alg = parts[0].alg;
    for (auto& p : parts)
        if (!same_algebra(p, parts[0])) throw Error("AlgebraMismatch", "direct sum over different algebras");
    const Field& f = alg->field;
    const int nv = alg->num_vertices();
    SumRep out;
    out.rep.alg = alg;
    out.rep.dims.assign(nv, 0);
    for (auto& p : parts)
        for (int v = 0; v < nv; ++v) out.rep.dims[v] += p.dims[v];
    const int n = out.rep.total();
    // position of (vertex v, part i) inside the sum
    std::vector<std::vector<int>> pos(nv, std::vector<int>(parts.size()));
    for (int v = 0, o = 0; v < nv; ++v)
        for (std::size_t i = 0; i < parts.size(); ++i) {
            pos[v][i] = o;
            o += parts[i].dims[v];
        }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        FMatrix inc(f, n, parts[i].total());
        for (int v = 0; v < nv; ++v)
            for (int k = 0; k < parts[i].dims[v]; ++k) inc.at(pos[v][i] + k, parts[i].offset(v) + k) = 1;
        out.incl.push_back(inc);
        out.proj.push_back(inc.transpose());
    }
    for (int b = 0; b < alg->dim; ++b) {
        FMatrix a(f, n, n);
        for (std::size_t i = 0; i < parts.size(); ++i) a = a + out.incl[i] * parts[i].act[b] * out.proj[i];
        out.rep.act.push_back(a);
    }
    return out;
}

Rep direct_sum(const Rep& a, const Rep& b) { return direct_sum(std::vector<Rep>{a, b}).rep; }

Rep power(const Rep& a, int n) {
    if (n <= 0) return zero_rep(a.alg);
    return direct_sum(std::vector<Rep>(n, a)).rep;
}

Pushout pushout(const Rep& k, const Rep& x, const Rep& y, const FMatrix& f, const FMatrix& g) {
    (void)k;
    SumRep s = direct_sum({x, y});
    FMatrix w = s.incl[0] * f - s.incl[1] * g;
    QuotRep q = quotient(s.rep, column_basis(w));
    return {q.rep, q.proj * s.incl[0], q.proj * s.incl[1]};
}

Pullback pullback(const Rep& x, const Rep& y, const Rep& z, const FMatrix& f, const FMatrix& g) {
    SumRep s = direct_sum({x, y});
    FMatrix h = f * s.proj[0] - g * s.proj[1];
    SubRep k = kernel(s.rep, z, h);
    return {k.rep, s.proj[0] * k.incl, s.proj[1] * k.incl};
}

FMatrix radical_subspace(const Rep& m) {
    FMatrix all(m.field(), m.total(), 0);
    const FMatrix& rad = m.alg->radical;
    for (int c = 0; c < rad.cols(); ++c) all = FMatrix::hstack(all, m.act_elem(rad.column_values(c)));
    return adapt_subspace(m, column_basis(all));
}

// ----------------------------------------------- submodule enumeration

namespace {

// every subspace of F^n as a basis matrix, by reduced echelon form
std::vector<FMatrix> all_subspaces(const Field& f, int n) {
    std::vector<FMatrix> out;
    const Elem q = f.q();
    for (int r = 0; r <= n; ++r) {
        std::vector<int> piv(r);
        std::function<void(int, int)> choose = [&](int i, int start) {
            if (i == r) {
                // free slots: row i, columns > piv[i] that are not pivots
                std::vector<std::pair<int, int>> slots;
                std::vector<char> isp(n, 0);
                for (int p : piv) isp[p] = 1;
                for (int a = 0; a < r; ++a)
                    for (int c = piv[a] + 1; c < n; ++c)
                        if (!isp[c]) slots.push_back({a, c});
                std::vector<Elem> val(slots.size(), 0);
                for (;;) {
                    FMatrix b(f, n, r);
                    for (int a = 0; a < r; ++a) b.at(piv[a], a) = 1;
                    for (std::size_t s = 0; s < slots.size(); ++s) b.at(slots[s].second, slots[s].first) = val[s];
                    out.push_back(b);
                    std::size_t k = 0;
                    while (k < val.size() && ++val[k] == q) val[k++] = 0;
                    if (k == val.size()) break;
                }
                return;
            }
            for (int p = start; p < n; ++p) {
                piv[i] = p;
                choose(i + 1, p + 1);
            }
        };
        choose(0, 0);
    }
    return out;
}

double gaussian_total(int n, double q) {
    double s = 0;
    for (int k = 0; k <= n; ++k) {
        double g = 1;
        for (int i = 0; i < k; ++i) g *= (std::pow(q, n - i) - 1) / (std::pow(q, i + 1) - 1);
        s += g;
    }
    return s;
}

}  // namespace

std::vector<FMatrix> submodule_bases(const Rep& m, const SubmoduleCaps& caps) {
    const Field& f = m.field();
    int cap = f.q() == 2 ? caps.cap_f2 : caps.cap_other;
    if (m.total() > cap) {
        double est = 1;
        for (int d : m.dims) est *= gaussian_total(d, f.q());
        throw Error("CapExceeded", "submodule enumeration of a module of dimension " + std::to_string(m.total()) +
                                       " (about " + std::to_string(static_cast<long long>(est)) +
                                       " subspace tuples)");
    }
    const int nv = m.alg->num_vertices();
    std::vector<std::vector<FMatrix>> per(nv);
    for (int v = 0; v < nv; ++v) per[v] = all_subspaces(f, m.dims[v]);
    std::vector<FMatrix> out;
    std::vector<int> choice(nv, 0);
    for (;;) {
        FMatrix s(f, m.total(), 0);
        for (int v = 0; v < nv; ++v) {
            const FMatrix& b = per[v][choice[v]];
            FMatrix full(f, m.total(), b.cols());
            full.set_block(m.offset(v), 0, b);
            s = FMatrix::hstack(s, full);
        }
        bool ok = true;
        for (int g : m.alg->span_gens)
            if (!in_span(s, m.act[g] * s)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(s);
        int k = 0;
        while (k < nv && ++choice[k] == int(per[k].size())) choice[k++] = 0;
        if (k == nv) break;
    }
    return out;
}

std::vector<SubRep> submodules(const Rep& m, const SubmoduleCaps& caps) {
    std::vector<SubRep> out;
    for (auto& s : submodule_bases(m, caps)) out.push_back(submodule(m, s));
    return out;
}

// ------------------------------------------------------------ duals

Rep k_dual(const Rep& m) {
    Rep r;
    r.alg = opposite(m.alg);
    r.dims = m.dims;
    for (auto& x : m.act) r.act.push_back(x.transpose());
    return r;
}

Rep rebase(const Rep& m, const AlgebraPtr& alg) {
    if (m.alg->hash != alg->hash) throw Error("AlgebraMismatch", "cannot rebase onto a different algebra");
    Rep r = m;
    r.alg = alg;
    return r;
}

std::vector<int> dim_vector(const Rep& m) { return m.dims; }

bool same_algebra(const Rep& a, const Rep& b) { return a.alg == b.alg || a.alg->hash == b.alg->hash; }

FMatrix block_of(const Rep& m, const FMatrix& f, const Rep& n, int v) {
    return f.block(n.offset(v), m.offset(v), n.dims[v], m.dims[v]);
}

// ---------------------------------------------------------- documents

json rep_to_json(const Rep& m) {
    const Algebra& a = *m.alg;
    json j{{"algebra", a.hash}, {"dims", m.dims}};
    if (a.quiver) {
        json arrows = json::object();
        for (std::size_t i = 0; i < a.arrows.size(); ++i) {
            const Arrow& ar = a.arrows[i];
            FMatrix blk =
                m.act[a.arrow_basis[i]].block(m.offset(ar.to), m.offset(ar.from), m.dims[ar.to], m.dims[ar.from]);
            arrows[ar.name] = matrix_to_json(blk);
        }
        j["arrows"] = arrows;
    } else {
        json acts = json::array();
        for (auto& x : m.act) acts.push_back(matrix_to_json(x));
        j["actions"] = acts;
    }
    return j;
}

Rep rep_from_json(const AlgebraPtr& alg, const json& j) {
    if (j.contains("algebra") && j["algebra"].get<std::string>() != alg->hash)
        throw Error("AlgebraMismatch", "module document belongs to algebra " + j["algebra"].get<std::string>());
    const Field& f = alg->field;
    if (j.contains("arrows")) {
        auto dims = j.at("dims").get<std::vector<int>>();
        if (int(dims.size()) != alg->num_vertices()) throw Error("ParseError", "dimension vector has wrong length");
        std::vector<FMatrix> mats;
        for (auto& ar : alg->arrows) {
            int r = dims[ar.to], c = dims[ar.from];
            if (!j["arrows"].contains(ar.name)) {
                mats.emplace_back(f, r, c);
                continue;
            }
            mats.push_back(matrix_from_json(f, j["arrows"][ar.name], r, c));
        }
        return rep_from_quiver(alg, dims, mats);
    }
    if (j.contains("actions")) {
        int n = 0;
        if (j.contains("dims"))
            for (int d : j["dims"].get<std::vector<int>>()) n += d;
        else
            n = int(j["actions"][0].size());
        std::vector<FMatrix> acts;
        for (auto& a : j["actions"]) acts.push_back(matrix_from_json(f, a, n, n));
        return rep_from_actions(alg, acts);
    }
    throw Error("ParseError", "module document needs arrows or actions");
}

Rep load_rep(const AlgebraPtr& alg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw Error("ParseError", path + ": " + e.what());
    }
    return rep_from_json(alg, doc);
}

}  // namespace tilthall
