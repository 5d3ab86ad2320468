#include "tilthall/algebra.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "tilthall/decompose.hpp"
#include "tilthall/rep.hpp"

namespace tilthall {

using nlohmann::json;

std::string fnv_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json elem_to_json(const Field& f, Elem a) {
    if (f.e() == 1) return a;
    return f.coeffs(a);
}

Elem elem_from_json(const Field& f, const json& j) {
    if (j.is_array()) {
        if (f.e() == 1 && j.size() == 1) return f.from_int(j[0].get<long long>());
        return f.from_coeffs(j.get<std::vector<int>>());
    }
    if (!j.is_number_integer()) throw Error("ParseError", "field element must be an integer or coefficient array");
    if (f.e() > 1) {
        long long v = j.get<long long>();
        if (v < 0 || v >= f.p()) throw Error("ParseError", "integer element outside the prime subfield");
        return Elem(v);
    }
    return f.from_int(j.get<long long>());
}

json matrix_to_json(const FMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < m.cols(); ++j) r.push_back(elem_to_json(m.field(), m(i, j)));
        rows.push_back(r);
    }
    return rows;
}

FMatrix matrix_from_json(const Field& f, const json& j, int rows, int cols) {
    FMatrix m(f, rows, cols);
    if (rows == 0 || cols == 0) return m;
    if (!j.is_array() || int(j.size()) != rows) throw Error("ParseError", "matrix has wrong number of rows");
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || int(j[i].size()) != cols) throw Error("ParseError", "matrix row has wrong length");
        for (int c = 0; c < cols; ++c) m.at(i, c) = elem_from_json(f, j[i][c]);
    }
    return m;
}

// ------------------------------------------------------------ Algebra

std::vector<Elem> Algebra::mul(const std::vector<Elem>& x, const std::vector<Elem>& y) const {
    std::vector<Elem> r(dim, 0);
    for (int i = 0; i < dim; ++i) {
        if (!x[i]) continue;
        for (int j = 0; j < dim; ++j) {
            if (!y[j]) continue;
            Elem s = field.mul(x[i], y[j]);
            const Elem* row = &table[(std::size_t(i) * dim + j) * dim];
            for (int k = 0; k < dim; ++k)
                if (row[k]) r[k] = field.add(r[k], field.mul(s, row[k]));
        }
    }
    return r;
}

std::vector<Elem> Algebra::basis_vector(int i) const {
    std::vector<Elem> v(dim, 0);
    v[i] = 1;
    return v;
}

FMatrix Algebra::left_mult(const std::vector<Elem>& b) const {
    FMatrix m(field, dim, dim);
    for (int j = 0; j < dim; ++j) {
        auto col = mul(b, basis_vector(j));
        for (int k = 0; k < dim; ++k) m.at(k, j) = col[k];
    }
    return m;
}

FMatrix Algebra::right_mult(const std::vector<Elem>& b) const {
    FMatrix m(field, dim, dim);
    for (int j = 0; j < dim; ++j) {
        auto col = mul(basis_vector(j), b);
        for (int k = 0; k < dim; ++k) m.at(k, j) = col[k];
    }
    return m;
}

json Algebra::to_json() const { return json::parse(canonical); }

namespace {

Field parse_field(const json& doc) {
    if (!doc.contains("field")) throw Error("ParseError", "missing field");
    const json& f = doc.at("field");
    int p = f.at("p").get<int>();
    int e = f.value("e", 1);
    return Field::make(p, e);
}

std::string label_of(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

json field_json(const Field& f) { return json{{"p", f.p()}, {"e", f.e()}}; }

void check_table(const Field& f, int dim, const std::vector<Elem>& table, const std::vector<Elem>& unit) {
    auto prod = [&](int i, int j, int k) { return table[(std::size_t(i) * dim + j) * dim + k]; };
    // (b_i b_j) b_l = b_i (b_j b_l)
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int l = 0; l < dim; ++l)
                for (int t = 0; t < dim; ++t) {
                    Elem lhs = 0, rhs = 0;
                    for (int k = 0; k < dim; ++k) {
                        if (Elem a = prod(i, j, k)) lhs = f.add(lhs, f.mul(a, prod(k, l, t)));
                        if (Elem b = prod(j, l, k)) rhs = f.add(rhs, f.mul(b, prod(i, k, t)));
                    }
                    if (lhs != rhs)
                        throw Error("NonAssociative", "basis triple (" + std::to_string(i) + "," + std::to_string(j) +
                                                          "," + std::to_string(l) + ")");
                }
    for (int j = 0; j < dim; ++j)
        for (int t = 0; t < dim; ++t) {
            Elem l = 0, r = 0;
            for (int k = 0; k < dim; ++k) {
                if (unit[k]) {
                    l = f.add(l, f.mul(unit[k], prod(k, j, t)));
                    r = f.add(r, f.mul(unit[k], prod(j, k, t)));
                }
            }
            Elem want = (t == j) ? 1 : 0;
            if (l != want || r != want) throw Error("MalformedRelation", "unit is not a two-sided identity");
        }
}

std::string finalize_hash(Algebra& a) {
    a.hash = fnv_hash(a.canonical);
    return a.hash;
}

using Path = std::vector<int>;

struct QuiverData {
    std::vector<std::string> vlabels;
    std::vector<Arrow> arrows;
    // relations: list of terms (coefficient, path)
    std::vector<std::vector<std::pair<Elem, Path>>> relations;
};

AlgebraPtr build_quiver(const Field& f, const QuiverData& q, const ParseOptions& opt, const json& canon) {
    const int nv = int(q.vlabels.size());
    const int na = int(q.arrows.size());
    // paths by length; a length-0 path for vertex v is encoded as {-1-v}
    auto src = [&](const Path& p) { return p[0] < 0 ? -1 - p[0] : q.arrows[p[0]].from; };
    auto tgt = [&](const Path& p) { return p[0] < 0 ? -1 - p[0] : q.arrows[p.back()].to; };
    auto len = [](const Path& p) { return p[0] < 0 ? 0 : int(p.size()); };

    std::vector<std::vector<Path>> levels(1);
    for (int v = 0; v < nv; ++v) levels[0].push_back({-1 - v});
    std::size_t count = levels[0].size();

    // relation degrees
    std::vector<int> rdeg;
    for (auto& r : q.relations) rdeg.push_back(int(r[0].second.size()));

    // per length: echelon of the ideal's degree component
    std::vector<Echelon> ideal_ech;
    std::vector<std::map<Path, int>> index;
    index.push_back({});
    for (int v = 0; v < nv; ++v) index[0][levels[0][v]] = v;
    ideal_ech.push_back(row_reduce(FMatrix(f, 0, nv)));

    auto concat = [&](const Path& a, const Path& b) {
        if (a[0] < 0) return b;
        if (b[0] < 0) return a;
        Path r = a;
        r.insert(r.end(), b.begin(), b.end());
        return r;
    };

    int top = -1;
    for (int n = 1; n <= opt.path_cap; ++n) {
        std::vector<Path> next;
        for (auto& p : levels[n - 1])
            for (int a = 0; a < na; ++a)
                if (q.arrows[a].from == tgt(p)) {
                    Path r = p[0] < 0 ? Path{} : p;
                    r.push_back(a);
                    next.push_back(r);
                }
        std::sort(next.begin(), next.end());
        count += next.size();
        if (count > std::size_t(opt.path_count_cap))
            throw Error("InfiniteDimensional", "path count exceeds " + std::to_string(opt.path_count_cap));
        levels.push_back(next);
        std::map<Path, int> idx;
        for (std::size_t i = 0; i < next.size(); ++i) idx[next[i]] = int(i);
        index.push_back(idx);
        // degree-n component of the ideal: u r v with len u + deg r + len v = n
        std::vector<std::vector<Elem>> rows;
        for (std::size_t ri = 0; ri < q.relations.size(); ++ri) {
            int d = rdeg[ri];
            if (d > n) continue;
            const auto& rel = q.relations[ri];
            int rs = src(rel[0].second), rt = tgt(rel[0].second);
            for (int lu = 0; lu <= n - d; ++lu) {
                int lv = n - d - lu;
                for (auto& u : levels[lu]) {
                    if (tgt(u) != rs) continue;
                    for (auto& v : levels[lv]) {
                        if (src(v) != rt) continue;
                        std::vector<Elem> row(next.size(), 0);
                        for (auto& [c, path] : rel) {
                            Path w = concat(concat(u, path), v);
                            int k = idx.at(w);
                            row[k] = f.add(row[k], c);
                        }
                        rows.push_back(row);
                    }
                }
            }
        }
        // columns in reverse order so that pivots fall on the largest paths
        const int m = int(next.size());
        FMatrix rm(f, int(rows.size()), m);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (int k = 0; k < m; ++k) rm.at(int(i), m - 1 - k) = rows[i][k];
        ideal_ech.push_back(row_reduce(rm));
        if (int(ideal_ech.back().pivots.size()) == m) {
            top = n;
            break;
        }
    }
    if (top < 0) throw Error("InfiniteDimensional", "paths do not vanish up to length " + std::to_string(opt.path_cap));

    // basis: non-pivot paths, ordered by length then lexicographically
    auto a = std::make_shared<Algebra>();
    a->field = f;
    a->quiver = true;
    a->arrows = q.arrows;
    a->vertex_labels = q.vlabels;
    struct Loc {
        int level, pos;
    };
    std::vector<std::vector<int>> basis_index(top + 1);  // per level, per path: basis index or -1
    std::vector<Loc> locs;
    for (int n = 0; n <= top; ++n) {
        const int m = int(levels[n].size());
        std::vector<char> piv(m, 0);
        for (int c : ideal_ech[n].pivots) piv[m - 1 - c] = 1;
        basis_index[n].assign(m, -1);
        for (int k = 0; k < m; ++k)
            if (!piv[k]) {
                basis_index[n][k] = int(locs.size());
                locs.push_back({n, k});
            }
    }
    const int dim = int(locs.size());
    a->dim = dim;
    for (auto& l : locs) {
        const Path& p = levels[l.level][l.pos];
        if (l.level == 0) {
            a->labels.push_back("e" + q.vlabels[-1 - p[0]]);
            a->paths.push_back({});
        } else {
            std::string s;
            for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "." : "") + q.arrows[p[i]].name;
            a->labels.push_back(s);
            a->paths.push_back(p);
        }
        a->path_source.push_back(src(p));
        a->path_target.push_back(tgt(p));
    }
    // normal form of a path at level n
    auto normal_form = [&](int n, int pos) {
        std::vector<Elem> out(dim, 0);
        if (n > top) return out;
        if (basis_index[n][pos] >= 0) {
            out[basis_index[n][pos]] = 1;
            return out;
        }
        const int m = int(levels[n].size());
        const Echelon& e = ideal_ech[n];
        int col = m - 1 - pos;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) {
            if (e.pivots[r] != col) continue;
            for (int c = 0; c < m; ++c) {
                if (c == col) continue;
                Elem v = e.rref(int(r), c);
                if (!v) continue;
                int k = basis_index[n][m - 1 - c];
                out[k] = f.add(out[k], f.neg(v));
            }
        }
        return out;
    };
    a->table.assign(std::size_t(dim) * dim * dim, 0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const Path& pi = levels[locs[i].level][locs[i].pos];
            const Path& pj = levels[locs[j].level][locs[j].pos];
            if (tgt(pj) != src(pi)) continue;
            Path w = concat(pj, pi);
            int n = len(w);
            if (n > top) continue;
            auto nf = normal_form(n, index[n].at(w));
            for (int k = 0; k < dim; ++k) a->table[(std::size_t(i) * dim + j) * dim + k] = nf[k];
        }
    a->unit.assign(dim, 0);
    for (int v = 0; v < nv; ++v) {
        int b = basis_index[0][v];
        if (b < 0) throw Error("MalformedRelation", "vertex idempotent lies in the ideal");
        a->unit[b] = 1;
        a->idempotents.push_back(a->basis_vector(b));
        a->span_gens.push_back(b);
    }
    for (int ar = 0; ar < na; ++ar) {
        int b = basis_index[1][index[1].at(Path{ar})];
        a->arrow_basis.push_back(b);
        a->hom_gens.push_back(b);
        a->span_gens.push_back(b);
    }
    int rad = 0;
    for (int i = 0; i < dim; ++i)
        if (!a->paths[i].empty()) ++rad;
    a->radical = FMatrix(f, dim, rad);
    for (int i = 0, c = 0; i < dim; ++i)
        if (!a->paths[i].empty()) a->radical.at(i, c++) = 1;
    a->canonical = canon.dump();
    finalize_hash(*a);
    return a;
}

json canonical_table(const Field& f, const std::vector<std::string>& labels, const std::vector<Elem>& table,
                     const std::vector<Elem>& unit) {
    const int dim = int(labels.size());
    json consts = json::array();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                if (Elem c = table[(std::size_t(i) * dim + j) * dim + k])
                    consts.push_back(json::array({i, j, k, elem_to_json(f, c)}));
    json u = json::array();
    for (Elem x : unit) u.push_back(elem_to_json(f, x));
    return json{{"field", field_json(f)},
                {"presentation", "table"},
                {"basis", labels},
                {"unit", u},
                {"constants", consts}};
}

}  // namespace

AlgebraPtr make_table_algebra(const Field& f, std::vector<std::string> labels, std::vector<Elem> table,
                              std::vector<Elem> unit) {
    const int dim = int(labels.size());
    if (int(table.size()) != dim * dim * dim || int(unit.size()) != dim)
        throw Error("ShapeMismatch", "structure constants do not match the basis");
    if (dim == 0) throw Error("MalformedRelation", "zero algebra");
    check_table(f, dim, table, unit);

    // provisional single-vertex algebra for computing the radical and vertices
    auto pre = std::make_shared<Algebra>();
    pre->field = f;
    pre->dim = dim;
    pre->labels = labels;
    pre->table = table;
    pre->unit = unit;
    pre->vertex_labels = {"v"};
    pre->idempotents = {unit};
    for (int i = 0; i < dim; ++i) {
        pre->hom_gens.push_back(i);
        pre->span_gens.push_back(i);
    }
    pre->radical = FMatrix(f, dim, 0);
    pre->canonical = canonical_table(f, labels, table, unit).dump();
    pre->hash = fnv_hash(pre->canonical + "#pre");

    std::vector<FMatrix> lmats;
    for (int i = 0; i < dim; ++i) lmats.push_back(pre->left_mult(pre->basis_vector(i)));
    FMatrix rad = matrix_algebra_radical(lmats, dim);

    Rep reg;
    reg.alg = pre;
    reg.dims = {dim};
    reg.act = lmats;
    auto parts = decompose(reg);
    FMatrix u = FMatrix::column_vector(f, unit);
    std::vector<std::vector<Elem>> idem;
    for (auto& s : parts) {
        FMatrix e = s.incl * (s.proj * u);
        idem.push_back(e.column_values(0));
    }
    std::vector<int> order(idem.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::vector<int> pdim(idem.size());
    for (std::size_t i = 0; i < idem.size(); ++i) pdim[i] = parts[i].rep.total();
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        if (pdim[x] != pdim[y]) return pdim[x] > pdim[y];
        return idem[x] < idem[y];
    });

    auto a = std::make_shared<Algebra>();
    a->field = f;
    a->dim = dim;
    a->labels = std::move(labels);
    a->table = std::move(table);
    a->unit = std::move(unit);
    for (std::size_t i = 0; i < order.size(); ++i) {
        a->idempotents.push_back(idem[order[i]]);
        a->vertex_labels.push_back(std::to_string(i + 1));
    }
    a->hom_gens = pre->hom_gens;
    a->span_gens = pre->span_gens;
    a->radical = rad;
    a->canonical = pre->canonical;
    finalize_hash(*a);
    return a;
}

AlgebraPtr parse_algebra(const json& doc, const ParseOptions& opt) {
    Field f = parse_field(doc);
    std::string pres = doc.value("presentation", "quiver");
    if (pres == "quiver") {
        QuiverData q;
        std::map<std::string, int> vidx, aidx;
        for (auto& v : doc.at("vertices")) {
            std::string l = label_of(v);
            if (vidx.count(l)) throw Error("ParseError", "duplicate vertex " + l);
            vidx[l] = int(q.vlabels.size());
            q.vlabels.push_back(l);
        }
        if (q.vlabels.empty()) throw Error("ParseError", "no vertices");
        for (auto& a : doc.value("arrows", json::array())) {
            Arrow ar;
            ar.name = a.at("name").get<std::string>();
            std::string fr = label_of(a.at("from")), to = label_of(a.at("to"));
            if (!vidx.count(fr) || !vidx.count(to)) throw Error("ParseError", "arrow " + ar.name + " has unknown end");
            if (aidx.count(ar.name)) throw Error("ParseError", "duplicate arrow " + ar.name);
            ar.from = vidx[fr];
            ar.to = vidx[to];
            aidx[ar.name] = int(q.arrows.size());
            q.arrows.push_back(ar);
        }
        json canon_rel = json::array();
        for (auto& r : doc.value("relations", json::array())) {
            std::vector<std::pair<Elem, Path>> terms;
            int s = -1, t = -1, deg = -1;
            json crel = json::array();
            for (auto& term : r) {
                Elem c = elem_from_json(f, term.at("coefficient"));
                Path p;
                for (auto& n : term.at("path")) {
                    std::string name = n.get<std::string>();
                    if (!aidx.count(name)) throw Error("MalformedRelation", "unknown arrow " + name);
                    p.push_back(aidx[name]);
                }
                if (p.size() < 2) throw Error("MalformedRelation", "relation terms need paths of length >= 2");
                for (std::size_t i = 0; i + 1 < p.size(); ++i)
                    if (q.arrows[p[i]].to != q.arrows[p[i + 1]].from)
                        throw Error("MalformedRelation", "path is not composable");
                int ps = q.arrows[p[0]].from, pt = q.arrows[p.back()].to;
                if (s < 0) {
                    s = ps;
                    t = pt;
                    deg = int(p.size());
                } else if (s != ps || t != pt) {
                    throw Error("MalformedRelation", "relation paths are not parallel");
                } else if (deg != int(p.size())) {
                    throw Error("MalformedRelation", "inhomogeneous relations are not supported");
                }
                if (c) terms.push_back({c, p});
                json names = json::array();
                for (int x : p) names.push_back(q.arrows[x].name);
                crel.push_back(json{{"coefficient", elem_to_json(f, c)}, {"path", names}});
            }
            if (s < 0) throw Error("MalformedRelation", "empty relation");
            if (!terms.empty()) q.relations.push_back(terms);
            canon_rel.push_back(crel);
        }
        json arrows = json::array();
        for (auto& a : q.arrows)
            arrows.push_back(json{{"name", a.name}, {"from", q.vlabels[a.from]}, {"to", q.vlabels[a.to]}});
        json canon{{"field", field_json(f)},
                   {"presentation", "quiver"},
                   {"vertices", q.vlabels},
                   {"arrows", arrows},
                   {"relations", canon_rel}};
        return build_quiver(f, q, opt, canon);
    }
    if (pres == "table") {
        auto labels = doc.at("basis").get<std::vector<std::string>>();
        const int dim = int(labels.size());
        std::vector<Elem> unit;
        for (auto& x : doc.at("unit")) unit.push_back(elem_from_json(f, x));
        std::vector<Elem> table(std::size_t(dim) * dim * dim, 0);
        for (auto& t : doc.at("constants")) {
            int i = t.at(0).get<int>(), j = t.at(1).get<int>(), k = t.at(2).get<int>();
            if (i < 0 || j < 0 || k < 0 || i >= dim || j >= dim || k >= dim)
                throw Error("ParseError", "structure constant index out of range");
            Elem c = elem_from_json(f, t.at(3));
            Elem& slot = table[(std::size_t(i) * dim + j) * dim + k];
            slot = f.add(slot, c);
        }
        return make_table_algebra(f, labels, table, unit);
    }
    throw Error("ParseError", "unknown presentation " + pres);
}

AlgebraPtr load_algebra(const std::string& path, const ParseOptions& opt) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw Error("ParseError", path + ": " + e.what());
    }
    return parse_algebra(doc, opt);
}

AlgebraPtr opposite(const AlgebraPtr& a) {
    if (a->base_) return a->base_;
    if (auto op = a->op_.lock()) return op;
    auto o = std::make_shared<Algebra>();
    o->field = a->field;
    o->dim = a->dim;
    o->labels = a->labels;
    const int d = a->dim;
    o->table.assign(a->table.size(), 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) o->table[(std::size_t(i) * d + j) * d + k] = a->c(j, i, k);
    o->unit = a->unit;
    o->vertex_labels = a->vertex_labels;
    o->idempotents = a->idempotents;
    o->hom_gens = a->hom_gens;
    o->span_gens = a->span_gens;
    o->radical = a->radical;
    o->quiver = a->quiver;
    if (a->quiver) {
        for (auto ar : a->arrows) {
            std::swap(ar.from, ar.to);
            o->arrows.push_back(ar);
        }
        for (auto p : a->paths) {
            std::reverse(p.begin(), p.end());
            o->paths.push_back(p);
        }
        o->path_source = a->path_target;
        o->path_target = a->path_source;
        o->arrow_basis = a->arrow_basis;
    }
    o->canonical = json{{"opposite_of", json::parse(a->canonical)}}.dump();
    finalize_hash(*o);
    o->base_ = a;
    a->op_ = o;
    return o;
}

}  // namespace tilthall
