#include "tilthall/decompose.hpp"

#include <random>

namespace tilthall {

namespace {

FMatrix spin_mats(const std::vector<FMatrix>& gens, const FMatrix& v) {
    FMatrix b = column_basis(v);
    for (;;) {
        FMatrix all = b;
        for (auto& g : gens) all = FMatrix::hstack(all, g * b);
        FMatrix nb = column_basis(all);
        if (nb.cols() == b.cols()) return b;
        b = nb;
    }
}

// Dimension of the matrix algebra generated by the given w x w matrices.
int generated_algebra_dim(const Field& f, const std::vector<FMatrix>& mats, int w) {
    FMatrix span = flatten(FMatrix::identity(f, w));
    std::vector<FMatrix> elems{FMatrix::identity(f, w)};
    std::size_t done = 0;
    while (done < elems.size()) {
        FMatrix x = elems[done++];
        for (auto& g : mats) {
            FMatrix y = x * g;
            FMatrix fy = flatten(y);
            if (!in_span(span, fy)) {
                span = FMatrix::hstack(span, fy);
                elems.push_back(y);
                if (span.cols() == w * w) return w * w;
            }
        }
    }
    return span.cols();
}

// Smallest submodule strictly above v (which is stable).
FMatrix minimal_over(const std::vector<FMatrix>& gens, const FMatrix& v, int n, const DecomposeOptions& opt,
                     std::uint64_t& budget) {
    const Field& f = gens.empty() ? v.field() : gens[0].field();
    FMatrix w = FMatrix::identity(f, n);
    for (;;) {
        // complement of v inside w
        FMatrix c(f, n, 0);
        {
            FMatrix cur = v;
            int r = cur.cols();
            for (int k = 0; k < w.cols(); ++k) {
                FMatrix t = FMatrix::hstack(cur, w.column(k));
                if (rank(t) > r) {
                    cur = t;
                    ++r;
                    c = FMatrix::hstack(c, w.column(k));
                }
            }
        }
        const int d = c.cols();
        if (d == 1) return w;
        // action on w / v
        FMatrix basis = FMatrix::hstack(v, c);
        std::vector<FMatrix> rho;
        for (auto& g : gens) {
            FMatrix co = coordinates(basis, g * c);
            rho.push_back(co.block(v.cols(), 0, d, d));
        }
        if (generated_algebra_dim(f, rho, d) == d * d) return w;
        // walk projective points of w / v
        std::vector<Elem> x(d, 0);
        bool shrunk = false;
        for (int lead = d - 1; lead >= 0 && !shrunk; --lead) {
            // vectors whose first nonzero coordinate (from the top) is lead, equal to 1
            std::fill(x.begin(), x.end(), 0);
            x[lead] = 1;
            for (;;) {
                if (budget-- == 0) throw Error("CapExceeded", "composition series search exceeded the spin cap");
                FMatrix vec = c * FMatrix::column_vector(f, x);
                FMatrix u = spin_mats(gens, FMatrix::hstack(v, vec));
                if (u.cols() < w.cols()) {
                    w = u;
                    shrunk = true;
                    break;
                }
                int k = lead + 1;
                while (k < d && ++x[k] == f.q()) x[k++] = 0;
                if (k == d) break;
            }
        }
        if (!shrunk) return w;
    }
    (void)opt;
}

}  // namespace

std::vector<FMatrix> composition_series(const std::vector<FMatrix>& gens, int n, const DecomposeOptions& opt) {
    if (gens.empty()) throw Error("ShapeMismatch", "composition series needs at least one matrix");
    const Field& f = gens[0].field();
    std::vector<FMatrix> out{FMatrix(f, n, 0)};
    std::uint64_t budget = opt.spin_cap;
    while (out.back().cols() < n) out.push_back(minimal_over(gens, out.back(), n, opt, budget));
    return out;
}

FMatrix matrix_algebra_radical(const std::vector<FMatrix>& basis, int n, const DecomposeOptions& opt) {
    const int dim = int(basis.size());
    if (dim == 0) throw Error("ShapeMismatch", "empty matrix algebra");
    const Field& f = basis[0].field();
    if (n == 0) return FMatrix(f, dim, 0);
    auto series = composition_series(basis, n, opt);
    std::vector<std::vector<Elem>> rows;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const FMatrix& prev = series[i - 1];
        // rows annihilating prev
        FMatrix ann = prev.cols() ? nullspace(prev.transpose()).transpose() : FMatrix::identity(f, n);
        const FMatrix& cur = series[i];
        for (int c = 0; c < cur.cols(); ++c) {
            FMatrix vcol = cur.column(c);
            std::vector<FMatrix> img;
            for (auto& b : basis) img.push_back(ann * (b * vcol));
            for (int r = 0; r < ann.rows(); ++r) {
                std::vector<Elem> row(dim);
                for (int k = 0; k < dim; ++k) row[k] = img[k](r, 0);
                rows.push_back(row);
            }
        }
    }
    FMatrix sys(f, int(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int k = 0; k < dim; ++k) sys.at(int(i), k) = rows[i][k];
    return nullspace(sys);
}

namespace {

struct Quot {
    FMatrix flat;          // n^2 x dimE, flattened basis
    FMatrix comp;          // dimE x t, complement of the radical
    bool commutative = true;
    FMatrix frob_fixed;    // dimE x s, lifts of Frobenius-fixed elements of End/J
};

FMatrix combine(const std::vector<FMatrix>& basis, const FMatrix& coords, int col) {
    FMatrix r(basis[0].field(), basis[0].rows(), basis[0].cols());
    for (std::size_t k = 0; k < basis.size(); ++k)
        if (Elem c = coords(int(k), col)) r.add_scaled(basis[k], c);
    return r;
}

FMatrix mat_pow(FMatrix x, std::uint64_t e) {
    FMatrix r = FMatrix::identity(x.field(), x.rows());
    while (e) {
        if (e & 1) r = r * x;
        x = x * x;
        e >>= 1;
    }
    return r;
}

Quot analyze(const Field& f, const std::vector<FMatrix>& basis, const FMatrix& rad) {
    Quot q;
    const int dim = int(basis.size());
    q.flat = FMatrix(f, basis[0].rows() * basis[0].cols(), 0);
    for (auto& b : basis) q.flat = FMatrix::hstack(q.flat, flatten(b));
    q.comp = complement_basis(rad, dim);
    const int t = q.comp.cols();
    FMatrix jc = FMatrix::hstack(rad, q.comp);
    auto mod_j = [&](const FMatrix& m) {
        FMatrix co = coordinates(q.flat, flatten(m));
        FMatrix all = coordinates(jc, co);
        return all.block(rad.cols(), 0, t, 1);
    };
    std::vector<FMatrix> lifts;
    for (int i = 0; i < t; ++i) lifts.push_back(combine(basis, q.comp, i));
    for (int i = 0; i < t && q.commutative; ++i)
        for (int j = i + 1; j < t; ++j)
            if (!mod_j(lifts[i] * lifts[j] - lifts[j] * lifts[i]).is_zero()) {
                q.commutative = false;
                break;
            }
    if (!q.commutative) return q;
    FMatrix fr(f, t, t);
    for (int i = 0; i < t; ++i) {
        FMatrix v = mod_j(mat_pow(lifts[i], f.q()));
        for (int r = 0; r < t; ++r) fr.at(r, i) = v(r, 0);
    }
    FMatrix ker = nullspace(fr - FMatrix::identity(f, t));
    q.frob_fixed = q.comp * ker;
    return q;
}

}  // namespace

EndInfo end_info(const Rep& m, const DecomposeOptions& opt) {
    EndInfo info;
    info.basis = hom_basis(m, m);
    if (info.basis.empty()) return info;
    const Field& f = m.field();
    info.radical = matrix_algebra_radical(info.basis, m.total(), opt);
    info.top_dim = int(info.basis.size()) - info.radical.cols();
    Quot q = analyze(f, info.basis, info.radical);
    info.local = q.commutative && q.frob_fixed.cols() == 1;
    return info;
}

namespace {

struct Splitter {
    const DecomposeOptions& opt;
    std::mt19937_64 rng;
    std::vector<Summand> out;

    explicit Splitter(const DecomposeOptions& o) : opt(o), rng(o.seed) {}

    // returns true and fills k/i when y splits X nontrivially
    static bool fitting(const FMatrix& y, FMatrix& kbasis, FMatrix& ibasis) {
        const int n = y.rows();
        std::uint64_t e = 1;
        while (e < std::uint64_t(n)) e <<= 1;
        FMatrix yn = mat_pow(y, e);
        int r = rank(yn);
        if (r == 0 || r == n) return false;
        kbasis = nullspace(yn);
        ibasis = column_basis(yn);
        return true;
    }

    void run(const Rep& x, const FMatrix& incl, const FMatrix& proj) {
        if (x.total() == 0) return;
        const Field& f = x.field();
        EndInfo info;
        info.basis = hom_basis(x, x);
        info.radical = matrix_algebra_radical(info.basis, x.total(), opt);
        Quot q = analyze(f, info.basis, info.radical);
        if (q.commutative && q.frob_fixed.cols() == 1) {
            out.push_back({x, incl, proj});
            return;
        }
        const int n = x.total();
        const FMatrix id = FMatrix::identity(f, n);
        FMatrix kb, ib;
        bool found = false;
        auto attempt = [&](const FMatrix& y) {
            for (Elem lam = 0; lam < f.q() && !found; ++lam)
                if (fitting(y - id.scaled(lam), kb, ib)) found = true;
        };
        if (q.commutative)
            for (int c = 0; c < q.frob_fixed.cols() && !found; ++c) attempt(combine(info.basis, q.frob_fixed, c));
        for (std::size_t b = 0; b < info.basis.size() && !found; ++b) attempt(info.basis[b]);
        std::uniform_int_distribution<Elem> dist(0, f.q() - 1);
        for (int t = 0; t < opt.random_tries && !found; ++t) {
            FMatrix y(f, n, n);
            for (auto& b : info.basis) y.add_scaled(b, dist(rng));
            if (fitting(y, kb, ib)) found = true;
        }
        if (!found) {
            const int d = int(info.basis.size());
            long double size = 1;
            for (int i = 0; i < d; ++i) size *= f.q();
            if (size > static_cast<long double>(opt.exhaust_cap))
                throw Error("CapExceeded", "no splitting endomorphism found within the random budget");
            std::vector<Elem> co(d, 0);
            for (;;) {
                FMatrix y(f, n, n);
                for (int i = 0; i < d; ++i)
                    if (co[i]) y.add_scaled(info.basis[i], co[i]);
                if (fitting(y, kb, ib)) {
                    found = true;
                    break;
                }
                int k = 0;
                while (k < d && ++co[k] == f.q()) co[k++] = 0;
                if (k == d) break;
            }
        }
        if (!found) throw Error("Internal", "decomposable module without a splitting endomorphism");
        SubRep s1 = submodule(x, kb), s2 = submodule(x, ib);
        FMatrix all = FMatrix::hstack(s1.incl, s2.incl);
        FMatrix inv = inverse(all);
        FMatrix p1 = inv.block(0, 0, s1.incl.cols(), n);
        FMatrix p2 = inv.block(s1.incl.cols(), 0, s2.incl.cols(), n);
        run(s1.rep, incl * s1.incl, p1 * proj);
        run(s2.rep, incl * s2.incl, p2 * proj);
    }
};

}  // namespace

std::vector<Summand> decompose(const Rep& m, const DecomposeOptions& opt) {
    Splitter s(opt);
    const int n = m.total();
    s.run(m, FMatrix::identity(m.field(), n), FMatrix::identity(m.field(), n));
    return s.out;
}

}  // namespace tilthall
