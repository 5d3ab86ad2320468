#include "tilthall/ffla.hpp"

#include <algorithm>
#include <sstream>

namespace tilthall {

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

using Poly = std::vector<int>;  // low to high, over F_p

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, int p) {
    trim(a);
    const int dm = int(m.size()) - 1;
    int lead_inv = 1;
    for (int k = 1; k < p; ++k)
        if ((m.back() * k) % p == 1) lead_inv = k;
    while (int(a.size()) - 1 >= dm && !a.empty()) {
        int shift = int(a.size()) - 1 - dm;
        int c = (a.back() * lead_inv) % p;
        for (int i = 0; i <= dm; ++i)
            a[i + shift] = ((a[i + shift] - c * m[i]) % p + p) % p;
        trim(a);
    }
    return a;
}

bool irreducible(const Poly& f, int p) {
    const int deg = int(f.size()) - 1;
    // trial division by monic polynomials of degree 1..deg/2
    for (int d = 1; d <= deg / 2; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long long n = 0; n < count; ++n) {
            Poly g(d + 1, 0);
            long long t = n;
            for (int i = 0; i < d; ++i) {
                g[i] = int(t % p);
                t /= p;
            }
            g[d] = 1;
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace

struct Field::Impl {
    std::vector<int> reduction;
    std::vector<Elem> exp;  // exp[i] = g^i, length q-1
    std::vector<std::uint32_t> log;
    std::vector<std::uint32_t> pw;  // p^i
};

Field Field::make(int p, int e, std::uint32_t cap) {
    if (p < 2 || !is_prime(p)) throw Error("NonPrime", "characteristic " + std::to_string(p) + " is not prime");
    if (e < 1) throw Error("UnsupportedSize", "exponent must be positive");
    std::uint64_t q = 1;
    for (int i = 0; i < e; ++i) {
        q *= std::uint64_t(p);
        if (q > cap) throw Error("UnsupportedSize", "field size exceeds cap " + std::to_string(cap));
    }
    Field f;
    f.p_ = std::uint32_t(p);
    f.e_ = e;
    f.q_ = std::uint32_t(q);
    auto impl = std::make_shared<Impl>();
    impl->pw.resize(e + 1, 1);
    for (int i = 1; i <= e; ++i) impl->pw[i] = impl->pw[i - 1] * std::uint32_t(p);
    if (e > 1) {
        std::uint32_t count = f.q_;
        for (std::uint32_t n = 0; n < count; ++n) {
            Poly g(e + 1, 0);
            std::uint32_t t = n;
            for (int i = 0; i < e; ++i) {
                g[i] = int(t % p);
                t /= p;
            }
            g[e] = 1;
            if (g[0] != 0 && irreducible(g, p)) {
                impl->reduction = g;
                break;
            }
        }
        // log/exp tables from the first primitive element
        auto to_poly = [&](Elem a) {
            Poly r(e, 0);
            for (int i = 0; i < e; ++i) {
                r[i] = int(a % p);
                a /= p;
            }
            return r;
        };
        auto from_poly = [&](Poly a) {
            Elem r = 0;
            a.resize(e, 0);
            for (int i = e - 1; i >= 0; --i) r = r * p + Elem(a[i]);
            return r;
        };
        auto pmul = [&](Elem a, Elem b) {
            Poly x = to_poly(a), y = to_poly(b), z(2 * e, 0);
            for (int i = 0; i < e; ++i)
                for (int j = 0; j < e; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % p;
            return from_poly(poly_mod(z, impl->reduction, p));
        };
        for (Elem g = 2; g < f.q_; ++g) {
            std::vector<Elem> ex;
            ex.reserve(f.q_ - 1);
            Elem cur = 1;
            bool prim = true;
            for (std::uint32_t i = 0; i + 1 < f.q_; ++i) {
                if (i > 0 && cur == 1) {
                    prim = false;
                    break;
                }
                ex.push_back(cur);
                cur = pmul(cur, g);
            }
            if (prim && cur == 1) {
                impl->exp = std::move(ex);
                impl->log.assign(f.q_, 0);
                for (std::uint32_t i = 0; i + 1 < f.q_; ++i) impl->log[impl->exp[i]] = i;
                break;
            }
        }
        if (impl->exp.empty()) throw Error("UnsupportedSize", "no primitive element found");
    }
    f.impl_ = impl;
    return f;
}

const std::vector<int>& Field::reduction() const { return impl_->reduction; }

Elem Field::add_ext(Elem a, Elem b) const {
    Elem r = 0, mult = 1;
    for (int i = 0; i < e_; ++i) {
        Elem s = (a % p_ + b % p_) % p_;
        r += s * mult;
        mult *= p_;
        a /= p_;
        b /= p_;
    }
    return r;
}

Elem Field::neg_ext(Elem a) const {
    Elem r = 0, mult = 1;
    for (int i = 0; i < e_; ++i) {
        Elem d = a % p_;
        r += (d == 0 ? 0 : p_ - d) * mult;
        mult *= p_;
        a /= p_;
    }
    return r;
}

Elem Field::mul_ext(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = impl_->log[a] + impl_->log[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return impl_->exp[s];
}

Elem Field::inv(Elem a) const {
    if (a == 0) throw Error("Singular", "inverse of zero");
    if (e_ == 1) return pow(a, p_ - 2);
    std::uint32_t l = impl_->log[a];
    return impl_->exp[l == 0 ? 0 : q_ - 1 - l];
}

Elem Field::pow(Elem a, std::uint64_t k) const {
    Elem r = 1;
    while (k) {
        if (k & 1) r = mul(r, a);
        a = mul(a, a);
        k >>= 1;
    }
    return r;
}

Elem Field::from_int(long long v) const {
    long long m = v % (long long)p_;
    if (m < 0) m += p_;
    return Elem(m);
}

std::vector<int> Field::coeffs(Elem a) const {
    std::vector<int> c(e_, 0);
    for (int i = 0; i < e_; ++i) {
        c[i] = int(a % p_);
        a /= p_;
    }
    return c;
}

Elem Field::from_coeffs(const std::vector<int>& c) const {
    if (int(c.size()) != e_) throw Error("ParseError", "coefficient vector has wrong length");
    Elem r = 0;
    for (int i = e_ - 1; i >= 0; --i) {
        if (c[i] < 0 || c[i] >= int(p_)) throw Error("ParseError", "coefficient out of range");
        r = r * p_ + Elem(c[i]);
    }
    return r;
}

std::string Field::name() const {
    std::ostringstream os;
    os << "F" << q_;
    return os.str();
}

// ---------------------------------------------------------------- FMatrix

FMatrix::FMatrix(Field f, int rows, int cols)
    : field_(std::move(f)), rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, 0) {}

FMatrix FMatrix::identity(const Field& f, int n) {
    FMatrix m(f, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FMatrix FMatrix::from_rows(const Field& f, const std::vector<std::vector<Elem>>& rows) {
    int r = int(rows.size());
    int c = r ? int(rows[0].size()) : 0;
    FMatrix m(f, r, c);
    for (int i = 0; i < r; ++i) {
        if (int(rows[i].size()) != c) throw Error("ShapeMismatch", "ragged rows");
        for (int j = 0; j < c; ++j) {
            if (rows[i][j] >= f.q()) throw Error("ShapeMismatch", "entry is not a field element");
            m.at(i, j) = rows[i][j];
        }
    }
    return m;
}

FMatrix FMatrix::column_vector(const Field& f, const std::vector<Elem>& v) {
    FMatrix m(f, int(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.at(int(i), 0) = v[i];
    return m;
}

FMatrix FMatrix::operator*(const FMatrix& o) const {
    if (cols_ != o.rows_) throw Error("ShapeMismatch", "product of incompatible matrices");
    FMatrix r(field_, rows_, o.cols_);
    if (field_.e() == 1) {
        const std::uint64_t p = field_.q();
        std::vector<std::uint64_t> acc(o.cols_);
        for (int i = 0; i < rows_; ++i) {
            std::fill(acc.begin(), acc.end(), 0);
            for (int k = 0; k < cols_; ++k) {
                Elem a = data_[std::size_t(i) * cols_ + k];
                if (!a) continue;
                const Elem* row = &o.data_[std::size_t(k) * o.cols_];
                for (int j = 0; j < o.cols_; ++j) acc[j] += std::uint64_t(a) * row[j];
                if (k % 1024 == 1023)
                    for (auto& x : acc) x %= p;
            }
            for (int j = 0; j < o.cols_; ++j) r.data_[std::size_t(i) * o.cols_ + j] = Elem(acc[j] % p);
        }
        return r;
    }
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            Elem a = (*this)(i, k);
            if (!a) continue;
            for (int j = 0; j < o.cols_; ++j) r.at(i, j) = field_.add(r(i, j), field_.mul(a, o(k, j)));
        }
    return r;
}

FMatrix FMatrix::operator+(const FMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("ShapeMismatch", "sum of incompatible matrices");
    FMatrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = field_.add(data_[i], o.data_[i]);
    return r;
}

FMatrix FMatrix::operator-(const FMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("ShapeMismatch", "difference of incompatible matrices");
    FMatrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = field_.sub(data_[i], o.data_[i]);
    return r;
}

FMatrix FMatrix::scaled(Elem s) const {
    FMatrix r = *this;
    for (auto& x : r.data_) x = field_.mul(x, s);
    return r;
}

void FMatrix::add_scaled(const FMatrix& o, Elem s) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("ShapeMismatch", "add_scaled shape");
    if (s == 0) return;
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (o.data_[i]) data_[i] = field_.add(data_[i], field_.mul(s, o.data_[i]));
}

FMatrix FMatrix::transpose() const {
    FMatrix r(field_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = (*this)(i, j);
    return r;
}

FMatrix FMatrix::block(int r0, int c0, int nr, int nc) const {
    if (r0 < 0 || c0 < 0 || r0 + nr > rows_ || c0 + nc > cols_) throw Error("ShapeMismatch", "block out of range");
    FMatrix r(field_, nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) r.at(i, j) = (*this)(r0 + i, c0 + j);
    return r;
}

void FMatrix::set_block(int r0, int c0, const FMatrix& b) {
    if (r0 < 0 || c0 < 0 || r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
        throw Error("ShapeMismatch", "set_block out of range");
    for (int i = 0; i < b.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) at(r0 + i, c0 + j) = b(i, j);
}

FMatrix FMatrix::select_cols(const std::vector<int>& idx) const {
    FMatrix r(field_, rows_, int(idx.size()));
    for (int i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) r.at(i, int(j)) = (*this)(i, idx[j]);
    return r;
}

FMatrix FMatrix::select_rows(const std::vector<int>& idx) const {
    FMatrix r(field_, int(idx.size()), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (int j = 0; j < cols_; ++j) r.at(int(i), j) = (*this)(idx[i], j);
    return r;
}

std::vector<Elem> FMatrix::column_values(int c) const {
    std::vector<Elem> v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
}

FMatrix FMatrix::hstack(const FMatrix& a, const FMatrix& b) {
    if (a.rows_ != b.rows_) throw Error("ShapeMismatch", "hstack rows");
    const Field& f = a.field_.valid() ? a.field_ : b.field_;
    FMatrix r(f, a.rows_, a.cols_ + b.cols_);
    r.set_block(0, 0, a);
    r.set_block(0, a.cols_, b);
    return r;
}

FMatrix FMatrix::vstack(const FMatrix& a, const FMatrix& b) {
    if (a.cols_ != b.cols_) throw Error("ShapeMismatch", "vstack cols");
    const Field& f = a.field_.valid() ? a.field_ : b.field_;
    FMatrix r(f, a.rows_ + b.rows_, a.cols_);
    r.set_block(0, 0, a);
    r.set_block(a.rows_, 0, b);
    return r;
}

bool FMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Elem x) { return x == 0; });
}

bool FMatrix::operator==(const FMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

// ------------------------------------------------------- elimination

Echelon row_reduce(const FMatrix& a) {
    Echelon out{a, {}};
    FMatrix& m = out.rref;
    const Field& f = a.field();
    const int R = m.rows(), C = m.cols();
    int row = 0;
    for (int col = 0; col < C && row < R; ++col) {
        int piv = -1;
        for (int i = row; i < R; ++i)
            if (m(i, col)) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < C; ++j) std::swap(m.at(piv, j), m.at(row, j));
        Elem inv = f.inv(m(row, col));
        if (inv != 1)
            for (int j = col; j < C; ++j) m.at(row, j) = f.mul(m(row, j), inv);
        for (int i = 0; i < R; ++i) {
            if (i == row) continue;
            Elem c = m(i, col);
            if (!c) continue;
            Elem nc = f.neg(c);
            for (int j = col; j < C; ++j)
                if (m(row, j)) m.at(i, j) = f.add(m(i, j), f.mul(nc, m(row, j)));
        }
        out.pivots.push_back(col);
        ++row;
    }
    return out;
}

int rank(const FMatrix& a) { return int(row_reduce(a).pivots.size()); }

FMatrix nullspace(const FMatrix& a) {
    Echelon e = row_reduce(a);
    const int C = a.cols();
    std::vector<char> is_piv(C, 0);
    for (int c : e.pivots) is_piv[c] = 1;
    std::vector<int> free;
    for (int c = 0; c < C; ++c)
        if (!is_piv[c]) free.push_back(c);
    FMatrix n(a.field(), C, int(free.size()));
    const Field& f = a.field();
    for (std::size_t k = 0; k < free.size(); ++k) {
        n.at(free[k], int(k)) = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            n.at(e.pivots[r], int(k)) = f.neg(e.rref(int(r), free[k]));
    }
    return n;
}

SolveResult solve(const FMatrix& a, const FMatrix& b) {
    if (a.rows() != b.rows()) throw Error("ShapeMismatch", "solve: row counts differ");
    SolveResult out;
    FMatrix aug = FMatrix::hstack(a, b);
    Echelon e = row_reduce(aug);
    const int C = a.cols();
    out.consistent = true;
    for (int c : e.pivots)
        if (c >= C) out.consistent = false;
    out.kernel = nullspace(a);
    if (!out.consistent) return out;
    out.particular = FMatrix(a.field(), C, b.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
        for (int j = 0; j < b.cols(); ++j) out.particular.at(e.pivots[r], j) = e.rref(int(r), C + j);
    return out;
}

FMatrix inverse(const FMatrix& a) {
    if (a.rows() != a.cols()) throw Error("ShapeMismatch", "inverse of non-square matrix");
    const int n = a.rows();
    Echelon e = row_reduce(FMatrix::hstack(a, FMatrix::identity(a.field(), n)));
    if (int(e.pivots.size()) < n || (n > 0 && e.pivots[n - 1] >= n))
        throw Error("Singular", "matrix is not invertible");
    return e.rref.block(0, n, n, n);
}

LinearSolveOutput linear_solve(const FMatrix& a, SolveMode mode, const FMatrix* b) {
    LinearSolveOutput out;
    switch (mode) {
        case SolveMode::Rank:
            out.rank = rank(a);
            break;
        case SolveMode::Nullspace:
            out.matrix = nullspace(a);
            out.rank = a.cols() - out.matrix.cols();
            break;
        case SolveMode::Solve: {
            if (!b) throw Error("ShapeMismatch", "solve mode needs a right-hand side");
            SolveResult s = solve(a, *b);
            out.consistent = s.consistent;
            out.matrix = s.particular;
            out.kernel = s.kernel;
            out.rank = a.cols() - s.kernel.cols();
            break;
        }
        case SolveMode::Inverse:
            out.matrix = inverse(a);
            out.rank = a.rows();
            break;
    }
    return out;
}

// ------------------------------------------------------ subspaces

FMatrix column_basis(const FMatrix& a) {
    Echelon e = row_reduce(a);
    return a.select_cols(e.pivots);
}

FMatrix complement_basis(const FMatrix& basis, int n) {
    const Field& f = basis.field();
    FMatrix cur = basis;
    std::vector<int> picked;
    int r = rank(basis);
    for (int i = 0; i < n && r < n; ++i) {
        FMatrix u(f, n, 1);
        u.at(i, 0) = 1;
        FMatrix t = FMatrix::hstack(cur, u);
        int r2 = rank(t);
        if (r2 > r) {
            cur = t;
            r = r2;
            picked.push_back(i);
        }
    }
    FMatrix out(f, n, int(picked.size()));
    for (std::size_t k = 0; k < picked.size(); ++k) out.at(picked[k], int(k)) = 1;
    return out;
}

bool in_span(const FMatrix& basis, const FMatrix& vecs) {
    if (vecs.cols() == 0) return true;
    return rank(FMatrix::hstack(basis, vecs)) == rank(basis);
}

FMatrix coordinates(const FMatrix& basis, const FMatrix& vecs) {
    SolveResult s = solve(basis, vecs);
    if (!s.consistent) throw Error("ShapeMismatch", "vector outside the span of the basis");
    return s.particular;
}

FMatrix span_sum(const FMatrix& a, const FMatrix& b) { return column_basis(FMatrix::hstack(a, b)); }

FMatrix span_intersection(const FMatrix& a, const FMatrix& b) {
    // a x = b y  <=>  [a | -b] (x;y) = 0
    FMatrix nb = b.scaled(b.field().neg(1));
    FMatrix n = nullspace(FMatrix::hstack(a, nb));
    FMatrix x = n.block(0, 0, a.cols(), n.cols());
    return column_basis(a * x);
}

FMatrix flatten(const FMatrix& m) {
    FMatrix v(m.field(), m.rows() * m.cols(), 1);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) v.at(i * m.cols() + j, 0) = m(i, j);
    return v;
}

FMatrix unflatten(const FMatrix& v, int rows, int cols) {
    FMatrix m(v.field(), rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = v(i * cols + j, 0);
    return m;
}

}  // namespace tilthall
