#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tilthall/error.hpp"

namespace tilthall {

using Elem = std::uint32_t;

/// Finite field F_q, q = p^e.  For e > 1 an element is the integer
/// sum c_i p^i of its coefficient vector modulo the reduction polynomial.
class Field {
public:
    static constexpr std::uint32_t kDefaultCap = 1u << 20;

    Field() = default;
    static Field make(int p, int e = 1, std::uint32_t cap = kDefaultCap);

    bool valid() const { return q_ != 0; }
    int p() const { return static_cast<int>(p_); }
    int e() const { return e_; }
    std::uint32_t q() const { return q_; }
    /// Reduction polynomial, coefficients low to high (monic, degree e).
    /// Empty for prime fields.
    const std::vector<int>& reduction() const;

    Elem add(Elem a, Elem b) const {
        if (e_ == 1) {
            Elem s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        return add_ext(a, b);
    }
    Elem neg(Elem a) const {
        if (e_ == 1) return a == 0 ? 0 : p_ - a;
        return neg_ext(a);
    }
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem mul(Elem a, Elem b) const {
        if (e_ == 1) return static_cast<Elem>((std::uint64_t(a) * b) % p_);
        return mul_ext(a, b);
    }
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t k) const;
    /// Image of an integer in the prime subfield.
    Elem from_int(long long v) const;

    std::vector<int> coeffs(Elem a) const;
    Elem from_coeffs(const std::vector<int>& c) const;

    bool operator==(const Field& o) const { return p_ == o.p_ && e_ == o.e_; }
    bool operator!=(const Field& o) const { return !(*this == o); }
    std::string name() const;

private:
    struct Impl;
    Elem add_ext(Elem a, Elem b) const;
    Elem neg_ext(Elem a) const;
    Elem mul_ext(Elem a, Elem b) const;

    std::shared_ptr<const Impl> impl_;
    std::uint32_t p_ = 0;
    std::uint32_t q_ = 0;
    int e_ = 0;
};

bool is_prime(long long n);

/// Dense row-major matrix over a finite field.
class FMatrix {
public:
    FMatrix() = default;
    FMatrix(Field f, int rows, int cols);

    static FMatrix identity(const Field& f, int n);
    static FMatrix from_rows(const Field& f, const std::vector<std::vector<Elem>>& rows);
    static FMatrix column_vector(const Field& f, const std::vector<Elem>& v);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Field& field() const { return field_; }
    const std::vector<Elem>& data() const { return data_; }

    Elem operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }
    Elem& at(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }

    FMatrix operator*(const FMatrix& o) const;
    FMatrix operator+(const FMatrix& o) const;
    FMatrix operator-(const FMatrix& o) const;
    FMatrix scaled(Elem s) const;
    void add_scaled(const FMatrix& o, Elem s);  // this += s*o
    FMatrix transpose() const;

    FMatrix block(int r0, int c0, int nr, int nc) const;
    void set_block(int r0, int c0, const FMatrix& b);
    FMatrix column(int c) const { return block(0, c, rows_, 1); }
    FMatrix select_cols(const std::vector<int>& idx) const;
    FMatrix select_rows(const std::vector<int>& idx) const;
    std::vector<Elem> column_values(int c) const;

    static FMatrix hstack(const FMatrix& a, const FMatrix& b);
    static FMatrix vstack(const FMatrix& a, const FMatrix& b);

    bool is_zero() const;
    bool operator==(const FMatrix& o) const;
    bool operator!=(const FMatrix& o) const { return !(*this == o); }

private:
    Field field_;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Elem> data_;
};

struct Echelon {
    FMatrix rref;             // reduced row echelon form
    std::vector<int> pivots;  // pivot column of each nonzero row
};

/// Gauss-Jordan elimination, first nonzero entry as pivot.
Echelon row_reduce(const FMatrix& a);
int rank(const FMatrix& a);
/// Columns form a basis of {x : a x = 0}.
FMatrix nullspace(const FMatrix& a);

struct SolveResult {
    bool consistent = false;
    FMatrix particular;  // a x = b (one column per column of b)
    FMatrix kernel;      // nullspace basis of a
};
SolveResult solve(const FMatrix& a, const FMatrix& b);
FMatrix inverse(const FMatrix& a);

enum class SolveMode { Rank, Nullspace, Solve, Inverse };
struct LinearSolveOutput {
    int rank = 0;
    FMatrix matrix;  // nullspace basis, particular solution or inverse
    FMatrix kernel;
    bool consistent = true;
};
LinearSolveOutput linear_solve(const FMatrix& a, SolveMode mode, const FMatrix* b = nullptr);

// Column-space helpers.  A "basis" is a matrix with independent columns.
FMatrix column_basis(const FMatrix& a);
/// Unit vectors completing the columns of `basis` to a basis of F^n.
FMatrix complement_basis(const FMatrix& basis, int n);
bool in_span(const FMatrix& basis, const FMatrix& vecs);
/// Coordinates x with basis * x = vecs; throws if some column is outside the span.
FMatrix coordinates(const FMatrix& basis, const FMatrix& vecs);
FMatrix span_sum(const FMatrix& a, const FMatrix& b);
FMatrix span_intersection(const FMatrix& a, const FMatrix& b);

/// Flatten a matrix to a column vector (row-major) and back.
FMatrix flatten(const FMatrix& m);
FMatrix unflatten(const FMatrix& v, int rows, int cols);

}  // namespace tilthall
