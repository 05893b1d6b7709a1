#pragma once

#include <cstddef>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "koszulab/rational.hpp"

namespace koszulab {

// Sparse vector: strictly increasing indices, no stored zeros.
using SparseVector = std::vector<std::pair<int, Rational>>;

// Returns a + s * b.
SparseVector axpy(const SparseVector& a, const Rational& s, const SparseVector& b);
SparseVector scaled(const SparseVector& v, const Rational& s);
SparseVector from_map(const std::map<int, Rational>& m);

class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols);

    static SparseMatrix identity(int n);
    static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const;
    bool is_zero() const { return nnz() == 0; }

    Rational get(int r, int c) const;
    void set(int r, int c, const Rational& v);
    void add(int r, int c, const Rational& v);
    void set_row(int r, const SparseVector& v);
    const std::map<int, Rational>& row(int r) const { return data_.at(r); }
    SparseVector row_vector(int r) const;

    SparseMatrix transpose() const;
    SparseMatrix operator*(const SparseMatrix& rhs) const;
    std::vector<Rational> apply(const std::vector<Rational>& v) const;
    SparseVector apply(const SparseVector& v) const;

    bool operator==(const SparseMatrix& other) const;

private:
    void check(int r, int c) const;

    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::map<int, Rational>> data_;
};

// Fully reduced row echelon form of the row space of a matrix. Pivots are
// chosen by fraction-free Markowitz elimination with (row, col) tie-breaks,
// then back-substituted so every stored row has a 1 in its pivot column and
// zeros in all other pivot columns.
class ReducedEchelon {
public:
    ReducedEchelon() = default;
    explicit ReducedEchelon(const SparseMatrix& m);

    std::size_t rank() const { return pivots_.size(); }
    int cols() const { return cols_; }
    // Pivot columns in increasing order.
    const std::vector<int>& pivot_columns() const { return pivots_; }
    std::vector<int> free_columns() const;
    bool is_pivot(int col) const { return rows_.count(col) != 0; }
    const SparseVector& pivot_row(int col) const { return rows_.at(col); }

    // Reduces v modulo the row space; the result is supported on free columns.
    SparseVector reduce(const SparseVector& v) const;

private:
    int cols_ = 0;
    std::vector<int> pivots_;
    std::unordered_map<int, SparseVector> rows_;
};

using HomologyProfile = std::map<int, long>;

std::size_t rank(const SparseMatrix& m);

// Basis of the right null space {v : m v = 0}, as dense vectors of length cols.
std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m);

// blocks[i] is the differential C_i -> C_{i+1} (rows = dim C_{i+1}, cols = dim C_i).
// Returns dim H_i for i = 0..blocks.size(). Throws CompositionNotZero when
// blocks[i+1] * blocks[i] != 0 and std::invalid_argument on
// incompatible shapes.
HomologyProfile homology(const std::vector<SparseMatrix>& blocks);

}  // namespace koszulab
