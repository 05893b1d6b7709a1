#include "koszulab/linalg.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "koszulab/errors.hpp"

namespace koszulab {

SparseVector axpy(const SparseVector& a, const Rational& s, const SparseVector& b) {
    if (s == 0) return a;
    SparseVector out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, s * b[j].second);
            ++j;
        } else {
            Rational v = a[i].second + s * b[j].second;
            if (v != 0) out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

SparseVector scaled(const SparseVector& v, const Rational& s) {
    SparseVector out;
    if (s == 0) return out;
    out.reserve(v.size());
    for (const auto& [i, x] : v) out.emplace_back(i, x * s);
    return out;
}

SparseVector from_map(const std::map<int, Rational>& m) {
    SparseVector out;
    out.reserve(m.size());
    for (const auto& [i, x] : m)
        if (x != 0) out.emplace_back(i, x);
    return out;
}

SparseMatrix::SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
}

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    SparseMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) throw std::invalid_argument("ragged dense matrix");
        for (int j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

std::size_t SparseMatrix::nnz() const {
    std::size_t n = 0;
    for (const auto& r : data_) n += r.size();
    return n;
}

void SparseMatrix::check(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw std::out_of_range("matrix index (" + std::to_string(r) + "," + std::to_string(c) + ") out of range");
}

Rational SparseMatrix::get(int r, int c) const {
    check(r, c);
    auto it = data_[r].find(c);
    return it == data_[r].end() ? Rational(0) : it->second;
}

void SparseMatrix::set(int r, int c, const Rational& v) {
    check(r, c);
    if (v == 0)
        data_[r].erase(c);
    else
        data_[r][c] = v;
}

void SparseMatrix::add(int r, int c, const Rational& v) {
    check(r, c);
    if (v == 0) return;
    auto [it, inserted] = data_[r].emplace(c, v);
    if (!inserted) {
        it->second += v;
        if (it->second == 0) data_[r].erase(it);
    }
}

void SparseMatrix::set_row(int r, const SparseVector& v) {
    if (r < 0 || r >= rows_) throw std::out_of_range("row index out of range");
    data_[r].clear();
    for (const auto& [c, x] : v) set(r, c, x);
}

SparseVector SparseMatrix::row_vector(int r) const { return from_map(data_.at(r)); }

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (const auto& [c, x] : data_[r]) t.data_[c].emplace(r, x);
    return t;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product shape mismatch");
    SparseMatrix out(rows_, rhs.cols_);
    for (int r = 0; r < rows_; ++r)
        for (const auto& [k, x] : data_[r])
            for (const auto& [c, y] : rhs.data_[k]) out.add(r, c, x * y);
    return out;
}

std::vector<Rational> SparseMatrix::apply(const std::vector<Rational>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("vector length mismatch");
    std::vector<Rational> out(rows_);
    for (int r = 0; r < rows_; ++r)
        for (const auto& [c, x] : data_[r]) out[r] += x * v[c];
    return out;
}

SparseVector SparseMatrix::apply(const SparseVector& v) const {
    std::map<int, Rational> acc;
    SparseMatrix t = transpose();
    for (const auto& [c, x] : v) {
        if (c < 0 || c >= cols_) throw std::out_of_range("vector index out of range");
        for (const auto& [r, y] : t.data_[c]) acc[r] += x * y;
    }
    return from_map(acc);
}

bool SparseMatrix::operator==(const SparseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

namespace {

using IntRow = std::vector<std::pair<int, Integer>>;

IntRow primitive_row(const std::map<int, Rational>& row) {
    Integer lcm = 1;
    for (const auto& [c, x] : row) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    IntRow out;
    Integer g = 0;
    for (const auto& [c, x] : row) {
        Integer v = x.get_num() * (lcm / x.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        out.emplace_back(c, std::move(v));
    }
    if (g > 1)
        for (auto& e : out) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
    return out;
}

void make_primitive(IntRow& row) {
    Integer g = 0;
    for (const auto& e : row) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 1) return;
    }
    if (g > 1)
        for (auto& e : row) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

const Integer* find_entry(const IntRow& row, int col) {
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const auto& e, int c) { return e.first < c; });
    return (it != row.end() && it->first == col) ? &it->second : nullptr;
}

// row = p * row - a * pivot, where a is row's entry at the pivot column.
IntRow eliminate(const IntRow& row, const Integer& a, const IntRow& pivot, const Integer& p) {
    IntRow out;
    out.reserve(row.size() + pivot.size());
    std::size_t i = 0, j = 0;
    while (i < row.size() || j < pivot.size()) {
        if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
            out.emplace_back(row[i].first, p * row[i].second);
            ++i;
        } else if (i == row.size() || pivot[j].first < row[i].first) {
            out.emplace_back(pivot[j].first, -a * pivot[j].second);
            ++j;
        } else {
            Integer v = p * row[i].second - a * pivot[j].second;
            if (v != 0) out.emplace_back(row[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    make_primitive(out);
    return out;
}

struct PivotStep {
    int row;
    int col;
};

// Fraction-free sparse elimination. Returns the pivot rows (integer, primitive)
// in elimination order together with their pivot columns.
std::vector<std::pair<int, IntRow>> markowitz_eliminate(const SparseMatrix& m) {
    const int nrows = m.rows();
    const int ncols = m.cols();
    std::vector<IntRow> rows(nrows);
    std::vector<std::set<int>> col_rows(ncols);
    std::set<std::pair<std::size_t, int>> by_count;
    for (int r = 0; r < nrows; ++r) {
        rows[r] = primitive_row(m.row(r));
        for (const auto& e : rows[r]) col_rows[e.first].insert(r);
        if (!rows[r].empty()) by_count.emplace(rows[r].size(), r);
    }

    std::vector<std::pair<int, IntRow>> pivots;
    constexpr int kSearchRows = 4;
    while (!by_count.empty()) {
        // Markowitz cost (r-1)(c-1) over a few of the sparsest rows.
        std::size_t best_cost = std::numeric_limits<std::size_t>::max();
        PivotStep best{-1, -1};
        int examined = 0;
        std::size_t first_count = by_count.begin()->first;
        for (auto it = by_count.begin(); it != by_count.end(); ++it) {
            if (examined >= kSearchRows && it->first > first_count) break;
            int r = it->second;
            for (const auto& e : rows[r]) {
                std::size_t cost = (rows[r].size() - 1) * (col_rows[e.first].size() - 1);
                if (cost < best_cost || (cost == best_cost && (r < best.row || (r == best.row && e.first < best.col)))) {
                    best_cost = cost;
                    best = {r, e.first};
                }
            }
            ++examined;
            if (best_cost == 0 && examined >= kSearchRows) break;
        }

        const int pr = best.row;
        const int pc = best.col;
        IntRow pivot = std::move(rows[pr]);
        rows[pr].clear();
        by_count.erase({pivot.size(), pr});
        for (const auto& e : pivot) col_rows[e.first].erase(pr);
        const Integer p = *find_entry(pivot, pc);

        std::vector<int> targets(col_rows[pc].begin(), col_rows[pc].end());
        for (int r : targets) {
            const Integer a = *find_entry(rows[r], pc);
            by_count.erase({rows[r].size(), r});
            for (const auto& e : rows[r]) col_rows[e.first].erase(r);
            Integer g;
            mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), a.get_mpz_t());
            rows[r] = eliminate(rows[r], a / g, pivot, p / g);
            for (const auto& e : rows[r]) col_rows[e.first].insert(r);
            if (!rows[r].empty()) by_count.emplace(rows[r].size(), r);
        }
        pivots.emplace_back(pc, std::move(pivot));
    }
    return pivots;
}

}  // namespace

ReducedEchelon::ReducedEchelon(const SparseMatrix& m) : cols_(m.cols()) {
    auto steps = markowitz_eliminate(m);
    // Later pivot rows never contain earlier pivot columns, so reducing in
    // reverse elimination order yields a fully reduced basis.
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        const int pc = it->first;
        const Integer* lead = find_entry(it->second, pc);
        const Rational inv = Rational(1) / Rational(*lead);
        SparseVector row;
        row.reserve(it->second.size());
        for (const auto& [c, x] : it->second) row.emplace_back(c, Rational(x) * inv);
        std::map<int, Rational> acc;
        for (const auto& [c, x] : row) acc[c] += x;
        for (const auto& [c, x] : row) {
            if (c == pc) continue;
            auto found = rows_.find(c);
            if (found == rows_.end()) continue;
            Rational coeff = x;
            acc[c] -= coeff;
            for (const auto& [c2, y] : found->second)
                if (c2 != c) acc[c2] -= coeff * y;
        }
        rows_.emplace(pc, from_map(acc));
        pivots_.push_back(pc);
    }
    std::sort(pivots_.begin(), pivots_.end());
}

std::vector<int> ReducedEchelon::free_columns() const {
    std::vector<int> out;
    for (int c = 0; c < cols_; ++c)
        if (!is_pivot(c)) out.push_back(c);
    return out;
}

SparseVector ReducedEchelon::reduce(const SparseVector& v) const {
    if (rows_.empty()) return v;
    std::map<int, Rational> acc;
    for (const auto& [c, x] : v) {
        auto found = rows_.find(c);
        if (found == rows_.end()) {
            acc[c] += x;
            continue;
        }
        for (const auto& [c2, y] : found->second)
            if (c2 != c) acc[c2] -= x * y;
    }
    return from_map(acc);
}

std::size_t rank(const SparseMatrix& m) { return markowitz_eliminate(m).size(); }

std::vector<std::vector<Rational>> kernel_basis(const SparseMatrix& m) {
    ReducedEchelon e(m);
    std::vector<std::vector<Rational>> basis;
    std::vector<int> free = e.free_columns();
    std::unordered_map<int, std::size_t> free_index;
    for (std::size_t i = 0; i < free.size(); ++i) free_index[free[i]] = i;
    basis.assign(free.size(), std::vector<Rational>(m.cols()));
    for (std::size_t i = 0; i < free.size(); ++i) basis[i][free[i]] = 1;
    for (int p : e.pivot_columns())
        for (const auto& [c, x] : e.pivot_row(p))
            if (c != p) basis[free_index.at(c)][p] = -x;
    return basis;
}

HomologyProfile homology(const std::vector<SparseMatrix>& blocks) {
    HomologyProfile out;
    if (blocks.empty()) return out;
    for (std::size_t i = 0; i + 1 < blocks.size(); ++i) {
        if (blocks[i + 1].cols() != blocks[i].rows())
            throw std::invalid_argument("complex blocks have incompatible shapes at degree " + std::to_string(i + 1));
        if (!(blocks[i + 1] * blocks[i]).is_zero())
            throw CompositionNotZero("d o d != 0 at degree " + std::to_string(i + 1));
    }
    std::vector<long> ranks(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) ranks[i] = static_cast<long>(rank(blocks[i]));
    for (std::size_t k = 0; k <= blocks.size(); ++k) {
        long dim = k < blocks.size() ? blocks[k].cols() : blocks[k - 1].rows();
        long out_rank = k < blocks.size() ? ranks[k] : 0;
        long in_rank = k > 0 ? ranks[k - 1] : 0;
        out[static_cast<int>(k)] = dim - out_rank - in_rank;
    }
    return out;
}

}  // namespace koszulab
