#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace lvfem {

/// Compressed-row sparsity structure. Column indices are strictly
/// increasing within each row.
struct SparsityPattern {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col_idx;

    std::size_t nnz() const { return col_idx.size(); }

    /// Position of (row, col) in col_idx, or npos when not stored.
    std::size_t find(std::size_t row, std::size_t col) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Builds a pattern from unsorted per-row column lists, dropping duplicates.
    static SparsityPattern from_rows(std::size_t n_cols, std::vector<std::vector<std::size_t>> rows);
    static SparsityPattern diagonal(std::size_t n);
};

/// CSR matrix whose pattern may be shared between matrices assembled on the
/// same mesh, which lets linear combinations skip pattern merging.
class SparseMatrix {
public:
    SparseMatrix() = default;
    explicit SparseMatrix(std::shared_ptr<const SparsityPattern> pattern);
    SparseMatrix(std::shared_ptr<const SparsityPattern> pattern, std::vector<double> values);

    static SparseMatrix identity(std::size_t n);
    static SparseMatrix diagonal(std::span<const double> diag);

    std::size_t rows() const { return pattern_ ? pattern_->n_rows : 0; }
    std::size_t cols() const { return pattern_ ? pattern_->n_cols : 0; }
    std::size_t nnz() const { return values_.size(); }

    const SparsityPattern& pattern() const { return *pattern_; }
    const std::shared_ptr<const SparsityPattern>& shared_pattern() const { return pattern_; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    /// Stored value at (row, col); zero when the entry is not in the pattern.
    double at(std::size_t row, std::size_t col) const;

    /// Adds v to a stored entry. The entry must exist in the pattern.
    void add_to(std::size_t row, std::size_t col, double v);

    std::vector<double> diagonal_entries() const;
    std::vector<double> row_sums() const;

    /// Checks that every stored (j,k,v) has a mirror (k,j) equal to v within
    /// rel_tol relative to the largest stored magnitude. On success the
    /// symmetry flag is set; on failure DimensionError is thrown.
    void mark_symmetric(double rel_tol = 1e-13);
    bool is_symmetric() const { return symmetric_; }

    bool all_finite() const;

private:
    std::shared_ptr<const SparsityPattern> pattern_;
    std::vector<double> values_;
    bool symmetric_ = false;
};

/// y = A x with a fixed row-by-row accumulation order.
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

/// alpha*A + beta*B. Shared patterns take a fast path; otherwise the union
/// pattern is built. Symmetry is preserved when both inputs are flagged.
SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

} // namespace lvfem
