#include "lvfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lvfem/error.hpp"

namespace lvfem {

std::size_t SparsityPattern::find(std::size_t row, std::size_t col) const {
    const auto first = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[row]);
    const auto last = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[row + 1]);
    const auto it = std::lower_bound(first, last, col);
    if (it == last || *it != col) {
        return npos;
    }
    return static_cast<std::size_t>(it - col_idx.begin());
}

SparsityPattern SparsityPattern::from_rows(std::size_t n_cols, std::vector<std::vector<std::size_t>> rows) {
    SparsityPattern p;
    p.n_rows = rows.size();
    p.n_cols = n_cols;
    p.row_ptr.assign(p.n_rows + 1, 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto& cols = rows[r];
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        if (!cols.empty() && cols.back() >= n_cols) {
            throw DimensionError("column index out of range in row " + std::to_string(r));
        }
        p.row_ptr[r + 1] = p.row_ptr[r] + cols.size();
    }
    p.col_idx.reserve(p.row_ptr.back());
    for (const auto& cols : rows) {
        p.col_idx.insert(p.col_idx.end(), cols.begin(), cols.end());
    }
    return p;
}

SparsityPattern SparsityPattern::diagonal(std::size_t n) {
    SparsityPattern p;
    p.n_rows = n;
    p.n_cols = n;
    p.row_ptr.resize(n + 1);
    p.col_idx.resize(n);
    for (std::size_t i = 0; i <= n; ++i) {
        p.row_ptr[i] = i;
    }
    for (std::size_t i = 0; i < n; ++i) {
        p.col_idx[i] = i;
    }
    return p;
}

SparseMatrix::SparseMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : pattern_(std::move(pattern)), values_(pattern_->nnz(), 0.0) {}

SparseMatrix::SparseMatrix(std::shared_ptr<const SparsityPattern> pattern, std::vector<double> values)
    : pattern_(std::move(pattern)), values_(std::move(values)) {
    if (values_.size() != pattern_->nnz()) {
        throw DimensionError("value count does not match sparsity pattern");
    }
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    SparseMatrix m(std::make_shared<const SparsityPattern>(SparsityPattern::diagonal(n)),
                   std::vector<double>(n, 1.0));
    m.symmetric_ = true;
    return m;
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> diag) {
    SparseMatrix m(std::make_shared<const SparsityPattern>(SparsityPattern::diagonal(diag.size())),
                   std::vector<double>(diag.begin(), diag.end()));
    m.symmetric_ = true;
    return m;
}

double SparseMatrix::at(std::size_t row, std::size_t col) const {
    const std::size_t pos = pattern_->find(row, col);
    return pos == SparsityPattern::npos ? 0.0 : values_[pos];
}

void SparseMatrix::add_to(std::size_t row, std::size_t col, double v) {
    const std::size_t pos = pattern_->find(row, col);
    if (pos == SparsityPattern::npos) {
        throw DimensionError("entry (" + std::to_string(row) + ", " + std::to_string(col) +
                             ") is not in the sparsity pattern");
    }
    values_[pos] += v;
}

std::vector<double> SparseMatrix::diagonal_entries() const {
    std::vector<double> d(rows(), 0.0);
    for (std::size_t r = 0; r < rows(); ++r) {
        d[r] = at(r, r);
    }
    return d;
}

std::vector<double> SparseMatrix::row_sums() const {
    const auto& p = *pattern_;
    std::vector<double> s(p.n_rows, 0.0);
    for (std::size_t r = 0; r < p.n_rows; ++r) {
        double acc = 0.0;
        for (std::size_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k) {
            acc += values_[k];
        }
        s[r] = acc;
    }
    return s;
}

void SparseMatrix::mark_symmetric(double rel_tol) {
    if (rows() != cols()) {
        throw DimensionError("symmetry requested for a non-square matrix");
    }
    double scale = 0.0;
    for (double v : values_) {
        scale = std::max(scale, std::abs(v));
    }
    const auto& p = *pattern_;
    for (std::size_t r = 0; r < p.n_rows; ++r) {
        for (std::size_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k) {
            const std::size_t c = p.col_idx[k];
            const std::size_t mirror = p.find(c, r);
            const double other = mirror == SparsityPattern::npos ? 0.0 : values_[mirror];
            if (std::abs(values_[k] - other) > rel_tol * scale) {
                throw DimensionError("matrix is not symmetric at (" + std::to_string(r) + ", " +
                                     std::to_string(c) + ")");
            }
        }
    }
    symmetric_ = true;
}

bool SparseMatrix::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
    if (x.size() != a.cols() || y.size() != a.rows()) {
        throw DimensionError("spmv: matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             ", x has " + std::to_string(x.size()) + ", y has " + std::to_string(y.size()));
    }
    const auto& p = a.pattern();
    const auto vals = a.values();
    for (std::size_t r = 0; r < p.n_rows; ++r) {
        double acc = 0.0;
        for (std::size_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k) {
            acc += vals[k] * x[p.col_idx[k]];
        }
        y[r] = acc;
    }
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
    std::vector<double> y(a.rows(), 0.0);
    spmv(a, x, y);
    return y;
}

SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("linear_combination: shape mismatch");
    }
    SparseMatrix out;
    if (a.shared_pattern() == b.shared_pattern()) {
        std::vector<double> v(a.nnz());
        const auto av = a.values();
        const auto bv = b.values();
        for (std::size_t k = 0; k < v.size(); ++k) {
            v[k] = alpha * av[k] + beta * bv[k];
        }
        out = SparseMatrix(a.shared_pattern(), std::move(v));
    } else {
        const auto& pa = a.pattern();
        const auto& pb = b.pattern();
        std::vector<std::vector<std::size_t>> rows(pa.n_rows);
        for (std::size_t r = 0; r < pa.n_rows; ++r) {
            rows[r].assign(pa.col_idx.begin() + static_cast<std::ptrdiff_t>(pa.row_ptr[r]),
                           pa.col_idx.begin() + static_cast<std::ptrdiff_t>(pa.row_ptr[r + 1]));
            rows[r].insert(rows[r].end(), pb.col_idx.begin() + static_cast<std::ptrdiff_t>(pb.row_ptr[r]),
                           pb.col_idx.begin() + static_cast<std::ptrdiff_t>(pb.row_ptr[r + 1]));
        }
        out = SparseMatrix(std::make_shared<const SparsityPattern>(SparsityPattern::from_rows(pa.n_cols, std::move(rows))));
        const auto av = a.values();
        const auto bv = b.values();
        for (std::size_t r = 0; r < pa.n_rows; ++r) {
            for (std::size_t k = pa.row_ptr[r]; k < pa.row_ptr[r + 1]; ++k) {
                out.add_to(r, pa.col_idx[k], alpha * av[k]);
            }
            for (std::size_t k = pb.row_ptr[r]; k < pb.row_ptr[r + 1]; ++k) {
                out.add_to(r, pb.col_idx[k], beta * bv[k]);
            }
        }
    }
    if (a.is_symmetric() && b.is_symmetric()) {
        out.mark_symmetric();
    }
    return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw DimensionError("dot: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += x[i] * y[i];
    }
    return acc;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

} // namespace lvfem
