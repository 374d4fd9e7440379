#include "lvfem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "lvfem/error.hpp"

namespace lvfem {

std::string to_string(SolverMethod m) { return m == SolverMethod::Direct ? "direct" : "iterative"; }

SolverMethod solver_method_from_string(const std::string& s) {
    if (s == "iterative") {
        return SolverMethod::Iterative;
    }
    if (s == "direct") {
        return SolverMethod::Direct;
    }
    throw ConfigError("solver.method: expected \"iterative\" or \"direct\", got \"" + s + "\"");
}

void SolverConfig::validate() const {
    if (!(rel_tol > 0.0)) {
        throw ConfigError("solver.rel_tol must be > 0");
    }
    if (max_iters < 1) {
        throw ConfigError("solver.max_iters must be >= 1");
    }
}

double residual_norm(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
    std::vector<double> r = spmv(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] -= b[i];
    }
    return norm2(r);
}

namespace {

struct MinresOutcome {
    int iterations = 0;
    bool breakdown = false;
};

/// One MINRES cycle (Paige & Saunders) from the current x, preconditioned by
/// the diagonal `inv_diag`. Stops when the recurrence estimate of the
/// preconditioned residual, scaled to the 2-norm, drops below `target`.
MinresOutcome minres_cycle(const SparseMatrix& a, std::span<const double> b, std::span<const double> inv_diag,
                           double precond_scale, double target, int max_iters, std::vector<double>& x) {
    const std::size_t n = b.size();
    std::vector<double> r1(n), r2(n), y(n), v(n), w(n, 0.0), w1(n, 0.0), w2(n, 0.0);

    spmv(a, x, y);
    for (std::size_t i = 0; i < n; ++i) {
        r1[i] = b[i] - y[i];
        y[i] = inv_diag[i] * r1[i];
    }
    double beta1 = dot(r1, y);
    MinresOutcome out;
    if (!(beta1 > 0.0)) {
        return out;
    }
    beta1 = std::sqrt(beta1);
    r2 = r1;

    double oldb = 0.0;
    double beta = beta1;
    double dbar = 0.0;
    double epsln = 0.0;
    double phibar = beta1;
    double cs = -1.0;
    double sn = 0.0;
    constexpr double tiny = std::numeric_limits<double>::min();

    for (int itn = 1; itn <= max_iters; ++itn) {
        const double s = 1.0 / beta;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = s * y[i];
        }
        spmv(a, v, y);
        if (itn >= 2) {
            const double c = beta / oldb;
            for (std::size_t i = 0; i < n; ++i) {
                y[i] -= c * r1[i];
            }
        }
        const double alfa = dot(v, y);
        const double c = alfa / beta;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] -= c * r2[i];
        }
        std::swap(r1, r2);
        r2 = y;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = inv_diag[i] * r2[i];
        }
        oldb = beta;
        const double beta_sq = dot(r2, y);
        if (beta_sq < 0.0) {
            out.breakdown = true;
            out.iterations = itn;
            return out;
        }
        beta = std::sqrt(beta_sq);

        // Apply the previous rotation, then build the new one.
        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        const double gamma = std::max(std::hypot(gbar, beta), tiny);
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;

        const double denom = 1.0 / gamma;
        std::swap(w1, w2);
        std::swap(w2, w);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
            x[i] += phi * w[i];
        }

        out.iterations = itn;
        if (phibar * precond_scale <= target || beta == 0.0) {
            return out;
        }
    }
    return out;
}

SolveResult solve_minres(const SparseMatrix& a, std::span<const double> rhs, const SolverConfig& cfg,
                         std::vector<double> x, double rhs_norm) {
    const std::size_t n = rhs.size();
    std::vector<double> inv_diag(n);
    double max_diag = 0.0;
    const std::vector<double> d = a.diagonal_entries();
    for (std::size_t i = 0; i < n; ++i) {
        const double ad = std::abs(d[i]);
        inv_diag[i] = ad > 0.0 ? 1.0 / ad : 1.0;
        max_diag = std::max(max_diag, ad > 0.0 ? ad : 1.0);
    }
    // ||r||_2 <= sqrt(max |d_i|) ||r||_{D^-1}
    const double precond_scale = std::sqrt(max_diag);
    const double target = cfg.rel_tol * rhs_norm;

    SolveResult result;
    double res = residual_norm(a, x, rhs);
    int used = 0;
    // Restart from the current iterate while the recomputed residual misses
    // the target; the recurrence estimate can drift from the true residual.
    while (res > target && used < cfg.max_iters) {
        const MinresOutcome cycle =
            minres_cycle(a, rhs, inv_diag, precond_scale, 0.5 * target, cfg.max_iters - used, x);
        used += std::max(cycle.iterations, 1);
        res = residual_norm(a, x, rhs);
        if (cycle.breakdown && res > target) {
            throw SolverError("MINRES breakdown: preconditioned Lanczos norm became negative", res, used);
        }
    }
    if (!(res <= target)) {
        throw SolverError("MINRES did not converge in " + std::to_string(used) + " iterations (residual " +
                              std::to_string(res) + ", target " + std::to_string(target) + ")",
                          res, used);
    }
    result.x = std::move(x);
    result.iterations = used;
    result.residual_norm = res;
    return result;
}

SolveResult solve_direct(const SparseMatrix& a, std::span<const double> rhs, const SolverConfig& cfg,
                         double rhs_norm) {
    using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
    const auto& p = a.pattern();
    std::vector<Eigen::Triplet<double, int>> triplets;
    triplets.reserve(a.nnz());
    const auto vals = a.values();
    for (std::size_t r = 0; r < p.n_rows; ++r) {
        for (std::size_t k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k) {
            triplets.emplace_back(static_cast<int>(r), static_cast<int>(p.col_idx[k]), vals[k]);
        }
    }
    EigenSparse mat(static_cast<int>(p.n_rows), static_cast<int>(p.n_cols));
    mat.setFromTriplets(triplets.begin(), triplets.end());
    mat.makeCompressed();

    Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(mat);
    if (lu.info() != Eigen::Success) {
        throw SolverError("sparse LU factorisation failed (singular matrix?)", std::numeric_limits<double>::infinity(), 0);
    }
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    Eigen::VectorXd sol = lu.solve(b);
    // One round of iterative refinement.
    const Eigen::VectorXd correction = lu.solve(b - mat * sol);
    sol += correction;

    SolveResult result;
    result.x.assign(sol.data(), sol.data() + sol.size());
    result.iterations = 1;
    result.residual_norm = residual_norm(a, result.x, rhs);
    if (!std::isfinite(result.residual_norm) || result.residual_norm > cfg.rel_tol * rhs_norm) {
        throw SolverError("direct solve missed the residual target", result.residual_norm, 1);
    }
    return result;
}

} // namespace

SolveResult solve_linear(const SparseMatrix& a, std::span<const double> rhs, const SolverConfig& cfg,
                         std::optional<std::span<const double>> initial_guess) {
    cfg.validate();
    if (a.rows() != a.cols()) {
        throw DimensionError("solve_linear: matrix is not square");
    }
    if (rhs.size() != a.rows()) {
        throw DimensionError("solve_linear: rhs has " + std::to_string(rhs.size()) + " entries, matrix has " +
                             std::to_string(a.rows()) + " rows");
    }
    if (initial_guess && initial_guess->size() != rhs.size()) {
        throw DimensionError("solve_linear: initial guess length mismatch");
    }

    const double rhs_norm = norm2(rhs);
    if (rhs_norm == 0.0) {
        return SolveResult{std::vector<double>(rhs.size(), 0.0), 0, 0.0};
    }
    if (cfg.method == SolverMethod::Direct) {
        return solve_direct(a, rhs, cfg, rhs_norm);
    }
    std::vector<double> x = initial_guess ? std::vector<double>(initial_guess->begin(), initial_guess->end())
                                          : std::vector<double>(rhs.size(), 0.0);
    return solve_minres(a, rhs, cfg, std::move(x), rhs_norm);
}

} // namespace lvfem
