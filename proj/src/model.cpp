#include "ineqcond/model.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace ineqcond {

ProblemInstance ProblemInstance::validate(const Matrix& raw, double tau_rank) {
    if (raw.rows() < 1 || raw.cols() < 1)
        throw ShapeError("matrix must have at least one row and one column");
    if (raw.rows() > raw.cols())
        throw ShapeError("m > n: " + std::to_string(raw.rows()) + " rows, " +
                         std::to_string(raw.cols()) + " columns");
    if (!raw.allFinite()) throw NonFiniteEntryError("matrix contains NaN or Inf");

    Eigen::JacobiSVD<Matrix> svd(raw);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > tau_rank * smax)) throw RankDeficientError(smax > 0 ? smin / smax : 0.0);

    const double max_col = raw.colwise().norm().maxCoeff();
    for (int j = 0; j < raw.cols(); ++j) {
        if (raw.col(j).norm() <= tau_rank * max_col) throw ZeroColumnError(j + 1);
    }

    return ProblemInstance(raw);
}

Vector column_norms(const ProblemInstance& inst) {
    return inst.matrix().colwise().norm().transpose();
}

double norm_one_two(const Matrix& m) { return m.colwise().norm().maxCoeff(); }

QrPair qr_of_transpose(const ProblemInstance& inst) {
    const Matrix at = inst.matrix().transpose();  // n x m
    const int m = inst.rows();

    Eigen::HouseholderQR<Matrix> qr(at);
    Matrix q = qr.householderQ() * Matrix::Identity(at.rows(), m);
    Matrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();

    // Fix signs so diag(R) > 0; this pins the otherwise sign-ambiguous factors.
    double diag_max = r.diagonal().cwiseAbs().maxCoeff();
    for (int k = 0; k < m; ++k) {
        if (std::abs(r(k, k)) <= kRankTol * diag_max) throw RankDeficientError(
            diag_max > 0 ? std::abs(r(k, k)) / diag_max : 0.0);
        if (r(k, k) < 0) {
            r.row(k) = -r.row(k);
            q.col(k) = -q.col(k);
        }
    }
    return {std::move(q), std::move(r)};
}

std::pair<double, double> extreme_singular_values(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    return {s(0), s(s.size() - 1)};
}

Subspace Subspace::from_basis(Matrix basis) {
    if (basis.rows() < basis.cols() || basis.cols() < 1)
        throw ShapeError("basis must be n x m with 1 <= m <= n");
    Matrix gram = basis.transpose() * basis;
    gram -= Matrix::Identity(basis.cols(), basis.cols());
    if (gram.cwiseAbs().maxCoeff() > 1e-12)
        throw ShapeError("basis columns are not orthonormal within 1e-12");
    return Subspace(std::move(basis));
}

Subspace Subspace::from_rows(const ProblemInstance& inst) {
    return Subspace(qr_of_transpose(inst).q);
}

Subspace Subspace::orthogonal_complement() const {
    const int n = ambient_dim();
    const int m = dim();
    if (m >= n) throw DegenerateError("complement of a full subspace is {0}");
    Eigen::HouseholderQR<Matrix> qr(basis_);
    Matrix full = qr.householderQ() * Matrix::Identity(n, n);
    return Subspace(full.rightCols(n - m));
}

double projection_distance(const Subspace& w1, const Subspace& w2) {
    if (w1.ambient_dim() != w2.ambient_dim())
        throw DimensionMismatchError("subspaces live in different ambient dimensions");
    if (w1.dim() != w2.dim())
        throw DimensionMismatchError("subspaces have different dimensions");
    Matrix diff = w1.projector() - w2.projector();
    return extreme_singular_values(diff).first;
}

const char* to_string(Feasibility tag) {
    switch (tag) {
        case Feasibility::PrimalStrict: return "PrimalStrict";
        case Feasibility::DualStrict: return "DualStrict";
        case Feasibility::IllPosed: return "IllPosed";
    }
    return "?";
}

}  // namespace ineqcond
