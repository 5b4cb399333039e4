#include "ineqcond/precondition.hpp"

#include <cmath>

namespace ineqcond {

const char* to_string(Order order) {
    switch (order) {
        case Order::NormalizeOnly: return "NormalizeOnly";
        case Order::BalanceOnly: return "BalanceOnly";
        case Order::NormalizeThenBalance: return "NormalizeThenBalance";
        case Order::BalanceThenNormalize: return "BalanceThenNormalize";
    }
    return "?";
}

Order order_from_string(const std::string& s) {
    if (s == "NormalizeOnly" || s == "n") return Order::NormalizeOnly;
    if (s == "BalanceOnly" || s == "b") return Order::BalanceOnly;
    if (s == "NormalizeThenBalance" || s == "nb") return Order::NormalizeThenBalance;
    if (s == "BalanceThenNormalize" || s == "bn") return Order::BalanceThenNormalize;
    throw ParseError("unknown preconditioning order: " + s);
}

TransformRecord::TransformRecord(Vector s, Matrix p, Order order, ProblemInstance a_hat,
                                 ProblemInstance original)
    : s_(std::move(s)),
      p_(std::move(p)),
      order_(order),
      a_hat_(std::move(a_hat)),
      original_(std::move(original)) {
    const int m = original_.rows();
    const int n = original_.cols();
    if (s_.size() != n || p_.rows() != m || p_.cols() != m)
        throw ShapeError("transform factors do not match the instance shape");
    if ((s_.array() <= 0).any()) throw ShapeError("diagonal scaling must be strictly positive");
    auto [pmax, pmin] = extreme_singular_values(p_);
    if (!(pmin > kRankTol * pmax)) throw RankDeficientError(pmax > 0 ? pmin / pmax : 0.0);
}

double TransformRecord::reconstruction_error() const {
    Matrix rebuilt = p_ * original_.matrix() * s_.asDiagonal();
    double scale = original_.matrix().cwiseAbs().maxCoeff();
    return (a_hat_.matrix() - rebuilt).cwiseAbs().maxCoeff() / scale;
}

TransformRecord normalize_columns(const ProblemInstance& inst) {
    Vector s = column_norms(inst).cwiseInverse();
    Matrix a_hat = inst.matrix() * s.asDiagonal();
    return TransformRecord(std::move(s), Matrix::Identity(inst.rows(), inst.rows()),
                           Order::NormalizeOnly, ProblemInstance::validate(a_hat), inst);
}

TransformRecord balance_rows(const ProblemInstance& inst) {
    QrPair qr = qr_of_transpose(inst);
    Matrix a_hat = qr.q.transpose();
    // P = R^{-T}: A^T = QR gives R^{-T} A = Q^T.
    Matrix p = qr.r.transpose()
                   .triangularView<Eigen::Lower>()
                   .solve(Matrix::Identity(inst.rows(), inst.rows()));
    return TransformRecord(Vector::Ones(inst.cols()), std::move(p), Order::BalanceOnly,
                           ProblemInstance::validate(a_hat), inst);
}

TransformRecord precondition(const ProblemInstance& inst, Order order) {
    switch (order) {
        case Order::NormalizeOnly: return normalize_columns(inst);
        case Order::BalanceOnly: return balance_rows(inst);
        case Order::NormalizeThenBalance: {
            TransformRecord first = normalize_columns(inst);
            TransformRecord second = balance_rows(first.a_hat());
            return TransformRecord(first.s(), second.p(), Order::NormalizeThenBalance,
                                   second.a_hat(), inst);
        }
        case Order::BalanceThenNormalize: {
            TransformRecord first = balance_rows(inst);
            TransformRecord second = normalize_columns(first.a_hat());
            return TransformRecord(second.s(), first.p(), Order::BalanceThenNormalize,
                                   second.a_hat(), inst);
        }
    }
    throw ShapeError("unreachable");
}

Vector map_primal_solution(const TransformRecord& record, const Vector& x_hat, double tol) {
    const Matrix& a_hat = record.a_hat().matrix();
    if (x_hat.size() != a_hat.cols())
        throw NotASolutionError("vector length does not match the column count");
    const double xn = x_hat.norm();
    if (!(xn > 0)) throw NotASolutionError("x_hat is zero");
    const double scale = norm_one_two(a_hat) * xn;
    if ((a_hat * x_hat).norm() > tol * scale)
        throw NotASolutionError("A_hat * x_hat is not zero within tolerance");
    if (x_hat.minCoeff() < -tol * xn)
        throw NotASolutionError("x_hat has negative entries beyond tolerance");
    return record.s().asDiagonal() * x_hat;
}

Vector map_dual_solution(const TransformRecord& record, const Vector& y_hat, double tol) {
    const Matrix& a_hat = record.a_hat().matrix();
    if (y_hat.size() != a_hat.rows())
        throw NotASolutionError("vector length does not match the row count");
    const double yn = y_hat.norm();
    if (!(yn > 0)) throw NotASolutionError("y_hat is zero");
    Vector margins = a_hat.transpose() * y_hat;
    if (margins.minCoeff() < -tol * norm_one_two(a_hat) * yn)
        throw NotASolutionError("A_hat^T * y_hat has negative entries beyond tolerance");
    return record.p().transpose() * y_hat;
}

}  // namespace ineqcond
