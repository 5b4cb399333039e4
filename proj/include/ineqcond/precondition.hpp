#pragma once

#include <string>

#include "ineqcond/model.hpp"

namespace ineqcond {

enum class Order { NormalizeOnly, BalanceOnly, NormalizeThenBalance, BalanceThenNormalize };

const char* to_string(Order order);
Order order_from_string(const std::string& s);  // accepts long names and n|b|nb|bn

/// Certificate of a preconditioning A_hat = P * A * S with S a positive
/// diagonal (stored as its diagonal) and P nonsingular. Primal solutions map
/// back through S, dual solutions through P^T.
class TransformRecord {
public:
    TransformRecord(Vector s, Matrix p, Order order, ProblemInstance a_hat,
                    ProblemInstance original);

    const Vector& s() const { return s_; }
    const Matrix& p() const { return p_; }
    Order order() const { return order_; }
    const ProblemInstance& a_hat() const { return a_hat_; }
    const ProblemInstance& original() const { return original_; }

    /// Max-norm of A_hat - P*A*S relative to the max-norm of A.
    double reconstruction_error() const;

private:
    Vector s_;
    Matrix p_;
    Order order_;
    ProblemInstance a_hat_;
    ProblemInstance original_;
};

/// S = diag(1/||a_i||), P = I. The result has unit columns.
TransformRecord normalize_columns(const ProblemInstance& inst);

/// A_hat = Q^T from QR = A^T, P = R^{-T}, S = I. The result has orthonormal
/// rows, so sigma_max = sigma_min = 1.
TransformRecord balance_rows(const ProblemInstance& inst);

/// Composition of the two primitives in the requested order, with the
/// composite P and S recovered so that A_hat = P*A*S still holds.
TransformRecord precondition(const ProblemInstance& inst, Order order);

/// x = S * x_hat. Requires A_hat x_hat ~ 0, x_hat >= 0, x_hat != 0 within
/// `tol` (relative); throws NotASolution otherwise.
Vector map_primal_solution(const TransformRecord& record, const Vector& x_hat, double tol = 1e-8);

/// y = P^T * y_hat. Requires A_hat^T y_hat >= 0 entrywise within `tol`
/// (relative), y_hat != 0; throws NotASolution otherwise.
Vector map_dual_solution(const TransformRecord& record, const Vector& y_hat, double tol = 1e-8);

}  // namespace ineqcond
