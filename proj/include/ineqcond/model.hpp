#pragma once

#include <Eigen/Dense>
#include <utility>

#include "ineqcond/errors.hpp"

namespace ineqcond {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default numeric thresholds. `rank` is relative (sigma_min > rank * sigma_max),
/// `ill` is the absolute band on hull/subspace distances inside which an
/// instance counts as ill-posed.
struct Tolerances {
    double rank = 1e-10;
    double ill = 1e-9;
};

inline constexpr double kRankTol = 1e-10;
inline constexpr double kIllTol = 1e-9;

/// A validated m x n system matrix: finite entries, m <= n, nonzero columns,
/// full row rank. Immutable after construction.
class ProblemInstance {
public:
    /// Checks every invariant and throws the structured rejection naming the
    /// first violated one (NonFiniteEntry, ShapeError, ZeroColumn, RankDeficient).
    static ProblemInstance validate(const Matrix& raw, double tau_rank = kRankTol);

    int rows() const { return static_cast<int>(a_.rows()); }
    int cols() const { return static_cast<int>(a_.cols()); }
    const Matrix& matrix() const { return a_; }

private:
    explicit ProblemInstance(Matrix a) : a_(std::move(a)) {}
    Matrix a_;
};

/// Euclidean norms of the columns a_1..a_n.
Vector column_norms(const ProblemInstance& inst);

/// Operator norm for the (1,2) pair: max_i ||a_i||_2.
double norm_one_two(const Matrix& m);

struct QrPair {
    Matrix q;  // n x m, orthonormal columns
    Matrix r;  // m x m, upper triangular, positive diagonal
};

/// QR factorization of A^T with the sign convention diag(R) > 0 (which makes
/// the factors unique and row balancing deterministic and idempotent).
QrPair qr_of_transpose(const ProblemInstance& inst);

/// (sigma_max, sigma_min) of an arbitrary finite matrix; sigma_min is the
/// smallest of the min(rows, cols) singular values.
std::pair<double, double> extreme_singular_values(const Matrix& m);

/// An m-dimensional linear subspace of R^n stored as an orthonormal basis.
class Subspace {
public:
    /// Basis columns must be orthonormal within 1e-12 entrywise.
    static Subspace from_basis(Matrix basis);
    /// W = span(A^T), basis = Q from qr_of_transpose.
    static Subspace from_rows(const ProblemInstance& inst);

    int ambient_dim() const { return static_cast<int>(basis_.rows()); }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Matrix& basis() const { return basis_; }

    /// Pi_W = basis * basis^T, materialized on demand.
    Matrix projector() const { return basis_ * basis_.transpose(); }

    /// Orthonormal basis of W-perp (n x (n - dim)).
    Subspace orthogonal_complement() const;

private:
    explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
    Matrix basis_;
};

/// d(W1, W2) = sigma_max(Pi_W1 - Pi_W2) = sine of the largest principal angle.
double projection_distance(const Subspace& w1, const Subspace& w2);

enum class Feasibility { PrimalStrict, DualStrict, IllPosed };

/// Classification of an instance together with the certifying vector:
/// x with Ax ~ 0, x >= 0 (primal), y with A^T y > 0 (dual), or a supporting
/// hyperplane normal (ill-posed). `margin` is the distance from the origin to
/// the hull boundary that decided the class.
struct FeasibilityStatus {
    Feasibility tag = Feasibility::IllPosed;
    Vector witness;
    double margin = 0.0;
};

const char* to_string(Feasibility tag);

}  // namespace ineqcond
