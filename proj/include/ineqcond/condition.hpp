#pragma once

#include "ineqcond/model.hpp"
#include "ineqcond/precondition.hpp"

namespace ineqcond {

struct MinNormResult {
    Vector point;    // nearest point of conv{columns} to the origin
    Vector weights;  // certifying convex coefficients, one per input point
};

/// Euclidean projection of the origin onto the convex hull of the columns of
/// `points` (m x k), via Wolfe's corral algorithm. The result satisfies the
/// optimality certificate point . p >= ||point||^2 - 1e-12 for every column p.
MinNormResult min_norm_point(const Matrix& points);

enum class HullSide { Outside, Boundary, Inside };

struct HullDistance {
    double h = 0.0;  // distance from the origin to the hull boundary
    HullSide side = HullSide::Boundary;
    /// Outside: unit y with p_i.y >= h for all i. Inside: outward normal of
    /// the nearest facet. Boundary: supporting hyperplane normal nu with
    /// p_i.nu >= -eps for all i.
    Vector certificate;
    /// Convex weights of the min-norm point (a zero certificate when the
    /// origin lies in the hull).
    Vector weights;
};

/// Distance from the origin to the boundary of conv{columns}; all columns
/// must be unit vectors within 1e-12. The Inside branch enumerates supporting
/// facets and is limited to k <= 12 points in dimension m <= 6.
HullDistance hull_boundary_distance(const Matrix& unit_points, double tau_ill = kIllTol);

/// C_GCC(A) = 1 / hull_boundary_distance(normalized columns); +inf inside the
/// ill-posed band.
double gcc(const ProblemInstance& inst, double tau_ill = kIllTol);

/// Gordan alternative on the hull of normalized columns: the origin outside
/// (strictly dual feasible), interior (strictly primal feasible), or on the
/// boundary (ill-posed), with the certifying witness.
FeasibilityStatus classify_feasibility(const ProblemInstance& inst, double tau_ill = kIllTol);

struct OrthantSphereMin {
    double value = 0.0;  // min x^T M x over unit x >= 0
    Vector argmin;
    bool exact = true;  // false when the projected-gradient fallback was used
};

/// Kernel form: minimizes ||F^T x||^2 over the unit sphere intersected with
/// the nonnegative orthant, where F has orthonormal columns (so F F^T is the
/// projector). Support enumeration is exact for n <= 16; larger sizes fall
/// back to multistart projected gradient.
OrthantSphereMin orthant_sphere_min_factor(const Matrix& factor);

/// Projector form per the module contract; validates symmetry and idempotence
/// (within 1e-10), factors M, and delegates to the kernel.
OrthantSphereMin orthant_sphere_min(const Matrix& projector);

enum class ConeSide { Primal, Dual };

struct GrassmannDistance {
    double d = 0.0;  // distance from W to the set of ill-posed subspaces
    ConeSide side = ConeSide::Dual;
    Vector argmin;  // orthant unit vector attaining the active minimum
};

/// d(W, Sigma_m) = max( min ||Pi_W x||, min ||Pi_Wperp x|| ) over unit x >= 0.
/// For a well-posed W exactly one of the two inner minima is nonzero; `side`
/// reports Dual when W meets the interior of the orthant.
GrassmannDistance grassmann_distance(const Subspace& w, double tau_ill = kIllTol);

/// C_Gr(A) = 1 / grassmann_distance(span(A^T)); +inf inside the ill-posed
/// band; Degenerate for m == n.
double grassmann_cond(const ProblemInstance& inst, double tau_ill = kIllTol);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

struct RenegarIntervals {
    Interval r12;  // bracket for C_R^{1,2}
    Interval r22;  // bracket for C_R^{2,2}
};

/// Brackets from the column-norm and singular-value sandwich inequalities,
/// cross-tightened through the sqrt(n) norm-equivalence relation. For m == n
/// the (2,2) bracket is derived from the (1,2) bracket alone.
RenegarIntervals renegar_intervals(const ProblemInstance& inst, double tau_ill = kIllTol);

/// Both combined preconditionings evaluated against the two sqrt(n) sandwich
/// inequalities; slack >= 0 means the inequality holds.
struct TheoremCheck {
    double gcc_a = 0, grassmann_a = 0;
    double gcc_nb = 0, grassmann_nb = 0;  // after normalize-then-balance
    double gcc_bn = 0, grassmann_bn = 0;  // after balance-then-normalize
    double slack_eq5_lower = 0, slack_eq5_upper = 0;
    double slack_eq6_lower = 0, slack_eq6_upper = 0;
    double collapse_width_nb = 0;  // (2,2) bracket width of the NB result
    double collapse_width_bn = 0;  // (1,2) bracket width of the BN result
    bool pass = false;
};

TheoremCheck theorem2_check(const ProblemInstance& inst, double tau_ill = kIllTol);

struct ConditionReport {
    FeasibilityStatus feasibility;
    double gcc = 0.0;        // +inf when ill-posed
    double grassmann = 0.0;  // +inf when ill-posed; unset when degenerate
    bool grassmann_degenerate = false;
    RenegarIntervals renegar;
    double col_ratio = 0.0;
    double sigma_ratio = 0.0;
};

/// One-stop evaluation of every quantity in the report.
ConditionReport analyze(const ProblemInstance& inst, double tau_ill = kIllTol);

}  // namespace ineqcond
