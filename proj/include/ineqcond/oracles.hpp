#pragma once

#include <cstdint>

#include "ineqcond/condition.hpp"
#include "ineqcond/model.hpp"

namespace ineqcond {

enum class NormPair { OneTwo, TwoTwo };
enum class BoundKind { UpperBound, Estimate };

const char* to_string(NormPair np);
const char* to_string(BoundKind bk);

/// Result of a brute-force verifier. UpperBound values weakly exceed the
/// exact quantity they bound; `witness` is the object (direction, matrix or
/// basis) achieving the value.
struct OracleResult {
    double value = 0.0;
    BoundKind bound_kind = BoundKind::UpperBound;
    long evaluations = 0;
    Matrix witness;
    std::uint64_t seed = 0;
};

/// Evaluates the min-max quotient over a quasi-uniform grid of unit
/// directions (angular grid for m = 2, Fibonacci sphere for m = 3) keeping
/// only strictly feasible directions, then zooms deterministically around the
/// best one. Converges to C_GCC from above as resolution grows.
OracleResult gcc_sampling(const ProblemInstance& inst, long resolution);

/// Upper bound on the distance from A to the ill-posed set in the requested
/// operator norm: stochastic direction search with bisection to the
/// classification boundary, `budget` candidate rays.
OracleResult renegar_perturbation_search(const ProblemInstance& inst, NormPair norm_pair,
                                         int budget, std::uint64_t seed);

/// Upper bound on the projection distance from W to the set of ill-posed
/// subspaces: candidate subspaces are spans of perturbed re-orthonormalized
/// bases, accepted when their two orthant minima straddle the ill-posedness
/// band along a bisected bracket.
OracleResult grassmann_perturbation_search(const Subspace& w, int budget, std::uint64_t seed);

}  // namespace ineqcond
