#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ineqcond/condition.hpp"
#include "ineqcond/model.hpp"
#include "ineqcond/precondition.hpp"

namespace ineqcond {

/// One of the four worked example families, parametrized by epsilon.
/// `expected` maps quantity names to the closed forms stated alongside the
/// example; `displayed_ahat` is the printed preconditioned matrix.
struct ExampleFixture {
    int id = 0;
    double epsilon = 0.0;
    Matrix a;
    Order hat_order = Order::BalanceThenNormalize;
    Matrix displayed_ahat;
    std::map<std::string, double> expected;
};

/// Examples 2 and 4 require 0 < epsilon < 1/2; 1 and 3 any epsilon > 0.
ExampleFixture example_fixture(int id, double epsilon);

struct ExampleRow {
    std::string quantity;
    double computed = 0.0;
    double expected = 0.0;
    double rel_error = 0.0;
};

/// Computes every quantity the example states (condition numbers of A and of
/// the preconditioned matrix, and the printed matrix reproduced entrywise)
/// and reports relative errors.
std::vector<ExampleRow> run_example(int id, double epsilon, double tau_ill = kIllTol);

struct SweepConfig {
    int m = 3;
    int n = 6;
    long trials = 100;
    std::uint64_t seed = 42;
    enum class Ensemble { Gaussian, UniformSphereColumns } ensemble = Ensemble::Gaussian;
};

struct SweepReport {
    SweepConfig config;
    long violations = 0;
    long completed = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    /// Per-quantity distribution summary: {min, q25, median, q75, max}.
    std::map<std::string, std::array<double, 5>> quantiles;
    std::vector<Matrix> failures;
};

/// Draws `trials` random instances (near-ill-posed draws are redrawn within
/// the trial's own substream), runs theorem2_check on each, and aggregates
/// slacks and before/after condition numbers. Trials may run in parallel;
/// aggregation is performed in trial order so the report does not depend on
/// the thread count.
SweepReport run_sweep(const SweepConfig& config);

}  // namespace ineqcond
