#include "doctest.h"

#include <cmath>

#include "ineqcond/experiments.hpp"
#include "ineqcond/io.hpp"

using namespace ineqcond;

TEST_CASE("fixtures validate for admissible epsilon and reject the rest") {
    for (int id = 1; id <= 4; ++id) {
        for (double eps : {0.3, 0.1, 0.03, 0.01}) {
            ExampleFixture fx = example_fixture(id, eps);
            CHECK_NOTHROW(ProblemInstance::validate(fx.a));
        }
    }
    CHECK_THROWS_AS(example_fixture(2, 0.5), ShapeError);
    CHECK_THROWS_AS(example_fixture(4, 0.75), ShapeError);
    CHECK_NOTHROW(example_fixture(2, 0.49));
    CHECK_NOTHROW(example_fixture(1, 0.75));
    CHECK_THROWS_AS(example_fixture(5, 0.1), ShapeError);
}

TEST_CASE("run_example reproduces the attainable closed forms at 1e-6") {
    for (int id = 1; id <= 4; ++id) {
        for (double eps : {0.3, 0.1, 0.03, 0.01}) {
            for (const auto& row : run_example(id, eps)) {
                // The stated value for example 3's unpreconditioned GCC
                // number deviates from the exact minimax value by O(eps)
                // relative; every other quantity reproduces to 1e-6.
                if (id == 3 && row.quantity == "gcc_a") {
                    double s = std::sqrt(4.0 + eps * eps * eps * eps);
                    double exact = std::sqrt(2.0 * s / (s + eps * eps - 2.0));
                    CHECK(row.computed == doctest::Approx(exact).epsilon(1e-9));
                    CHECK(row.rel_error > 1e-6);  // the stated form is off
                    continue;
                }
                INFO("example ", id, " eps ", eps, " ", row.quantity);
                CHECK(row.rel_error <= 1e-6);
            }
        }
    }
}

TEST_CASE("run_example checks the printed matrices") {
    for (int id : {1, 2, 3, 4}) {
        for (double eps : {0.3, 0.1, 0.03, 0.01}) {
            auto rows = run_example(id, eps);
            bool found = false;
            for (const auto& row : rows) {
                if (row.quantity == "ahat_display") {
                    found = true;
                    CHECK(row.computed <= 1e-10);
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("order-matters witnesses at eps = 0.01") {
    {
        auto rows1 = run_example(1, 0.01);
        double a = 0, hat = 0;
        for (const auto& r : rows1) {
            if (r.quantity == "gcc_a") a = r.computed;
            if (r.quantity == "gcc_ahat") hat = r.computed;
        }
        CHECK(hat / a >= 100.0);
    }
    {
        auto rows2 = run_example(2, 0.01);
        double a = 0, hat = 0;
        for (const auto& r : rows2) {
            if (r.quantity == "grassmann_a") a = r.computed;
            if (r.quantity == "grassmann_ahat") hat = r.computed;
        }
        CHECK(hat / a >= 100.0);
    }
    {
        // Improvement direction: example 3 shrinks by >= 100x.
        auto rows3 = run_example(3, 0.01);
        double a = 0, hat = 0;
        for (const auto& r : rows3) {
            if (r.quantity == "gcc_a") a = r.computed;
            if (r.quantity == "gcc_ahat") hat = r.computed;
        }
        CHECK(a / hat >= 100.0);
    }
}

TEST_CASE("run_sweep: no violations and deterministic output") {
    SweepConfig cfg;
    cfg.m = 2;
    cfg.n = 4;
    cfg.trials = 100;
    cfg.seed = 42;
    SweepReport rep = run_sweep(cfg);
    CHECK(rep.violations == 0);
    CHECK(rep.completed == 100);
    CHECK(rep.min_slack > 0.0);
    CHECK(rep.quantiles.count("min_slack") == 1);

    SweepReport again = run_sweep(cfg);
    CHECK(sweep_to_json(rep).dump() == sweep_to_json(again).dump());

    SweepConfig bad = cfg;
    bad.m = 4;
    bad.n = 3;
    CHECK_THROWS_AS(run_sweep(bad), ShapeError);
}

TEST_CASE("run_sweep handles the sphere ensemble") {
    SweepConfig cfg;
    cfg.m = 2;
    cfg.n = 4;
    cfg.trials = 25;
    cfg.seed = 7;
    cfg.ensemble = SweepConfig::Ensemble::UniformSphereColumns;
    SweepReport rep = run_sweep(cfg);
    CHECK(rep.violations == 0);
    CHECK(rep.completed == 25);
}
