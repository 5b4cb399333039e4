#include "doctest.h"

#include <cmath>

#include "ineqcond/condition.hpp"
#include "ineqcond/rng.hpp"

using namespace ineqcond;

namespace {

Matrix random_matrix(CounterRng& rng, int m, int n) {
    Matrix a(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.next_gaussian();
    return a;
}

Matrix cols(std::initializer_list<Vector> vs) {
    Matrix m(vs.begin()->size(), vs.size());
    int j = 0;
    for (const auto& v : vs) m.col(j++) = v;
    return m;
}

}  // namespace

TEST_CASE("min_norm_point basics") {
    // Symmetric pair of basis vectors.
    MinNormResult r = min_norm_point(cols({Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}}));
    CHECK((r.point - Vector{{0.5, 0.5}}).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r.point.norm() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(r.weights.sum() == doctest::Approx(1.0));

    // A set containing the origin projects to the origin.
    MinNormResult rz =
        min_norm_point(cols({Vector{{1.0, 2.0}}, Vector{{0.0, 0.0}}, Vector{{-3.0, 1.0}}}));
    CHECK(rz.point.norm() < 1e-12);

    // {(2,0),(3,1)}: dense sampling of the segment is the oracle; the
    // unconstrained minimizer of ||(1-t)(2,0)+t(3,1)|| sits at t < 0, so the
    // constrained optimum is the endpoint (2,0).
    Vector p1{{2.0, 0.0}}, p2{{3.0, 1.0}};
    double best = 1e300;
    double best_t = 0;
    for (int k = 0; k <= 100000; ++k) {
        double t = k / 100000.0;
        double v = ((1 - t) * p1 + t * p2).norm();
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    CHECK(best_t == 0.0);
    MinNormResult re = min_norm_point(cols({p1, p2}));
    CHECK((re.point - p1).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(re.point.norm() == doctest::Approx(best).epsilon(1e-10));
}

TEST_CASE("min_norm_point certificate on random hulls") {
    CounterRng rng(404);
    for (int trial = 0; trial < 40; ++trial) {
        CounterRng sub = rng.stream(trial);
        int m = 2 + static_cast<int>(sub.next_u64() % 3);
        int k = 1 + static_cast<int>(sub.next_u64() % 7);
        Matrix pts = random_matrix(sub, m, k);
        MinNormResult r = min_norm_point(pts);
        CHECK(r.weights.minCoeff() >= 0.0);
        CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((pts * r.weights - r.point).cwiseAbs().maxCoeff() < 1e-12);
        double z2 = r.point.squaredNorm();
        for (int j = 0; j < k; ++j) CHECK(r.point.dot(pts.col(j)) >= z2 - 1e-12);
    }
}

TEST_CASE("hull_boundary_distance three regimes") {
    const double r2 = 1.0 / std::sqrt(2.0);

    // Example 1 normalized columns: origin outside, h = 1/sqrt2.
    Matrix ex1 = cols({Vector{{1.0, 0.0}}, Vector{{r2, -r2}}, Vector{{r2, r2}}});
    HullDistance out = hull_boundary_distance(ex1);
    CHECK(out.side == HullSide::Outside);
    CHECK(out.h == doctest::Approx(r2).epsilon(1e-12));

    // Triangle with the origin on an edge.
    Matrix tri = cols({Vector{{1.0, 0.0}}, Vector{{-1.0, 0.0}}, Vector{{0.0, 1.0}}});
    HullDistance bd = hull_boundary_distance(tri);
    CHECK(bd.side == HullSide::Boundary);
    CHECK(bd.h <= 1e-9);

    // Axis-aligned square: origin strictly inside, nearest edge at 1/sqrt2.
    Matrix sq = cols({Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}, Vector{{-1.0, 0.0}},
                      Vector{{0.0, -1.0}}});
    HullDistance in = hull_boundary_distance(sq);
    CHECK(in.side == HullSide::Inside);
    CHECK(in.h == doctest::Approx(r2).epsilon(1e-12));

    CHECK_THROWS_AS(hull_boundary_distance(cols({Vector{{2.0, 0.0}}})), ShapeError);
}

TEST_CASE("gcc on the worked examples") {
    for (double eps : {0.3, 0.1, 0.03, 0.01}) {
        auto ex1 = ProblemInstance::validate(Matrix{{2.0 / eps, 1, 1}, {0, -1, 1}});
        CHECK(gcc(ex1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

        // Example 3: the exact minimax value; s = sqrt(4 + eps^4), and
        // C^2 = 2 s / (s + eps^2 - 2). Cross-checked against the sampling
        // oracle in the oracle suite.
        auto ex3 = ProblemInstance::validate(Matrix{{1 + eps, 1 + eps, -1 + eps}, {-1, -1, 1}});
        double s = std::sqrt(4.0 + eps * eps * eps * eps);
        double exact = std::sqrt(2.0 * s / (s + eps * eps - 2.0));
        CHECK(gcc(ex3) == doctest::Approx(exact).epsilon(1e-10));

        auto hat3 = precondition(ex3, Order::NormalizeThenBalance).a_hat();
        CHECK(gcc(hat3) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    }

    // Identity in R^2: optimum at y = (1,1)/sqrt2 by symmetry.
    auto eye = ProblemInstance::validate(Matrix::Identity(2, 2));
    CHECK(gcc(eye) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("gcc invariance under positive column scaling") {
    CounterRng rng(808);
    for (int trial = 0; trial < 25; ++trial) {
        CounterRng sub = rng.stream(trial);
        Matrix a = random_matrix(sub, 3, 6);
        auto inst = ProblemInstance::validate(a);
        double g = gcc(inst);
        Vector d0(6);
        for (int i = 0; i < 6; ++i) d0(i) = std::exp(2.0 * sub.next_gaussian());
        double g2 = gcc(ProblemInstance::validate(a * d0.asDiagonal()));
        CHECK(std::abs(g - g2) <= 1e-9 * g);
    }
}

TEST_CASE("classify_feasibility witnesses") {
    // Gordan alternative in one row.
    auto p = ProblemInstance::validate(Matrix{{1, -1}});
    FeasibilityStatus ps = classify_feasibility(p);
    CHECK(ps.tag == Feasibility::PrimalStrict);
    CHECK(ps.witness.minCoeff() > 0.0);
    CHECK(std::abs(ps.witness(0) - ps.witness(1)) < 1e-12);  // proportional to (1,1)

    auto d = ProblemInstance::validate(Matrix{{1, 1}});
    FeasibilityStatus ds = classify_feasibility(d);
    CHECK(ds.tag == Feasibility::DualStrict);
    CHECK(ds.witness(0) == doctest::Approx(1.0));
    CHECK(ds.margin == doctest::Approx(1.0));

    auto ill = ProblemInstance::validate(Matrix{{1, -1, 0}, {0, 0, 1}});
    FeasibilityStatus is = classify_feasibility(ill);
    CHECK(is.tag == Feasibility::IllPosed);
    // The supporting-hyperplane normal certifies weak dual feasibility.
    Matrix unit = ill.matrix() * column_norms(ill).cwiseInverse().asDiagonal();
    CHECK((unit.transpose() * is.witness).minCoeff() > -1e-9);
}

TEST_CASE("classifier witnesses substitute on random instances") {
    CounterRng rng(909);
    int primal = 0, dual = 0;
    for (int trial = 0; trial < 60; ++trial) {
        CounterRng sub = rng.stream(trial);
        int m = 2 + static_cast<int>(sub.next_u64() % 2);
        Matrix a = random_matrix(sub, m, 2 * m);
        auto inst = ProblemInstance::validate(a);
        FeasibilityStatus st = classify_feasibility(inst);
        Matrix unit = a * column_norms(inst).cwiseInverse().asDiagonal();
        if (st.tag == Feasibility::PrimalStrict) {
            ++primal;
            CHECK(st.witness.minCoeff() >= 0.0);
            CHECK((a * st.witness).norm() <= 1e-8);
            CHECK(st.margin > 0.0);
        } else if (st.tag == Feasibility::DualStrict) {
            ++dual;
            CHECK(st.witness.norm() == doctest::Approx(1.0));
            CHECK((unit.transpose() * st.witness).minCoeff() >=
                  st.margin * (1.0 - 1e-6));
        }
    }
    CHECK(primal > 5);
    CHECK(dual > 5);
}

TEST_CASE("orthant_sphere_min closed forms") {
    OrthantSphereMin id = orthant_sphere_min(Matrix::Identity(4, 4));
    CHECK(id.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.exact);

    // Projector onto span{(1,1)}: the quadratic form (x1+x2)^2/2 has its
    // orthant-sphere minimum 1/2 on the coordinate axes.
    Matrix pi(2, 2);
    pi << 0.5, 0.5, 0.5, 0.5;
    OrthantSphereMin half = orthant_sphere_min(pi);
    CHECK(half.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(half.argmin.maxCoeff() == doctest::Approx(1.0).epsilon(1e-10));

    // Example-4 row-space projector: minimum 2 eps^2 / (1 + 2 eps^2).
    for (double eps : {0.3, 0.1, 0.03}) {
        auto inst = ProblemInstance::validate(Matrix{{2 * eps, 1, 1}, {0, -1, 1}});
        Matrix proj = Subspace::from_rows(inst).projector();
        OrthantSphereMin osm = orthant_sphere_min(proj);
        double expect = 2 * eps * eps / (1 + 2 * eps * eps);
        CHECK(osm.value == doctest::Approx(expect).epsilon(1e-10));
    }

    CHECK_THROWS_AS(orthant_sphere_min(Matrix{{1, 1}, {0, 1}}), NotAProjectorError);
}

TEST_CASE("grassmann_distance on the worked examples") {
    for (double eps : {0.3, 0.1, 0.03, 0.01}) {
        auto ex2 = ProblemInstance::validate(Matrix{{-eps, -1, 1}, {0, -1, 1 + eps}});
        GrassmannDistance d2 = grassmann_distance(Subspace::from_rows(ex2));
        double expect2 = 1.0 / std::sqrt(2.0 + (1 + eps) * (1 + eps));
        CHECK(d2.d == doctest::Approx(expect2).epsilon(1e-9));

        auto ex4 = ProblemInstance::validate(Matrix{{2 * eps, 1, 1}, {0, -1, 1}});
        GrassmannDistance d4 = grassmann_distance(Subspace::from_rows(ex4));
        double expect4 = std::sqrt(2.0) * eps / std::sqrt(1 + 2 * eps * eps);
        CHECK(d4.d == doctest::Approx(expect4).epsilon(1e-9));
        CHECK(d4.side == ConeSide::Dual);
    }

    // Line spanned by (1,1) in the plane: the nearest ill-posed line is a
    // coordinate axis, at projection distance 1/sqrt2.
    Matrix b(2, 1);
    b << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    GrassmannDistance dl = grassmann_distance(Subspace::from_basis(b));
    CHECK(dl.d == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("grassmann_cond on the preconditioned examples") {
    for (double eps : {0.3, 0.1, 0.03}) {
        auto ex4 = ProblemInstance::validate(Matrix{{2 * eps, 1, 1}, {0, -1, 1}});
        auto hat4 = precondition(ex4, Order::BalanceThenNormalize).a_hat();
        CHECK(grassmann_cond(hat4) == doctest::Approx(std::sqrt(2 + eps * eps)).epsilon(1e-9));

        auto ex2 = ProblemInstance::validate(Matrix{{-eps, -1, 1}, {0, -1, 1 + eps}});
        auto hat2 = precondition(ex2, Order::NormalizeThenBalance).a_hat();
        double delta = 1 + 3 * (1 + eps) * (1 + eps);
        CHECK(grassmann_cond(hat2) ==
              doctest::Approx(std::sqrt(1 + delta / (eps * eps))).epsilon(1e-9));
    }

    CHECK_THROWS_AS(grassmann_cond(ProblemInstance::validate(Matrix::Identity(2, 2))),
                    DegenerateError);
}

TEST_CASE("grassmann_cond invariance under nonsingular row operations") {
    CounterRng rng(515);
    for (int trial = 0; trial < 20; ++trial) {
        CounterRng sub = rng.stream(trial);
        Matrix a = random_matrix(sub, 3, 6);
        auto inst = ProblemInstance::validate(a);
        double g = grassmann_cond(inst);
        Matrix p = random_matrix(sub, 3, 3);
        while (std::abs(p.determinant()) < 0.1) p = random_matrix(sub, 3, 3);
        double g2 = grassmann_cond(ProblemInstance::validate(p * a));
        CHECK(std::abs(g - g2) <= 1e-8 * g);
    }
}

TEST_CASE("exactly one side of the orthant minima vanishes") {
    CounterRng rng(616);
    for (int trial = 0; trial < 25; ++trial) {
        CounterRng sub = rng.stream(trial);
        Matrix a = random_matrix(sub, 3, 6);
        auto inst = ProblemInstance::validate(a);
        if (classify_feasibility(inst).tag == Feasibility::IllPosed) continue;
        Subspace w = Subspace::from_rows(inst);
        double v_w = orthant_sphere_min_factor(w.basis()).value;
        double v_p = orthant_sphere_min_factor(w.orthogonal_complement().basis()).value;
        CHECK(std::min(v_w, v_p) <= kIllTol * kIllTol);
        CHECK(std::max(v_w, v_p) > kIllTol * kIllTol);
    }
}

TEST_CASE("renegar_intervals: collapses and tightening") {
    const double eps = 0.1;
    auto ex1 = ProblemInstance::validate(Matrix{{2.0 / eps, 1, 1}, {0, -1, 1}});

    // Unit-column matrix: the (1,2) bracket collapses to C_GCC.
    auto unit = normalize_columns(ex1).a_hat();
    RenegarIntervals ri = renegar_intervals(unit);
    CHECK(ri.r12.lo == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(ri.r12.width() <= 1e-9 * ri.r12.lo);

    // Balanced example-4 matrix: the (2,2) bracket collapses to C_Gr(A).
    auto ex4 = ProblemInstance::validate(Matrix{{2 * eps, 1, 1}, {0, -1, 1}});
    auto balanced = balance_rows(ex4).a_hat();
    RenegarIntervals rb = renegar_intervals(balanced);
    double cgr = std::sqrt(1 + 1 / (2 * eps * eps));
    CHECK(rb.r22.lo == doctest::Approx(cgr).epsilon(1e-9));
    CHECK(rb.r22.width() <= 1e-9 * rb.r22.lo);

    // Raw bracket components on example 1: gcc = sqrt2, col ratio gives 20.
    double g = gcc(ex1);
    Vector norms = column_norms(ex1);
    double hi_raw = norms.maxCoeff() / norms.minCoeff() * g;
    CHECK(g == doctest::Approx(std::sqrt(2.0)));
    CHECK(hi_raw == doctest::Approx(20.0).epsilon(1e-12));
    RenegarIntervals r1 = renegar_intervals(ex1);
    CHECK(r1.r12.lo >= g - 1e-12);
    CHECK(r1.r12.hi <= hi_raw + 1e-12);

    CHECK_THROWS_AS(renegar_intervals(ProblemInstance::validate(Matrix{{1, -1, 0}, {0, 0, 1}})),
                    IllPosedError);
}

TEST_CASE("renegar_intervals stay consistent on random instances") {
    CounterRng rng(717);
    const double sqrt_n = std::sqrt(6.0);
    for (int trial = 0; trial < 40; ++trial) {
        CounterRng sub = rng.stream(trial);
        Matrix a = random_matrix(sub, 3, 6);
        auto inst = ProblemInstance::validate(a);
        if (classify_feasibility(inst).tag == Feasibility::IllPosed) continue;
        RenegarIntervals ri = renegar_intervals(inst);
        CHECK(ri.r12.lo <= ri.r12.hi);
        CHECK(ri.r22.lo <= ri.r22.hi);
        CHECK(gcc(inst) <= ri.r12.hi + 1e-12);
        // Cross-consistency after tightening.
        CHECK(ri.r12.lo >= ri.r22.lo / sqrt_n - 1e-12 * ri.r22.lo);
        CHECK(ri.r12.hi <= sqrt_n * ri.r22.hi + 1e-12 * ri.r22.hi);
    }
}

TEST_CASE("prop 1(a) optimality chain via computed gcc") {
    CounterRng rng(818);
    for (int trial = 0; trial < 15; ++trial) {
        CounterRng sub = rng.stream(trial);
        Matrix a = random_matrix(sub, 2, 4);
        auto inst = ProblemInstance::validate(a);
        if (classify_feasibility(inst).tag == Feasibility::IllPosed) continue;
        auto tilde = normalize_columns(inst).a_hat();
        double c_tilde = gcc(tilde);

        Vector d0(4);
        for (int i = 0; i < 4; ++i) d0(i) = std::exp(sub.next_gaussian());
        auto scaled = ProblemInstance::validate(tilde.matrix() * d0.asDiagonal());
        // Lower bound of the (1,2) bracket never beats the normalized value.
        RenegarIntervals ri = renegar_intervals(scaled);
        CHECK(ri.r12.lo >= c_tilde * (1.0 - 1e-9));
        CHECK(gcc(scaled) == doctest::Approx(c_tilde).epsilon(1e-9));
    }
}

TEST_CASE("theorem2_check on examples and random draws") {
    // Example 1 family: eq (5) holds, and C_Gr of the NB result stays within
    // sqrt(3) * sqrt(2).
    for (double eps : {0.3, 0.1, 0.03, 0.01}) {
        auto ex1 = ProblemInstance::validate(Matrix{{2.0 / eps, 1, 1}, {0, -1, 1}});
        TheoremCheck tc = theorem2_check(ex1);
        CHECK(tc.pass);
        CHECK(tc.grassmann_nb <= std::sqrt(3.0) * std::sqrt(2.0) + 1e-9);
        CHECK(tc.collapse_width_nb <= 1e-9 * tc.grassmann_nb);
        CHECK(tc.collapse_width_bn <= 1e-9 * tc.gcc_bn);
    }

    // Example 2 family: the wrong order blows up C_Gr, confirming that the
    // sqrt(n) sandwich cannot hold with the roles swapped.
    {
        const double eps = 0.01;
        auto ex2 = ProblemInstance::validate(Matrix{{-eps, -1, 1}, {0, -1, 1 + eps}});
        TheoremCheck tc = theorem2_check(ex2);
        CHECK(tc.pass);  // the stated inequalities still hold
        CHECK(tc.grassmann_nb > std::sqrt(3.0) * tc.grassmann_a);
    }

    CounterRng rng(919);
    for (int trial = 0; trial < 25; ++trial) {
        CounterRng sub = rng.stream(trial);
        Matrix a = random_matrix(sub, 3, 6);
        auto inst = ProblemInstance::validate(a);
        FeasibilityStatus st = classify_feasibility(inst, 10 * kIllTol);
        if (st.tag == Feasibility::IllPosed) continue;
        CHECK(theorem2_check(inst).pass);
    }
}

TEST_CASE("analyze report fields") {
    auto ex1 = ProblemInstance::validate(Matrix{{20, 1, 1}, {0, -1, 1}});
    ConditionReport rep = analyze(ex1);
    CHECK(rep.feasibility.tag == Feasibility::DualStrict);
    CHECK(rep.gcc == doctest::Approx(std::sqrt(2.0)));
    CHECK(rep.col_ratio == doctest::Approx(20.0 / std::sqrt(2.0)));
    CHECK(!rep.grassmann_degenerate);

    ConditionReport sq = analyze(ProblemInstance::validate(Matrix::Identity(3, 3)));
    CHECK(sq.grassmann_degenerate);

    ConditionReport ill = analyze(ProblemInstance::validate(Matrix{{1, -1, 0}, {0, 0, 1}}));
    CHECK(ill.feasibility.tag == Feasibility::IllPosed);
    CHECK(std::isinf(ill.gcc));
    CHECK(std::isinf(ill.renegar.r12.lo));
}
