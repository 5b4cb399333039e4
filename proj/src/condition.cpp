#include "ineqcond/condition.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ineqcond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Affine minimizer of ||P w||^2 over sum(w) = 1 via the bordered KKT system.
Vector affine_minimizer(const Matrix& pts) {
    const int k = static_cast<int>(pts.cols());
    Matrix kkt = Matrix::Zero(k + 1, k + 1);
    kkt.topLeftCorner(k, k) = 2.0 * pts.transpose() * pts;
    kkt.topRightCorner(k, 1).setConstant(-1.0);
    kkt.bottomLeftCorner(1, k).setConstant(1.0);
    Vector rhs = Vector::Zero(k + 1);
    rhs(k) = 1.0;

    Eigen::FullPivLU<Matrix> lu(kkt);
    Vector sol;
    if (lu.isInvertible()) {
        sol = lu.solve(rhs);
    } else {
        // Duplicated or affinely dependent points: take the least-squares
        // representative, then re-impose the affine constraint.
        sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    }
    Vector w = sol.head(k);
    const double s = w.sum();
    if (std::abs(s - 1.0) > 1e-9 && std::abs(s) > 1e-300) w /= s;
    return w;
}

bool next_combination(std::vector<int>& idx, int n) {
    const int r = static_cast<int>(idx.size());
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    return true;
}

}  // namespace

MinNormResult min_norm_point(const Matrix& points) {
    const int m = static_cast<int>(points.rows());
    const int k = static_cast<int>(points.cols());
    if (k < 1) throw ShapeError("need at least one point");
    if (!points.allFinite()) throw NonFiniteEntryError("points contain NaN or Inf");

    const double scale2 = points.colwise().squaredNorm().maxCoeff();
    const double eps = 1e-13 * std::max(1.0, scale2);

    // Corral state: indices into the columns and their convex weights.
    std::vector<int> corral;
    Vector lambda;
    {
        int i0 = 0;
        double best = points.col(0).squaredNorm();
        for (int j = 1; j < k; ++j) {
            double nj = points.col(j).squaredNorm();
            if (nj < best) {
                best = nj;
                i0 = j;
            }
        }
        corral.push_back(i0);
        lambda = Vector::Ones(1);
    }

    auto corral_points = [&] {
        Matrix ps(m, corral.size());
        for (size_t j = 0; j < corral.size(); ++j) ps.col(j) = points.col(corral[j]);
        return ps;
    };

    Vector z = points.col(corral[0]);
    const int max_iter = 200 * k + 200;
    for (int iter = 0; iter < max_iter; ++iter) {
        // Most violating point of the certificate z.p >= ||z||^2.
        int j_min = 0;
        double dot_min = z.dot(points.col(0));
        for (int j = 1; j < k; ++j) {
            double d = z.dot(points.col(j));
            if (d < dot_min) {
                dot_min = d;
                j_min = j;
            }
        }
        if (dot_min >= z.squaredNorm() - eps) break;
        if (std::find(corral.begin(), corral.end(), j_min) != corral.end()) break;

        corral.push_back(j_min);
        Vector ext = Vector::Zero(corral.size());
        ext.head(lambda.size()) = lambda;
        lambda = ext;

        // Minor cycle: restore a corral whose affine minimizer is interior.
        for (int minor = 0; minor < 4 * k + 8; ++minor) {
            Matrix ps = corral_points();
            Vector mu = affine_minimizer(ps);
            if (mu.minCoeff() > 1e-12) {
                lambda = mu;
                break;
            }
            double theta = 1.0;
            for (int i = 0; i < mu.size(); ++i) {
                if (mu(i) < 1e-14 && lambda(i) - mu(i) > 1e-300)
                    theta = std::min(theta, lambda(i) / (lambda(i) - mu(i)));
            }
            lambda = (1.0 - theta) * lambda + theta * mu;
            // Drop the vanished members.
            std::vector<int> keep_idx;
            for (int i = 0; i < lambda.size(); ++i)
                if (lambda(i) > 1e-14) keep_idx.push_back(i);
            if (keep_idx.empty()) keep_idx.push_back(0);
            std::vector<int> new_corral;
            Vector new_lambda(keep_idx.size());
            for (size_t i = 0; i < keep_idx.size(); ++i) {
                new_corral.push_back(corral[keep_idx[i]]);
                new_lambda(i) = std::max(lambda(keep_idx[i]), 0.0);
            }
            corral = std::move(new_corral);
            lambda = new_lambda / new_lambda.sum();
        }
        z = corral_points() * lambda;
    }

    Vector weights = Vector::Zero(k);
    for (size_t j = 0; j < corral.size(); ++j) weights(corral[j]) += std::max(lambda(j), 0.0);
    weights /= weights.sum();
    return {points * weights, weights};
}

HullDistance hull_boundary_distance(const Matrix& unit_points, double tau_ill) {
    const int m = static_cast<int>(unit_points.rows());
    const int k = static_cast<int>(unit_points.cols());
    for (int j = 0; j < k; ++j) {
        if (std::abs(unit_points.col(j).norm() - 1.0) > 1e-12)
            throw ShapeError("hull points must be unit vectors (column " + std::to_string(j + 1) +
                             ")");
    }

    MinNormResult mn = min_norm_point(unit_points);
    const double h_out = mn.point.norm();
    if (h_out > tau_ill) {
        HullDistance hd;
        hd.h = h_out;
        hd.side = HullSide::Outside;
        hd.certificate = mn.point / h_out;
        hd.weights = mn.weights;
        return hd;
    }

    // The origin lies in the hull. If the points do not affinely span R^m the
    // hull has empty interior, so the origin sits on the boundary and any
    // direction orthogonal to span{p_i} supports the hull.
    Eigen::JacobiSVD<Matrix> span_svd(unit_points, Eigen::ComputeFullU);
    const int rank = (span_svd.singularValues().array() > 1e-10).count();
    if (rank < m) {
        HullDistance hd;
        hd.h = h_out;
        hd.side = HullSide::Boundary;
        hd.certificate = span_svd.matrixU().col(m - 1);
        hd.weights = mn.weights;
        return hd;
    }

    if (k > 12 || m > 6)
        throw UnsupportedError("interior facet enumeration is limited to k <= 12, m <= 6");

    // Supporting facets: hyperplanes through m affinely independent points
    // with every point weakly on one side.
    double best_c = kInf;
    Vector best_nu;
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    do {
        Vector nu;
        if (m == 1) {
            nu = Vector::Ones(1);
        } else {
            Matrix diff(m - 1, m);
            for (int i = 1; i < m; ++i)
                diff.row(i - 1) = (unit_points.col(idx[i]) - unit_points.col(idx[0])).transpose();
            Eigen::JacobiSVD<Matrix> svd(diff, Eigen::ComputeFullV);
            if (svd.singularValues()(m - 2) < 1e-10) continue;  // affinely dependent
            nu = svd.matrixV().col(m - 1);
        }
        // Near c = 0 (a facet through the origin) the offset cannot orient
        // the normal, so test both orientations. The origin may sit up to
        // tau_ill outside the hull here, which makes c slightly negative.
        for (int sign = 0; sign < 2; ++sign) {
            Vector oriented = sign ? Vector(-nu) : nu;
            double c = oriented.dot(unit_points.col(idx[0]));
            if (c < -tau_ill) continue;
            bool supporting = true;
            for (int j = 0; j < k && supporting; ++j)
                supporting = oriented.dot(unit_points.col(j)) <= c + 1e-12;
            if (supporting && c < best_c) {
                best_c = std::max(c, 0.0);
                best_nu = oriented;
            }
        }
    } while (next_combination(idx, k));

    if (!best_nu.size())
        throw DegenerateHullError("no supporting facet found for an interior-point hull");

    HullDistance hd;
    hd.h = best_c;
    hd.weights = mn.weights;
    if (best_c > tau_ill) {
        hd.side = HullSide::Inside;
        hd.certificate = best_nu;
    } else {
        hd.side = HullSide::Boundary;
        // Orient so the normal certifies weak dual feasibility: nu.p_i >= -c.
        hd.certificate = -best_nu;
    }
    return hd;
}

namespace {

Matrix normalized_columns(const ProblemInstance& inst) {
    Vector inv = column_norms(inst).cwiseInverse();
    return inst.matrix() * inv.asDiagonal();
}

}  // namespace

double gcc(const ProblemInstance& inst, double tau_ill) {
    HullDistance hd = hull_boundary_distance(normalized_columns(inst), tau_ill);
    return hd.side == HullSide::Boundary ? kInf : 1.0 / hd.h;
}

FeasibilityStatus classify_feasibility(const ProblemInstance& inst, double tau_ill) {
    HullDistance hd = hull_boundary_distance(normalized_columns(inst), tau_ill);
    FeasibilityStatus st;
    st.margin = hd.h;
    switch (hd.side) {
        case HullSide::Outside: {
            st.tag = Feasibility::DualStrict;
            st.witness = hd.certificate;
            break;
        }
        case HullSide::Inside: {
            st.tag = Feasibility::PrimalStrict;
            Vector x = hd.weights.cwiseQuotient(column_norms(inst));
            st.witness = x / x.norm();
            break;
        }
        case HullSide::Boundary: {
            st.tag = Feasibility::IllPosed;
            st.witness = hd.certificate;
            break;
        }
    }
    return st;
}

namespace {

// Feasible-point evaluation: clip to the orthant, renormalize, embed into the
// full support and score ||F^T x||^2. Every accepted candidate is a genuine
// feasible point, so the enumeration minimum can never undershoot.
struct OsmBest {
    double value = kInf;
    Vector x;
};

void osm_offer(const Matrix& factor, const std::vector<int>& support, const Vector& v_raw,
               OsmBest& best) {
    Vector v = v_raw;
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
    if (v.minCoeff() < -1e-10) return;
    v = v.cwiseMax(0.0);
    const double nv = v.norm();
    if (nv < 1e-14) return;
    v /= nv;
    Vector x = Vector::Zero(factor.rows());
    for (size_t i = 0; i < support.size(); ++i) x(support[i]) = v(i);
    const double value = (factor.transpose() * x).squaredNorm();
    if (value < best.value) {
        best.value = value;
        best.x = x;
    }
}

// A degenerate eigenvalue cluster can hide a nonnegative eigenvector that no
// basis vector exhibits. Alternating projection between the eigenspace and
// the orthant recovers one when it exists.
void osm_offer_cluster(const Matrix& factor, const std::vector<int>& support,
                       const Matrix& eigenspace, OsmBest& best) {
    const int r = static_cast<int>(eigenspace.rows());
    for (int start = -1; start < std::min(r, 3); ++start) {
        Vector v = start < 0 ? Vector::Ones(r) : Vector(Vector::Unit(r, start));
        v = eigenspace * (eigenspace.transpose() * v);
        bool alive = true;
        for (int it = 0; it < 64 && alive; ++it) {
            v = v.cwiseMax(0.0);
            if (v.norm() < 1e-13) alive = false;
            v = eigenspace * (eigenspace.transpose() * v);
        }
        if (!alive || v.norm() < 1e-10) continue;
        v /= v.norm();
        if (v.minCoeff() < -1e-8) continue;
        osm_offer(factor, support, v, best);
    }
}

OrthantSphereMin osm_projected_gradient(const Matrix& factor) {
    const int n = static_cast<int>(factor.rows());
    OsmBest best;
    auto score = [&](const Vector& x) { return (factor.transpose() * x).squaredNorm(); };

    std::vector<Vector> starts;
    for (int i = 0; i < n; ++i) starts.push_back(Vector::Unit(n, i));
    // Deterministic dense starts: normalized all-ones plus rotations of a
    // low-discrepancy profile.
    starts.push_back(Vector::Ones(n).normalized());
    for (int s = 0; static_cast<int>(starts.size()) < 64; ++s) {
        Vector v(n);
        for (int i = 0; i < n; ++i)
            v(i) = 0.5 + 0.5 * std::cos(2.399963229728653 * (i + 1) * (s + 1));
        starts.push_back(v.normalized());
    }

    for (auto& x0 : starts) {
        Vector x = x0;
        double fx = score(x);
        double eta = 0.5;
        for (int it = 0; it < 300; ++it) {
            Vector grad = 2.0 * (factor * (factor.transpose() * x));
            Vector tangent = grad - grad.dot(x) * x;
            Vector cand = (x - eta * tangent).cwiseMax(0.0);
            double cn = cand.norm();
            if (cn < 1e-14) break;
            cand /= cn;
            double fc = score(cand);
            if (fc < fx - 1e-18) {
                x = cand;
                fx = fc;
                eta = std::min(eta * 1.3, 1.0);
            } else {
                eta *= 0.5;
                if (eta < 1e-10) break;
            }
        }
        if (fx < best.value) {
            best.value = fx;
            best.x = x;
        }
    }
    return {best.value, best.x, /*exact=*/false};
}

}  // namespace

OrthantSphereMin orthant_sphere_min_factor(const Matrix& factor) {
    const int n = static_cast<int>(factor.rows());
    const int d = static_cast<int>(factor.cols());
    if (d < 0 || d > n) throw ShapeError("factor must be n x d with d <= n");
    if (d == 0) return {0.0, Vector::Unit(n, 0), true};

    if (n > 16) return osm_projected_gradient(factor);

    OsmBest best;
    std::vector<int> support;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        support.clear();
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) support.push_back(i);
        const int r = static_cast<int>(support.size());

        Matrix fz(r, d);
        for (int i = 0; i < r; ++i) fz.row(i) = factor.row(support[i]);

        if (r == 1) {
            osm_offer(factor, support, Vector::Ones(1), best);
            continue;
        }

        Eigen::SelfAdjointEigenSolver<Matrix> eig(fz * fz.transpose());
        if (eig.info() != Eigen::Success) continue;
        const Vector& evals = eig.eigenvalues();

        for (int j = 0; j < r; ++j) {
            // Cluster of (nearly) equal eigenvalues starting at j.
            int j2 = j;
            while (j2 + 1 < r && evals(j2 + 1) - evals(j) < 1e-10) ++j2;
            if (j2 == j) {
                osm_offer(factor, support, eig.eigenvectors().col(j), best);
            } else {
                for (int t = j; t <= j2; ++t)
                    osm_offer(factor, support, eig.eigenvectors().col(t), best);
                osm_offer_cluster(factor, support, eig.eigenvectors().middleCols(j, j2 - j + 1),
                                  best);
                j = j2;
            }
        }
    }
    return {best.value, best.x, true};
}

OrthantSphereMin orthant_sphere_min(const Matrix& projector) {
    const int n = static_cast<int>(projector.rows());
    if (projector.cols() != n) throw NotAProjectorError("matrix is not square");
    if ((projector - projector.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw NotAProjectorError("matrix is not symmetric within 1e-10");
    if ((projector * projector - projector).cwiseAbs().maxCoeff() > 1e-10)
        throw NotAProjectorError("matrix is not idempotent within 1e-10");

    // Extract the orthonormal factor from the unit eigenspace so scores are
    // computed as squared norms rather than bilinear forms.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(projector);
    int d = 0;
    for (int i = 0; i < n; ++i)
        if (eig.eigenvalues()(i) > 0.5) ++d;
    Matrix factor(n, d);
    int c = 0;
    for (int i = 0; i < n; ++i)
        if (eig.eigenvalues()(i) > 0.5) factor.col(c++) = eig.eigenvectors().col(i);
    return orthant_sphere_min_factor(factor);
}

GrassmannDistance grassmann_distance(const Subspace& w, double tau_ill) {
    (void)tau_ill;
    const int n = w.ambient_dim();
    const int m = w.dim();
    if (m < 1 || m >= n)
        throw DegenerateError("grassmann distance requires 1 <= dim < ambient dim");

    OrthantSphereMin on_w = orthant_sphere_min_factor(w.basis());
    OrthantSphereMin on_perp = orthant_sphere_min_factor(w.orthogonal_complement().basis());

    GrassmannDistance gd;
    if (on_w.value >= on_perp.value) {
        gd.d = std::sqrt(std::max(on_w.value, 0.0));
        gd.side = ConeSide::Dual;  // the W-perp minimum vanished: W meets int R^n_+
        gd.argmin = on_w.argmin;
    } else {
        gd.d = std::sqrt(std::max(on_perp.value, 0.0));
        gd.side = ConeSide::Primal;
        gd.argmin = on_perp.argmin;
    }
    return gd;
}

double grassmann_cond(const ProblemInstance& inst, double tau_ill) {
    if (inst.rows() == inst.cols())
        throw DegenerateError("no ill-posed subspace exists for m == n");
    GrassmannDistance gd = grassmann_distance(Subspace::from_rows(inst), tau_ill);
    return gd.d <= tau_ill ? kInf : 1.0 / gd.d;
}

namespace {

Interval intersect(Interval a, Interval b) {
    Interval out{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (out.lo > out.hi) out.lo = out.hi;  // guards eps-level rounding only
    return out;
}

}  // namespace

RenegarIntervals renegar_intervals(const ProblemInstance& inst, double tau_ill) {
    const double g = gcc(inst, tau_ill);
    if (std::isinf(g)) throw IllPosedError("instance is ill-posed; condition numbers diverge");

    Vector norms = column_norms(inst);
    const double col_ratio = norms.maxCoeff() / norms.minCoeff();
    const double sqrt_n = std::sqrt(static_cast<double>(inst.cols()));

    Interval r12{g, col_ratio * g};
    Interval r22;
    if (inst.rows() < inst.cols()) {
        const double gr = grassmann_cond(inst, tau_ill);
        if (std::isinf(gr)) throw IllPosedError("instance is ill-posed; condition numbers diverge");
        auto [smax, smin] = extreme_singular_values(inst.matrix());
        r22 = Interval{gr, (smax / smin) * gr};
    } else {
        r22 = Interval{r12.lo / sqrt_n, sqrt_n * r12.hi};
    }

    RenegarIntervals out;
    out.r12 = intersect(r12, Interval{r22.lo / sqrt_n, sqrt_n * r22.hi});
    out.r22 = intersect(r22, Interval{r12.lo / sqrt_n, sqrt_n * r12.hi});
    return out;
}

TheoremCheck theorem2_check(const ProblemInstance& inst, double tau_ill) {
    if (inst.rows() >= inst.cols())
        throw DegenerateError("theorem check requires m < n");

    TheoremCheck tc;
    tc.gcc_a = gcc(inst, tau_ill);
    tc.grassmann_a = grassmann_cond(inst, tau_ill);
    if (std::isinf(tc.gcc_a) || std::isinf(tc.grassmann_a))
        throw IllPosedError("instance is ill-posed");

    TransformRecord nb = precondition(inst, Order::NormalizeThenBalance);
    TransformRecord bn = precondition(inst, Order::BalanceThenNormalize);

    tc.gcc_nb = gcc(nb.a_hat(), tau_ill);
    tc.grassmann_nb = grassmann_cond(nb.a_hat(), tau_ill);
    tc.gcc_bn = gcc(bn.a_hat(), tau_ill);
    tc.grassmann_bn = grassmann_cond(bn.a_hat(), tau_ill);

    const double sqrt_n = std::sqrt(static_cast<double>(inst.cols()));
    tc.slack_eq5_lower = tc.grassmann_nb - tc.gcc_nb / sqrt_n;
    tc.slack_eq5_upper = sqrt_n * tc.gcc_a - tc.grassmann_nb;
    tc.slack_eq6_lower = tc.gcc_bn - tc.grassmann_bn / sqrt_n;
    tc.slack_eq6_upper = sqrt_n * tc.grassmann_a - tc.gcc_bn;

    // The middle Renegar terms collapse because the NB result has orthonormal
    // rows and the BN result unit columns; record the bracket widths.
    {
        auto [smax, smin] = extreme_singular_values(nb.a_hat().matrix());
        tc.collapse_width_nb = (smax / smin - 1.0) * tc.grassmann_nb;
        Vector bn_norms = column_norms(bn.a_hat());
        tc.collapse_width_bn = (bn_norms.maxCoeff() / bn_norms.minCoeff() - 1.0) * tc.gcc_bn;
    }

    const double scale =
        std::max({1.0, tc.gcc_a, tc.grassmann_a, tc.gcc_nb, tc.grassmann_nb, tc.gcc_bn,
                  tc.grassmann_bn});
    const double tol = -1e-9 * scale;
    tc.pass = tc.slack_eq5_lower >= tol && tc.slack_eq5_upper >= tol &&
              tc.slack_eq6_lower >= tol && tc.slack_eq6_upper >= tol;
    return tc;
}

ConditionReport analyze(const ProblemInstance& inst, double tau_ill) {
    ConditionReport rep;
    rep.feasibility = classify_feasibility(inst, tau_ill);
    rep.gcc = gcc(inst, tau_ill);

    Vector norms = column_norms(inst);
    rep.col_ratio = norms.maxCoeff() / norms.minCoeff();
    auto [smax, smin] = extreme_singular_values(inst.matrix());
    rep.sigma_ratio = smax / smin;

    if (inst.rows() == inst.cols()) {
        rep.grassmann_degenerate = true;
        rep.grassmann = std::numeric_limits<double>::quiet_NaN();
    } else {
        rep.grassmann = grassmann_cond(inst, tau_ill);
    }

    if (rep.feasibility.tag == Feasibility::IllPosed) {
        rep.renegar.r12 = {kInf, kInf};
        rep.renegar.r22 = {kInf, kInf};
    } else {
        rep.renegar = renegar_intervals(inst, tau_ill);
    }
    return rep;
}

}  // namespace ineqcond
