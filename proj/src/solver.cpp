#include "csr/solver.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <random>

#include "csr/quadrature.hpp"

namespace csr {

namespace {

constexpr double kGaussOffset = 0.28867513459481287;  // 1/(2 sqrt(3))

struct CellQuad {
    // Reference coordinates of the 2x2 Gauss points and the bilinear basis
    // values/derivatives of the four cell corners (00, 10, 01, 11) there.
    double xi[4], eta[4];
    double phi[4][4], dphi_dxi[4][4], dphi_deta[4][4];

    CellQuad() {
        const double lo = 0.5 - kGaussOffset, hi = 0.5 + kGaussOffset;
        const double gx[2] = {lo, hi};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const int g = 2 * a + b;
                xi[g] = gx[a];
                eta[g] = gx[b];
                const double x = gx[a], e = gx[b];
                const double vals[4] = {(1 - x) * (1 - e), x * (1 - e), (1 - x) * e, x * e};
                const double dx[4] = {-(1 - e), (1 - e), -e, e};
                const double de[4] = {-(1 - x), -x, (1 - x), x};
                for (int c = 0; c < 4; ++c) {
                    phi[g][c] = vals[c];
                    dphi_dxi[g][c] = dx[c];
                    dphi_deta[g][c] = de[c];
                }
            }
    }
};

const CellQuad& cell_quad() {
    static const CellQuad q;
    return q;
}

struct GaussPointData {
    double x, t;        // physical position in D
    double u, ux, ut, w;
    Point3 e;           // embedded point
    double g11, g12, g22, detG;
    double a, M, K1, fdetG;
};

class Assembler {
public:
    Assembler(const DiscretizedProblem& problem) : pb_(problem) {
        const auto& d = pb_.dom;
        hx_ = d.hx();
        ht_ = d.ht();
        wgauss_ = 0.25 * hx_ * ht_;
    }

    // Evaluates everything at Gauss point g of cell (ci, cj).
    GaussPointData gauss_data(const std::vector<double>& u, int ci, int cj, int g) const {
        const auto& d = pb_.dom;
        const CellQuad& q = cell_quad();
        const int c00 = d.idx(ci, cj), c10 = d.idx(ci + 1, cj);
        const int c01 = d.idx(ci, cj + 1), c11 = d.idx(ci + 1, cj + 1);
        const double uc[4] = {u[c00], u[c10], u[c01], u[c11]};
        GaussPointData p;
        p.x = d.x(ci) + q.xi[g] * hx_;
        p.t = d.t(cj) + q.eta[g] * ht_;
        p.u = p.ux = p.ut = 0.0;
        for (int c = 0; c < 4; ++c) {
            p.u += uc[c] * q.phi[g][c];
            p.ux += uc[c] * q.dphi_dxi[g][c] / hx_;
            p.ut += uc[c] * q.dphi_deta[g][c] / ht_;
        }
        p.w = p.ux + 2.0 * p.u * p.ut;
        p.e = Point3{p.x, p.u, p.t - p.x * p.u};
        p.g11 = pb_.metric.g11()(p.e);
        p.g12 = pb_.metric.g12()(p.e);
        p.g22 = pb_.metric.g22()(p.e);
        p.detG = p.g11 * p.g22 - p.g12 * p.g12;
        const double a2 = p.g22 * p.w * p.w + 2.0 * p.g12 * p.w + p.g11;
        if (!(a2 > 0.0) || !(p.g11 > 0.0) || !(p.detG > 0.0))
            throw NumericError("metric degenerate on the iterate");
        p.a = std::sqrt(a2);
        p.M = (p.g22 * p.w + p.g12) / p.a;
        const double Yg11 = frame_y_derivative(pb_.metric.g11(), p.e);
        const double Yg12 = frame_y_derivative(pb_.metric.g12(), p.e);
        const double Yg22 = frame_y_derivative(pb_.metric.g22(), p.e);
        p.K1 = 0.5 * (Yg22 * p.w * p.w + 2.0 * Yg12 * p.w + Yg11) / p.a;
        p.fdetG = pb_.f(p.e) * p.detG;
        return p;
    }

    // Accumulates the gradient of the cell-quadrature functional. Which parts
    // contribute is selected by with_area / with_volume (the volume part has
    // density f detG when use_f, det G otherwise).
    void accumulate_gradient(const std::vector<double>& u, std::vector<double>& grad,
                             bool with_area, bool with_volume, bool use_f,
                             int ci_lo, int ci_hi, int cj_lo, int cj_hi) const {
        const auto& d = pb_.dom;
        const CellQuad& q = cell_quad();
        const double fsign = pb_.sign == FunctionalSign::AreaMinusVolume ? -1.0 : 1.0;
        for (int ci = ci_lo; ci < ci_hi; ++ci)
            for (int cj = cj_lo; cj < cj_hi; ++cj) {
                const int nodes[4] = {d.idx(ci, cj), d.idx(ci + 1, cj), d.idx(ci, cj + 1),
                                      d.idx(ci + 1, cj + 1)};
                for (int g = 0; g < 4; ++g) {
                    const GaussPointData p = gauss_data(u, ci, cj, g);
                    double K = 0.0, M = 0.0;
                    if (with_area) {
                        K += p.K1;
                        M = p.M;
                    }
                    if (with_volume) {
                        const double dens = use_f ? p.fdetG : p.detG;
                        K += (use_f ? fsign : 1.0) * dens;
                    }
                    for (int c = 0; c < 4; ++c) {
                        const double phi = q.phi[g][c];
                        const double phix = q.dphi_dxi[g][c] / hx_;
                        const double phit = q.dphi_deta[g][c] / ht_;
                        grad[nodes[c]] +=
                            wgauss_ *
                            (K * phi + M * (phix + 2.0 * p.u * phit + 2.0 * phi * p.ut));
                    }
                }
            }
    }

    std::vector<double> gradient(const std::vector<double>& u, bool with_area,
                                 bool with_volume, bool use_f) const {
        std::vector<double> g(u.size(), 0.0);
        accumulate_gradient(u, g, with_area, with_volume, use_f, 0, pb_.dom.nx - 1, 0,
                            pb_.dom.nt - 1);
        return g;
    }

    // Functional value; the subgraph integral per Gauss point runs adaptive
    // Simpson on the density along (x, s, t - x s).
    double value(const std::vector<double>& u, bool with_area, bool with_volume, bool use_f,
                 double tol) const {
        const auto& d = pb_.dom;
        const double fsign = pb_.sign == FunctionalSign::AreaMinusVolume ? -1.0 : 1.0;
        CompiledExpr density;
        if (with_volume)
            density = use_f
                          ? CompiledExpr(pb_.f.expression() * pb_.metric.det_field().expression())
                          : CompiledExpr(pb_.metric.det_field().expression());
        double sum = 0.0;
        for (int ci = 0; ci < d.nx - 1; ++ci)
            for (int cj = 0; cj < d.nt - 1; ++cj)
                for (int g = 0; g < 4; ++g) {
                    const GaussPointData p = gauss_data(u, ci, cj, g);
                    double val = 0.0;
                    if (with_area) val += p.a;
                    if (with_volume) {
                        const double inner = adaptive_simpson(
                            [&](double s) {
                                return density.evaluate(Point3{p.x, s, p.t - p.x * s});
                            },
                            0.0, p.u, tol);
                        val += (use_f ? fsign : 1.0) * inner;
                    }
                    sum += wgauss_ * val;
                }
        return sum;
    }

    double hx() const { return hx_; }
    double ht() const { return ht_; }

private:
    const DiscretizedProblem& pb_;
    double hx_, ht_, wgauss_;
};

int interior_count(const GraphDomain& d) { return (d.nx - 2) * (d.nt - 2); }

int interior_index(const GraphDomain& d, int i, int j) {
    return (i - 1) * (d.nt - 2) + (j - 1);
}

std::vector<double> interior_part(const GraphDomain& d, const std::vector<double>& nodal,
                                  double scale) {
    std::vector<double> r(interior_count(d));
    for (int i = 1; i < d.nx - 1; ++i)
        for (int j = 1; j < d.nt - 1; ++j) r[interior_index(d, i, j)] = scale * nodal[d.idx(i, j)];
    return r;
}

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Interior residual r(u) = (g_area + sign-weighted volume parts)/(hx ht),
// parameterizable for the constrained solver: r_A - lambda r_V.
struct ResidualFn {
    const DiscretizedProblem& problem;
    const Assembler& assembler;
    bool constrained = false;
    double lambda = 0.0;

    std::vector<double> operator()(const std::vector<double>& u) const {
        const auto& d = problem.dom;
        const double scale = 1.0 / (assembler.hx() * assembler.ht());
        if (!constrained) {
            const std::vector<double> g = assembler.gradient(u, true, true, true);
            return interior_part(d, g, scale);
        }
        std::vector<double> gA = assembler.gradient(u, true, false, false);
        const std::vector<double> gV = assembler.gradient(u, false, true, false);
        for (std::size_t k = 0; k < gA.size(); ++k) gA[k] -= lambda * gV[k];
        return interior_part(d, gA, scale);
    }
};

// Finite-difference Jacobian of the interior residual, assembled with a 3x3
// node coloring (the residual stencil has Chebyshev radius 1).
Eigen::SparseMatrix<double> fd_jacobian(const GraphDomain& d, const ResidualFn& residual,
                                        const std::vector<double>& u,
                                        const std::vector<double>& r0) {
    const int n = interior_count(d);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n) * 9);
    std::vector<double> up = u;
    std::vector<double> delta(d.size(), 0.0);
    for (int color = 0; color < 9; ++color) {
        const int oi = color / 3, oj = color % 3;
        bool any = false;
        for (int i = 1; i < d.nx - 1; ++i)
            for (int j = 1; j < d.nt - 1; ++j)
                if ((i - 1) % 3 == oi && (j - 1) % 3 == oj) {
                    const double eps = 1e-7 * std::max(1.0, std::abs(u[d.idx(i, j)]));
                    delta[d.idx(i, j)] = eps;
                    up[d.idx(i, j)] = u[d.idx(i, j)] + eps;
                    any = true;
                }
        if (!any) continue;
        const std::vector<double> rp = residual(up);
        for (int i = 1; i < d.nx - 1; ++i)
            for (int j = 1; j < d.nt - 1; ++j)
                if ((i - 1) % 3 == oi && (j - 1) % 3 == oj) {
                    const double eps = delta[d.idx(i, j)];
                    const int col = interior_index(d, i, j);
                    for (int di = -1; di <= 1; ++di)
                        for (int dj = -1; dj <= 1; ++dj) {
                            const int ri = i + di, rj = j + dj;
                            if (ri < 1 || ri >= d.nx - 1 || rj < 1 || rj >= d.nt - 1) continue;
                            const int row = interior_index(d, ri, rj);
                            const double dr = (rp[row] - r0[row]) / eps;
                            if (dr != 0.0) trips.emplace_back(row, col, dr);
                        }
                    up[d.idx(i, j)] = u[d.idx(i, j)];
                    delta[d.idx(i, j)] = 0.0;
                }
    }
    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trips.begin(), trips.end());
    return J;
}

void apply_interior_step(const GraphDomain& d, std::vector<double>& u,
                         const std::vector<double>& step, double alpha) {
    for (int i = 1; i < d.nx - 1; ++i)
        for (int j = 1; j < d.nt - 1; ++j)
            u[d.idx(i, j)] += alpha * step[interior_index(d, i, j)];
}

}  // namespace

std::vector<double> sample_boundary(const DiscretizedProblem& problem) {
    const auto& d = problem.dom;
    std::vector<double> u(d.size());
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.nt; ++j)
            u[d.idx(i, j)] = problem.boundary(Point3{d.x(i), 0.0, d.t(j)});
    return u;
}

double functional_value(const DiscretizedProblem& problem, const std::vector<double>& u,
                        double tol) {
    Assembler as(problem);
    return as.value(u, true, true, true, tol);
}

double discrete_volume(const DiscretizedProblem& problem, const std::vector<double>& u,
                       double tol) {
    Assembler as(problem);
    return as.value(u, false, true, false, tol);
}

std::vector<double> assemble_gradient(const DiscretizedProblem& problem,
                                      const std::vector<double>& u) {
    Assembler as(problem);
    return as.gradient(u, true, true, true);
}

std::vector<double> assemble_area_gradient(const DiscretizedProblem& problem,
                                           const std::vector<double>& u) {
    Assembler as(problem);
    return as.gradient(u, true, false, false);
}

std::vector<double> assemble_volume_gradient(const DiscretizedProblem& problem,
                                             const std::vector<double>& u) {
    Assembler as(problem);
    return as.gradient(u, false, true, false);
}

std::vector<double> assemble_residual(const DiscretizedProblem& problem,
                                      const std::vector<double>& u) {
    Assembler as(problem);
    ResidualFn r{problem, as};
    return r(u);
}

namespace {

// Shared damped-Newton driver; `residual` captures the constrained shift when
// present. Returns through `result`.
void newton_loop(const DiscretizedProblem& problem, const ResidualFn& residual,
                 const SolveConfig& config, std::vector<double>& u, SolveResult& result) {
    const auto& d = problem.dom;
    std::vector<double> r = residual(u);
    double rnorm = sup_norm(r);
    result.residual_history.push_back(rnorm);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    for (int iter = 0; iter < config.max_iter; ++iter) {
        if (rnorm <= config.tol) {
            result.converged = true;
            break;
        }
        result.iterations = iter + 1;
        const Eigen::SparseMatrix<double> J = fd_jacobian(d, residual, u, r);
        std::vector<double> step(r.size());
        bool have_newton = false;
        lu.compute(J);
        if (lu.info() == Eigen::Success) {
            Eigen::VectorXd rhs(r.size());
            for (std::size_t k = 0; k < r.size(); ++k) rhs(k) = -r[k];
            const Eigen::VectorXd s = lu.solve(rhs);
            if (lu.info() == Eigen::Success) {
                for (std::size_t k = 0; k < r.size(); ++k) step[k] = s(k);
                have_newton = true;
            }
        }
        if (!have_newton) {
            // Gradient-descent fallback: the residual is the scaled gradient.
            result.message = "jacobian factorization failed; gradient fallback";
            for (std::size_t k = 0; k < r.size(); ++k) step[k] = -r[k];
        }

        auto try_step = [&](const std::vector<double>& dir, double alpha0) -> bool {
            double alpha = alpha0;
            for (int halving = 0; halving <= 20; ++halving) {
                std::vector<double> u_try = u;
                apply_interior_step(d, u_try, dir, alpha);
                double rn_try;
                try {
                    rn_try = sup_norm(residual(u_try));
                } catch (const NumericError&) {
                    alpha *= config.damping;
                    continue;
                }
                if (rn_try <= (1.0 - 1e-4 * alpha) * rnorm) {
                    u = std::move(u_try);
                    rnorm = rn_try;
                    return true;
                }
                alpha *= config.damping;
            }
            return false;
        };

        bool accepted = try_step(step, 1.0);
        if (!accepted && have_newton) {
            // Stagnation: fall back to a gradient step.
            result.message = "newton stagnated; gradient fallback";
            std::vector<double> gstep(r.size());
            for (std::size_t k = 0; k < r.size(); ++k) gstep[k] = -r[k];
            accepted = try_step(gstep, 1.0 / (1.0 + rnorm));
        }
        if (!accepted) {
            result.message = "line search failed";
            break;
        }
        r = residual(u);
        rnorm = sup_norm(r);
        result.residual_history.push_back(rnorm);
    }
    if (rnorm <= config.tol) result.converged = true;
    result.residual = rnorm;
    result.u = u;
}

}  // namespace

SolveResult solve(const DiscretizedProblem& problem, const SolveConfig& config) {
    Assembler as(problem);
    ResidualFn residual{problem, as};
    std::vector<double> u = sample_boundary(problem);
    SolveResult result;
    newton_loop(problem, residual, config, u, result);
    return result;
}

SolveResult volume_constrained_solve(const DiscretizedProblem& problem, double target_volume,
                                     const SolveConfig& config) {
    const auto& d = problem.dom;
    Assembler as(problem);
    const double cell = as.hx() * as.ht();
    const double vscale = (d.x1 - d.x0) * (d.t1 - d.t0);
    std::vector<double> u = sample_boundary(problem);
    double lambda = 0.0;
    SolveResult result;

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    ResidualFn residual{problem, as, true, lambda};
    for (int iter = 0; iter < config.max_iter; ++iter) {
        residual.lambda = lambda;
        const std::vector<double> F1 = residual(u);
        const double vol = as.value(u, false, true, false, 1e-12);
        const double F2 = (vol - target_volume) / vscale;
        const double merit = std::max(sup_norm(F1), std::abs(F2));
        if (iter == 0) result.residual_history.push_back(merit);
        if (sup_norm(F1) <= config.tol && std::abs(vol - target_volume) <= config.vol_tol) {
            result.converged = true;
            result.iterations = iter;
            break;
        }
        result.iterations = iter + 1;

        const Eigen::SparseMatrix<double> J = fd_jacobian(d, residual, u, F1);
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            result.message = "constrained jacobian factorization failed";
            break;
        }
        const std::vector<double> gV = as.gradient(u, false, true, false);
        const std::vector<double> rV = interior_part(d, gV, 1.0 / cell);
        const std::vector<double> bVec = interior_part(d, gV, 1.0 / vscale);
        const int n = interior_count(d);
        Eigen::VectorXd rhs1(n), rhs2(n);
        for (int k = 0; k < n; ++k) {
            rhs1(k) = -F1[k];
            rhs2(k) = rV[k];
        }
        const Eigen::VectorXd p = lu.solve(rhs1);
        const Eigen::VectorXd q = lu.solve(rhs2);
        if (lu.info() != Eigen::Success) {
            result.message = "constrained solve failed";
            break;
        }
        double bp = 0.0, bq = 0.0;
        for (int k = 0; k < n; ++k) {
            bp += bVec[k] * p(k);
            bq += bVec[k] * q(k);
        }
        if (bq == 0.0) {
            result.message = "volume gradient orthogonal to the newton space";
            break;
        }
        const double dlambda = (-F2 - bp) / bq;
        std::vector<double> du(n);
        for (int k = 0; k < n; ++k) du[k] = p(k) + dlambda * q(k);

        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= 20; ++halving) {
            std::vector<double> u_try = u;
            apply_interior_step(d, u_try, du, alpha);
            const double l_try = lambda + alpha * dlambda;
            residual.lambda = l_try;
            double merit_try;
            try {
                const std::vector<double> F1t = residual(u_try);
                const double volt = as.value(u_try, false, true, false, 1e-12);
                merit_try = std::max(sup_norm(F1t), std::abs(volt - target_volume) / vscale);
            } catch (const NumericError&) {
                alpha *= config.damping;
                continue;
            }
            if (merit_try <= (1.0 - 1e-4 * alpha) * merit || merit_try <= config.tol) {
                u = std::move(u_try);
                lambda = l_try;
                result.residual_history.push_back(merit_try);
                accepted = true;
                break;
            }
            alpha *= config.damping;
        }
        if (!accepted) {
            result.message = "constrained line search failed";
            break;
        }
    }
    residual.lambda = lambda;
    result.residual = sup_norm(residual(u));
    result.u = u;
    result.multiplier = lambda;
    result.volume = as.value(u, false, true, false, 1e-12);
    if (result.converged && std::abs(result.volume - target_volume) > config.vol_tol)
        result.converged = false;
    if (!result.converged && result.message.empty())
        result.message = "did not reach tolerance (target volume may be infeasible)";
    return result;
}

std::vector<double> multiplier_estimates(const DiscretizedProblem& problem,
                                         const std::vector<double>& u, unsigned seed,
                                         int count) {
    const auto& d = problem.dom;
    const std::vector<double> gA = assemble_area_gradient(problem, u);
    const std::vector<double> gV = assemble_volume_gradient(problem, u);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.25, 0.75);
    std::vector<double> estimates;
    estimates.reserve(count);
    for (int k = 0; k < count; ++k) {
        // Smooth interior bump with a random center.
        const double cx = d.x0 + unif(rng) * (d.x1 - d.x0);
        const double ct = d.t0 + unif(rng) * (d.t1 - d.t0);
        const double sx = 0.15 * (d.x1 - d.x0), st = 0.15 * (d.t1 - d.t0);
        double num = 0.0, den = 0.0;
        for (int i = 1; i < d.nx - 1; ++i)
            for (int j = 1; j < d.nt - 1; ++j) {
                const double dx = (d.x(i) - cx) / sx, dt = (d.t(j) - ct) / st;
                const double w = std::exp(-0.5 * (dx * dx + dt * dt));
                num += gA[d.idx(i, j)] * w;
                den += gV[d.idx(i, j)] * w;
            }
        if (den == 0.0) throw NumericError("degenerate multiplier test vector");
        estimates.push_back(num / den);
    }
    return estimates;
}

namespace {

RefineStudyReport run_refine_study(const DiscretizedProblem& problem, int levels,
                                   const SolveConfig& config, int n_curves,
                                   double halfwidth_frac, const ScalarField* frozen_u) {
    if (levels < 3) throw std::invalid_argument("refinement study needs >= 3 levels");
    RefineStudyReport report;
    const auto& base = problem.dom;
    for (int lvl = 0; lvl < levels; ++lvl) {
        const int factor = 1 << lvl;
        GraphDomain dom(base.x0, base.x1, base.t0, base.t1, (base.nx - 1) * factor + 1,
                        (base.nt - 1) * factor + 1);
        DiscretizedProblem p{dom, problem.metric, problem.f, problem.boundary, problem.sign};
        RefineLevelReport level;
        level.nx = dom.nx;
        level.nt = dom.nt;
        level.h = dom.ht();
        std::vector<double> u;
        if (frozen_u) {
            u = IntrinsicGraph::sample(dom, *frozen_u).u();
            level.solution.u = u;
            level.solution.converged = true;
            level.solution.residual = 0.0;
        } else {
            level.solution = solve(p, config);
            if (!level.solution.converged)
                throw NumericError("refinement level " + std::to_string(lvl) +
                                   " did not converge");
            u = level.solution.u;
        }
        const IntrinsicGraph graph(dom, u);
        const double r = halfwidth_frac * (dom.x1 - dom.x0);
        const double step = 0.5 * dom.ht();
        double sup = 0.0;
        for (int c = 0; c < n_curves; ++c) {
            const double a = 0.5 * (dom.x0 + dom.x1);
            const double frac = n_curves == 1 ? 0.5 : 0.3 + 0.4 * c / (n_curves - 1.0);
            const double b = dom.t0 + frac * (dom.t1 - dom.t0);
            CharacteristicCurve curve = trace(graph, a, b, r, step);
            const RegularityReport rep =
                regularity_diagnostic(graph, problem.metric, problem.f, curve, problem.sign);
            sup = std::max(sup, rep.sup);
        }
        level.diagnostic_sup = sup;
        report.levels.push_back(std::move(level));
    }
    // Least-squares slope of log(sup) against log(h).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (const auto& lvl : report.levels) {
        if (!(lvl.diagnostic_sup > 0.0)) continue;
        const double lx = std::log(lvl.h), ly = std::log(lvl.diagnostic_sup);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n >= 2 && sxx * n - sx * sx > 0.0)
        report.estimated_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return report;
}

}  // namespace

RefineStudyReport refine_study(const DiscretizedProblem& problem, int levels,
                               const SolveConfig& config, int n_curves,
                               double halfwidth_frac) {
    return run_refine_study(problem, levels, config, n_curves, halfwidth_frac, nullptr);
}

RefineStudyReport refine_study_frozen(const DiscretizedProblem& problem, int levels,
                                      const ScalarField& u, int n_curves,
                                      double halfwidth_frac) {
    SolveConfig config;
    return run_refine_study(problem, levels, config, n_curves, halfwidth_frac, &u);
}

}  // namespace csr
