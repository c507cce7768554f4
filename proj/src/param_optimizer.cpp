#include "grl/param_optimizer.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace grl {

namespace {

constexpr double kAlpha = 0.25;  // simplex acceptability: minimum vsig / rho
constexpr double kBeta = 2.1;    // maximum edge length / rho
constexpr double kGamma = 0.5;   // geometry-step length / rho
constexpr double kDelta = 1.1;   // edge threshold when choosing a vertex to drop

class Run {
public:
    Run(const CostFunction& cost, int max_evals) : cost_(cost), max_evals_(max_evals) {}

    bool exhausted() const { return result_.evaluations >= max_evals_; }

    double eval(const Eigen::VectorXd& x) {
        const double f = cost_(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
        ++result_.evaluations;
        if (result_.trace.empty() || f < result_.best_cost) {
            result_.best_cost = f;
            result_.x.assign(x.data(), x.data() + x.size());
        }
        result_.trace.push_back(result_.best_cost);
        return f;
    }

    OptimizeResult take() { return std::move(result_); }

private:
    const CostFunction& cost_;
    int max_evals_;
    OptimizeResult result_;
};

}  // namespace

OptimizeResult minimize(const CostFunction& cost, std::size_t dim, const OptimizerBudget& budget) {
    if (budget.max_evaluations < 1) throw std::invalid_argument("max_evaluations must be >= 1");
    if (!budget.initial_point.empty() && budget.initial_point.size() != dim) {
        throw std::invalid_argument("initial point has wrong dimension");
    }
    if (!(budget.rhobeg > 0.0) || !(budget.rhoend > 0.0) || budget.rhoend > budget.rhobeg) {
        throw std::invalid_argument("need 0 < rhoend <= rhobeg");
    }
    Run run(cost, budget.max_evaluations);
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n && !budget.initial_point.empty(); ++i) x0(i) = budget.initial_point[static_cast<std::size_t>(i)];
    if (n == 0) {
        run.eval(x0);
        return run.take();
    }

    double rho = budget.rhobeg;
    // Column n of sim is the pole (best vertex); columns 0..n-1 are displacements
    // from it. simi is the inverse of the displacement block.
    Eigen::MatrixXd sim = Eigen::MatrixXd::Zero(n, n + 1);
    sim.leftCols(n).diagonal().setConstant(rho);
    sim.col(n) = x0;
    Eigen::MatrixXd simi = Eigen::MatrixXd::Identity(n, n) / rho;
    Eigen::VectorXd fval(n + 1);

    fval(n) = run.eval(x0);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (run.exhausted()) return run.take();
        fval(j) = run.eval(x0 + sim.col(j));
    }

    Eigen::VectorXd dx(n), g(n), vsig(n), veta(n);
    bool want_geometry = false;
    while (true) {
        // Move the best vertex into pole position.
        Eigen::Index nbest = n;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (fval(j) < fval(nbest)) nbest = j;
        }
        if (nbest < n) {
            std::swap(fval(n), fval(nbest));
            for (Eigen::Index i = 0; i < n; ++i) {
                const double t = sim(i, nbest);
                sim(i, nbest) = 0.0;
                sim(i, n) += t;
                double ta = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    sim(i, k) -= t;
                    ta -= simi(k, i);
                }
                simi(nbest, i) = ta;
            }
        }
        const double inverse_error =
            (simi * sim.leftCols(n) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
        if (inverse_error > 0.1) break;

        // Linear model gradient through the simplex.
        for (Eigen::Index i = 0; i < n; ++i) {
            double t = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) t += (fval(j) - fval(n)) * simi(j, i);
            g(i) = t;
        }
        const double parsig = kAlpha * rho;
        const double pareta = kBeta * rho;
        bool acceptable = true;
        for (Eigen::Index j = 0; j < n; ++j) {
            vsig(j) = 1.0 / simi.row(j).norm();
            veta(j) = sim.col(j).norm();
            if (vsig(j) < parsig || veta(j) > pareta) acceptable = false;
        }

        if (want_geometry && !acceptable) {
            want_geometry = false;
            Eigen::Index jdrop = -1;
            double t = pareta;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (veta(j) > t) {
                    jdrop = j;
                    t = veta(j);
                }
            }
            if (jdrop < 0) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (vsig(j) < t) {
                        jdrop = j;
                        t = vsig(j);
                    }
                }
            }
            dx = kGamma * rho * vsig(jdrop) * simi.row(jdrop).transpose();
            if (g.dot(dx) > 0.0) dx = -dx;
            sim.col(jdrop) = dx;
            simi.row(jdrop) /= simi.row(jdrop).dot(dx);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j != jdrop) simi.row(j) -= simi.row(j).dot(dx) * simi.row(jdrop);
            }
            if (run.exhausted()) break;
            fval(jdrop) = run.eval(sim.col(n) + dx);
            continue;
        }
        want_geometry = false;

        bool improved_enough = false;
        const double gnorm = g.norm();
        if (gnorm > 0.0) {
            dx = -rho / gnorm * g;
            double prerem = rho * gnorm;
            if (run.exhausted()) break;
            const double f = run.eval(sim.col(n) + dx);
            double trured = fval(n) - f;
            if (f == fval(n)) prerem = trured = 0.0;

            double ratio = trured <= 0.0 ? 1.0 : 0.0;
            Eigen::Index jdrop = -1;
            Eigen::VectorXd sigbar(n);
            for (Eigen::Index j = 0; j < n; ++j) {
                const double t = std::abs(simi.row(j).dot(dx));
                if (t > ratio) {
                    jdrop = j;
                    ratio = t;
                }
                sigbar(j) = t * vsig(j);
            }
            double edgmax = kDelta * rho;
            Eigen::Index l = -1;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (sigbar(j) >= parsig || sigbar(j) >= vsig(j)) {
                    const double t = trured > 0.0 ? (dx - sim.col(j)).norm() : veta(j);
                    if (t > edgmax) {
                        l = j;
                        edgmax = t;
                    }
                }
            }
            if (l >= 0) jdrop = l;
            if (jdrop >= 0) {
                sim.col(jdrop) = dx;
                simi.row(jdrop) /= simi.row(jdrop).dot(dx);
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (j != jdrop) simi.row(j) -= simi.row(j).dot(dx) * simi.row(jdrop);
                }
                fval(jdrop) = f;
                improved_enough = trured > 0.0 && trured >= 0.1 * prerem;
            }
        }
        if (improved_enough) continue;
        if (!acceptable) {
            want_geometry = true;
            continue;
        }
        if (rho <= budget.rhoend) break;
        rho *= 0.5;
        if (rho <= 1.5 * budget.rhoend) rho = budget.rhoend;
    }
    return run.take();
}

}  // namespace grl
