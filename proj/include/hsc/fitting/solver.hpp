#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <cmath>
#include <vector>

namespace hsc::fitting {

struct SolveOptions {
    int max_iterations = 100;
    double tolerance = 1e-10;           // relative energy decrease
    double gradient_tolerance = 1e-12;  // infinity norm
    double initial_damping = 1e-4;
    double max_damping = 1e12;
    int max_backtracks = 4;
};

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    double initial_energy = 0;
    double final_energy = 0;
    std::vector<double> energy_history;  // non-increasing by construction
};

// Damped-system solves for the two Hessian shapes we use.
bool lm_step_dense(const Eigen::MatrixXd& hess, double damping, const Eigen::VectorXd& grad,
                   Eigen::VectorXd* delta);
bool lm_step_sparse(const Eigen::SparseMatrix<double>& hess, double damping, const Eigen::VectorXd& grad,
                    Eigen::VectorXd* delta);

/// Damped Gauss-Newton / Levenberg-Marquardt with backtracking line search.
/// eval(x, grad, hess) returns the energy; grad/hess may be null for an
/// energy-only probe. step solves the damped normal equations. Steps are
/// accepted only when they do not increase the energy.
template <class HessType, class EvalFn, class StepFn>
SolveReport levenberg_marquardt(EvalFn&& eval, StepFn&& step, Eigen::VectorXd& x,
                                const SolveOptions& options) {
    SolveReport report;
    Eigen::VectorXd grad;
    HessType hess;
    double energy = eval(x, &grad, &hess);
    report.initial_energy = energy;
    report.energy_history.push_back(energy);

    double damping = options.initial_damping;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        report.iterations = iter + 1;
        if (grad.template lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            report.converged = true;
            break;
        }

        bool accepted = false;
        double new_energy = energy;
        Eigen::VectorXd candidate;
        while (damping <= options.max_damping && !accepted) {
            Eigen::VectorXd delta;
            if (step(hess, damping, grad, &delta)) {
                double alpha = 1.0;
                for (int bt = 0; bt <= options.max_backtracks; ++bt, alpha *= 0.5) {
                    Eigen::VectorXd trial = x + alpha * delta;
                    double trial_energy = eval(trial, nullptr, nullptr);
                    if (std::isfinite(trial_energy) && trial_energy <= energy) {
                        accepted = true;
                        new_energy = trial_energy;
                        candidate = std::move(trial);
                        break;
                    }
                }
            }
            if (!accepted) damping *= 10.0;
        }
        if (!accepted) break;  // no downhill step within the damping budget

        const double decrease = energy - new_energy;
        x = std::move(candidate);
        energy = eval(x, &grad, &hess);
        report.energy_history.push_back(energy);
        damping = std::max(damping / 3.0, 1e-12);

        if (decrease <= options.tolerance * std::max(std::abs(energy), 1e-12)) {
            report.converged = true;
            break;
        }
    }
    report.final_energy = energy;
    return report;
}

}  // namespace hsc::fitting
