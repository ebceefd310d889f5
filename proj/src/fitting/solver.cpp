#include "hsc/fitting/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace hsc::fitting {

namespace {
constexpr double kDiagonalFloor = 1e-8;
}

bool lm_step_dense(const Eigen::MatrixXd& hess, double damping, const Eigen::VectorXd& grad,
                   Eigen::VectorXd* delta) {
    Eigen::MatrixXd damped = hess;
    for (Eigen::Index i = 0; i < damped.rows(); ++i)
        damped(i, i) += damping * std::max(hess(i, i), kDiagonalFloor);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
    if (ldlt.info() != Eigen::Success) return false;
    *delta = ldlt.solve(-grad);
    return delta->allFinite();
}

bool lm_step_sparse(const Eigen::SparseMatrix<double>& hess, double damping, const Eigen::VectorXd& grad,
                    Eigen::VectorXd* delta) {
    Eigen::SparseMatrix<double> damped = hess;
    Eigen::VectorXd diag = hess.diagonal();
    for (Eigen::Index i = 0; i < damped.rows(); ++i)
        damped.coeffRef(i, i) = diag(i) + damping * std::max(diag(i), kDiagonalFloor);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(damped);
    if (ldlt.info() != Eigen::Success) return false;
    *delta = ldlt.solve(-grad);
    return delta->allFinite();
}

}  // namespace hsc::fitting
