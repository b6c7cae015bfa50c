#pragma once

#include <functional>

#include <Eigen/Core>

namespace ssdt {

/// y ← M x for a symmetric positive semidefinite M given only as a product.
using SymmetricOperator = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

struct TopEigenpair {
    double value = 0.0;
    Eigen::VectorXd vector;  // unit norm
    int products = 0;        // operator applications used
};

struct LanczosOptions {
    // Stop once the Ritz residual ‖M y − θ y‖ is below rel_tol·θ.
    double rel_tol = 1e-10;
    int max_basis = 120;
    int max_restarts = 50;
};

/// Largest eigenpair of M by Lanczos with full reorthogonalization and
/// explicit restarts from the current Ritz vector. Only O(dim·max_basis)
/// extra memory is needed.
TopEigenpair top_eigenpair(const SymmetricOperator& apply, Eigen::Index dim,
                           const Eigen::VectorXd& start, const LanczosOptions& options = {});

}  // namespace ssdt
