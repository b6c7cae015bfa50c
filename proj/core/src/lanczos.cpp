#include "ssdt/lanczos.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ssdt/error.hpp"

namespace ssdt {

TopEigenpair top_eigenpair(const SymmetricOperator& apply, Eigen::Index dim,
                           const Eigen::VectorXd& start, const LanczosOptions& options) {
    if (dim <= 0 || start.size() != dim) {
        raise(ErrorCode::kDimensionTooSmall, "Lanczos start vector does not match the operator size");
    }
    const Eigen::Index basis_cap = std::min<Eigen::Index>(dim, std::max(2, options.max_basis));

    Eigen::MatrixXd basis(dim, basis_cap);
    Eigen::VectorXd alpha(basis_cap);
    Eigen::VectorXd beta(basis_cap);
    Eigen::VectorXd w(dim);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;

    TopEigenpair out;
    Eigen::VectorXd q = start;
    double norm = q.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        raise(ErrorCode::kConvergenceFailure, "Lanczos start vector is zero or not finite");
    }
    q /= norm;

    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        basis.col(0) = q;
        Eigen::Index m = 0;
        for (;;) {
            apply(basis.col(m), w);
            ++out.products;
            alpha(m) = basis.col(m).dot(w);
            // Two passes of classical Gram-Schmidt against the whole basis.
            for (int pass = 0; pass < 2; ++pass) {
                const Eigen::VectorXd h = basis.leftCols(m + 1).transpose() * w;
                w.noalias() -= basis.leftCols(m + 1) * h;
            }
            beta(m) = w.norm();

            tri.computeFromTridiagonal(alpha.head(m + 1), beta.head(m), Eigen::ComputeEigenvectors);
            const Eigen::Index top = m;  // eigenvalues come out ascending
            const double theta = tri.eigenvalues()(top);
            const double residual = beta(m) * std::fabs(tri.eigenvectors()(m, top));
            const bool invariant = m + 1 == dim || beta(m) <= 1e-300;
            const bool converged = residual <= options.rel_tol * std::fabs(theta) || invariant;
            if (converged || m + 1 == basis_cap) {
                q = basis.leftCols(m + 1) * tri.eigenvectors().col(top);
                q.normalize();
                if (converged) {
                    out.value = theta;
                    out.vector = q;
                    return out;
                }
                break;
            }
            basis.col(m + 1) = w / beta(m);
            ++m;
        }
    }
    raise(ErrorCode::kConvergenceFailure, "Lanczos did not reach the requested residual");
}

}  // namespace ssdt
