#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcgl {

using cplx = std::complex<double>;

/// Thrown when the shifted-QR iteration fails to deflate within the
/// iteration budget (100*n sweeps). Carries whatever converged.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(std::string msg, Eigen::VectorXcd partial)
        : std::runtime_error(std::move(msg)), partial_values(std::move(partial)) {}
    Eigen::VectorXcd partial_values;
};

struct EigenResult {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;     // column j pairs with values[j]; empty if not requested
    double backward_error = 0.0;  // max_j ||M v_j - lambda_j v_j|| / ||M||
};

/// All eigenvalues of a dense complex matrix via Householder reduction to
/// Hessenberg form followed by Wilkinson-shifted QR with subdiagonal
/// deflation (relative tolerance 1e-14). Eigenvectors come from
/// back-substitution on the triangular Schur factor.
EigenResult eigenvalues(const Eigen::MatrixXcd& M, bool with_vectors = true);

/// Minimum-cost perfect matching between two equal-length complex
/// multisets, cost |a_i - b_j|. Returns perm with b[perm[i]] matched to
/// a[i], plus the total cost.
std::pair<std::vector<int>, double> match_multisets(const Eigen::VectorXcd& a,
                                                    const Eigen::VectorXcd& b);

/// Largest distance after optimal matching; the multiset analogue of a
/// sup-norm distance between spectra.
double multiset_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

class SymbolTriple;  // symbol.hpp

struct SpectrumCurve {
    std::vector<double> sigma_grid;
    // branches[j][k] = lambda_j at sigma_grid[k]; j = 0..n-1 stays on one
    // continuously tracked eigenvalue branch.
    std::vector<std::vector<cplx>> branches;
    double matching_cost = 0.0;              // summed assignment cost, diagnostic
    std::vector<bool> crossing_flags;        // per grid interval: refinement exhausted

    std::size_t n_branches() const { return branches.size(); }
    std::size_t n_points() const { return sigma_grid.size(); }
};

/// Eigenvalue branches of the assembled symbol over a sorted frequency grid,
/// matched between neighbours by minimum-cost assignment on |dlambda| and
/// locally refined (bisection, up to 8 levels) where the assignment cost
/// spikes above 10x the local median, to resolve near-crossings.
SpectrumCurve track_branches(const SymbolTriple& symbol, const std::vector<double>& sigma_grid);

}  // namespace mcgl
