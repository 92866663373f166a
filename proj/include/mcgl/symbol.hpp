#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mcgl/model.hpp"

namespace mcgl {

/// Frequency coordinate scales used across the analysis regions.
/// hat:   sigma_hat, the base Fourier wavenumber of the linearization
/// check: sigma_check = sigma_hat / epsilon
/// rho:   rho = epsilon * sigma_check = sigma_hat (numerically identical to hat)
/// pde:   sigma = epsilon^2 * sigma_check = epsilon * sigma_hat
enum class FrequencyScale { hat, check, rho, pde };

struct FrequencyCoordinate {
    double value = 0.0;
    FrequencyScale scale = FrequencyScale::hat;
};

double to_hat(const FrequencyCoordinate& sigma, double epsilon);
FrequencyCoordinate from_hat(double sigma_hat, FrequencyScale scale, double epsilon);

/// The linearized Fourier symbol stored as three real matrices:
/// M(eps, sigma_hat) = C0 + i sigma_hat C1 - sigma_hat^2 C2.
/// The 1/epsilon convection terms are baked into C1; rescalings to other
/// frequency scales happen at assembly, never by mutating the triple.
class SymbolTriple {
public:
    Eigen::MatrixXd C0, C1, C2;
    double epsilon = 0.0;

    Eigen::Index size() const { return C0.rows(); }

    Eigen::MatrixXcd assemble(double sigma_hat) const;
    Eigen::MatrixXcd assemble(const FrequencyCoordinate& sigma) const;
};

/// Full (m+2) x (m+2) symbol of the linearization about the wave, in the
/// real coordinates (u, v, w).
SymbolTriple build_full_symbol(const DerivedQuantities& dq, const ModelParams& params);

/// 2 x 2 symbol of the reduced (slaved mean-mode) system, at the same
/// amplitude A0 as the full model (amplitude-adapted reduction).
SymbolTriple build_darcy_symbol(const DerivedQuantities& dq, const ModelParams& params);

/// Max over the grid of || m(eps, s) - [Id 0] M(eps, s) [Id; N] ||_inf with
/// N = (-2 A0 f^{-1} h, 0). The identity is exact, so anything above
/// roundoff indicates an assembly bug.
double darcy_embedding_residual(const SymbolTriple& full, const SymbolTriple& darcy,
                                const DerivedQuantities& dq, const ModelParams& params,
                                const std::vector<double>& sigma_grid);

}  // namespace mcgl
