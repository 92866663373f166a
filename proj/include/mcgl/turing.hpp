#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "mcgl/eig.hpp"

namespace mcgl {

/// Hydrodynamic/chemotactic pattern-formation model (density rho, velocity
/// u, chemoattractant c) linearized about the homogeneous equilibrium
/// rho0 = 1, u0 = 0, c0 = alpha*tau. A_p is the pressure gradient
/// coefficient P'(rho0) at the equilibrium density.
struct VasculogenesisParams {
    double alpha_r = 1.0;  // release rate, > 0
    double beta_r = 1.0;   // response rate, > 0
    double tau = 1.0;      // chemoattractant half-life, > 0
    double A_p = 1.0;      // pressure gradient coefficient, >= 0
    double gamma_d = 1.0;  // drag, >= 0
    double D_c = 1.0;      // chemo-diffusion, > 0
    double mu_v = 0.0;     // artificial viscosity on rho, >= 0
    double nu_v = 0.0;     // velocity viscosity, >= 0
};

/// 3 x 3 linearized symbol at wavenumber k.
Eigen::MatrixXcd vasculo_symbol(const VasculogenesisParams& p, double k);

/// Spectrum of vasculo_symbol in closed form for alpha*beta = 0 and
/// mu = nu = 0 (block-triangular case).
Eigen::Vector3cd vasculo_spectrum_decoupled(const VasculogenesisParams& p, double k);

/// Closed-form coefficient of the critical branch lambda_*(k) = theta k^2 + ...
double vasculo_theta_closed_form(const VasculogenesisParams& p);

struct CriticalBranchResult {
    double theta = 0.0;          // fitted k^2 coefficient of the critical branch
    double theta_closed = 0.0;   // (alpha beta tau - A)/gamma - mu
    double fit_residual = 0.0;
    bool stable = false;         // theta < 0
};

/// Tracks the analytic branch through lambda(0) = 0 over |k| <= k_window
/// and fits theta. Throws on branch crossings inside the window.
CriticalBranchResult critical_branch_coefficient(const VasculogenesisParams& p, double k_window);

enum class OnsetType { long_wave, finite_k };

struct BifurcationResult {
    bool found = false;
    double ab_star = 0.0;    // critical alpha*beta
    double k_star = 0.0;     // wavenumber of the first unstable mode
    OnsetType type = OnsetType::long_wave;
};

/// Bisection on the product alpha*beta (beta scaled, alpha fixed) for the
/// first loss of max_k Re lambda(k) <= 0 over a k-grid. Not-found when the
/// whole range is stable (or unstable from the start).
BifurcationResult bifurcation_locate(const VasculogenesisParams& p, double ab_lo, double ab_hi,
                                     double k_max = 5.0, int k_points = 200);

}  // namespace mcgl
