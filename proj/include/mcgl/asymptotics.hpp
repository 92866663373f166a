#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mcgl/eig.hpp"
#include "mcgl/model.hpp"
#include "mcgl/symbol.hpp"

namespace mcgl {

enum class CoeffRoute { closed_form, matched_determinant, numerical_fit };

std::string route_name(CoeffRoute route);

/// Low-frequency expansion coefficients of the three eigenvalue families
/// branching from sigma_hat = 0:
///   lambda_s(0)      = lambda_s0                 (strictly stable mode)
///   lambda_t(sigma)  = i alpha_t sigma + mu_t sigma^2 + ...
///   lambda_c,i(sigma)= i eps^{-1} alpha_c[i] sigma + eps^{-2} mu_c0[i] sigma^2 + ...
/// alpha_c and mu_c0 hold the leading-order coefficients with the epsilon
/// powers stripped; alpha_c[i] sits in spec(effective_flux).
struct ExpansionCoefficients {
    double lambda_s0 = 0.0;
    double alpha_t = 0.0;
    double mu_t = 0.0;
    Eigen::VectorXd alpha_c;
    Eigen::VectorXd mu_c0;
    CoeffRoute route = CoeffRoute::closed_form;
    double fit_residual = 0.0;       // numerical_fit only: worst weighted RMS
    double alpha_real_leak = 0.0;    // numerical_fit only: worst |Re| of a first-order coefficient
};

/// Degenerate parameter configuration for which the expansion formulas do
/// not apply (complex/repeated effective-flux spectrum, Re(c_hat) = 0, ...).
class DegeneracyError : public std::domain_error {
    using std::domain_error::domain_error;
};

ExpansionCoefficients coeffs_closed_form(const DerivedQuantities& dq, const ModelParams& params);

/// Same coefficients recovered from numerically evaluated determinants of
/// the bordered symbol at the working epsilon: the first-order coefficients
/// are roots of det P0(alpha) = 0 (classified by magnitude against
/// eps^{-1/2}), the second-order ones solve the linear equation P1 = 0.
ExpansionCoefficients coeffs_matched_determinant(const DerivedQuantities& dq,
                                                 const ModelParams& params);

struct BranchFit {
    double alpha = 0.0;          // Im of the first-order coefficient
    double mu = 0.0;             // Re of the second-order coefficient
    double residual = 0.0;       // weighted RMS misfit
    double alpha_real_part = 0.0;  // Re of the first-order coefficient (should be ~0)
};

/// Weighted least-squares fit lambda(sigma) ~ i alpha sigma + mu sigma^2
/// over a two-sided window (weight sigma^{-2}, sigma = 0 excluded).
/// Requires the branch to pass through 0 at sigma = 0 and the window to be
/// free of detected branch crossings.
BranchFit coeffs_numerical_fit(const SpectrumCurve& curve, int branch,
                               double window_lo, double window_hi);

/// All-coefficient oracle: tracks the spectrum on small two-sided windows
/// (|sigma| <= 1e-2 for the translational branch, |sigma| <= 1e-2 eps for
/// the conservative ones), identifies the branches through zero and fits
/// each. Conservative fits are rescaled to the leading-order normalization.
ExpansionCoefficients fit_coefficients(const SymbolTriple& symbol, const DerivedQuantities& dq,
                                       const ModelParams& params);

/// Sideband stability boundary kappa_S^2; <= 0 signals "no stable band".
double eckhaus_bound(const DerivedQuantities& dq, const ModelParams& params);

struct BfnReport {
    bool holds = false;
    double value = 0.0;   // Im(a)Im(c_hat)Re(b_hat)Re(c_hat) + Re(a)Re(b_hat)Re(c_hat)^2
    double mu_t0 = 0.0;   // the kappa = 0 form -Re(a) - Im(a) Im(c_hat)/Re(c_hat)
};

/// Benjamin-Feir-Newell criterion, evaluated both as the quartic product
/// form and as the kappa = 0 second-order coefficient.
BfnReport bfn_check(const DerivedQuantities& dq, const ModelParams& params);

struct GlCoefficients {
    double alpha_t = 0.0;
    double mu_t = 0.0;
    double A0_sq = 0.0;
};

/// Classical Ginzburg-Landau expansion coefficients of the neutral
/// translational mode; the reduced-model reference.
GlCoefficients gl_reference(cplx a, cplx b, cplx c, double kappa);

}  // namespace mcgl
