#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcgl/eig.hpp"

namespace mcgl {

/// Coefficient set of the singular amplitude system: a complex
/// Ginzburg-Landau equation for the amplitude A coupled to a stiff
/// (1/epsilon) convection-diffusion equation for m mean modes B.
struct ModelParams {
    cplx a{1.0, 0.0};
    cplx b{1.0, 0.0};
    cplx c{-1.0, 0.0};
    Eigen::RowVectorXcd d;   // 1 x m coupling of B into the A equation
    Eigen::MatrixXd e_B;     // m x m mean-mode diffusion
    Eigen::MatrixXd f;       // m x m mean-mode convection (the 1/epsilon term)
    Eigen::VectorXcd g;      // m x 1 quadratic-flux coupling
    Eigen::VectorXd h;       // m x 1 amplitude-to-mean coupling (the 1/epsilon term)
    double epsilon = 1e-2;
    int m = 1;

    /// Scalar convenience constructor (m = 1).
    static ModelParams scalar(cplx a, cplx b, cplx c, cplx d, double e_B, double f,
                              cplx g, double h, double epsilon);
};

struct WaveParams {
    double kappa = 0.0;
    Eigen::VectorXd B0;  // length m

    WaveParams() = default;
    WaveParams(double kappa_, Eigen::VectorXd B0_) : kappa(kappa_), B0(std::move(B0_)) {}
    static WaveParams scalar(double kappa, double B0 = 0.0);
};

/// Existence-domain violation: kappa^2 >= kappa_E^2.
class ExistenceError : public std::domain_error {
public:
    ExistenceError(double kappa2_, double kappaE2_)
        : std::domain_error("wave outside existence range: kappa^2 = " + std::to_string(kappa2_) +
                            " >= kappa_E^2 = " + std::to_string(kappaE2_)),
          kappa2(kappa2_), kappaE2(kappaE2_) {}
    double kappa2;
    double kappaE2;
};

/// Everything derived from (params, wave): wave amplitude and frequency,
/// the shifted/reduced cubic coefficients, the convection parameters, and
/// the effective flux matrix of the relaxed system.
struct DerivedQuantities {
    double kappa = 0.0;       // the wavenumber the quantities were derived at
    double A0 = 0.0;          // wave amplitude, > 0
    double omega = 0.0;       // temporal frequency of the wave A0 e^{i(kappa x - omega t)}
    cplx b_tilde;             // b + d.B0
    cplx b_hat;               // b_tilde + d f^{-1} h A0^2
    cplx c_hat;               // c - d f^{-1} h (reduced cubic coefficient)
    Eigen::RowVectorXd p;     // -Re(d)/(2 A0 Re(c))
    double q = 0.0;           // -Im(c)/Re(c)
    double q_hat = 0.0;       // -Im(c_hat)/Re(c_hat)
    double r = 0.0;           // Jordan coefficient A0(Im(d) - Re(d) Im(c)/Re(c)); 2-norm for m > 1
    Eigen::RowVectorXd jordan_row;  // the full 1 x m Jordan coupling row
    Eigen::MatrixXd effective_flux; // f + 2 A0 h p  ==  f - h Re(d)/Re(c)
    double m0 = 0.0;          // 2 A0^2 Re(c), the strictly stable eigenvalue at sigma = 0
};

/// Checks the structural hypotheses: Re(a), Re(b) > 0, Re(c) < 0,
/// spec(f) real, Re spec(e_B) > 0. Returns the violated ones (with the
/// offending values), empty when all hold. Dimension mismatches throw.
std::vector<std::string> validate_model(const ModelParams& params);

/// kappa_E^2 = (Re(b) + Re(d).B0)/Re(a). Negative means the existence
/// range is empty, which is reported, not thrown.
double existence_bound(const ModelParams& params, const Eigen::VectorXd& B0);

/// Populates every derived quantity. Throws ExistenceError outside the
/// existence range and std::invalid_argument on dimension mismatch.
DerivedQuantities derive_wave(const ModelParams& params, const WaveParams& wave);

struct CompatReport {
    bool ok = false;
    double worst = 0.0;  // max over the grid of max Re spec(i z f - z^2 e_B)
};

/// Mean-mode symbol check: max Re spec(i z f - z^2 e_B) < 0 for every
/// nonzero z in the grid. (Stable-diffusion sign convention; the report
/// header carries the convention note.)
CompatReport compat_check(const ModelParams& params, const std::vector<double>& z_grid);

}  // namespace mcgl
