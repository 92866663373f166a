#include "mcgl/symbol.hpp"

#include <cmath>

namespace mcgl {

double to_hat(const FrequencyCoordinate& sigma, double epsilon) {
    switch (sigma.scale) {
        case FrequencyScale::hat: return sigma.value;
        case FrequencyScale::check: return sigma.value * epsilon;
        case FrequencyScale::rho: return sigma.value;
        case FrequencyScale::pde: return sigma.value / epsilon;
    }
    return sigma.value;
}

FrequencyCoordinate from_hat(double sigma_hat, FrequencyScale scale, double epsilon) {
    switch (scale) {
        case FrequencyScale::hat: return {sigma_hat, scale};
        case FrequencyScale::check: return {sigma_hat / epsilon, scale};
        case FrequencyScale::rho: return {sigma_hat, scale};
        case FrequencyScale::pde: return {sigma_hat * epsilon, scale};
    }
    return {sigma_hat, scale};
}

Eigen::MatrixXcd SymbolTriple::assemble(double sigma_hat) const {
    return C0.cast<cplx>() + cplx(0.0, sigma_hat) * C1.cast<cplx>() -
           (sigma_hat * sigma_hat) * C2.cast<cplx>();
}

Eigen::MatrixXcd SymbolTriple::assemble(const FrequencyCoordinate& sigma) const {
    return assemble(to_hat(sigma, epsilon));
}

SymbolTriple build_full_symbol(const DerivedQuantities& dq, const ModelParams& params) {
    const int m = params.m;
    const int n = m + 2;
    const double A0 = dq.A0;
    const double kappa = dq.kappa;
    const double inv_eps = 1.0 / params.epsilon;

    SymbolTriple t;
    t.epsilon = params.epsilon;
    t.C0 = Eigen::MatrixXd::Zero(n, n);
    t.C1 = Eigen::MatrixXd::Zero(n, n);
    t.C2 = Eigen::MatrixXd::Zero(n, n);

    // constant part
    t.C0(0, 0) = dq.m0;
    t.C0(1, 0) = 2.0 * A0 * A0 * params.c.imag();
    t.C0.block(0, 2, 1, m) = A0 * params.d.real();
    t.C0.block(1, 2, 1, m) = A0 * params.d.imag();

    // first-order part (the i factored out); the 1/epsilon terms live here
    t.C1(0, 0) = -2.0 * kappa * params.a.imag();
    t.C1(0, 1) = -2.0 * kappa * params.a.real();
    t.C1(1, 0) = 2.0 * kappa * params.a.real();
    t.C1(1, 1) = -2.0 * kappa * params.a.imag();
    t.C1.block(2, 0, m, 1) = 2.0 * A0 * inv_eps * params.h + 2.0 * A0 * kappa * params.g.imag();
    t.C1.block(2, 2, m, m) = inv_eps * params.f;

    // second-order part (the minus sign factored out)
    t.C2(0, 0) = params.a.real();
    t.C2(0, 1) = -params.a.imag();
    t.C2(1, 0) = params.a.imag();
    t.C2(1, 1) = params.a.real();
    t.C2.block(2, 0, m, 1) = 2.0 * A0 * params.g.real();
    t.C2.block(2, 1, m, 1) = 2.0 * A0 * params.g.imag();
    t.C2.block(2, 2, m, m) = params.e_B;
    return t;
}

SymbolTriple build_darcy_symbol(const DerivedQuantities& dq, const ModelParams& params) {
    if (std::abs(params.f.determinant()) == 0.0)
        throw std::invalid_argument("build_darcy_symbol: f is singular");
    const double A0 = dq.A0;
    const double kappa = dq.kappa;

    SymbolTriple t;
    t.epsilon = params.epsilon;
    t.C0 = Eigen::MatrixXd::Zero(2, 2);
    t.C1 = Eigen::MatrixXd::Zero(2, 2);
    t.C2 = Eigen::MatrixXd::Zero(2, 2);

    t.C0(0, 0) = 2.0 * A0 * A0 * dq.c_hat.real();
    t.C0(1, 0) = 2.0 * A0 * A0 * dq.c_hat.imag();

    t.C1(0, 0) = -2.0 * kappa * params.a.imag();
    t.C1(0, 1) = -2.0 * kappa * params.a.real();
    t.C1(1, 0) = 2.0 * kappa * params.a.real();
    t.C1(1, 1) = -2.0 * kappa * params.a.imag();

    t.C2(0, 0) = params.a.real();
    t.C2(0, 1) = -params.a.imag();
    t.C2(1, 0) = params.a.imag();
    t.C2(1, 1) = params.a.real();
    return t;
}

double darcy_embedding_residual(const SymbolTriple& full, const SymbolTriple& darcy,
                                const DerivedQuantities& dq, const ModelParams& params,
                                const std::vector<double>& sigma_grid) {
    const int m = params.m;
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(m, 2);
    N.col(0) = -2.0 * dq.A0 * params.f.partialPivLu().solve(params.h);

    Eigen::MatrixXcd left = Eigen::MatrixXcd::Zero(2, m + 2);
    left.block(0, 0, 2, 2) = Eigen::MatrixXcd::Identity(2, 2);
    Eigen::MatrixXcd right = Eigen::MatrixXcd::Zero(m + 2, 2);
    right.block(0, 0, 2, 2) = Eigen::MatrixXcd::Identity(2, 2);
    right.block(2, 0, m, 2) = N.cast<cplx>();

    double worst = 0.0;
    for (double sigma : sigma_grid) {
        Eigen::MatrixXcd expected = darcy.assemble(sigma);
        Eigen::MatrixXcd projected = left * full.assemble(sigma) * right;
        worst = std::max(worst, (expected - projected).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace mcgl
