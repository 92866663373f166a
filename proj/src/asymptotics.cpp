#include "mcgl/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mcgl {

std::string route_name(CoeffRoute route) {
    switch (route) {
        case CoeffRoute::closed_form: return "closed_form";
        case CoeffRoute::matched_determinant: return "matched_determinant";
        case CoeffRoute::numerical_fit: return "numerical_fit";
    }
    return "?";
}

namespace {

struct FluxEigs {
    Eigen::VectorXd values;          // real eigenvalues, ascending
    Eigen::MatrixXd right;           // columns r_i
    Eigen::MatrixXd left;            // rows l_i, normalized l_i r_i = 1
};

// Real distinct spectrum of the effective flux with biorthonormal
// left/right eigenpairs; throws DegeneracyError otherwise.
FluxEigs flux_eigensystem(const Eigen::MatrixXd& flux) {
    const int m = static_cast<int>(flux.rows());
    const double scale = std::max(1.0, flux.cwiseAbs().maxCoeff());
    EigenResult right = eigenvalues(flux.cast<cplx>(), true);
    double worst_im = right.values.imag().cwiseAbs().maxCoeff();
    if (worst_im > std::max(1e-12, 1e-9 * scale))
        throw DegeneracyError("effective flux spectrum not real (first-order instability); "
                              "max |Im| = " + std::to_string(worst_im));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (std::abs(right.values(i).real() - right.values(j).real()) <=
                std::max(1e-12, 1e-9 * scale))
                throw DegeneracyError("effective flux spectrum not distinct");

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return right.values(i).real() < right.values(j).real();
    });

    EigenResult leftr = eigenvalues(flux.transpose().cast<cplx>(), true);
    FluxEigs out;
    out.values.resize(m);
    out.right.resize(m, m);
    out.left.resize(m, m);
    for (int k = 0; k < m; ++k) {
        int i = order[k];
        out.values(k) = right.values(i).real();
        Eigen::VectorXd r = right.vectors.col(i).real();
        // nearest left eigenvalue
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < m; ++j) {
            double d = std::abs(leftr.values(j) - right.values(i));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        Eigen::RowVectorXd l = leftr.vectors.col(best).real().transpose();
        double dot = l * r;
        if (std::abs(dot) < 1e-12)
            throw DegeneracyError("effective flux eigenpair nearly defective");
        out.left.row(k) = l / dot;
        out.right.col(k) = r;
    }
    return out;
}

double mu_t_formula(cplx a, cplx c_hat, double kappa, double A0_sq, double alpha_t) {
    const double s = -2.0 * kappa * a.imag() - alpha_t;
    const double num = s * s + 4.0 * kappa * kappa * a.real() * a.real() +
                       2.0 * A0_sq * (a.real() * c_hat.real() + a.imag() * c_hat.imag());
    return -num / (2.0 * A0_sq * c_hat.real());
}

}  // namespace

ExpansionCoefficients coeffs_closed_form(const DerivedQuantities& dq, const ModelParams& params) {
    if (std::abs(dq.c_hat.real()) < 1e-14)
        throw DegeneracyError("Re(c_hat) = 0: reduced cubic coefficient degenerate");
    const double A0_sq = dq.A0 * dq.A0;
    const double kappa = dq.kappa;

    ExpansionCoefficients out;
    out.route = CoeffRoute::closed_form;
    out.lambda_s0 = dq.m0;
    out.alpha_t = -2.0 * kappa * params.a.imag() +
                  2.0 * kappa * params.a.real() * dq.c_hat.imag() / dq.c_hat.real();
    out.mu_t = mu_t_formula(params.a, dq.c_hat, kappa, A0_sq, out.alpha_t);

    FluxEigs flux = flux_eigensystem(dq.effective_flux);
    const int m = params.m;
    out.alpha_c = flux.values;
    out.mu_c0.resize(m);
    const double denom = 2.0 * A0_sq * params.c.real() * params.c.real();
    for (int i = 0; i < m; ++i) {
        double lh = flux.left.row(i) * params.h;
        double dr = params.d.real() * flux.right.col(i);
        out.mu_c0(i) = flux.values(i) * lh * dr / denom;
    }
    return out;
}

namespace {

// The bordered first-order matrix: determinant roots in alpha give the
// first-order coefficients at the working epsilon.
Eigen::MatrixXd matched_K(const DerivedQuantities& dq, const ModelParams& params) {
    const int m = params.m;
    const double A0 = dq.A0;
    const double kappa = dq.kappa;
    const double inv_eps = 1.0 / params.epsilon;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m + 2, m + 2);
    K(0, 0) = 2.0 * A0 * A0 * params.c.real();
    K(0, 1) = -2.0 * kappa * params.a.real();
    K.block(0, 2, 1, m) = A0 * params.d.real();
    K(1, 0) = 2.0 * A0 * A0 * params.c.imag();
    K(1, 1) = -2.0 * kappa * params.a.imag();
    K.block(1, 2, 1, m) = A0 * params.d.imag();
    K.block(2, 0, m, 1) = 2.0 * A0 * inv_eps * params.h + 2.0 * A0 * kappa * params.g.imag();
    K.block(2, 1, m, 1) = 2.0 * A0 * params.g.imag();
    K.block(2, 2, m, m) = inv_eps * params.f;
    return K;
}

double det_P0(const Eigen::MatrixXd& K, double alpha) {
    Eigen::MatrixXd M = K;
    for (Eigen::Index i = 1; i < K.rows(); ++i) M(i, i) -= alpha;
    return M.partialPivLu().determinant();
}

// Coefficient of i*sigma at the next order of the reduced characteristic
// polynomial; affine in mu for fixed alpha.
double det_P1(const DerivedQuantities& dq, const ModelParams& params, double alpha, double mu) {
    const int m = params.m;
    const int n = m + 2;
    const double A0 = dq.A0;
    const double A0_sq = A0 * A0;
    const double kappa = dq.kappa;
    const double inv_eps = 1.0 / params.epsilon;

    Eigen::MatrixXd DA = Eigen::MatrixXd::Zero(n, n);
    DA(0, 0) = -2.0 * kappa * params.a.imag() - alpha;
    DA(0, 1) = -2.0 * kappa * params.a.real();
    DA.block(0, 2, 1, m) = A0 * params.d.real();
    DA(1, 0) = 2.0 * kappa * params.a.real();
    DA(1, 1) = -2.0 * kappa * params.a.imag() - alpha;
    DA.block(1, 2, 1, m) = A0 * params.d.imag();
    DA.block(2, 0, m, 1) = 2.0 * A0 * params.g.real();
    DA.block(2, 1, m, 1) = 2.0 * A0 * params.g.imag();
    DA.block(2, 2, m, m) = inv_eps * params.f - alpha * Eigen::MatrixXd::Identity(m, m);
    double total = DA.partialPivLu().determinant();

    Eigen::MatrixXd DB = Eigen::MatrixXd::Zero(n, n);
    DB(0, 0) = 2.0 * A0_sq * params.c.real();
    DB(0, 1) = -params.a.imag();
    DB.block(0, 2, 1, m) = A0 * params.d.real();
    DB(1, 0) = 2.0 * A0_sq * params.c.imag();
    DB(1, 1) = params.a.real() + mu;
    DB.block(1, 2, 1, m) = A0 * params.d.imag();
    DB.block(2, 0, m, 1) = 2.0 * A0 * inv_eps * params.h + 2.0 * A0 * kappa * params.g.imag();
    DB.block(2, 2, m, m) = inv_eps * params.f - alpha * Eigen::MatrixXd::Identity(m, m);
    total += DB.partialPivLu().determinant();

    for (int j = 0; j < m; ++j) {
        Eigen::MatrixXd DC = Eigen::MatrixXd::Zero(n, n);
        DC(0, 0) = 2.0 * A0_sq * params.c.real();
        DC(0, 1) = -2.0 * kappa * params.a.real();
        DC.block(0, 2, 1, m) = A0 * params.d.real();
        DC(0, 2 + j) = 0.0;
        DC(1, 0) = 2.0 * A0_sq * params.c.imag();
        DC(1, 1) = -2.0 * kappa * params.a.imag() - alpha;
        DC.block(1, 2, 1, m) = A0 * params.d.imag();
        DC(1, 2 + j) = 0.0;
        DC.block(2, 0, m, 1) = 2.0 * A0 * inv_eps * params.h + 2.0 * A0 * kappa * params.g.imag();
        DC.block(2, 1, m, 1) = 2.0 * A0 * params.g.imag();
        DC.block(2, 2, m, m) = inv_eps * params.f - alpha * Eigen::MatrixXd::Identity(m, m);
        DC.block(2, 2 + j, m, 1) = params.e_B.col(j);
        DC(2 + j, 2 + j) += mu;
        total += DC.partialPivLu().determinant();
    }
    return total;
}

double solve_mu(const DerivedQuantities& dq, const ModelParams& params, double alpha) {
    const double p0 = det_P1(dq, params, alpha, 0.0);
    const double p1 = det_P1(dq, params, alpha, 1.0);
    const double slope = p1 - p0;
    if (slope == 0.0) throw DegeneracyError("mu coefficient degenerate in matched solve");
    return -p0 / slope;
}

// Roots of the degree-(m+1) polynomial beta -> det P0(beta/eps), recovered
// by Chebyshev-node interpolation of LU determinants and a companion-matrix
// eigensolve.
Eigen::VectorXcd matched_alpha_roots(const Eigen::MatrixXd& K, const DerivedQuantities& dq,
                                     const ModelParams& params) {
    const int m = params.m;
    const int deg = m + 1;
    const double eps = params.epsilon;
    const double B = 2.0 * (1.0 + dq.effective_flux.cwiseAbs().maxCoeff()) +
                     2.0 * std::abs(dq.kappa) * std::abs(params.a);

    // Newton interpolation through deg+1 Chebyshev nodes in beta = eps*alpha
    const int n_nodes = deg + 1;
    Eigen::VectorXd nodes(n_nodes), values(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        nodes(i) = B * std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * n_nodes));
        values(i) = det_P0(K, nodes(i) / eps);
    }
    Eigen::VectorXd dd = values;  // divided differences in place
    for (int level = 1; level < n_nodes; ++level)
        for (int i = n_nodes - 1; i >= level; --i)
            dd(i) = (dd(i) - dd(i - 1)) / (nodes(i) - nodes(i - level));
    // expand Newton form to monomial coefficients
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(n_nodes);
    for (int i = n_nodes - 1; i >= 0; --i) {
        for (int k = n_nodes - 1; k > 0; --k) coeff(k) = coeff(k - 1) - nodes(i) * coeff(k);
        coeff(0) = -nodes(i) * coeff(0);
        coeff(0) += dd(i);
        // shift: after the loop coeff holds coeff*(x - nodes[i]) + dd[i]
    }
    if (std::abs(coeff(deg)) == 0.0)
        throw DegeneracyError("leading coefficient vanished in matched root solve");

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeff(i) / coeff(deg);
    Eigen::VectorXcd beta = eigenvalues(companion, false).values;
    return beta / eps;
}

}  // namespace

ExpansionCoefficients coeffs_matched_determinant(const DerivedQuantities& dq,
                                                 const ModelParams& params) {
    const int m = params.m;
    const double eps = params.epsilon;
    const double split = 1.0 / std::sqrt(eps);

    Eigen::MatrixXd K = matched_K(dq, params);
    Eigen::VectorXcd roots = matched_alpha_roots(K, dq, params);

    std::vector<double> slow, fast;
    for (int i = 0; i < roots.size(); ++i) {
        if (std::abs(roots(i).imag()) > std::max(1e-10 / eps, 1e-6 * std::abs(roots(i))))
            throw DegeneracyError("complex first-order root: first-order instability or "
                                  "degenerate splitting");
        double re = roots(i).real();
        (std::abs(re) <= split ? slow : fast).push_back(re);
    }
    if (slow.size() != 1 || static_cast<int>(fast.size()) != m)
        throw DegeneracyError("no clean magnitude split of first-order roots "
                              "(effective flux near-singular?)");
    std::sort(fast.begin(), fast.end());

    ExpansionCoefficients out;
    out.route = CoeffRoute::matched_determinant;
    out.lambda_s0 = dq.m0;
    out.alpha_t = slow[0];
    out.mu_t = solve_mu(dq, params, out.alpha_t);
    out.alpha_c.resize(m);
    out.mu_c0.resize(m);
    for (int i = 0; i < m; ++i) {
        out.alpha_c(i) = eps * fast[i];
        out.mu_c0(i) = eps * eps * solve_mu(dq, params, fast[i]);
    }
    return out;
}

BranchFit coeffs_numerical_fit(const SpectrumCurve& curve, int branch, double window_lo,
                               double window_hi) {
    if (branch < 0 || branch >= static_cast<int>(curve.n_branches()))
        throw std::invalid_argument("coeffs_numerical_fit: branch out of range");
    const auto& grid = curve.sigma_grid;
    const auto& lam = curve.branches[static_cast<std::size_t>(branch)];

    // branch must pass through zero
    bool saw_zero = false;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] == 0.0) {
            saw_zero = true;
            if (std::abs(lam[k]) > 1e-9)
                throw std::invalid_argument("coeffs_numerical_fit: branch does not vanish at 0");
        }
    }
    if (!saw_zero) throw std::invalid_argument("coeffs_numerical_fit: grid must contain 0");

    // no detected crossing inside the window
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        double a = std::min(std::abs(grid[k]), std::abs(grid[k + 1]));
        if (curve.crossing_flags[k] && a <= window_hi)
            throw std::invalid_argument("coeffs_numerical_fit: window crosses a detected "
                                        "branch collision");
    }

    // weighted LS on lambda ~ c1 s + c2 s^2 with weight s^{-2}
    double s11 = 0, s12 = 0, s22 = 0, wsum = 0;
    cplx r1 = 0, r2 = 0;
    int used = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double s = grid[k];
        if (s == 0.0 || std::abs(s) < window_lo || std::abs(s) > window_hi) continue;
        double w = 1.0 / (s * s);
        s11 += w * s * s;
        s12 += w * s * s * s;
        s22 += w * s * s * s * s;
        r1 += w * s * lam[k];
        r2 += w * s * s * lam[k];
        wsum += w;
        ++used;
    }
    if (used < 4) throw std::invalid_argument("coeffs_numerical_fit: window too small");
    double det = s11 * s22 - s12 * s12;
    if (det == 0.0) throw std::invalid_argument("coeffs_numerical_fit: singular LS system");
    cplx c1 = (s22 * r1 - s12 * r2) / det;
    cplx c2 = (s11 * r2 - s12 * r1) / det;

    double rss = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double s = grid[k];
        if (s == 0.0 || std::abs(s) < window_lo || std::abs(s) > window_hi) continue;
        cplx model = c1 * s + c2 * s * s;
        rss += std::norm(lam[k] - model) / (s * s);
    }
    BranchFit out;
    out.alpha = c1.imag();
    out.alpha_real_part = c1.real();
    out.mu = c2.real();
    out.residual = std::sqrt(rss / wsum);
    return out;
}

namespace {

std::vector<double> symmetric_window_grid(double width, int per_side) {
    std::vector<double> grid;
    for (int j = per_side; j >= 1; --j) grid.push_back(-width * j / per_side);
    grid.push_back(0.0);
    for (int j = 1; j <= per_side; ++j) grid.push_back(width * j / per_side);
    return grid;
}

}  // namespace

ExpansionCoefficients fit_coefficients(const SymbolTriple& symbol, const DerivedQuantities& dq,
                                       const ModelParams& params) {
    const int m = params.m;
    const double eps = params.epsilon;
    const double split = 1.0 / std::sqrt(eps);

    ExpansionCoefficients out;
    out.route = CoeffRoute::numerical_fit;

    // wide window: translational branch, stable branch value at 0
    const double w_t = 1e-2;
    SpectrumCurve curve_t = track_branches(symbol, symmetric_window_grid(w_t, 12));
    const std::size_t zero_idx = 12;  // grid center
    double s1 = curve_t.sigma_grid[zero_idx + 1];

    int t_branch = -1;
    for (int j = 0; j < static_cast<int>(curve_t.n_branches()); ++j) {
        cplx at0 = curve_t.branches[j][zero_idx];
        if (std::abs(at0) > 1e-9) {
            out.lambda_s0 = at0.real();
            continue;
        }
        double slope = std::abs(curve_t.branches[j][zero_idx + 1].imag()) / s1;
        if (slope <= split) {
            if (t_branch >= 0) throw DegeneracyError("fit: multiple translational candidates");
            t_branch = j;
        }
    }
    if (t_branch < 0) throw DegeneracyError("fit: no translational branch identified");
    BranchFit tf = coeffs_numerical_fit(curve_t, t_branch, 0.0, w_t);
    out.alpha_t = tf.alpha;
    out.mu_t = tf.mu;
    out.fit_residual = tf.residual;
    out.alpha_real_leak = std::abs(tf.alpha_real_part);

    // narrow window: conservative branches live inside |sigma| << eps
    const double w_c = 1e-2 * eps;
    SpectrumCurve curve_c = track_branches(symbol, symmetric_window_grid(w_c, 12));
    double sc1 = curve_c.sigma_grid[zero_idx + 1];
    std::vector<std::pair<double, double>> cons;  // (alpha_c0, mu_c0)
    for (int j = 0; j < static_cast<int>(curve_c.n_branches()); ++j) {
        if (std::abs(curve_c.branches[j][zero_idx]) > 1e-9) continue;
        double slope = std::abs(curve_c.branches[j][zero_idx + 1].imag()) / sc1;
        if (slope > split) {
            BranchFit cf = coeffs_numerical_fit(curve_c, j, 0.0, w_c);
            cons.emplace_back(eps * cf.alpha, eps * eps * cf.mu);
            out.fit_residual = std::max(out.fit_residual, cf.residual);
            out.alpha_real_leak = std::max(out.alpha_real_leak, std::abs(cf.alpha_real_part));
        }
    }
    if (static_cast<int>(cons.size()) != m)
        throw DegeneracyError("fit: expected " + std::to_string(m) + " conservative branches, got " +
                              std::to_string(cons.size()));
    std::sort(cons.begin(), cons.end());
    out.alpha_c.resize(m);
    out.mu_c0.resize(m);
    for (int i = 0; i < m; ++i) {
        out.alpha_c(i) = cons[i].first;
        out.mu_c0(i) = cons[i].second;
    }
    return out;
}

double eckhaus_bound(const DerivedQuantities& dq, const ModelParams& params) {
    const cplx a = params.a;
    const cplx ch = dq.c_hat;
    const double X = a.imag() * ch.imag() + a.real() * ch.real();
    const double num = 2.0 * (dq.b_tilde.real() / params.c.real()) * X;
    const double den = 4.0 * a.real() * a.real() * (1.0 + dq.q_hat * dq.q_hat) +
                       2.0 * (a.real() / params.c.real()) * X;
    if (den <= 0.0) return -std::numeric_limits<double>::infinity();
    return num / den;
}

BfnReport bfn_check(const DerivedQuantities& dq, const ModelParams& params) {
    BfnReport out;
    const cplx a = params.a;
    const cplx bh = dq.b_hat;
    const cplx ch = dq.c_hat;
    out.value = a.imag() * ch.imag() * bh.real() * ch.real() +
                a.real() * bh.real() * ch.real() * ch.real();
    out.mu_t0 = -a.real() - a.imag() * ch.imag() / ch.real();
    out.holds = out.value > 0.0;
    return out;
}

GlCoefficients gl_reference(cplx a, cplx b, cplx c, double kappa) {
    if (!(a.real() > 0.0) || !(c.real() < 0.0))
        throw std::invalid_argument("gl_reference: need Re(a)>0 and Re(c)<0");
    const double kappaE2 = b.real() / a.real();
    if (!(kappa * kappa < kappaE2)) throw ExistenceError(kappa * kappa, kappaE2);
    GlCoefficients out;
    out.A0_sq = (b.real() - a.real() * kappa * kappa) / (-c.real());
    out.alpha_t = -2.0 * kappa * a.imag() + 2.0 * kappa * a.real() * c.imag() / c.real();
    out.mu_t = mu_t_formula(a, c, kappa, out.A0_sq, out.alpha_t);
    return out;
}

}  // namespace mcgl
