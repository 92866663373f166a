#include "mcgl/model.hpp"

#include <cmath>
#include <sstream>

namespace mcgl {

namespace {

void check_dimensions(const ModelParams& params) {
    const int m = params.m;
    std::ostringstream bad;
    if (m < 1) bad << "m must be >= 1; ";
    if (params.d.size() != m) bad << "d has length " << params.d.size() << ", want " << m << "; ";
    if (params.e_B.rows() != m || params.e_B.cols() != m)
        bad << "e_B is " << params.e_B.rows() << "x" << params.e_B.cols() << ", want " << m << "x" << m << "; ";
    if (params.f.rows() != m || params.f.cols() != m)
        bad << "f is " << params.f.rows() << "x" << params.f.cols() << ", want " << m << "x" << m << "; ";
    if (params.g.size() != m) bad << "g has length " << params.g.size() << ", want " << m << "; ";
    if (params.h.size() != m) bad << "h has length " << params.h.size() << ", want " << m << "; ";
    if (!(params.epsilon > 0.0)) bad << "epsilon must be > 0; ";
    std::string msg = bad.str();
    if (!msg.empty()) throw std::invalid_argument("model dimensions inconsistent: " + msg);
}

}  // namespace

ModelParams ModelParams::scalar(cplx a, cplx b, cplx c, cplx d, double e_B, double f, cplx g,
                                double h, double epsilon) {
    ModelParams p;
    p.a = a;
    p.b = b;
    p.c = c;
    p.d = Eigen::RowVectorXcd::Constant(1, d);
    p.e_B = Eigen::MatrixXd::Constant(1, 1, e_B);
    p.f = Eigen::MatrixXd::Constant(1, 1, f);
    p.g = Eigen::VectorXcd::Constant(1, g);
    p.h = Eigen::VectorXd::Constant(1, h);
    p.epsilon = epsilon;
    p.m = 1;
    return p;
}

WaveParams WaveParams::scalar(double kappa, double B0) {
    return WaveParams(kappa, Eigen::VectorXd::Constant(1, B0));
}

std::vector<std::string> validate_model(const ModelParams& params) {
    check_dimensions(params);
    std::vector<std::string> violations;
    auto fail = [&](const std::string& what, double value) {
        std::ostringstream os;
        os << what << " (value " << value << ")";
        violations.push_back(os.str());
    };
    if (!(params.a.real() > 0.0)) fail("Re(a)>0 fails", params.a.real());
    if (!(params.b.real() > 0.0)) fail("Re(b)>0 fails", params.b.real());
    if (!(params.c.real() < 0.0)) fail("Re(c)<0 fails", params.c.real());

    EigenResult fs = eigenvalues(params.f.cast<cplx>(), false);
    double worst_im = fs.values.imag().cwiseAbs().maxCoeff();
    double fscale = std::max(1.0, params.f.cwiseAbs().maxCoeff());
    if (worst_im > 1e-10 * fscale) fail("spec(f) not real", worst_im);

    EigenResult es = eigenvalues(params.e_B.cast<cplx>(), false);
    double min_re = es.values.real().minCoeff();
    if (!(min_re > 0.0)) fail("Re spec(e_B)>0 fails", min_re);
    return violations;
}

double existence_bound(const ModelParams& params, const Eigen::VectorXd& B0) {
    check_dimensions(params);
    if (B0.size() != params.m) throw std::invalid_argument("existence_bound: B0 length mismatch");
    double num = params.b.real() + params.d.real() * B0;
    return num / params.a.real();
}

DerivedQuantities derive_wave(const ModelParams& params, const WaveParams& wave) {
    check_dimensions(params);
    if (wave.B0.size() != params.m) throw std::invalid_argument("derive_wave: B0 length mismatch");

    DerivedQuantities dq;
    dq.kappa = wave.kappa;
    dq.b_tilde = params.b + (params.d * wave.B0.cast<cplx>()).value();

    const double kappaE2 = dq.b_tilde.real() / params.a.real();
    const double kappa2 = wave.kappa * wave.kappa;
    if (!(kappa2 < kappaE2)) throw ExistenceError(kappa2, kappaE2);

    const double A0_sq = (dq.b_tilde.real() - params.a.real() * kappa2) / (-params.c.real());
    dq.A0 = std::sqrt(A0_sq);
    dq.omega = params.a.imag() * kappa2 - dq.b_tilde.imag() - params.c.imag() * A0_sq;

    Eigen::PartialPivLU<Eigen::MatrixXd> flu(params.f);
    Eigen::VectorXd finv_h = flu.solve(params.h);
    cplx d_finv_h = (params.d * finv_h.cast<cplx>()).value();
    dq.c_hat = params.c - d_finv_h;
    dq.b_hat = dq.b_tilde + d_finv_h * A0_sq;

    dq.p = -params.d.real() / (2.0 * dq.A0 * params.c.real());
    dq.q = -params.c.imag() / params.c.real();
    dq.q_hat = -dq.c_hat.imag() / dq.c_hat.real();

    dq.jordan_row = dq.A0 * (params.d.imag() + dq.q * params.d.real());
    dq.r = (params.m == 1) ? dq.jordan_row(0) : dq.jordan_row.norm();

    dq.effective_flux = params.f + 2.0 * dq.A0 * params.h * dq.p;
    dq.m0 = 2.0 * A0_sq * params.c.real();
    return dq;
}

CompatReport compat_check(const ModelParams& params, const std::vector<double>& z_grid) {
    check_dimensions(params);
    if (z_grid.empty()) throw std::invalid_argument("compat_check: empty grid");
    CompatReport report;
    report.worst = -std::numeric_limits<double>::infinity();
    for (double z : z_grid) {
        if (z == 0.0) throw std::invalid_argument("compat_check: z=0 in grid");
        Eigen::MatrixXcd sym =
            cplx(0.0, z) * params.f.cast<cplx>() - (z * z) * params.e_B.cast<cplx>();
        double max_re = eigenvalues(sym, false).values.real().maxCoeff();
        report.worst = std::max(report.worst, max_re);
    }
    report.ok = report.worst < 0.0;
    return report;
}

}  // namespace mcgl
