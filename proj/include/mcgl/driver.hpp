#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcgl/asymptotics.hpp"
#include "mcgl/io.hpp"
#include "mcgl/model.hpp"
#include "mcgl/symbol.hpp"
#include "mcgl/verdict.hpp"

namespace mcgl {

struct AnalyzeConfig {
    DssConfig dss;
    bool run_dss = true;
    bool run_darcy = true;
    bool run_fit = true;
};

/// Full analysis result: criteria with margins, coefficients from every
/// route that ran, region-wise verification, reduced-model comparison.
struct StabilityReport {
    std::vector<std::string> hypothesis_violations;
    DerivedQuantities derived;
    double kappa_E_sq = 0.0;
    ExpansionCoefficients closed_form;
    std::optional<ExpansionCoefficients> matched;
    std::optional<ExpansionCoefficients> fitted;
    std::string route_error;  // filled when a route could not run (degeneracy)
    CriteriaChecklist criteria;
    std::optional<DssReport> dss;
    std::optional<DarcyComparison> darcy;
    std::string verdict;      // stable | unstable | inconclusive
    std::vector<std::string> notes;
};

StabilityReport analyze(const ModelParams& params, const WaveParams& wave,
                        const AnalyzeConfig& config = {});

json report_to_json(const StabilityReport& report);

/// Exit-code mapping of a verdict: 0 stable, 1 unstable, 2 inconclusive.
int verdict_exit_code(const std::string& verdict);

struct SweepResult {
    std::vector<double> kappas;
    std::vector<std::string> verdicts;
    double boundary_lo = 0.0;   // bisection bracket of the numerical boundary
    double boundary_hi = 0.0;
    bool boundary_found = false;
    double kappa_S = 0.0;       // closed-form boundary for comparison
};

/// Per-kappa verdicts over [kappa_lo, kappa_hi] with the numerical
/// stability boundary refined by bisection to the requested width.
SweepResult sweep_kappa(const ModelParams& params, const Eigen::VectorXd& B0, double kappa_lo,
                        double kappa_hi, double step, const DssConfig& dss = {},
                        double bisect_width = 0.01);

struct FigurePanel {
    std::string label;        // e.g. "small_sigma_k0"
    double kappa = 0.0;
    SpectrumCurve curve;      // tracked branches over the panel grid
    std::vector<double> mu_t_parabola;   // mu_t sigma^2 per grid point
    std::vector<double> mu_c_parabola;   // eps^{-2} mu_c0 sigma^2 per grid point
};

/// Panel data for kappa in {0, kappa_E/4, kappa_E/2}: a small-frequency
/// panel (|sigma| <= 10 eps) and a wide one (|sigma| <= 1) each, with the
/// quadratic predictions alongside the tracked branches.
std::vector<FigurePanel> figure_panels(const ModelParams& params, const Eigen::VectorXd& B0,
                                       int points_per_panel = 201);

void write_figure_csv(const FigurePanel& panel, const std::string& path);

}  // namespace mcgl
