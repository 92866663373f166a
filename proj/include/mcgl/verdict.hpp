#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcgl/asymptotics.hpp"
#include "mcgl/model.hpp"
#include "mcgl/symbol.hpp"

namespace mcgl {

struct Flag {
    bool pass = false;
    double margin = 0.0;  // signed distance to the decision boundary
};

/// All stability and genericity criteria with the numeric margins that
/// decided them. decoup is informational (it is the negation of gencase).
struct CriteriaChecklist {
    Flag supercritical;             // Re(c) < 0
    Flag eckhaus;                   // kappa^2 < kappa_S^2
    Flag bfn;                       // BFN product > 0
    Flag scalar_pair;               // Re(c) < Re(c_hat) < 0 (m = 1)
    Flag preccond;                  // spec(effective_flux) real
    Flag splitass;                  // spec(effective_flux) distinct
    std::vector<Flag> ccond;        // mu_c0[i] < 0
    Flag mu_t_neg;                  // mu_t < 0
    Flag gencase;                   // r != 0 (nontrivial Jordan structure)
    Flag fluxcond;                  // effective_flux nonsingular
    Flag genc;                      // c_hat != 0
    Flag genz1;                     // h Re(d) != 0 (m = 1)
    std::vector<Flag> indcouple;    // h_j Re(d_j) != 0
    Flag shyp;                      // spec(f) simple
    Flag decoup;                    // Im(d) == Re(d) Im(c)/Re(c), informational
    double kappa_sq = 0.0;
    double kappa_S_sq = 0.0;

    /// stable / unstable / inconclusive; genericity failures downgrade to
    /// inconclusive, they never silently pass.
    std::string verdict;
};

CriteriaChecklist evaluate_criteria(const DerivedQuantities& dq, const ModelParams& params,
                                    const ExpansionCoefficients* coefficients);

struct DssConfig {
    double C = 10.0;              // region-splitting constant, >= 4
    int points_per_region = 64;   // log-spaced points per decade
    double sigma_cap_factor = 10.0;  // outermost region scanned up to factor*C/eps
};

struct RegionReport {
    int id = 0;                   // 1..6
    std::string label;
    double sigma_lo = 0.0, sigma_hi = 0.0;
    int grid_size = 0;
    double max_excess = 0.0;      // max over grid/branches of Re(lambda) + c_dss s^2/(1+s^2)
    double max_re = 0.0;          // max over grid/branches of Re(lambda)
    bool merged = false;
    bool pass = false;
};

struct DssReport {
    std::vector<RegionReport> regions;
    double c_dss = 0.0;           // calibrated quadratic-touch constant (magnitude)
    bool stable = false;
    std::string note;
};

/// Region-wise verification of the quadratic-touch bound
/// Re(lambda) <= -c_dss sigma^2/(1+sigma^2) over (0, sigma_max], with the
/// frequency axis split at eps/C, eps C, 1/C, 1/(C eps), C/eps. The
/// constant c_dss is calibrated as half the minimum of |mu_t| and the
/// margin of a pilot pass over the second-outermost region. Symmetry in
/// sigma -> -sigma makes scanning positive sigma sufficient.
DssReport verify_dss(const SymbolTriple& symbol, const DerivedQuantities& dq,
                     const ModelParams& params, const DssConfig& config = {});

struct DarcyComparison {
    double d_darcy = 0.0;      // max matched distance, full vs reduced pair
    double d_fast_rel = 0.0;   // max matched distance to i sigma eps^{-1} spec(f), times eps
    bool signs_agree = true;   // Re-parts of matched pairs have consistent signs
    bool ambiguous = false;    // two candidates within mutual 1e-6
    int n_sigma = 0;
};

/// Matches the full spectrum over sigma in [lo, hi] against the union of
/// the reduced 2 x 2 spectrum and the fast candidates i sigma eps^{-1} f_j;
/// reduced-model stability is necessary for full stability, so the matched
/// distances must vanish with epsilon.
DarcyComparison darcy_necessity(const SymbolTriple& full, const SymbolTriple& darcy,
                                const DerivedQuantities& dq, const ModelParams& params,
                                double sigma_lo, double sigma_hi, int n_points = 64);

struct ImaginaryRootScan {
    bool ok = false;
    double margin = 0.0;  // min over grid of min_j |Re lambda_j|
    bool warning = false; // margin below 1e-8 while genericity flags pass
};

/// Verifies that the complement matrix [[2A0^2 Re(c), A0 Re(d)],
/// [2A0 h i s, f i s]] keeps all eigenvalues away from the imaginary axis
/// for sigma_check in the given grid.
ImaginaryRootScan imaginary_root_scan(const DerivedQuantities& dq, const ModelParams& params,
                                      const std::vector<double>& sigma_check_grid);

}  // namespace mcgl
