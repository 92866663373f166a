#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "mcgl/asymptotics.hpp"
#include "mcgl/model.hpp"
#include "mcgl/symbol.hpp"
#include "mcgl/turing.hpp"
#include "mcgl/verdict.hpp"

// vendored single-header nlohmann/json lacks the fwd header; pull the full one
#if !defined(INCLUDE_NLOHMANN_JSON_HPP_) && !defined(NLOHMANN_JSON_VERSION_MAJOR)
#include <json.hpp>
#endif

namespace mcgl {

using json = nlohmann::json;

/// Model file schema: complex numbers as [re, im] pairs, matrices row-major
/// arrays of arrays.
/// {"a":[re,im],"b":[re,im],"c":[re,im],"d":[[re,im],...],"eB":[[...]],
///  "f":[[...]],"g":[[re,im],...],"h":[...],"epsilon":x,"m":n}
ModelParams model_from_json(const json& j);
json model_to_json(const ModelParams& params);
ModelParams load_model(const std::string& path);

json symbol_to_json(const SymbolTriple& triple);

json derived_to_json(const DerivedQuantities& dq);
json coefficients_to_json(const ExpansionCoefficients& coeffs);
json checklist_to_json(const CriteriaChecklist& checklist);
json dss_to_json(const DssReport& report);
json darcy_to_json(const DarcyComparison& cmp);

VasculogenesisParams vasculo_from_json(const json& j);

/// CSV with header sigma, re_lambda_1, im_lambda_1, ..., re_lambda_n, im_lambda_n.
void write_spectrum_csv(const SpectrumCurve& curve, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace mcgl
