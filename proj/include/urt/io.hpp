#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "urt/certificates.hpp"
#include "urt/mappings.hpp"
#include "urt/regions.hpp"
#include "urt/scenario.hpp"
#include "urt/spectral.hpp"
#include "urt/sumrate.hpp"

namespace urt::io {

using json = nlohmann::json;

/// Formats a double with 12 significant digits, locale-independent
/// ('.' decimal separator always).
std::string format_number(double v);

// Model files: {"M": row-major N*N array, "u": length-N array,
// optional "b", "C" (row-major), "sigma"}.
json model_to_json(const AffineInterferenceModel& model);
AffineInterferenceModel model_from_json(const json& j);

// Norm files: {"generators": [[...], ...]}.
json norm_to_json(const PolyhedralMonotoneNorm& norm);
PolyhedralMonotoneNorm norm_from_json(const json& j);

json scenario_config_to_json(const ScenarioConfig& config);
ScenarioConfig scenario_config_from_json(const json& j);

json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const json& j);

json verdict_to_json(const FeasibilityVerdict& verdict);
json certificate_to_json(const CertificateReport& report);   // 1-based labels
json conjecture_to_json(const ConjectureReport& report);
json solution_to_json(const SumRateSolution& solution);
json membership_to_json(const MembershipResult& result);
json probe_to_json(const ConvexityProbeReport& report);

/// Cloud CSV: header p1..pN,s1..sN,r1..rN,rho; one row per point,
/// 12 significant digits; count = 0 writes the header only.
void write_cloud_csv(std::ostream& out, const std::vector<BoundaryPoint>& cloud,
                     Eigen::Index dimension);

/// File helpers; parse errors surface as std::invalid_argument naming
/// the file and the offending field.
json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);
AffineInterferenceModel load_model(const std::string& path);
PolyhedralMonotoneNorm load_norm(const std::string& path);
Scenario load_scenario(const std::string& path);
ScenarioConfig load_scenario_config(const std::string& path);

}  // namespace urt::io
