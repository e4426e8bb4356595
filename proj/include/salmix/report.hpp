#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "salmix/em.hpp"

namespace salmix {

nlohmann::json report_to_json(const FitReport& rep);
FitReport report_from_json(const nlohmann::json& j);

void write_report(const std::string& path, const FitReport& rep);
FitReport read_report(const std::string& path);

// labels CSV: row_id,map_label,tau_1..tau_G
void write_labels_csv(const std::string& path, const FitReport& rep);

// Fitted mixture log-density at x, whichever engine produced the report.
double report_log_density(const FitReport& rep, const Eigen::VectorXd& x);

}  // namespace salmix
