#pragma once

// File formats: JSON model and sweep config, measurement / estimate / results
// CSV, and the SVG rendering of a results table.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "wlest/estimators.hpp"
#include "wlest/linear_model.hpp"
#include "wlest/simulation.hpp"

namespace wlest::io {

/// Shortest-general rendering with 17 significant digits; locale independent.
std::string format_double(double value);

/// {"rows": R, "cols": C, "re": [...], "im": [...]}, row-major.
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& what);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// Missing noise.C_tilde is read as zero. The model is validated.
LinearModel<double> model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const LinearModel<double>& model);
LinearModel<double> parse_model_file(const std::filesystem::path& path);
void write_model_file(const std::filesystem::path& path,
                      const LinearModel<double>& model);

SweepConfig sweep_config_from_json(const nlohmann::json& j);
nlohmann::json sweep_config_to_json(const SweepConfig& config);
SweepConfig parse_sweep_config_file(const std::filesystem::path& path);

/// Header `re,im`, one row per element.
ComplexVector read_measurements(std::istream& in);
ComplexVector read_measurements_file(const std::filesystem::path& path);
void write_measurements(std::ostream& out, const ComplexVector& y);

/// Header `re,im` or `re,im,var` when the covariance is available.
void write_estimate(std::ostream& out, const EstimateResult<double>& result);

/// Parsed form of a results CSV.
struct ResultsCsv {
  std::vector<std::string> columns;  // estimator columns, without sigma2
  std::vector<double> sigma2;
  std::vector<std::vector<double>> values;  // values[row][column]
};

void write_results(std::ostream& out, const BmseTable& table);
std::string results_to_csv(const BmseTable& table);
ResultsCsv read_results(std::istream& in);

/// Log-log plot: one polyline per column (markers only for a single row),
/// legend, decade ticks.
std::string render_svg(const ResultsCsv& results);

}  // namespace wlest::io
