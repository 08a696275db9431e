#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "wlest/estimators.hpp"

namespace wlest::cli {

struct EstimateOptions {
  std::filesystem::path model;
  std::filesystem::path measurements;
  std::filesystem::path out;
  Estimator estimator = Estimator::Blue;
};

struct SimulateOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
};

struct PlotOptions {
  std::filesystem::path input;
  std::filesystem::path out;
};

// Each command returns its exit code and reports failures on `err`:
// 0 success, 1 usage, 2 input validation, 3 numerical failure.
int cmd_estimate(const EstimateOptions& opts, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& err);
int cmd_plot(const PlotOptions& opts, std::ostream& err);

/// Parses argv (argv[0] is the program name) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace wlest::cli
