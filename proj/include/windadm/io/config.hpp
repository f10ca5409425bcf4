#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "windadm/assessment/assessment.hpp"
#include "windadm/risk/pla.hpp"
#include "windadm/risk/risk.hpp"
#include "windadm/uncertainty/uncertainty_set.hpp"

namespace windadm::io {

// Settings for every subcommand. Relative paths are resolved against the
// directory of the config file.
struct RunConfig {
  std::filesystem::path case_path;
  std::optional<std::filesystem::path> uc_path;  // absent: solve the SCUC first
  std::filesystem::path output_dir = "out";

  double sigma = 0.10;
  uncertainty::Budgets budgets{2, 1};
  risk::PlaConfig pla;
  assessment::AssessmentConfig assessment;
  risk::QuadratureConfig quadrature;
  double reserve_rate = 0.05;

  std::int64_t mc_samples = 1'000'000;
  std::uint64_t mc_seed = 20240601;
  int workers = 4;
  std::int64_t replay_samples = 10'000;

  std::vector<double> sweep_sigma{0.05, 0.10, 0.15};
  std::vector<int> sweep_gamma_t{0, 1, 2};

  // Throws kSchemaViolation naming the key.
  void validate() const;
};

// Reads a TOML-style file: `[section]` headers, `key = value` lines, `#`
// comments, quoted strings and flat `[a, b, c]` arrays. Unknown keys are an
// error. Throws kIo naming the path when the file cannot be read.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir);

}  // namespace windadm::io
