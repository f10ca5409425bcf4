#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "windadm/assessment/assessment.hpp"
#include "windadm/assessment/replay.hpp"
#include "windadm/risk/risk.hpp"

namespace windadm::io {

// `period,farm,w_lower_mw,w_upper_mw,q_p,q_n`, 1-based, period-major.
// Numbers are written in shortest round-trip form.
void write_boundary_csv(std::ostream& out, const uncertainty::Boundary& b,
                        const risk::RiskValue& q);
// Reads the same layout; the q columns are optional on input. Every
// (period, farm) pair must appear exactly once.
uncertainty::Boundary read_boundary_csv(std::istream& in, const grid::Network& net);
uncertainty::Boundary read_boundary_csv_file(const std::filesystem::path& path,
                                             const grid::Network& net);

// `period,risk_usd`.
void write_period_risk_csv(std::ostream& out, const risk::RiskValue& q);

struct SweepRow {
  double parameter = 0.0;
  double risk_pla = 0.0;
  double risk_exact = 0.0;
  int iterations = 0;
  bool certified = false;
};
// `<name>,risk_usd,risk_exact_usd,iterations,certified`.
void write_sweep_csv(std::ostream& out, const std::string& name,
                     const std::vector<SweepRow>& rows);

// {k, G_k, F_R_k, eta, master_rows, wall_ms}
nlohmann::json iteration_to_json(const assessment::IterationLog& e);
// Everything in the result except wall times, so reruns compare equal.
nlohmann::json result_to_json(const assessment::AssessmentResult& r);
nlohmann::json risk_to_json(const risk::RiskValue& v);
nlohmann::json replay_to_json(const assessment::ReplayReport& r);

// Writes boundary.csv, risk_by_period.csv, summary.json and
// iterations.jsonl into `dir` (created if missing).
void emit_reports(const assessment::AssessmentResult& r, const std::filesystem::path& dir);

// Opens a file for writing, creating parent directories; kIo names the path.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace windadm::io
