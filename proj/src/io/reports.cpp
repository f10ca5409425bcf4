#include "windadm/io/reports.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "windadm/common/error.hpp"

namespace windadm::io {

using nlohmann::json;

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  return out;
}

void write_boundary_csv(std::ostream& out, const uncertainty::Boundary& b,
                        const risk::RiskValue& q) {
  out << "period,farm,w_lower_mw,w_upper_mw,q_p,q_n\n";
  const int M = static_cast<int>(b.upper.size());
  const int T = M > 0 ? static_cast<int>(b.upper[0].size()) : 0;
  for (int t = 0; t < T; ++t) {
    for (int m = 0; m < M; ++m) {
      const double qp = q.q_p.empty() ? 0.0 : q.q_p[m][t];
      const double qn = q.q_n.empty() ? 0.0 : q.q_n[m][t];
      out << fmt::format("{},{},{},{},{},{}\n", t + 1, m + 1, b.lower[m][t], b.upper[m][t], qp,
                         qn);
    }
  }
}

uncertainty::Boundary read_boundary_csv(std::istream& in, const grid::Network& net) {
  const int M = net.num_farms();
  const int T = net.horizon;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kMalformedInput, "boundary CSV is empty");
  if (line.rfind("period,farm,w_lower_mw,w_upper_mw", 0) != 0) {
    throw Error(ErrorCode::kMalformedInput,
                "boundary CSV header must start with period,farm,w_lower_mw,w_upper_mw");
  }
  uncertainty::Boundary b = uncertainty::Boundary::at_forecast(net);
  std::vector<std::vector<int>> seen(M, std::vector<int>(T, 0));
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 4) {
      throw Error(ErrorCode::kMalformedInput,
                  fmt::format("boundary CSV row {} has {} fields", row, cells.size()));
    }
    int t = 0, m = 0;
    double lo = 0.0, hi = 0.0;
    try {
      t = std::stoi(cells[0]) - 1;
      m = std::stoi(cells[1]) - 1;
      lo = std::stod(cells[2]);
      hi = std::stod(cells[3]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kMalformedInput, fmt::format("boundary CSV row {} is not numeric", row));
    }
    if (t < 0 || t >= T || m < 0 || m >= M) {
      throw Error(ErrorCode::kDanglingReference,
                  fmt::format("boundary CSV row {} names period {} farm {}", row, t + 1, m + 1));
    }
    if (seen[m][t]++) {
      throw Error(ErrorCode::kMalformedInput,
                  fmt::format("boundary CSV repeats period {} farm {}", t + 1, m + 1));
    }
    b.lower[m][t] = lo;
    b.upper[m][t] = hi;
  }
  for (int m = 0; m < M; ++m) {
    for (int t = 0; t < T; ++t) {
      if (!seen[m][t]) {
        throw Error(ErrorCode::kDimensionMismatch,
                    fmt::format("boundary CSV lacks period {} farm {}", t + 1, m + 1));
      }
    }
  }
  b.validate(net);
  return b;
}

uncertainty::Boundary read_boundary_csv_file(const std::filesystem::path& path,
                                             const grid::Network& net) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot read boundary {}", path.string()));
  try {
    return read_boundary_csv(in, net);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.detail()));
  }
}

void write_period_risk_csv(std::ostream& out, const risk::RiskValue& q) {
  out << "period,risk_usd\n";
  const int T = q.q_p.empty() ? 0 : static_cast<int>(q.q_p[0].size());
  for (int t = 0; t < T; ++t) out << fmt::format("{},{}\n", t + 1, q.period_total(t));
}

void write_sweep_csv(std::ostream& out, const std::string& name,
                     const std::vector<SweepRow>& rows) {
  out << name << ",risk_usd,risk_exact_usd,iterations,certified\n";
  for (const SweepRow& r : rows) {
    out << fmt::format("{},{},{},{},{}\n", r.parameter, r.risk_pla, r.risk_exact, r.iterations,
                       r.certified ? 1 : 0);
  }
}

json iteration_to_json(const assessment::IterationLog& e) {
  json j;
  j["k"] = e.k;
  j["G_k"] = e.g;
  j["F_R_k"] = e.f_r;
  j["eta"] = e.eta;
  j["master_rows"] = e.master_rows;
  j["wall_ms"] = e.wall_ms;
  return j;
}

json risk_to_json(const risk::RiskValue& v) {
  json j;
  j["total_usd"] = v.total;
  j["q_p"] = v.q_p;
  j["q_n"] = v.q_n;
  return j;
}

json result_to_json(const assessment::AssessmentResult& r) {
  json j;
  j["converged"] = r.converged;
  j["certified"] = r.certified;
  j["iterations"] = r.log.size();
  j["risk_pla_usd"] = r.risk_pla;
  j["risk_exact_usd"] = r.exact.total;
  j["master_objective"] = r.master_objective;
  j["eta"] = r.eta;
  j["final_F_R"] = r.final_f_r;
  j["boundary"] = {{"w_lower_mw", r.boundary.lower}, {"w_upper_mw", r.boundary.upper}};
  j["q_p"] = r.q.q_p;
  j["q_n"] = r.q.q_n;
  json history = json::array();
  for (const auto& e : r.log) {
    history.push_back({{"k", e.k}, {"G_k", e.g}, {"F_R_k", e.f_r}, {"eta", e.eta},
                       {"master_rows", e.master_rows}});
  }
  j["history"] = std::move(history);
  j["worst_case"] = admissibility::subproblem_to_json(r.last_subproblem);
  return j;
}

json replay_to_json(const assessment::ReplayReport& r) {
  return {{"vertices", r.vertices},
          {"vertex_failures", r.vertex_failures},
          {"worst_vertex_cost", r.worst_vertex_cost},
          {"hull_samples", r.hull_samples},
          {"hull_failures", r.hull_failures},
          {"worst_hull_cost", r.worst_hull_cost},
          {"trajectories", r.trajectories},
          {"trajectory_zero", r.trajectory_zero},
          {"mean_trajectory_cost", r.mean_trajectory_cost},
          {"worst_trajectory_cost", r.worst_trajectory_cost}};
}

void emit_reports(const assessment::AssessmentResult& r, const std::filesystem::path& dir) {
  {
    auto out = open_output(dir / "boundary.csv");
    write_boundary_csv(out, r.boundary, r.q);
  }
  {
    auto out = open_output(dir / "risk_by_period.csv");
    write_period_risk_csv(out, r.q);
  }
  {
    auto out = open_output(dir / "summary.json");
    out << result_to_json(r).dump(2) << '\n';
  }
  {
    auto out = open_output(dir / "iterations.jsonl");
    for (const auto& e : r.log) out << iteration_to_json(e).dump() << '\n';
  }
}

}  // namespace windadm::io
