#include "windadm/io/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "windadm/common/error.hpp"

namespace windadm::io {
namespace {

namespace pt = boost::property_tree;

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::kSchemaViolation, fmt::format("config key '{}' {}", key, why));
}

// Drops `#` comments outside double quotes; the INI reader only knows `;`.
std::string strip_comments(std::istream& in) {
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    bool quoted = false;
    std::size_t cut = line.size();
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    out << line.substr(0, cut) << '\n';
  }
  return out.str();
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string unquote(const std::string& key, std::string s) {
  s = trim(std::move(s));
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  if (!s.empty() && s.front() == '"') bad(key, "has an unterminated string");
  return s;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    bad(key, fmt::format("expects a number, got '{}'", s));
  }
  if (used != s.size()) bad(key, fmt::format("expects a number, got '{}'", s));
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    bad(key, fmt::format("expects an integer, got '{}'", trim(text)));
  }
  return static_cast<long long>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true") return true;
  if (s == "false") return false;
  bad(key, fmt::format("expects true or false, got '{}'", s));
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') bad(key, "expects an array [a, b, ...]");
  std::vector<double> out;
  std::stringstream items(s.substr(1, s.size() - 2));
  std::string item;
  while (std::getline(items, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(key, item));
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (!(sigma >= 0.0)) bad("model.sigma", "must be >= 0");
  if (budgets.gamma_t < 0 || budgets.gamma_s < 0) bad("model.gamma_t", "budgets must be >= 0");
  if (!(assessment.c_loss >= 0.0)) bad("model.c_loss", "must be >= 0");
  if (!(assessment.penalty_k >= 0.0)) bad("algorithm.K", "must be >= 0");
  if (!(assessment.epsilon > 0.0)) bad("algorithm.epsilon", "must be > 0");
  if (assessment.max_iterations < 1) bad("algorithm.max_iterations", "must be >= 1");
  if (!(assessment.subproblem.m_big >= 0.0)) bad("algorithm.m_big", "must be >= 0 (0 = automatic)");
  if (assessment.subproblem.node_limit < 1) bad("algorithm.node_limit", "must be >= 1");
  if (pla.z < 1) bad("pla.z", "must be >= 1");
  if (pla.alphas.empty()) bad("pla.alphas", "must not be empty");
  if (!(quadrature.tol > 0.0)) bad("quadrature.tol", "must be > 0");
  if (!(reserve_rate >= 0.0)) bad("scuc.reserve_rate", "must be >= 0");
  if (mc_samples < 1) bad("mc.samples", "must be >= 1");
  if (workers < 1) bad("mc.workers", "must be >= 1");
  if (replay_samples < 0) bad("validate.samples", "must be >= 0");
  for (double s : sweep_sigma) {
    if (!(s >= 0.0)) bad("sweep.sigma", "entries must be >= 0");
  }
  for (int g : sweep_gamma_t) {
    if (g < 0) bad("sweep.gamma_t", "entries must be >= 0");
  }
}

RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  std::istringstream text(strip_comments(in));
  try {
    pt::read_ini(text, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kMalformedInput,
                fmt::format("config line {}: {}", e.line(), e.message()));
  }

  RunConfig cfg;
  auto path_of = [&](const std::string& key, const std::string& v) {
    std::filesystem::path p = unquote(key, v);
    return p.is_absolute() ? p : base_dir / p;
  };

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"paths.case", [&](auto& k, auto& v) { cfg.case_path = path_of(k, v); }},
      {"paths.uc", [&](auto& k, auto& v) { cfg.uc_path = path_of(k, v); }},
      {"paths.output", [&](auto& k, auto& v) { cfg.output_dir = path_of(k, v); }},
      {"model.sigma", [&](auto& k, auto& v) { cfg.sigma = to_double(k, v); }},
      {"model.gamma_t", [&](auto& k, auto& v) { cfg.budgets.gamma_t = to_integer(k, v); }},
      {"model.gamma_s", [&](auto& k, auto& v) { cfg.budgets.gamma_s = to_integer(k, v); }},
      {"model.c_loss", [&](auto& k, auto& v) { cfg.assessment.c_loss = to_double(k, v); }},
      {"pla.alpha0", [&](auto& k, auto& v) { cfg.pla.alpha0 = to_double(k, v); }},
      {"pla.alphas", [&](auto& k, auto& v) { cfg.pla.alphas = to_doubles(k, v); }},
      {"pla.z", [&](auto& k, auto& v) { cfg.pla.z = to_integer(k, v); }},
      {"algorithm.mode",
       [&](auto& k, auto& v) { cfg.assessment.mode = assessment::parse_mode(unquote(k, v)); }},
      {"algorithm.K", [&](auto& k, auto& v) { cfg.assessment.penalty_k = to_double(k, v); }},
      {"algorithm.epsilon", [&](auto& k, auto& v) { cfg.assessment.epsilon = to_double(k, v); }},
      {"algorithm.max_iterations",
       [&](auto& k, auto& v) { cfg.assessment.max_iterations = to_integer(k, v); }},
      {"algorithm.m_big",
       [&](auto& k, auto& v) { cfg.assessment.subproblem.m_big = to_double(k, v); }},
      {"algorithm.node_limit",
       [&](auto& k, auto& v) { cfg.assessment.subproblem.node_limit = to_integer(k, v); }},
      {"algorithm.clip_to_pla_support",
       [&](auto& k, auto& v) { cfg.assessment.clip_to_pla_support = to_bool(k, v); }},
      {"algorithm.oracle_subproblem",
       [&](auto& k, auto& v) { cfg.assessment.oracle_subproblem = to_bool(k, v); }},
      {"quadrature.tol", [&](auto& k, auto& v) { cfg.quadrature.tol = to_double(k, v); }},
      {"scuc.reserve_rate", [&](auto& k, auto& v) { cfg.reserve_rate = to_double(k, v); }},
      {"mc.samples", [&](auto& k, auto& v) { cfg.mc_samples = to_integer(k, v); }},
      {"mc.seed", [&](auto& k, auto& v) { cfg.mc_seed = to_integer(k, v); }},
      {"mc.workers", [&](auto& k, auto& v) { cfg.workers = to_integer(k, v); }},
      {"validate.samples", [&](auto& k, auto& v) { cfg.replay_samples = to_integer(k, v); }},
      {"sweep.sigma", [&](auto& k, auto& v) { cfg.sweep_sigma = to_doubles(k, v); }},
      {"sweep.gamma_t",
       [&](auto& k, auto& v) {
         cfg.sweep_gamma_t.clear();
         for (double g : to_doubles(k, v)) cfg.sweep_gamma_t.push_back(to_integer(k, fmt::format("{}", g)));
       }},
  };

  for (const auto& [section, body] : tree) {
    if (body.empty()) bad(section, "must sit inside a [section]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = setters.find(full);
      if (it == setters.end()) bad(full, "is not recognised");
      it->second(full, value.data());
    }
  }
  if (cfg.case_path.empty()) bad("paths.case", "is required");
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot read config {}", path.string()));
  return parse_run_config(in, path.parent_path());
}

}  // namespace windadm::io
