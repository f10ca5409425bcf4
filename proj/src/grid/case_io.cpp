#include "windadm/grid/case_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "windadm/common/error.hpp"

namespace windadm::grid {
namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema(fmt::format("{} must be an object", where));
  auto it = obj.find(key);
  if (it == obj.end()) schema(fmt::format("missing field {}.{}", where, key));
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) schema(fmt::format("{}.{} must be a number", where, key));
  return v.get<double>();
}

int bus_index(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) schema(fmt::format("{}.{} must be an integer", where, key));
  return v.get<int>() - 1;
}

const json& array(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_array()) schema(fmt::format("{}.{} must be an array", where, key));
  return v;
}

std::vector<double> series(const json& v, const std::string& where) {
  if (!v.is_array()) schema(fmt::format("{} must be an array", where));
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) schema(fmt::format("{} must contain numbers", where));
    out.push_back(e.get<double>());
  }
  return out;
}

// Scalar or T-array.
std::vector<double> price_series(const json& v, int horizon, const std::string& where) {
  if (v.is_number()) return std::vector<double>(horizon, v.get<double>());
  return series(v, where);
}

}  // namespace

Case load_case(const json& doc) {
  Case c;
  Network& net = c.network;
  const std::string root = "case";
  net.base_mva = number(doc, "base_mva", root);
  const json& nodes = field(doc, "nodes", root);
  if (!nodes.is_number_integer()) schema("case.nodes must be an integer");
  net.nodes = nodes.get<int>();
  net.ref_node = bus_index(doc, "ref_node", root);

  const json& lines = array(doc, "lines", root);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const std::string w = fmt::format("lines[{}]", l);
    net.lines.push_back(Line{bus_index(lines[l], "from", w), bus_index(lines[l], "to", w),
                             number(lines[l], "susceptance_pu", w),
                             number(lines[l], "capacity_mw", w)});
  }
  const json& gens = array(doc, "generators", root);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const std::string w = fmt::format("generators[{}]", g);
    net.generators.push_back(Generator{
        bus_index(gens[g], "bus", w), number(gens[g], "pmin_mw", w),
        number(gens[g], "pmax_mw", w), number(gens[g], "ramp_up_mw", w),
        number(gens[g], "ramp_dn_mw", w), number(gens[g], "cost_per_mwh", w)});
  }
  const json& loads = array(doc, "loads", root);
  for (std::size_t j = 0; j < loads.size(); ++j) {
    const std::string w = fmt::format("loads[{}]", j);
    net.loads.push_back(Load{bus_index(loads[j], "bus", w),
                             series(field(loads[j], "demand_mw", w), w + ".demand_mw")});
  }
  const json& farms = array(doc, "wind_farms", root);
  for (std::size_t m = 0; m < farms.size(); ++m) {
    const std::string w = fmt::format("wind_farms[{}]", m);
    net.wind_farms.push_back(
        WindFarm{bus_index(farms[m], "bus", w), number(farms[m], "capacity_mw", w),
                 series(field(farms[m], "forecast_mw", w), w + ".forecast_mw")});
  }
  if (!net.loads.empty()) {
    net.horizon = static_cast<int>(net.loads.front().demand_mw.size());
  } else if (!net.wind_farms.empty()) {
    net.horizon = static_cast<int>(net.wind_farms.front().forecast_mw.size());
  } else {
    schema("case needs at least one load or wind farm to fix the horizon");
  }
  net.validate();

  const json& prices = field(doc, "prices", root);
  const json& curtail = array(prices, "curtail", "prices");
  for (std::size_t m = 0; m < curtail.size(); ++m) {
    c.prices.curtail.push_back(
        price_series(curtail[m], net.horizon, fmt::format("prices.curtail[{}]", m)));
  }
  const json& shed = array(prices, "shed", "prices");
  for (std::size_t j = 0; j < shed.size(); ++j) {
    c.prices.shed.push_back(
        price_series(shed[j], net.horizon, fmt::format("prices.shed[{}]", j)));
  }
  c.prices.reg_up = price_series(field(prices, "reg_up", "prices"), net.horizon,
                                 "prices.reg_up");
  c.prices.reg_dn = price_series(field(prices, "reg_dn", "prices"), net.horizon,
                                 "prices.reg_dn");
  c.prices.validate(net);
  return c;
}

Case load_case_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open case file {}", path.string()));
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput,
                fmt::format("{}: invalid JSON ({})", path.string(), e.what()));
  }
  try {
    return load_case(doc);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.detail()));
  }
}

json case_to_json(const Case& c) {
  const Network& net = c.network;
  json doc;
  doc["base_mva"] = net.base_mva;
  doc["nodes"] = net.nodes;
  doc["ref_node"] = net.ref_node + 1;
  doc["lines"] = json::array();
  for (const Line& l : net.lines) {
    doc["lines"].push_back({{"from", l.from + 1},
                            {"to", l.to + 1},
                            {"susceptance_pu", l.susceptance_pu},
                            {"capacity_mw", l.capacity_mw}});
  }
  doc["generators"] = json::array();
  for (const Generator& g : net.generators) {
    doc["generators"].push_back({{"bus", g.bus + 1},
                                 {"pmin_mw", g.pmin_mw},
                                 {"pmax_mw", g.pmax_mw},
                                 {"ramp_up_mw", g.ramp_up_mw},
                                 {"ramp_dn_mw", g.ramp_dn_mw},
                                 {"cost_per_mwh", g.cost_per_mwh}});
  }
  doc["loads"] = json::array();
  for (const Load& j : net.loads) {
    doc["loads"].push_back({{"bus", j.bus + 1}, {"demand_mw", j.demand_mw}});
  }
  doc["wind_farms"] = json::array();
  for (const WindFarm& m : net.wind_farms) {
    doc["wind_farms"].push_back(
        {{"bus", m.bus + 1}, {"capacity_mw", m.capacity_mw}, {"forecast_mw", m.forecast_mw}});
  }
  doc["prices"] = {{"curtail", c.prices.curtail},
                   {"shed", c.prices.shed},
                   {"reg_up", c.prices.reg_up},
                   {"reg_dn", c.prices.reg_dn}};
  return doc;
}

UcSchedule read_uc_csv(std::istream& in, const Network& net) {
  UcSchedule uc;
  uc.on.assign(net.num_generators(), std::vector<int>(net.horizon, -1));
  std::string line;
  if (!std::getline(in, line)) schema("UC CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "period,generator,on") {
    schema(fmt::format("UC CSV header must be 'period,generator,on', got '{}'", line));
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b, v;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, v)) {
      schema(fmt::format("UC CSV line {} must have three fields", lineno));
    }
    int t = 0, g = 0, on = 0;
    try {
      std::size_t pa = 0, pb = 0, pv = 0;
      t = std::stoi(a, &pa);
      g = std::stoi(b, &pb);
      on = std::stoi(v, &pv);
      if (pa != a.size() || pb != b.size() || pv != v.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      schema(fmt::format("UC CSV line {} has a non-integer field", lineno));
    }
    if (t < 1 || t > net.horizon) {
      throw Error(ErrorCode::kDimensionMismatch,
                  fmt::format("UC CSV line {}: period {} outside 1..{}", lineno, t, net.horizon));
    }
    if (g < 1 || g > net.num_generators()) {
      throw Error(ErrorCode::kDanglingReference,
                  fmt::format("UC CSV line {}: generator {} outside 1..{}", lineno, g,
                              net.num_generators()));
    }
    if (on != 0 && on != 1) schema(fmt::format("UC CSV line {}: on must be 0 or 1", lineno));
    if (uc.on[g - 1][t - 1] != -1) {
      schema(fmt::format("UC CSV line {}: duplicate entry for generator {} period {}",
                         lineno, g, t));
    }
    uc.on[g - 1][t - 1] = on;
  }
  for (int g = 0; g < net.num_generators(); ++g) {
    for (int t = 0; t < net.horizon; ++t) {
      if (uc.on[g][t] == -1) {
        throw Error(ErrorCode::kDimensionMismatch,
                    fmt::format("UC CSV has no entry for generator {} period {}", g + 1, t + 1));
      }
    }
  }
  return uc;
}

UcSchedule read_uc_csv_file(const std::filesystem::path& path, const Network& net) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open UC file {}", path.string()));
  try {
    return read_uc_csv(in, net);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.detail()));
  }
}

void write_uc_csv(std::ostream& out, const UcSchedule& uc) {
  out << "period,generator,on\n";
  const int horizon = uc.on.empty() ? 0 : static_cast<int>(uc.on.front().size());
  for (int t = 0; t < horizon; ++t) {
    for (std::size_t g = 0; g < uc.on.size(); ++g) {
      out << (t + 1) << ',' << (g + 1) << ',' << uc.on[g][t] << '\n';
    }
  }
}

}  // namespace windadm::grid
