#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "windadm/grid/network.hpp"

namespace windadm::grid {

struct Case {
  Network network;
  PriceSchedule prices;
};

// Parses the case document. The horizon T is taken from the first load's
// demand series (or the first farm's forecast when there are no loads).
// Price entries may be a scalar (constant over the horizon) or a T-array.
Case load_case(const nlohmann::json& doc);
Case load_case_file(const std::filesystem::path& path);

// Inverse of load_case: every series is written out at full length.
nlohmann::json case_to_json(const Case& c);

// CSV with header `period,generator,on`; periods and generators are 1-based.
// Every (generator, period) pair must appear exactly once.
UcSchedule read_uc_csv(std::istream& in, const Network& net);
UcSchedule read_uc_csv_file(const std::filesystem::path& path, const Network& net);
void write_uc_csv(std::ostream& out, const UcSchedule& uc);

}  // namespace windadm::grid
