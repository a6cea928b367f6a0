#pragma once

// Parameter snapshot, a versioned line-oriented text file:
//
//   ltscm-params v1 A=<int> eps_low=<real>
//   <mutex_set_id> <pattern_code> <w_0> ... <w_{A-1}>
//   ...
//
// Weights are written in shortest round-trip form, so save/load is exact.

#include <filesystem>
#include <iosfwd>

#include "ltscm/policy.hpp"

namespace ltscm {

void write_snapshot(std::ostream& out, const ParamStore& store);
// eps_mix is not part of the file; the loaded store gets the value given here.
ParamStore read_snapshot(std::istream& in, double eps_mix = kDefaultEpsMix);

void save_snapshot(const std::filesystem::path& path, const ParamStore& store);
ParamStore load_snapshot(const std::filesystem::path& path, double eps_mix = kDefaultEpsMix);

// Shortest representation that parses back to the same double.
std::string format_double(double v);
// Strict full-token parse; throws ParseError.
double parse_double(std::string_view token);

}  // namespace ltscm
