#pragma once

// Versioned problem files, one instance per line.
//
//   ltscm-stp v1 size=<n>          then: <tile at cell 0> ... <tile at cell n*n-1>
//   ltscm-cube v1                  then: scramble moves ("U R' F ..."), "-" if empty

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ltscm/domains/cube.hpp"
#include "ltscm/domains/stp.hpp"

namespace ltscm {

void write_stp_problems(std::ostream& out, std::span<const StpProblem> problems);
std::vector<StpProblem> read_stp_problems(std::istream& in);
void save_stp_problems(const std::filesystem::path& path, std::span<const StpProblem> problems);
std::vector<StpProblem> load_stp_problems(const std::filesystem::path& path);

void write_cube_problems(std::ostream& out, std::span<const CubeProblem> problems);
std::vector<CubeProblem> read_cube_problems(std::istream& in);
void save_cube_problems(const std::filesystem::path& path, std::span<const CubeProblem> problems);
std::vector<CubeProblem> load_cube_problems(const std::filesystem::path& path);

}  // namespace ltscm
