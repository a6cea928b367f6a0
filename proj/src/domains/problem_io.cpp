#include "ltscm/domains/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace ltscm {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

}  // namespace

void write_stp_problems(std::ostream& out, std::span<const StpProblem> problems) {
  const int size = problems.empty() ? 3 : problems.front().size;
  out << "ltscm-stp v1 size=" << size << '\n';
  for (const auto& p : problems) {
    if (p.size != size) throw ContractViolation("write_stp_problems: mixed board sizes");
    for (std::size_t i = 0; i < p.tiles.size(); ++i) out << (i ? " " : "") << int{p.tiles[i]};
    out << '\n';
  }
}

std::vector<StpProblem> read_stp_problems(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("stp file: missing header");
  int size = 0;
  if (std::sscanf(line.c_str(), "ltscm-stp v1 size=%d", &size) != 1 || size < 2 || size > 5)
    throw ParseError("stp file: bad header '" + line + "'");
  std::vector<StpProblem> out;
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    StpProblem p{size, {}};
    int v;
    while (fields >> v) {
      if (v < 0 || v >= size * size) throw ParseError("stp file line " + std::to_string(ln) + ": tile out of range");
      p.tiles.push_back(static_cast<std::uint8_t>(v));
    }
    if (!fields.eof()) throw ParseError("stp file line " + std::to_string(ln) + ": not an integer");
    try {
      validate_stp(p);
    } catch (const ContractViolation& e) {
      throw ParseError("stp file line " + std::to_string(ln) + ": " + e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

void save_stp_problems(const std::filesystem::path& path, std::span<const StpProblem> problems) {
  auto out = open_out(path);
  write_stp_problems(out, problems);
}

std::vector<StpProblem> load_stp_problems(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_stp_problems(in);
}

void write_cube_problems(std::ostream& out, std::span<const CubeProblem> problems) {
  out << "ltscm-cube v1\n";
  for (const auto& p : problems) out << format_cube_moves(p.scramble) << '\n';
}

std::vector<CubeProblem> read_cube_problems(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ltscm-cube v1", 0) != 0)
    throw ParseError("cube file: bad or missing header");
  std::vector<CubeProblem> out;
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      out.push_back({parse_cube_moves(line)});
    } catch (const ParseError& e) {
      throw ParseError("cube file line " + std::to_string(ln) + ": " + e.what());
    }
  }
  return out;
}

void save_cube_problems(const std::filesystem::path& path, std::span<const CubeProblem> problems) {
  auto out = open_out(path);
  write_cube_problems(out, problems);
}

std::vector<CubeProblem> load_cube_problems(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_cube_problems(in);
}

}  // namespace ltscm
