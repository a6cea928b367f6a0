#include "ltscm/param_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ltscm {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw InternalError("format_double: to_chars failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError("not a number: '" + std::string(token) + "'");
  return v;
}

namespace {

template <class Int>
Int parse_int(std::string_view token, int line_no) {
  Int v{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError("snapshot line " + std::to_string(line_no) + ": bad integer '" +
                     std::string(token) + "'");
  return v;
}

std::string_view strip_prefix(std::string_view token, std::string_view prefix, int line_no) {
  if (token.substr(0, prefix.size()) != prefix)
    throw ParseError("snapshot line " + std::to_string(line_no) + ": expected '" +
                     std::string(prefix) + "...'");
  return token.substr(prefix.size());
}

}  // namespace

void write_snapshot(std::ostream& out, const ParamStore& store) {
  out << "ltscm-params v1 A=" << store.num_actions() << " eps_low=" << format_double(store.eps_low())
      << '\n';
  for (std::size_t i = 0; i < store.size(); ++i) {
    ContextKey k = store.key_at(i);
    out << k.mutex_set_id() << ' ' << k.pattern_code();
    for (double w : store.block_at(i)) out << ' ' << format_double(w);
    out << '\n';
  }
}

ParamStore read_snapshot(std::istream& in, double eps_mix) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("snapshot: missing header");
  std::istringstream header(line);
  std::string magic, version, a_tok, eps_tok;
  header >> magic >> version >> a_tok >> eps_tok;
  if (magic != "ltscm-params" || version != "v1")
    throw ParseError("snapshot: unsupported header '" + line + "'");
  const int A = parse_int<int>(strip_prefix(a_tok, "A=", 1), 1);
  double eps_low;
  try {
    eps_low = parse_double(strip_prefix(eps_tok, "eps_low=", 1));
  } catch (const ParseError& e) {
    throw ParseError(std::string("snapshot header: ") + e.what());
  }
  ParamStore store(A, eps_low, eps_mix);

  std::vector<double> w(A);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tok;
    std::vector<std::string> toks;
    while (fields >> tok) toks.push_back(tok);
    if (toks.size() != static_cast<std::size_t>(A) + 2)
      throw ParseError("snapshot line " + std::to_string(line_no) + ": expected " +
                       std::to_string(A + 2) + " fields");
    auto mutex_id = parse_int<std::uint32_t>(toks[0], line_no);
    auto pattern = parse_int<std::uint64_t>(toks[1], line_no);
    for (int a = 0; a < A; ++a) {
      try {
        w[a] = parse_double(toks[a + 2]);
      } catch (const ParseError& e) {
        throw ParseError("snapshot line " + std::to_string(line_no) + ": " + e.what());
      }
      if (!store.in_range(w[a]))
        throw ParseError("snapshot line " + std::to_string(line_no) + ": weight " + toks[a + 2] +
                         " outside [ln eps_low, 0]");
    }
    ContextKey key;
    try {
      key = ContextKey(mutex_id, pattern);
    } catch (const ContractViolation& e) {
      throw ParseError("snapshot line " + std::to_string(line_no) + ": " + e.what());
    }
    if (store.contains(key))
      throw ParseError("snapshot line " + std::to_string(line_no) + ": duplicate context");
    store.set_block(key, w);
  }
  return store;
}

void save_snapshot(const std::filesystem::path& path, const ParamStore& store) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write snapshot " + path.string());
  write_snapshot(out, store);
}

ParamStore load_snapshot(const std::filesystem::path& path, double eps_mix) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read snapshot " + path.string());
  return read_snapshot(in, eps_mix);
}

}  // namespace ltscm
