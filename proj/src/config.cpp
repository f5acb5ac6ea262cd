#include "fracbv/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fracbv/error.hpp"

namespace fracbv {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw InvalidArgument("config: " + key + " expects a number, got '" + v + "'");
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw InvalidArgument("config: " + key + " expects an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("config: " + key + " expects true or false, got '" + v + "'");
}

const std::map<std::string, std::string>& key_sections() {
  static const std::map<std::string, std::string> table = {
      {"variant", "problem"},      {"alpha", "problem"},         {"beta", "problem"},
      {"gamma", "problem"},        {"p", "problem"},             {"input", "problem"},
      {"domain", "problem"},       {"tol", "solver"},            {"max_iter", "solver"},
      {"seed", "solver"},          {"accelerate", "solver"},     {"check_every", "solver"},
      {"padding_factor", "grid"},  {"riesz_margin", "grid"},     {"quadrature", "grid"},
  };
  return table;
}

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string variant_name(Variant v) { return v == Variant::riesz ? "riesz" : "gagliardo"; }

Variant parse_variant(const std::string& s) {
  if (s == "riesz") return Variant::riesz;
  if (s == "gagliardo") return Variant::gagliardo;
  throw InvalidArgument("unknown variant '" + s + "' (riesz|gagliardo)");
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "variant") cfg.variant = parse_variant(value);
  else if (key == "alpha") cfg.alpha = to_real(key, value);
  else if (key == "beta") cfg.beta = to_real(key, value);
  else if (key == "gamma") cfg.gamma = to_real(key, value);
  else if (key == "p") cfg.p = to_real(key, value);
  else if (key == "input") cfg.input = value;
  else if (key == "domain") cfg.domain = value;
  else if (key == "tol") cfg.tol = to_real(key, value);
  else if (key == "max_iter") cfg.max_iter = static_cast<int>(to_integer(key, value));
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_integer(key, value));
  else if (key == "accelerate") cfg.accelerate = to_bool(key, value);
  else if (key == "check_every") cfg.check_every = static_cast<int>(to_integer(key, value));
  else if (key == "padding_factor") cfg.padding_factor = to_real(key, value);
  else if (key == "riesz_margin") cfg.riesz_margin = static_cast<int>(to_integer(key, value));
  else if (key == "quadrature") {
    if (value == "point") cfg.quadrature = PairQuadrature::point;
    else if (value == "cell_average") cfg.quadrature = PairQuadrature::cell_average;
    else throw InvalidArgument("config: quadrature must be point or cell_average");
  } else {
    throw InvalidArgument("config: unknown key '" + key + "'");
  }
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::string section;
  std::size_t offset = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    const std::size_t line_start = offset;
    offset += raw.size() + 1;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("config: unterminated section header", line_start);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "problem" && section != "solver" && section != "grid") {
        throw ParseError("config: unknown section [" + section + "]", line_start);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config: expected key = value", line_start);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = key_sections().find(key);
    if (it == key_sections().end()) throw ParseError("config: unknown key '" + key + "'", line_start);
    if (section.empty()) throw ParseError("config: key '" + key + "' outside a section", line_start);
    if (it->second != section) {
      throw ParseError("config: key '" + key + "' belongs in [" + it->second + "]", line_start);
    }
    try {
      set_config_value(base, key, value);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), line_start);
    }
  }
  return base;
}

RunConfig read_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string canonical_config(const RunConfig& c) {
  std::ostringstream o;
  o << "grid.padding_factor = " << real_text(c.padding_factor) << "\n"
    << "grid.quadrature = " << (c.quadrature == PairQuadrature::point ? "point" : "cell_average") << "\n"
    << "grid.riesz_margin = " << c.riesz_margin << "\n"
    << "problem.alpha = " << real_text(c.alpha) << "\n"
    << "problem.beta = " << real_text(c.beta) << "\n"
    << "problem.domain = " << c.domain << "\n"
    << "problem.gamma = " << real_text(c.gamma) << "\n"
    << "problem.input = " << c.input << "\n"
    << "problem.p = " << real_text(c.p) << "\n"
    << "problem.variant = " << variant_name(c.variant) << "\n"
    << "solver.accelerate = " << (c.accelerate ? "true" : "false") << "\n"
    << "solver.check_every = " << c.check_every << "\n"
    << "solver.max_iter = " << c.max_iter << "\n"
    << "solver.seed = " << c.seed << "\n"
    << "solver.tol = " << real_text(c.tol) << "\n";
  return o.str();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace fracbv
