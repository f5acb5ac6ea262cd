#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fracbv/denoise.hpp"

namespace fracbv {

/// Settings shared by every command. Defaults match the library defaults.
struct RunConfig {
  // [problem]
  Variant variant = Variant::riesz;
  double alpha = 0.5;
  double beta = 0.1;
  double gamma = 1.0;
  double p = 2.0;
  std::string input;
  std::string domain;  // optional domain description file

  // [solver]
  double tol = 1e-6;
  int max_iter = 5000;
  std::uint64_t seed = 12345;
  bool accelerate = true;
  int check_every = 5;

  // [grid]
  double padding_factor = 4.0;
  int riesz_margin = 8;
  PairQuadrature quadrature = PairQuadrature::cell_average;
};

/// Parses `key = value` lines under [problem], [solver] and [grid].
/// Blank lines and lines starting with '#' or ';' are ignored.
/// Unknown sections or keys throw ParseError.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig read_config(const std::string& path, RunConfig base = {});

/// Sets one value by its bare key name, e.g. ("beta", "0.2").
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Stable text form of every field, one `section.key = value` per line.
std::string canonical_config(const RunConfig& cfg);

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t v);

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);

}  // namespace fracbv
