#pragma once

// Named, self-checking scenarios for the worked examples. Each scenario parses
// its embedded input through the JSON layer, runs, and reports its checks.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "affinekit/io.hpp"

namespace affinekit::cookbook {

struct Options {
  std::uint64_t seed = 1;
  std::uint64_t samples = 0;  // 0: the scenario's default
};

struct Scenario {
  std::string name;
  std::string summary;
  std::string input;  // JSON text, empty when the scenario has no input file
  std::function<io::Json(const io::Json& input, const Options&)> run;
};

const std::vector<Scenario>& scenarios();
const Scenario& find(const std::string& name);

/// {"scenario", "summary", "result", "checks", "pass"}
io::Json run(const Scenario& s, const Options& opt);

}  // namespace affinekit::cookbook
