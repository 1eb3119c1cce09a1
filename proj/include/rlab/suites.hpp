#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

// Invariant suites per module, shared by the command-line verifier and the
// acceptance run. Each row is one contract on one instance.
namespace rlab::suites {

struct Options {
  // global safety cap on every fuel budget
  std::uint64_t fuel_cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t stages = 10000;
  std::uint64_t fuel(std::uint64_t wanted) const { return wanted < fuel_cap ? wanted : fuel_cap; }
};

struct Row {
  std::string contract;
  std::string instance;
  std::uint64_t stage = 0;
  std::string verdict;  // holds, violated, vacuous, inconclusive
  std::string detail;
  bool ok() const { return verdict != "violated"; }
};

const std::vector<std::string>& suite_names();  // lambda, ips, re, classes, priority
// Throws std::invalid_argument for an unknown name; "all" runs every suite.
std::vector<Row> run_suite(std::string_view name, const Options& opts = {});
nlohmann::json row_json(const Row& r);

}  // namespace rlab::suites
