#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlab/classes.hpp"
#include "rlab/eval.hpp"
#include "rlab/priority.hpp"
#include "rlab/program.hpp"
#include "rlab/re_sets.hpp"
#include "rlab/suites.hpp"

using nlohmann::json;
using rlab::Nat;

namespace {

json nj(const Nat& n) {
  if (auto v = n.to_u64()) return *v;
  return n.to_string();
}

json set_json(const rlab::FinSet& s) {
  json out = json::array();
  for (const Nat& x : s) out.push_back(nj(x));
  return out;
}

// A program is given either as its decimal index or as program text.
Nat program_arg(const std::string& text) {
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) return Nat::from_string(text);
  return rlab::encode(rlab::parse_program(text));
}

std::uint64_t fuel_cap() {
  const char* env = std::getenv("RLAB_FUEL_CAP");
  if (!env || !*env) return UINT64_MAX;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    std::cerr << "ignoring malformed RLAB_FUEL_CAP\n";
    return UINT64_MAX;
  }
}

std::uint64_t capped(std::uint64_t v) { return std::min(v, fuel_cap()); }

rlab::prio::Schedule parse_schedule(const std::string& text) {
  rlab::prio::Schedule out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(item, &used);
    if (used != item.size() || v == 0) throw std::invalid_argument("schedule entries are positive integers");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty schedule");
  return out;
}

struct ConstructArgs {
  std::string name;
  std::uint64_t stages = 10000;
  std::uint64_t max_req = 6;
  std::uint64_t i = 1, j = 2;
  std::uint64_t requirements = 8;
  std::string schedule = "2,3";
  std::string out;
};

void write_construction(const ConstructArgs& a, std::ostream& os) {
  const std::uint64_t stages = capped(a.stages);
  if (a.name == "post-simple") {
    const auto r = rlab::cls::post_simple_run(stages);
    for (const auto& [x, e] : r.provenance) {
      os << json{{"stage", stages}, {"event", "placed"}, {"requirement", "R" + e.to_string()}, {"data", {{"x", nj(x)}}}}.dump()
         << '\n';
    }
    os << json{{"final", {{"construction", a.name}, {"stage", stages}, {"A", set_json(r.elements)}}}}.dump() << '\n';
    return;
  }
  if (a.name == "simple-dweu") {
    const auto r = rlab::cls::simple_dweu(stages);
    for (const auto& [x, er] : r.provenance) {
      os << json{{"stage", stages},
                 {"event", "placed"},
                 {"requirement", "R" + er.first.to_string()},
                 {"data", {{"x", nj(x)}, {"rule", er.second}}}}
                .dump()
         << '\n';
    }
    os << json{{"final", {{"construction", a.name}, {"stage", stages}, {"A", set_json(r.elements)}}}}.dump() << '\n';
    return;
  }
  rlab::prio::PriorityState st;
  rlab::prio::WatchOptions wo;
  wo.requirements = a.requirements;
  if (a.name == "fm") {
    st = rlab::prio::fm_run(a.max_req, stages);
  } else if (a.name == "fm-reordered") {
    st = rlab::prio::fm_reordered_run(parse_schedule(a.schedule), stages);
  } else if (a.name == "ijd") {
    st = rlab::prio::ijd_run(a.i, a.j, stages, wo);
  } else if (a.name == "dnotnd") {
    st = rlab::prio::dnotnd_run(stages, wo);
  } else {
    throw std::invalid_argument("unknown construction: " + a.name);
  }
  for (const auto& ev : st.log) os << rlab::prio::to_json_line(ev) << '\n';
  os << json{{"final", rlab::prio::state_json(st)}, {"report", rlab::prio::report_json(rlab::prio::requirement_report(st))}}.dump()
     << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rlab: programs, oracles, r.e. sets and priority constructions"};
  app.require_subcommand(1);

  std::string prog_text;
  std::vector<std::string> eval_args;
  std::uint64_t fuel = 100000;
  auto* eval_cmd = app.add_subcommand("eval", "run a program on arguments with a fuel budget");
  eval_cmd->add_option("program", prog_text, "program text or decimal index")->required();
  eval_cmd->add_option("args", eval_args, "decimal arguments");
  eval_cmd->add_option("--fuel", fuel, "step budget");

  std::string enum_prog;
  std::uint64_t enum_stage = 1000, window = 64;
  auto* enum_cmd = app.add_subcommand("enum", "list W_{e,s} restricted to a window, one JSON line per element");
  enum_cmd->add_option("e", enum_prog, "program text or decimal index")->required();
  enum_cmd->add_option("--stage", enum_stage, "stage s");
  enum_cmd->add_option("--window", window, "only x below this");

  ConstructArgs ca;
  auto* con_cmd = app.add_subcommand("construct", "run a construction and write its trace as JSON lines");
  con_cmd->add_option("name", ca.name, "post-simple, simple-dweu, fm, fm-reordered, ijd or dnotnd")
      ->required()
      ->check(CLI::IsMember({"post-simple", "simple-dweu", "fm", "fm-reordered", "ijd", "dnotnd"}));
  con_cmd->add_option("--stages", ca.stages, "number of stages");
  con_cmd->add_option("--max-req", ca.max_req, "fm: requirements a_0..a_n, b_0..b_n");
  con_cmd->add_option("--i", ca.i, "ijd: i");
  con_cmd->add_option("--j", ca.j, "ijd: j");
  con_cmd->add_option("--requirements", ca.requirements, "ijd/dnotnd: number of N requirements");
  con_cmd->add_option("--schedule", ca.schedule, "fm-reordered: comma-separated block sizes");
  con_cmd->add_option("--out", ca.out, "write the trace here instead of stdout");

  std::string suite;
  std::uint64_t verify_stages = 10000;
  auto* ver_cmd = app.add_subcommand("verify", "check the invariant suites, one JSON line per contract");
  ver_cmd->add_option("suite", suite, "lambda, ips, re, classes, priority or all")->required();
  ver_cmd->add_option("--stages", verify_stages, "stages for construction contracts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*eval_cmd) {
      Nat e;
      try {
        e = program_arg(prog_text);
      } catch (const rlab::ParseError& pe) {
        std::cerr << "parse error: " << pe.what() << '\n';
        return 1;
      }
      std::vector<Nat> args;
      for (const auto& a : eval_args) args.push_back(Nat::from_string(a));
      const auto o = rlab::eval(e, args, capped(fuel));
      if (!o.converged()) {
        std::cout << json{{"status", "out-of-fuel"}, {"steps", o.steps}}.dump() << '\n';
        return 2;
      }
      std::cout << json{{"status", "converged"}, {"value", nj(o.value)}, {"steps", o.steps}, {"use", nj(o.use)}}.dump()
                << '\n';
      return 0;
    }
    if (*enum_cmd) {
      Nat e;
      try {
        e = program_arg(enum_prog);
      } catch (const rlab::ParseError& pe) {
        std::cerr << "parse error: " << pe.what() << '\n';
        return 1;
      }
      const std::uint64_t s = capped(enum_stage);
      for (std::uint64_t x = 0; x < window; ++x) {
        if (rlab::re::w_mem(e, Nat(x), s)) std::cout << json{{"e", nj(e)}, {"stage", s}, {"x", x}}.dump() << '\n';
      }
      return 0;
    }
    if (*con_cmd) {
      if (ca.out.empty()) {
        write_construction(ca, std::cout);
      } else {
        std::ofstream f(ca.out, std::ios::binary);
        if (!f) {
          std::cerr << "cannot open " << ca.out << '\n';
          return 1;
        }
        write_construction(ca, f);
      }
      return 0;
    }
    if (*ver_cmd) {
      rlab::suites::Options opts;
      opts.fuel_cap = fuel_cap();
      opts.stages = verify_stages;
      const auto rows = rlab::suites::run_suite(suite, opts);
      std::size_t bad = 0;
      for (const auto& r : rows) {
        std::cout << rlab::suites::row_json(r).dump() << '\n';
        if (!r.ok()) ++bad;
      }
      std::cout << json{{"suite", suite}, {"rows", rows.size()}, {"violated", bad}}.dump() << '\n';
      return bad == 0 ? 0 : 3;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}
