#include "rlab/machines.hpp"

#include <sstream>

namespace rlab::machines {

namespace {

std::uint32_t parse_index(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
    throw ParseError("bad number '" + tok + "' on line " + std::to_string(line), line);
  }
}

}  // namespace

TmProgram parse_tm(std::string_view text) {
  struct Row {
    std::uint32_t state, bit;
    Action action;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::uint32_t states = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() < 4 || tok[2] != "->") throw ParseError("expected 's b -> ...' on line " + std::to_string(line_no), line_no);
    Row row{parse_index(tok[0], line_no), parse_index(tok[1], line_no), {}, line_no};
    if (row.bit > 1) throw ParseError("bit must be 0 or 1 on line " + std::to_string(line_no), line_no);
    if (tok.size() == 4 && tok[3] == "STOP") {
      row.action.stop = true;
    } else if (tok.size() == 6) {
      row.action.stop = false;
      if (tok[3] != "0" && tok[3] != "1") throw ParseError("written bit must be 0 or 1 on line " + std::to_string(line_no), line_no);
      row.action.write = tok[3] == "1";
      if (tok[4] != "L" && tok[4] != "R") throw ParseError("move must be L or R on line " + std::to_string(line_no), line_no);
      row.action.move = tok[4] == "L" ? Move::Left : Move::Right;
      row.action.next = parse_index(tok[5], line_no);
      states = std::max(states, row.action.next + 1);
    } else {
      throw ParseError("malformed action on line " + std::to_string(line_no), line_no);
    }
    states = std::max(states, row.state + 1);
    rows.push_back(row);
  }
  TmProgram p;
  p.table.resize(states);
  std::vector<std::array<bool, 2>> seen(states, {false, false});
  for (const Row& r : rows) {
    if (seen[r.state][r.bit]) throw ParseError("duplicate transition on line " + std::to_string(r.line), r.line);
    seen[r.state][r.bit] = true;
    p.table[r.state][r.bit] = r.action;
  }
  for (std::uint32_t s = 0; s < states; ++s) {
    for (std::uint32_t b = 0; b < 2; ++b) {
      if (!seen[s][b]) throw ParseError("missing transition for state " + std::to_string(s) + " bit " + std::to_string(b), 0);
    }
  }
  return p;
}

std::string print_tm(const TmProgram& p) {
  std::ostringstream os;
  for (std::uint32_t s = 0; s < p.states(); ++s) {
    for (std::uint32_t b = 0; b < 2; ++b) {
      const Action& a = p.table[s][b];
      os << s << ' ' << b << " -> ";
      if (a.stop) {
        os << "STOP\n";
      } else {
        os << (a.write ? 1 : 0) << ' ' << (a.move == Move::Left ? 'L' : 'R') << ' ' << a.next << '\n';
      }
    }
  }
  return os.str();
}

TmOutcome tm_run(const TmProgram& p, std::uint64_t n, std::uint64_t fuel) {
  TmOutcome out;
  TmConfiguration& c = out.final;
  for (std::uint64_t i = 1; i <= n; ++i) c.ones.insert(static_cast<std::int64_t>(i));
  while (c.state < p.states()) {
    const bool bit = c.ones.count(c.head) > 0;
    const Action& a = p.table[c.state][bit ? 1 : 0];
    if (a.stop) {
      c.halted = true;
      break;
    }
    if (out.steps == fuel) return out;
    ++out.steps;
    if (a.write) {
      c.ones.insert(c.head);
    } else {
      c.ones.erase(c.head);
    }
    c.head += a.move == Move::Left ? -1 : 1;
    c.state = a.next;
  }
  // a machine with no states stops at once
  c.halted = true;
  std::uint64_t block = 0;
  while (c.ones.count(c.head + 1 + static_cast<std::int64_t>(block))) ++block;
  const std::size_t under_head = c.ones.count(c.head);
  out.kind = c.ones.size() == block + under_head ? TmOutcome::Kind::Converged : TmOutcome::Kind::Malformed;
  out.value = Nat(block);
  return out;
}

Nat ackermann(std::uint64_t m, std::uint64_t n) {
  if (m > 3 || n > 10) throw RangeExceeded("ackermann is guarded to m <= 3, n <= 10");
  // explicit stack of pending m-values instead of native recursion
  std::vector<std::uint64_t> stack{m};
  std::uint64_t v = n;
  while (!stack.empty()) {
    const std::uint64_t mm = stack.back();
    stack.pop_back();
    if (mm == 0) {
      v += 1;
    } else if (v == 0) {
      stack.push_back(mm - 1);
      v = 1;
    } else {
      stack.push_back(mm - 1);
      stack.push_back(mm);
      v -= 1;
    }
  }
  return Nat(v);
}

}  // namespace rlab::machines
