#include "rlab/program.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace rlab {

namespace {

constexpr std::array<OpInfo, static_cast<std::size_t>(Op::Count_)> kOps{{
    {Op::Add, "add", false, 2},
    {Op::Monus, "monus", false, 2},
    {Op::Mul, "mul", false, 2},
    {Op::Div, "div", false, 2},
    {Op::Mod, "mod", false, 2},
    {Op::Eq, "eq", false, 2},
    {Op::Lt, "lt", false, 2},
    {Op::Select, "select", false, 3},
    {Op::Sg, "sg", false, 1},
    {Op::Pair, "pair", false, 2},
    {Op::Left, "left", false, 1},
    {Op::Right, "right", false, 1},
    {Op::Bit, "bit", false, 2},
    {Op::SetBit, "setbit", false, 2},
    {Op::Card, "card", false, 1},
    {Op::ListGet, "lget", false, 2},
    {Op::ListLen, "llen", false, 1},
    {Op::ListCons, "lcons", false, 2},
    {Op::ListMake, "lmake", true, 0},
    {Op::Univ, "univ", true, 1},
    {Op::StepEval, "stepeval", true, 2},
    {Op::StepRel, "steprel", true, 3},
    {Op::UnivRel, "univrel", true, 2},
    {Op::Smn, "smn", true, 1},
    {Op::SeqAdd, "sadd", false, 2},
    {Op::SeqHas, "shas", false, 2},
    {Op::SeqLen, "slen", false, 1},
    {Op::SeqGet, "sget", false, 2},
    {Op::IvHas, "ihas", false, 2},
    {Op::IvCard, "icard", false, 1},
    {Op::IvGet, "iget", false, 2},
}};

constexpr std::uint32_t kMaxParam = 64;
constexpr std::uint32_t kMaxProj = 1U << 16;
constexpr std::uint32_t kMaxDecodeDepth = 20000;

std::shared_ptr<Node> make(Tag tag) {
  auto n = std::make_shared<Node>();
  n->tag = tag;
  return n;
}

void finish(Node& n) {
  n.size = 1;
  n.depth = 1;
  for (const auto& kid : n.kids) {
    n.size += kid->size;
    n.depth = std::max(n.depth, kid->depth + 1);
  }
}

// ---- bit strings -------------------------------------------------------

class BitWriter {
 public:
  void gamma(const Nat& t) {
    const Nat v = t + 1;
    const std::uint64_t len = v.bit_length();
    bits_.append(len - 1, '0');
    if (v.is_small()) {
      for (std::uint64_t b = len; b-- > 0;) bits_.push_back(v.test_bit(b) ? '1' : '0');
    } else {
      bits_ += v.to_mpz().get_str(2);
    }
  }
  void gamma(std::uint64_t t) { gamma(Nat(t)); }

  // Elias delta: gamma of the length, then the bits below the leading one.
  // Literals are often indices of other programs, so their cost stays near 1x.
  void delta(const Nat& t) {
    const Nat v = t + 1;
    const std::uint64_t len = v.bit_length();
    gamma(len - 1);
    if (v.is_small()) {
      for (std::uint64_t b = len - 1; b-- > 0;) bits_.push_back(v.test_bit(b) ? '1' : '0');
    } else {
      bits_ += v.to_mpz().get_str(2).substr(1);
    }
  }

  Nat finish() const {
    // bijective base 2: the string s denotes (1s)_2 - 1
    if (bits_.size() < 63) {
      std::uint64_t v = 1;
      for (char c : bits_) v = (v << 1) | (c == '1' ? 1U : 0U);
      return Nat(v - 1);
    }
    mpz_class v(std::string("1") + bits_, 2);
    return Nat(v) - 1;
  }

 private:
  std::string bits_;
};

class BitReader {
 public:
  explicit BitReader(const Nat& code) {
    const Nat v = code + 1;
    if (v.is_small()) {
      const std::uint64_t len = v.bit_length();
      for (std::uint64_t b = len - 1; b-- > 0;) bits_.push_back(v.test_bit(b) ? '1' : '0');
    } else {
      bits_ = v.to_mpz().get_str(2).substr(1);
    }
  }

  std::optional<Nat> gamma() {
    std::size_t zeros = 0;
    while (pos_ < bits_.size() && bits_[pos_] == '0') {
      ++zeros;
      ++pos_;
    }
    if (pos_ + zeros + 1 > bits_.size()) return std::nullopt;
    Nat v;
    if (zeros < 63) {
      std::uint64_t w = 0;
      for (std::size_t j = 0; j <= zeros; ++j) w = (w << 1) | (bits_[pos_ + j] == '1' ? 1U : 0U);
      v = Nat(w);
    } else {
      v = Nat(mpz_class(bits_.substr(pos_, zeros + 1), 2));
    }
    pos_ += zeros + 1;
    return v - 1;
  }

  std::optional<Nat> delta() {
    auto len = gamma();
    if (!len) return std::nullopt;
    auto n = len->to_u64();
    if (!n || *n > bits_.size() - pos_) return std::nullopt;
    Nat v;
    if (*n < 63) {
      std::uint64_t w = 1;
      for (std::size_t j = 0; j < *n; ++j) w = (w << 1) | (bits_[pos_ + j] == '1' ? 1U : 0U);
      v = Nat(w);
    } else {
      v = Nat(mpz_class("1" + bits_.substr(pos_, *n), 2));
    }
    pos_ += *n;
    return v - 1;
  }

  std::optional<std::uint32_t> small(std::uint32_t cap) {
    auto t = gamma();
    if (!t) return std::nullopt;
    auto v = t->to_u64();
    if (!v || *v > cap) return std::nullopt;
    return static_cast<std::uint32_t>(*v);
  }

 private:
  std::string bits_;
  std::size_t pos_ = 0;
};

void write(BitWriter& w, const Node& n) {
  w.gamma(static_cast<std::uint64_t>(n.tag));
  switch (n.tag) {
    case Tag::Zero:
    case Tag::Succ:
    case Tag::Oracle:
      break;
    case Tag::Proj:
      w.gamma(n.k);
      w.gamma(n.i);
      break;
    case Tag::Comp:
      w.gamma(n.kids.size() - 1);
      for (const auto& kid : n.kids) write(w, *kid);
      break;
    case Tag::PrimRec:
    case Tag::Mu:
      write(w, *n.kids[0]);
      break;
    case Tag::Const:
      w.delta(n.value);
      break;
    case Tag::Builtin:
      w.gamma(static_cast<std::uint64_t>(n.op));
      w.gamma(n.k);
      break;
  }
}

std::optional<Program> read(BitReader& r, std::uint32_t depth) {
  if (depth > kMaxDecodeDepth) return std::nullopt;
  auto tag = r.small(static_cast<std::uint32_t>(Tag::Builtin));
  if (!tag) return std::nullopt;
  switch (static_cast<Tag>(*tag)) {
    case Tag::Zero:
      return zero();
    case Tag::Succ:
      return succ();
    case Tag::Oracle:
      return oracle();
    case Tag::Proj: {
      auto k = r.small(kMaxProj);
      auto i = r.small(kMaxProj);
      if (!k || !i || *i < 1 || *i > *k) return std::nullopt;
      return proj(*k, *i);
    }
    case Tag::Comp: {
      auto n = r.small(kMaxProj);
      if (!n) return std::nullopt;
      auto h = read(r, depth + 1);
      if (!h) return std::nullopt;
      std::vector<Program> gs;
      for (std::uint32_t j = 0; j < *n; ++j) {
        auto g = read(r, depth + 1);
        if (!g) return std::nullopt;
        gs.push_back(std::move(*g));
      }
      return comp(std::move(*h), std::move(gs));
    }
    case Tag::PrimRec:
    case Tag::Mu: {
      auto g = read(r, depth + 1);
      if (!g) return std::nullopt;
      return static_cast<Tag>(*tag) == Tag::Mu ? mu(std::move(*g)) : primrec(std::move(*g));
    }
    case Tag::Const: {
      auto c = r.delta();
      if (!c) return std::nullopt;
      return konst(*c);
    }
    case Tag::Builtin: {
      auto op = r.small(static_cast<std::uint32_t>(Op::Count_) - 1);
      auto param = r.small(kMaxParam);
      if (!op || !param) return std::nullopt;
      if (!op_info(static_cast<Op>(*op)).parametric && *param != 0) return std::nullopt;
      return builtin(static_cast<Op>(*op), *param);
    }
  }
  return std::nullopt;
}

// ---- s-expressions -----------------------------------------------------

class SexprParser {
 public:
  explicit SexprParser(std::string_view text) : text_(text) {}

  Program parse_all() {
    Program p = parse();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("trailing input after program", pos_);
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view atom() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      ++pos_;
    }
    if (start == pos_) throw ParseError("expected an atom", pos_);
    return text_.substr(start, pos_ - start);
  }

  Nat number() {
    const std::size_t at = (skip_ws(), pos_);
    const std::string_view a = atom();
    try {
      return Nat::from_string(a);
    } catch (const std::invalid_argument&) {
      throw ParseError("expected a natural number, got '" + std::string(a) + "'", at);
    }
  }

  std::uint32_t small_number(std::uint32_t cap) {
    const std::size_t at = (skip_ws(), pos_);
    const Nat n = number();
    auto v = n.to_u64();
    if (!v || *v > cap) throw ParseError("number out of range", at);
    return static_cast<std::uint32_t>(*v);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  Program parse() {
    expect('(');
    const std::size_t head_at = (skip_ws(), pos_);
    const std::string_view head = atom();
    Program out;
    if (head == "zero") {
      out = zero();
    } else if (head == "succ") {
      out = succ();
    } else if (head == "oracle") {
      out = oracle();
    } else if (head == "proj") {
      const std::uint32_t k = small_number(kMaxProj);
      const std::size_t at = pos_;
      const std::uint32_t i = small_number(kMaxProj);
      if (i < 1 || i > k) throw ParseError("projection index must satisfy 1 <= i <= k", at);
      out = proj(k, i);
    } else if (head == "comp") {
      Program h = parse();
      std::vector<Program> gs;
      while (!peek(')')) gs.push_back(parse());
      out = comp(std::move(h), std::move(gs));
    } else if (head == "primrec") {
      out = primrec(parse());
    } else if (head == "mu") {
      out = mu(parse());
    } else if (head == "const") {
      out = konst(number());
    } else if (auto op = op_by_name(head)) {
      std::uint32_t param = 0;
      if (op_info(*op).parametric) param = small_number(kMaxParam);
      out = builtin(*op, param);
    } else {
      throw ParseError("unknown program form '" + std::string(head) + "'", head_at);
    }
    expect(')');
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print(std::ostringstream& os, const Node& n) {
  switch (n.tag) {
    case Tag::Zero:
      os << "(zero)";
      return;
    case Tag::Succ:
      os << "(succ)";
      return;
    case Tag::Oracle:
      os << "(oracle)";
      return;
    case Tag::Proj:
      os << "(proj " << n.k << ' ' << n.i << ')';
      return;
    case Tag::Comp:
      os << "(comp";
      for (const auto& kid : n.kids) {
        os << ' ';
        print(os, *kid);
      }
      os << ')';
      return;
    case Tag::PrimRec:
    case Tag::Mu:
      os << (n.tag == Tag::Mu ? "(mu " : "(primrec ");
      print(os, *n.kids[0]);
      os << ')';
      return;
    case Tag::Const:
      os << "(const " << n.value << ')';
      return;
    case Tag::Builtin:
      os << '(' << op_info(n.op).name;
      if (op_info(n.op).parametric) os << ' ' << n.k;
      os << ')';
      return;
  }
}

void collect_arity(const Node& n, std::vector<std::string>& out) {
  if (n.tag == Tag::Proj && (n.i < 1 || n.i > n.k)) out.push_back("projection index outside its arity");
  if (n.tag == Tag::Comp && n.kids[0]->reads > n.kids.size() - 1) {
    out.push_back("composition head reads " + std::to_string(n.kids[0]->reads) + " arguments but receives " +
                  std::to_string(n.kids.size() - 1));
  }
  for (const auto& kid : n.kids) collect_arity(*kid, out);
}

}  // namespace

const OpInfo& op_info(Op op) { return kOps.at(static_cast<std::size_t>(op)); }

std::optional<Op> op_by_name(std::string_view name) {
  for (const auto& info : kOps) {
    if (info.name == name) return info.op;
  }
  return std::nullopt;
}

std::uint32_t op_arity(Op op, std::uint32_t param) {
  const OpInfo& info = op_info(op);
  return info.parametric ? param + info.fixed_or_extra : info.fixed_or_extra;
}

Program zero() {
  static const Program p = make(Tag::Zero);
  return p;
}

Program succ() {
  static const Program p = [] {
    auto n = make(Tag::Succ);
    n->reads = 1;
    return n;
  }();
  return p;
}

Program proj(std::uint32_t k, std::uint32_t i) {
  auto n = make(Tag::Proj);
  n->k = k;
  n->i = i;
  n->reads = i;
  return n;
}

Program comp(Program h, std::vector<Program> gs) {
  auto n = make(Tag::Comp);
  n->kids.reserve(gs.size() + 1);
  n->kids.push_back(std::move(h));
  for (auto& g : gs) {
    n->reads = std::max(n->reads, g->reads);
    n->kids.push_back(std::move(g));
  }
  finish(*n);
  return n;
}

Program primrec(Program g) {
  auto n = make(Tag::PrimRec);
  n->reads = std::max<std::uint32_t>(1, g->reads > 0 ? g->reads - 1 : 0);
  n->kids.push_back(std::move(g));
  finish(*n);
  return n;
}

Program mu(Program g) {
  auto n = make(Tag::Mu);
  n->reads = g->reads > 0 ? g->reads - 1 : 0;
  n->kids.push_back(std::move(g));
  finish(*n);
  return n;
}

Program oracle() {
  static const Program p = [] {
    auto n = make(Tag::Oracle);
    n->reads = 1;
    return n;
  }();
  return p;
}

Program konst(const Nat& c) {
  auto n = make(Tag::Const);
  n->value = c;
  return n;
}

Program builtin(Op op, std::uint32_t param) {
  auto n = make(Tag::Builtin);
  n->op = op;
  n->k = op_info(op).parametric ? param : 0;
  n->reads = op_arity(op, n->k);
  return n;
}

Program divergent() {
  static const Program p = mu(comp(succ(), {proj(2, 1)}));
  return p;
}

bool equal(const Program& a, const Program& b) {
  if (a == b) return true;
  if (a->tag != b->tag || a->kids.size() != b->kids.size()) return false;
  switch (a->tag) {
    case Tag::Proj:
      if (a->k != b->k || a->i != b->i) return false;
      break;
    case Tag::Const:
      if (a->value != b->value) return false;
      break;
    case Tag::Builtin:
      if (a->op != b->op || a->k != b->k) return false;
      break;
    default:
      break;
  }
  for (std::size_t j = 0; j < a->kids.size(); ++j) {
    if (!equal(a->kids[j], b->kids[j])) return false;
  }
  return true;
}

bool is_primitive_recursive(const Program& p) {
  if (p->tag == Tag::Mu || p->tag == Tag::Oracle) return false;
  if (p->tag == Tag::Builtin && (p->op == Op::Univ || p->op == Op::UnivRel)) return false;
  return std::all_of(p->kids.begin(), p->kids.end(), is_primitive_recursive);
}

std::vector<std::string> arity_violations(const Program& p) {
  std::vector<std::string> out;
  collect_arity(*p, out);
  return out;
}

Nat encode(const Program& p) {
  BitWriter w;
  write(w, *p);
  return w.finish();
}

std::optional<Program> try_decode(const Nat& code) {
  BitReader r(code);
  return read(r, 0);
}

Program decode(const Nat& code) {
  auto p = try_decode(code);
  return p ? *p : divergent();
}

ParseError::ParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

Program parse_program(std::string_view text) { return SexprParser(text).parse_all(); }

std::string print_program(const Program& p) {
  std::ostringstream os;
  print(os, *p);
  return os.str();
}

}  // namespace rlab

namespace rlab {

Program smn_ast(const Program& p, const std::vector<Nat>& ys) {
  if (ys.empty()) return p;
  const std::uint32_t m = static_cast<std::uint32_t>(ys.size());
  const std::uint32_t rest = p->reads > m ? p->reads - m : 0;
  std::vector<Program> gs;
  gs.reserve(m + rest);
  for (const Nat& y : ys) gs.push_back(konst(y));
  for (std::uint32_t j = 1; j <= rest; ++j) gs.push_back(proj(rest, j));
  return comp(p, std::move(gs));
}

}  // namespace rlab
