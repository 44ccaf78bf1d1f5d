#include "amcsp/formats.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "amcsp/error.hpp"

namespace amcsp {

namespace {

struct Line {
  std::size_t number;
  std::string text;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::string_view raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    out.push_back({number, std::string(trim(raw))});
    if (end == std::string_view::npos) break;
    start = end + 1;
    ++number;
  }
  return out;
}

bool skippable(const Line& l) { return l.text.empty() || l.text[0] == '#'; }

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::size_t parse_size(std::size_t line, std::string_view s, const char* what) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("expected an integer for ") + what + ", got '" + std::string(s) + "'");
  }
  return v;
}

// key=value token; `keys` lists accepted spellings of the key.
std::string expect_kv(std::size_t line, const std::string& tok, std::initializer_list<std::string_view> keys) {
  const auto eq = tok.find('=');
  if (eq != std::string::npos) {
    const std::string_view key(tok.data(), eq);
    for (const auto k : keys) {
      if (key == k) return tok.substr(eq + 1);
    }
  }
  throw ParseError(line, "expected " + std::string(*keys.begin()) + "=<value>, got '" + tok + "'");
}

std::size_t prefixed_index(std::size_t line, std::string_view tok, char prefix, const char* what) {
  if (tok.size() < 2 || tok[0] != prefix) {
    throw ParseError(line, std::string("expected ") + what + " '" + prefix + "<j>', got '" + std::string(tok) + "'");
  }
  return parse_size(line, tok.substr(1), what);
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && skippable(lines[i])) ++i;
  if (i == lines.size()) throw ParseError(lines.empty() ? 1 : lines.back().number, "missing 'circuit' header");
  const auto head = tokens(lines[i].text);
  const std::size_t hl = lines[i].number;
  if (head.empty() || head[0] != "circuit" || head.size() < 3 || head.size() > 4) {
    throw ParseError(hl, "expected 'circuit l=<int> N=<int> [name=<token>]'");
  }
  const std::size_t l = parse_size(hl, expect_kv(hl, head[1], {"l", "ℓ"}), "l");
  const std::size_t n = parse_size(hl, expect_kv(hl, head[2], {"N"}), "N");
  Circuit c(l, n, head.size() == 4 ? expect_kv(hl, head[3], {"name"}) : std::string());
  ++i;

  auto operand = [&](std::size_t line, const std::string& tok) -> WireId {
    if (tok.empty()) throw ParseError(line, "missing operand");
    const std::size_t j = parse_size(line, std::string_view(tok).substr(1), "operand index");
    switch (tok[0]) {
      case 'r':
        if (j >= l) throw ParseError(line, "operand " + tok + " out of range (l=" + std::to_string(l) + ")");
        return c.r(j);
      case 'w':
        if (j >= n) throw ParseError(line, "operand " + tok + " out of range (N=" + std::to_string(n) + ")");
        return c.w(j);
      case 'g':
        if (j >= c.size()) throw ParseError(line, "operand " + tok + " refers to an undefined gate");
        return static_cast<WireId>(c.num_inputs() + j);
      default:
        throw ParseError(line, "unknown operand '" + tok + "'");
    }
  };

  bool have_output = false;
  for (; i < lines.size(); ++i) {
    if (skippable(lines[i])) continue;
    const std::size_t ln = lines[i].number;
    if (have_output) throw ParseError(ln, "trailing content after 'output'");
    const auto t = tokens(lines[i].text);
    if (t[0] == "output") {
      if (t.size() != 2) throw ParseError(ln, "expected 'output <wire>'");
      c.set_output(operand(ln, t[1]));
      have_output = true;
      continue;
    }
    if (t.size() < 3 || t[1] != "=") throw ParseError(ln, "expected 'g<i> = OP ...'");
    const std::size_t idx = prefixed_index(ln, t[0], 'g', "gate");
    if (idx != c.size()) {
      throw ParseError(ln, "gates must be numbered consecutively; expected g" + std::to_string(c.size()));
    }
    const auto op = parse_gate_op(t[2]);
    if (!op) throw ParseError(ln, "unknown gate '" + t[2] + "'");
    const std::size_t arity = static_cast<std::size_t>(gate_arity(*op));
    if (t.size() != 3 + arity) {
      throw ParseError(ln, std::string(gate_op_name(*op)) + " takes " + std::to_string(arity) + " operand(s)");
    }
    const WireId a = arity >= 1 ? operand(ln, t[3]) : 0;
    const WireId b = arity >= 2 ? operand(ln, t[4]) : 0;
    c.add_gate(*op, a, b);
  }
  if (!have_output) throw ParseError(lines.back().number, "missing 'output' line");
  return c;
}

std::string write_circuit(const Circuit& c) {
  std::ostringstream out;
  auto wire = [&](WireId w) {
    if (w < c.r_len()) return "r" + std::to_string(w);
    if (w < c.num_inputs()) return "w" + std::to_string(w - c.r_len());
    return "g" + std::to_string(w - c.num_inputs());
  };
  out << "circuit l=" << c.r_len() << " N=" << c.w_len();
  if (!c.name().empty() && c.name().find_first_of(" \t\n") == std::string::npos) out << " name=" << c.name();
  out << '\n';
  for (std::size_t i = 0; i < c.gates().size(); ++i) {
    const Gate& g = c.gates()[i];
    out << 'g' << i << " = " << gate_op_name(g.op);
    const int arity = gate_arity(g.op);
    if (arity >= 1) out << ' ' << wire(g.a);
    if (arity >= 2) out << ' ' << wire(g.b);
    out << '\n';
  }
  out << "output " << wire(c.output()) << '\n';
  return out.str();
}

Csp parse_csp(std::string_view text) {
  const auto lines = split_lines(text);
  std::vector<std::pair<std::string, std::string>> meta;
  std::optional<std::size_t> hub;
  std::optional<Csp> csp;
  for (const auto& line : lines) {
    const std::size_t ln = line.number;
    if (line.text.empty()) continue;
    if (line.text[0] == '#') {
      const std::string_view body = trim(std::string_view(line.text).substr(1));
      if (body.substr(0, 5) != "meta ") continue;
      if (csp) throw ParseError(ln, "meta lines must precede the 'csp' header");
      const std::string_view kv = trim(body.substr(5));
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos || eq == 0) throw ParseError(ln, "expected '# meta key=value'");
      const std::string key(trim(kv.substr(0, eq)));
      const std::string value(trim(kv.substr(eq + 1)));
      if (key == "fast_path") {
        if (value.rfind("hub:", 0) != 0) throw ParseError(ln, "fast_path must be 'hub:<merlin index>'");
        hub = parse_size(ln, std::string_view(value).substr(4), "hub index");
        continue;
      }
      meta.emplace_back(key, value);
      continue;
    }
    const auto t = tokens(line.text);
    if (!csp) {
      if (t.size() != 4 || t[0] != "csp") throw ParseError(ln, "expected 'csp arthur=<l> merlin=<list> arity=<k>'");
      const std::size_t arthur = parse_size(ln, expect_kv(ln, t[1], {"arthur"}), "arthur");
      const std::string list = expect_kv(ln, t[2], {"merlin"});
      const std::size_t arity = parse_size(ln, expect_kv(ln, t[3], {"arity"}), "arity");
      std::vector<Symbol> alphabets;
      if (!list.empty()) {
        std::size_t start = 0;
        while (true) {
          const auto comma = list.find(',', start);
          const auto piece = std::string_view(list).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
          const std::size_t a = parse_size(ln, piece, "alphabet size");
          if (a == 0 || a > 0xffffffffu) throw ParseError(ln, "alphabet sizes must be positive");
          alphabets.push_back(static_cast<Symbol>(a));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
      }
      try {
        csp.emplace(arthur, std::move(alphabets), arity);
      } catch (const ValidationError& e) {
        throw ParseError(ln, e.what());
      }
      continue;
    }
    // scope v... ; table bits
    if (t.empty() || t[0] != "scope") throw ParseError(ln, "expected 'scope ... ; table ...'");
    std::size_t k = 1;
    std::vector<VarId> scope;
    for (; k < t.size() && t[k] != ";"; ++k) {
      const std::string& v = t[k];
      if (v.size() >= 2 && v[0] == 'r') {
        const std::size_t j = parse_size(ln, std::string_view(v).substr(1), "variable");
        if (j >= csp->arthur_count()) throw ParseError(ln, "variable " + v + " out of range");
        scope.push_back(static_cast<VarId>(j));
      } else if (v.size() >= 2 && v[0] == 'z') {
        const std::size_t j = parse_size(ln, std::string_view(v).substr(1), "variable");
        if (j >= csp->merlin_count()) throw ParseError(ln, "variable " + v + " out of range");
        scope.push_back(csp->merlin_var(j));
      } else {
        throw ParseError(ln, "unknown variable '" + v + "'");
      }
    }
    if (k + 3 != t.size() || t[k] != ";" || t[k + 1] != "table") {
      throw ParseError(ln, "expected '; table <bits>' after the scope");
    }
    std::vector<std::uint8_t> table;
    for (const char ch : t[k + 2]) {
      if (ch != '0' && ch != '1') throw ParseError(ln, "table must be a 0/1 string");
      table.push_back(ch == '1');
    }
    try {
      csp->add_constraint(std::move(scope), std::move(table));
    } catch (const ValidationError& e) {
      throw ParseError(ln, e.what());
    }
  }
  if (!csp) throw ParseError(lines.empty() ? 1 : lines.back().number, "missing 'csp' header");
  csp->meta() = std::move(meta);
  if (hub) {
    try {
      csp->set_hub(*hub);
    } catch (const ValidationError& e) {
      throw ParseError(1, e.what());
    }
  }
  return *csp;
}

std::string write_csp(const Csp& csp) {
  std::ostringstream out;
  for (const auto& [k, v] : csp.meta()) {
    if (k == "fast_path") continue;
    if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw ValidationError("meta entry '" + k + "' cannot be serialized");
    }
    out << "# meta " << k << '=' << v << '\n';
  }
  if (csp.hub()) out << "# meta fast_path=hub:" << *csp.hub() << '\n';
  out << "csp arthur=" << csp.arthur_count() << " merlin=";
  for (std::size_t i = 0; i < csp.merlin_count(); ++i) {
    if (i) out << ',';
    out << csp.merlin_alphabets()[i];
  }
  out << " arity=" << csp.arity() << '\n';
  std::string bits;
  for (const auto& c : csp.constraints()) {
    out << "scope";
    for (const VarId v : c.scope) {
      if (csp.is_arthur(v)) out << " r" << v;
      else out << " z" << (v - csp.arthur_count());
    }
    bits.assign(c.table.size(), '0');
    for (std::size_t i = 0; i < c.table.size(); ++i) bits[i] = c.table[i] ? '1' : '0';
    out << " ; table " << bits << '\n';
  }
  return out.str();
}

ToyLanguage parse_language(std::string_view text) {
  const auto lines = split_lines(text);
  std::optional<std::size_t> block_len;
  std::optional<ToyLanguage> L;
  for (const auto& line : lines) {
    if (skippable(line)) continue;
    const std::size_t ln = line.number;
    const auto t = tokens(line.text);
    if (!block_len) {
      if (t.size() != 2 || t[0] != "language") throw ParseError(ln, "expected 'language block_len=<int>'");
      block_len = parse_size(ln, expect_kv(ln, t[1], {"block_len"}), "block_len");
      continue;
    }
    if (L) throw ParseError(ln, "trailing content after the language body");
    if (t.size() != 2) throw ParseError(ln, "expected 'bitmap <hex>' or 'predicate <NAME>'");
    try {
      if (t[0] == "bitmap") {
        L = language_bitmap(*block_len, t[1]);
      } else if (t[0] == "predicate") {
        const std::string& p = t[1];
        if (p == "PARITY") L = language_parity(*block_len);
        else if (p == "MAJORITY") L = language_majority(*block_len);
        else if (p == "EVERYTHING") L = language_everything(*block_len);
        else if (p == "EMPTY") L = language_empty(*block_len);
        else if (p.rfind("RANDOM(", 0) == 0 && p.back() == ')') {
          const std::string args = p.substr(7, p.size() - 8);
          const auto comma = args.find(',');
          if (comma == std::string::npos) throw ParseError(ln, "RANDOM takes (seed,density)");
          const auto seed = std::stoull(args.substr(0, comma));
          L = language_random(*block_len, seed, parse_rational(args.substr(comma + 1)));
        } else {
          throw ParseError(ln, "unknown predicate '" + p + "'");
        }
      } else {
        throw ParseError(ln, "expected 'bitmap' or 'predicate'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(ln, e.what());
    }
  }
  if (!L) throw ParseError(lines.empty() ? 1 : lines.back().number, "incomplete language description");
  return *L;
}

std::string write_language(const ToyLanguage& L) {
  std::ostringstream out;
  out << "language block_len=" << L.block_len << '\n';
  const std::string& d = L.description;
  if (d == "PARITY" || d == "MAJORITY" || d == "EVERYTHING" || d == "EMPTY" || d.rfind("RANDOM(", 0) == 0) {
    ToyLanguage again = parse_language(out.str() + "predicate " + d + "\n");
    if (again.member == L.member) {
      out << "predicate " << d << '\n';
      return out.str();
    }
  }
  out << "bitmap " << bitmap_hex(L) << '\n';
  return out.str();
}

std::vector<CorpusEntry> parse_corpus(std::string_view text) {
  const auto lines = split_lines(text);
  std::vector<CorpusEntry> out;
  bool header = false;
  for (const auto& line : lines) {
    if (skippable(line)) continue;
    const std::size_t ln = line.number;
    const auto t = tokens(line.text);
    if (!header) {
      if (t.size() != 2 || t[0] != "protocol-corpus" || t[1] != "v1") {
        throw ParseError(ln, "expected 'protocol-corpus v1'");
      }
      header = true;
      continue;
    }
    if (t.size() != 5) throw ParseError(ln, "expected '<id> <circuit-path> <YES|NO|UNKNOWN> <l> <N>'");
    CorpusEntry e;
    e.id = t[0];
    e.circuit_path = t[1];
    if (t[2] == "YES") e.yes = true;
    else if (t[2] == "NO") e.yes = false;
    else if (t[2] != "UNKNOWN") throw ParseError(ln, "label must be YES, NO or UNKNOWN");
    e.r_len = parse_size(ln, t[3], "l");
    e.w_len = parse_size(ln, t[4], "N");
    for (const auto& prev : out) {
      if (prev.id == e.id) throw ParseError(ln, "duplicate instance id '" + e.id + "'");
    }
    out.push_back(std::move(e));
  }
  if (!header) throw ParseError(lines.empty() ? 1 : lines.back().number, "missing 'protocol-corpus v1' header");
  return out;
}

std::string write_corpus(const std::vector<CorpusEntry>& entries) {
  std::ostringstream out;
  out << "protocol-corpus v1\n";
  for (const auto& e : entries) {
    out << e.id << ' ' << e.circuit_path << ' ' << (!e.yes ? "UNKNOWN" : *e.yes ? "YES" : "NO") << ' '
        << e.r_len << ' ' << e.w_len << '\n';
  }
  return out.str();
}

std::vector<AmProtocol> load_corpus(const std::string& path) {
  const auto entries = parse_corpus(read_file(path));
  const auto dir = std::filesystem::path(path).parent_path();
  std::vector<AmProtocol> out;
  for (const auto& e : entries) {
    const auto cpath = std::filesystem::path(e.circuit_path).is_absolute() ? std::filesystem::path(e.circuit_path)
                                                                             : dir / e.circuit_path;
    Circuit c;
    try {
      c = parse_circuit(read_file(cpath.string()));
    } catch (const ParseError& err) {
      throw ValidationError(cpath.string() + ": " + err.what());
    }
    if (c.r_len() != e.r_len || c.w_len() != e.w_len) {
      throw ValidationError("corpus entry " + e.id + ": circuit has l=" + std::to_string(c.r_len()) +
                            " N=" + std::to_string(c.w_len()) + ", corpus says l=" +
                            std::to_string(e.r_len) + " N=" + std::to_string(e.w_len));
    }
    out.push_back(make_protocol(e.id, std::move(c), e.yes));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

}  // namespace amcsp
