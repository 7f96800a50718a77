#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "crnbkk/linalg.hpp"
#include "crnbkk/poly.hpp"
#include "crnbkk/random.hpp"
#include "crnbkk/rational.hpp"

namespace crnbkk {

enum class Family { None, CellDeath, Edelstein, Phosphorylation };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::CellDeath: return "cd";
    case Family::Edelstein: return "e";
    case Family::Phosphorylation: return "pc";
    case Family::None: break;
  }
  return "file";
}

inline Family parse_family(std::string_view s) {
  if (s == "cd") return Family::CellDeath;
  if (s == "e" || s == "edelstein") return Family::Edelstein;
  if (s == "pc") return Family::Phosphorylation;
  throw Error("unknown family tag: " + std::string(s));
}

struct Species {
  std::string name;
  std::size_t index = 0;
};

/// Stoichiometric coefficients, one per species.
struct Complex {
  std::vector<int> coeffs;
  bool operator==(const Complex&) const = default;
};

struct Reaction {
  std::size_t source = 0;
  std::size_t target = 0;
  std::string rate_label;
};

struct ReactionNetwork {
  std::vector<Species> species;
  std::vector<Complex> complexes;
  std::vector<Reaction> reactions;
  Family family = Family::None;
  int n = 0;

  std::size_t species_index(std::string_view name) const {
    for (const auto& s : species)
      if (s.name == name) return s.index;
    throw Error("unknown species " + std::string(name));
  }

  std::vector<std::string> variable_names() const {
    std::vector<std::string> out;
    for (const auto& s : species) out.push_back("x_" + s.name);
    return out;
  }

  /// Throws unless every structural invariant holds.
  void validate() const {
    if (reactions.empty()) throw Error("network has no reactions");
    std::set<std::string> names, labels;
    for (std::size_t i = 0; i < species.size(); ++i) {
      if (species[i].index != i) throw Error("species indices must be contiguous");
      if (!names.insert(species[i].name).second) throw Error("duplicate species " + species[i].name);
    }
    std::vector<bool> used(complexes.size(), false);
    for (const auto& c : complexes) {
      if (c.coeffs.size() != species.size()) throw Error("complex length differs from species count");
      for (int v : c.coeffs)
        if (v < 0) throw Error("negative stoichiometric coefficient");
    }
    for (const auto& r : reactions) {
      if (r.source >= complexes.size() || r.target >= complexes.size()) throw Error("reaction references missing complex");
      if (r.source == r.target) throw Error("reaction " + r.rate_label + " has identical source and target");
      if (!labels.insert(r.rate_label).second) throw Error("duplicate rate label " + r.rate_label);
      used[r.source] = used[r.target] = true;
    }
    for (bool u : used)
      if (!u) throw Error("complex not referenced by any reaction");
  }
};

// ---------------------------------------------------------------------------
// Text format

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

namespace detail {

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  bool consume(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, pos_ + 1, what); }
  std::size_t column() const { return pos_ + 1; }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      fail("expected species identifier");
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\''))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::optional<int> integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) return std::nullopt;
    const auto digits = text_.substr(start, pos_ - start);
    if (digits.size() > 6) fail("stoichiometric coefficient too large");
    return std::stoi(std::string(digits));
  }

  /// Label inside brackets; commas nested in braces belong to the label.
  std::string label() {
    skip_ws();
    const std::size_t start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '{') ++depth;
      if (c == '}') --depth;
      if (depth == 0 && (c == ',' || c == ']' || c == ' ' || c == '\t')) break;
      ++pos_;
    }
    if (pos_ == start) fail("expected rate label");
    if (depth != 0) fail("unbalanced braces in rate label");
    return std::string(text_.substr(start, pos_ - start));
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the line-oriented network format:
///
///     species: A, B, C            (optional; fixes order, forbids others)
///     A + B -> 4B + C [k1]
///     X <-> 2Y [kf, kb]           # expands to two reactions
inline ReactionNetwork parse_network(std::string_view text) {
  ReactionNetwork net;
  std::map<std::string, std::size_t> species_ix;
  bool declared = false;
  std::set<std::string> labels;

  struct RawTerm {
    int coeff;
    std::string name;
  };
  struct RawReaction {
    std::vector<RawTerm> lhs, rhs;
    std::string label;
    std::size_t line, column;
  };
  std::vector<RawReaction> raw;

  auto add_species = [&](const std::string& name) {
    if (species_ix.count(name)) return;
    species_ix[name] = net.species.size();
    net.species.push_back({name, net.species.size()});
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    detail::LineParser p(line, line_no);
    if (p.at_end()) continue;

    if (p.consume("species:")) {
      if (declared || !raw.empty()) p.fail("species declaration must come first and only once");
      declared = true;
      do {
        const auto name = p.identifier();
        if (species_ix.count(name)) p.fail("duplicate species " + name);
        add_species(name);
      } while (p.consume(","));
      if (!p.at_end()) p.fail("unexpected text after species list");
      continue;
    }

    auto parse_complex = [&]() {
      std::vector<RawTerm> terms;
      do {
        const auto coeff = p.integer();
        if (coeff && *coeff == 0) p.fail("zero stoichiometric coefficient");
        const std::size_t col = p.column();
        auto name = p.identifier();
        if (declared && !species_ix.count(name))
          throw ParseError(line_no, col, "unknown species " + name);
        terms.push_back({coeff.value_or(1), std::move(name)});
      } while (p.consume("+"));
      return terms;
    };

    RawReaction r1;
    r1.line = line_no;
    r1.column = p.column();
    r1.lhs = parse_complex();
    bool reversible = false;
    if (p.consume("<->")) reversible = true;
    else if (!p.consume("->")) p.fail("expected -> or <->");
    r1.rhs = parse_complex();
    if (!p.consume("[")) p.fail("expected [ before rate label");
    const std::size_t label_col = p.column();
    r1.label = p.label();
    std::string back_label;
    if (p.consume(",")) back_label = p.label();
    if (!p.consume("]")) p.fail("expected ]");
    if (!p.at_end()) p.fail("unexpected text after reaction");
    if (reversible && back_label.empty()) p.fail("<-> needs two rate labels");
    if (!reversible && !back_label.empty()) p.fail("-> takes a single rate label");
    for (const auto* l : {&r1.label, &back_label}) {
      if (l->empty()) continue;
      if (!labels.insert(*l).second) throw ParseError(line_no, label_col, "duplicate rate label " + *l);
    }
    for (const auto& t : r1.lhs) add_species(t.name);
    for (const auto& t : r1.rhs) add_species(t.name);
    raw.push_back(r1);
    if (reversible) {
      RawReaction r2{r1.rhs, r1.lhs, back_label, line_no, r1.column};
      raw.push_back(std::move(r2));
    }
  }
  if (raw.empty()) throw ParseError(line_no, 1, "network has no reactions");

  auto complex_index = [&](const std::vector<RawTerm>& terms) {
    Complex c{std::vector<int>(net.species.size(), 0)};
    for (const auto& t : terms) c.coeffs[species_ix.at(t.name)] += t.coeff;
    for (std::size_t i = 0; i < net.complexes.size(); ++i)
      if (net.complexes[i] == c) return i;
    net.complexes.push_back(std::move(c));
    return net.complexes.size() - 1;
  };
  for (const auto& r : raw) {
    const auto s = complex_index(r.lhs);
    const auto t = complex_index(r.rhs);
    if (s == t) throw ParseError(r.line, r.column, "reaction " + r.label + " has identical source and target");
    net.reactions.push_back({s, t, r.label});
  }
  net.validate();
  return net;
}

inline std::string format_complex(const ReactionNetwork& net, const Complex& c) {
  std::string out;
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
    if (c.coeffs[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (c.coeffs[i] != 1) out += std::to_string(c.coeffs[i]);
    out += net.species[i].name;
  }
  return out;
}

/// Canonical text: species declaration, then one irreversible reaction per
/// line with terms in species order.
inline std::string serialize_network(const ReactionNetwork& net) {
  std::string out = "species: ";
  for (std::size_t i = 0; i < net.species.size(); ++i) {
    if (i) out += ", ";
    out += net.species[i].name;
  }
  out += '\n';
  for (const auto& r : net.reactions) {
    out += format_complex(net, net.complexes[r.source]) + " -> " + format_complex(net, net.complexes[r.target]) +
           " [" + r.rate_label + "]\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Families

inline std::string rate_label(std::size_t a, std::size_t b) {
  return "k_{" + std::to_string(a) + "," + std::to_string(b) + "}";
}

namespace detail {
inline void add_reaction(ReactionNetwork& net, std::size_t s, std::size_t t) {
  net.reactions.push_back({s, t, rate_label(s, t)});
}
inline Complex complex_of(std::size_t nspecies, std::initializer_list<std::pair<std::size_t, int>> terms) {
  Complex c{std::vector<int>(nspecies, 0)};
  for (auto [i, v] : terms) c.coeffs[i] += v;
  return c;
}
}  // namespace detail

/// Cluster model for cell death: complexes (n-1-m)Y + (m+1)Z for m = 0..n-1,
/// with C_i -> C_j for every i < j.
inline ReactionNetwork generate_cd(int n) {
  if (n < 2) throw Error("cell death family needs n >= 2");
  ReactionNetwork net;
  net.family = Family::CellDeath;
  net.n = n;
  net.species = {{"Y", 0}, {"Z", 1}};
  for (int m = 0; m < n; ++m) net.complexes.push_back(Complex{{n - 1 - m, m + 1}});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) detail::add_reaction(net, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  net.validate();
  return net;
}

/// Edelstein network glued n times over A+B and B. Complex numbering:
/// 0 A, 1 2A, 2 A+B, 3 B_1, 4 B, then B_i at i+3 for i >= 2.
inline ReactionNetwork generate_edelstein(int n) {
  if (n < 1) throw Error("Edelstein family needs n >= 1");
  ReactionNetwork net;
  net.family = Family::Edelstein;
  net.n = n;
  const auto ns = static_cast<std::size_t>(n + 2);
  net.species = {{"A", 0}, {"B", 1}};
  for (int i = 1; i <= n; ++i) net.species.push_back({"B_" + std::to_string(i), static_cast<std::size_t>(i + 1)});
  using detail::complex_of;
  net.complexes = {complex_of(ns, {{0, 1}}), complex_of(ns, {{0, 2}}), complex_of(ns, {{0, 1}, {1, 1}}),
                   complex_of(ns, {{2, 1}}), complex_of(ns, {{1, 1}})};
  for (int i = 2; i <= n; ++i) net.complexes.push_back(complex_of(ns, {{static_cast<std::size_t>(i + 1), 1}}));
  detail::add_reaction(net, 0, 1);
  detail::add_reaction(net, 1, 0);
  for (int i = 1; i <= n; ++i) {
    const std::size_t b = i == 1 ? 3 : static_cast<std::size_t>(i + 3);
    detail::add_reaction(net, 2, b);
    detail::add_reaction(net, b, 2);
    detail::add_reaction(net, b, 4);
    detail::add_reaction(net, 4, b);
  }
  net.validate();
  return net;
}

/// Species position of S_j in the phosphorylation order
/// (S_0, E, X_1, S_1, F, Y_1, X_2, S_2, Y_2, ...).
inline std::size_t pc_substrate(int j) { return j == 0 ? 0 : j == 1 ? 3 : static_cast<std::size_t>(3 * j + 1); }
inline std::size_t pc_enzyme_e() { return 1; }
inline std::size_t pc_enzyme_f() { return 4; }
inline std::size_t pc_x(int j) { return j == 1 ? 2 : static_cast<std::size_t>(3 * j); }
inline std::size_t pc_y(int j) { return j == 1 ? 5 : static_cast<std::size_t>(3 * j + 2); }

/// n one-site phosphorylation cycles glued over S_j+E and S_j+F. Complex
/// numbers follow the reaction-graph labels: copy 1 uses 0..5, copy j >= 2
/// adds X_j = 4j-2, S_j+E = 4j-1, S_j+F = 4j, Y_j = 4j+1.
inline ReactionNetwork generate_pc(int n) {
  if (n < 1) throw Error("phosphorylation family needs n >= 1");
  ReactionNetwork net;
  net.family = Family::Phosphorylation;
  net.n = n;
  const auto ns = static_cast<std::size_t>(3 * n + 3);
  std::vector<std::string> names(ns);
  names[0] = "S_0";
  names[1] = "E";
  names[4] = "F";
  for (int j = 1; j <= n; ++j) {
    names[pc_substrate(j)] = "S_" + std::to_string(j);
    names[pc_x(j)] = "X_" + std::to_string(j);
    names[pc_y(j)] = "Y_" + std::to_string(j);
  }
  for (std::size_t i = 0; i < ns; ++i) net.species.push_back({names[i], i});

  using detail::complex_of;
  const std::size_t e = pc_enzyme_e(), f = pc_enzyme_f();
  net.complexes.resize(static_cast<std::size_t>(4 * n + 2));
  auto set = [&](std::size_t idx, Complex c) { net.complexes[idx] = std::move(c); };
  set(0, complex_of(ns, {{pc_substrate(0), 1}, {e, 1}}));
  set(1, complex_of(ns, {{pc_x(1), 1}}));
  set(2, complex_of(ns, {{pc_substrate(1), 1}, {e, 1}}));
  set(3, complex_of(ns, {{pc_substrate(1), 1}, {f, 1}}));
  set(4, complex_of(ns, {{pc_y(1), 1}}));
  set(5, complex_of(ns, {{pc_substrate(0), 1}, {f, 1}}));
  for (int j = 2; j <= n; ++j) {
    const auto b = static_cast<std::size_t>(4 * j);
    set(b - 2, complex_of(ns, {{pc_x(j), 1}}));
    set(b - 1, complex_of(ns, {{pc_substrate(j), 1}, {e, 1}}));
    set(b, complex_of(ns, {{pc_substrate(j), 1}, {f, 1}}));
    set(b + 1, complex_of(ns, {{pc_y(j), 1}}));
  }
  auto se = [](int j) -> std::size_t { return j == 0 ? 0 : j == 1 ? 2 : static_cast<std::size_t>(4 * j - 1); };
  auto sf = [](int j) -> std::size_t { return j == 0 ? 5 : j == 1 ? 3 : static_cast<std::size_t>(4 * j); };
  auto xj = [](int j) -> std::size_t { return j == 1 ? 1 : static_cast<std::size_t>(4 * j - 2); };
  auto yj = [](int j) -> std::size_t { return j == 1 ? 4 : static_cast<std::size_t>(4 * j + 1); };
  for (int j = 1; j <= n; ++j) {
    detail::add_reaction(net, se(j - 1), xj(j));
    detail::add_reaction(net, xj(j), se(j - 1));
    detail::add_reaction(net, xj(j), se(j));
    detail::add_reaction(net, sf(j), yj(j));
    detail::add_reaction(net, yj(j), sf(j));
    detail::add_reaction(net, yj(j), sf(j - 1));
  }
  net.validate();
  return net;
}

inline ReactionNetwork generate(Family family, int n) {
  switch (family) {
    case Family::CellDeath: return generate_cd(n);
    case Family::Edelstein: return generate_edelstein(n);
    case Family::Phosphorylation: return generate_pc(n);
    case Family::None: break;
  }
  throw Error("no generator for family");
}

// ---------------------------------------------------------------------------
// Mass-action kinetics

/// Reaction vectors y_target - y_source, one row per reaction.
inline std::vector<std::vector<int>> reaction_vectors(const ReactionNetwork& net) {
  std::vector<std::vector<int>> out;
  for (const auto& r : net.reactions) {
    std::vector<int> v(net.species.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = net.complexes[r.target].coeffs[i] - net.complexes[r.source].coeffs[i];
    out.push_back(std::move(v));
  }
  return out;
}

/// Conservation laws in the form used by the family presentations; empty
/// for networks without a family.
inline std::vector<linalg::IntVec> preferred_conservation_laws(const ReactionNetwork& net) {
  const std::size_t ns = net.species.size();
  std::vector<linalg::IntVec> out;
  switch (net.family) {
    case Family::CellDeath: out.push_back({1, 1}); break;
    case Family::Edelstein: {
      linalg::IntVec w(ns, 1);
      w[0] = 0;
      out.push_back(w);
      break;
    }
    case Family::Phosphorylation: {
      linalg::IntVec w1(ns, 0), w2(ns, 0), w3(ns, 0);
      w1[pc_enzyme_e()] = 1;
      w2[pc_enzyme_f()] = 1;
      w3[pc_enzyme_e()] = -1;
      w3[pc_enzyme_f()] = -1;
      for (int j = 0; j <= net.n; ++j) w3[pc_substrate(j)] = 1;
      for (int j = 1; j <= net.n; ++j) {
        w1[pc_x(j)] = 1;
        w2[pc_y(j)] = 1;
      }
      out = {w1, w2, w3};
      break;
    }
    case Family::None: break;
  }
  return out;
}

/// Integer basis of the orthogonal complement of the stoichiometric
/// subspace, computed from an exact kernel. For family networks the basis is
/// re-expressed in the customary form after checking it spans the same space.
inline std::vector<linalg::IntVec> conservation_laws(const ReactionNetwork& net) {
  const std::size_t ns = net.species.size();
  linalg::Mat stoich;
  for (const auto& v : reaction_vectors(net)) {
    linalg::Vec row;
    for (int x : v) row.emplace_back(x);
    stoich.push_back(std::move(row));
  }
  const auto kernel = linalg::kernel(stoich, ns);
  std::vector<linalg::IntVec> computed;
  for (const auto& v : kernel) computed.push_back(linalg::primitive(v));

  auto preferred = preferred_conservation_laws(net);
  if (preferred.empty()) return computed;
  linalg::Mat both, pref_only;
  for (const auto& v : computed) both.push_back(linalg::to_rational(v));
  for (const auto& v : preferred) {
    both.push_back(linalg::to_rational(v));
    pref_only.push_back(linalg::to_rational(v));
  }
  if (linalg::rank(both) != computed.size() || linalg::rank(pref_only) != computed.size())
    throw Error("generated network has unexpected conservation laws");
  return preferred;
}

/// dx_s/dt for each species as a polynomial, given instantiated rates.
inline std::vector<Polynomial> species_rates(const ReactionNetwork& net, const std::map<std::string, Rational>& rates) {
  const std::size_t ns = net.species.size();
  std::vector<Polynomial> out(ns, Polynomial(ns));
  for (const auto& r : net.reactions) {
    auto it = rates.find(r.rate_label);
    if (it == rates.end()) throw Error("missing rate constant " + r.rate_label);
    if (it->second <= 0) throw Error("rate constant " + r.rate_label + " must be positive");
    const auto& src = net.complexes[r.source].coeffs;
    const auto& tgt = net.complexes[r.target].coeffs;
    for (std::size_t s = 0; s < ns; ++s) {
      const int delta = tgt[s] - src[s];
      if (delta != 0) out[s].add_term(src, it->second * delta);
    }
  }
  return out;
}

/// Symbolic form of each dx_s/dt: monomial -> (rate label -> integer factor).
using SymbolicPolynomial = std::map<Monomial, std::map<std::string, int>, GrlexGreater>;

inline std::vector<SymbolicPolynomial> symbolic_species_rates(const ReactionNetwork& net) {
  std::vector<SymbolicPolynomial> out(net.species.size());
  for (const auto& r : net.reactions) {
    const auto& src = net.complexes[r.source].coeffs;
    const auto& tgt = net.complexes[r.target].coeffs;
    for (std::size_t s = 0; s < out.size(); ++s) {
      const int delta = tgt[s] - src[s];
      if (delta != 0) out[s][src][r.rate_label] += delta;
    }
  }
  return out;
}

/// Role tag of each species' rate equation within its family.
inline std::string ode_tag(const ReactionNetwork& net, std::size_t s) {
  const int n = net.n;
  switch (net.family) {
    case Family::CellDeath: return "f_" + std::to_string(s + 2);
    case Family::Edelstein: return "f_" + std::to_string(s + 2);
    case Family::Phosphorylation: {
      if (s == pc_enzyme_e()) return "xdot_E";
      if (s == pc_enzyme_f()) return "xdot_F";
      for (int j = 0; j <= n; ++j)
        if (s == pc_substrate(j)) return "f_" + std::to_string(4 + j);
      for (int j = 1; j <= n; ++j) {
        if (s == pc_x(j)) return "f_" + std::to_string(n + 4 + j);
        if (s == pc_y(j)) return "f_" + std::to_string(2 * n + 4 + j);
      }
      break;
    }
    case Family::None: break;
  }
  return "xdot_" + net.species[s].name;
}

inline int tag_number(const std::string& tag) {
  if (tag.rfind("f_", 0) == 0) return std::stoi(tag.substr(2));
  return 1 << 20;
}

/// Steady-state system: conservation polynomials followed by one rate
/// equation per species, ordered by role tag for the families.
inline PolySystem mass_action_system(const ReactionNetwork& net, const ParameterAssignment& params) {
  const std::size_t ns = net.species.size();
  PolySystem sys;
  sys.var_names = net.variable_names();
  const auto laws = conservation_laws(net);
  const bool family = net.family != Family::None;
  std::vector<std::pair<Polynomial, std::string>> items;
  for (std::size_t k = 0; k < laws.size(); ++k) {
    Polynomial p(ns);
    Rational total = 0;
    for (std::size_t s = 0; s < ns; ++s) {
      if (laws[k][s] == 0) continue;
      auto it = params.init_conds.find(net.species[s].name);
      if (it == params.init_conds.end()) throw Error("missing initial condition for " + net.species[s].name);
      Monomial m(ns, 0);
      m[s] = 1;
      p.add_term(m, static_cast<long>(laws[k][s]));
      total += it->second * static_cast<long>(laws[k][s]);
    }
    p.add_term(Monomial(ns, 0), -total);
    items.emplace_back(std::move(p), family ? "f_" + std::to_string(k + 1) : "c_" + std::to_string(k + 1));
  }
  auto odes = species_rates(net, params.rates);
  for (std::size_t s = 0; s < ns; ++s) items.emplace_back(std::move(odes[s]), ode_tag(net, s));
  if (family) {
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return tag_number(a.second) < tag_number(b.second); });
  }
  for (auto& [p, tag] : items) sys.push(std::move(p), tag);
  return sys;
}

/// Positive rates and initial conditions with numerator and denominator at
/// most 1000, drawn from independent streams of `seed`.
inline ParameterAssignment sample_parameters(const ReactionNetwork& net, std::uint64_t seed) {
  ParameterAssignment params;
  params.seed = seed;
  Rng rates = Rng(seed).split("rates");
  Rng inits = Rng(seed).split("initial-conditions");
  for (const auto& r : net.reactions) params.rates[r.rate_label] = rates.positive_rational();
  for (const auto& s : net.species) params.init_conds[s.name] = inits.positive_rational();
  return params;
}

/// Tags whose polynomials the reduced family systems omit.
inline std::vector<std::string> dependent_tags(const PolySystem& sys, Family family) {
  switch (family) {
    case Family::CellDeath:
    case Family::Edelstein: return {"f_3"};
    case Family::Phosphorylation: return {"xdot_E", "xdot_F"};
    case Family::None: break;
  }
  // Generic: drop rate equations (last first) that lie in the span of the rest.
  std::vector<std::string> dropped;
  std::vector<bool> keep(sys.size(), true);
  for (std::size_t i = sys.size(); i-- > 0;) {
    if (sys.tags[i].rfind("xdot_", 0) != 0) continue;
    std::vector<Polynomial> others, with;
    for (std::size_t j = 0; j < sys.size(); ++j)
      if (keep[j] && j != i) others.push_back(sys.polys[j]);
    with = others;
    with.push_back(sys.polys[i]);
    if (linalg::rank(coefficient_matrix(others)) == linalg::rank(coefficient_matrix(with))) {
      keep[i] = false;
      dropped.push_back(sys.tags[i]);
    }
  }
  return dropped;
}

/// Removes the named polynomials after proving each lies in the rational
/// span of the polynomials that remain.
inline PolySystem drop_dependent(const PolySystem& sys, const std::vector<std::string>& tags) {
  PolySystem kept;
  kept.var_names = sys.var_names;
  std::vector<Polynomial> dropped;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (std::find(tags.begin(), tags.end(), sys.tags[i]) != tags.end()) dropped.push_back(sys.polys[i]);
    else kept.push(sys.polys[i], sys.tags[i]);
  }
  if (dropped.size() != tags.size()) throw Error("drop_dependent: unknown tag requested");
  const auto base_rank = linalg::rank(coefficient_matrix(kept.polys));
  auto all = kept.polys;
  all.insert(all.end(), dropped.begin(), dropped.end());
  if (linalg::rank(coefficient_matrix(all)) != base_rank)
    throw Error("drop_dependent: dropped polynomials are not in the span of the rest");
  return kept;
}

inline PolySystem drop_dependent(const PolySystem& sys, Family family) {
  return drop_dependent(sys, dependent_tags(sys, family));
}

}  // namespace crnbkk
