#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "densefactor/dense.hpp"
#include "densefactor/errors.hpp"
#include "densefactor/filtration.hpp"
#include "densefactor/group.hpp"
#include "densefactor/subgroup.hpp"
#include "densefactor/topology.hpp"

namespace densefactor {

// Scenario text format, one field per line, canonical field order:
//
//   group <kind> <args>            (required, first)
//   topology <kind> <args>         (zero or more)
//   filtration <form> <level> ; <level> ; ...
//   subgroup <form> <args>
//   element <text>
//   param <name> <value>           (ascending by name)
//
// '#' starts a comment. Elements use the group's text forms. The canonical
// re-serialization of the parsed fields is digested (FNV-1a), so comments
// and spacing do not affect the digest while any semantic change does.
struct Scenario {
  GroupPtr group;
  BaseFamily topology;
  std::optional<Filtration> filtration;
  std::optional<Subgroup> subgroup;
  std::optional<Element> element;
  std::map<std::string, std::uint64_t> params;
  std::vector<std::string> guard_notes;
  std::string canonical_text;
  std::string digest;

  std::uint64_t param(const std::string& name, std::uint64_t fallback) const {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
  }
};

namespace detail {

inline std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) tokens.push_back(tok);
  return tokens;
}

inline std::uint64_t parse_uint(const std::string& tok, std::size_t line,
                                const char* what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ParseError(line, std::string("expected a non-negative ") + what +
                               ", got '" + tok + "'");
  }
}

inline std::vector<std::int64_t> parse_paren_vector(const std::string& tok,
                                                    std::size_t line) {
  if (tok.size() < 2 || tok.front() != '(' || tok.back() != ')')
    throw ParseError(line, "expected a vector like (a,b,...), got '" + tok +
                               "'");
  try {
    return parse_int_list(std::string_view(tok).substr(1, tok.size() - 2),
                          "vector entry");
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
}

inline GroupPtr parse_group_line(const std::vector<std::string>& t,
                                 std::size_t line) {
  if (t.size() < 2) throw ParseError(line, "group line needs a kind");
  const std::string& kind = t[1];
  auto need = [&](std::size_t n) {
    if (t.size() != n)
      throw ParseError(line, "group " + kind + ": wrong argument count");
  };
  if (kind == "cyclic") {
    need(3);
    return groups::cyclic(parse_uint(t[2], line, "order"));
  }
  if (kind == "direct-product") {
    if (t.size() < 3) throw ParseError(line, "direct-product needs factors");
    std::vector<std::uint64_t> moduli;
    for (std::size_t i = 2; i < t.size(); ++i)
      moduli.push_back(parse_uint(t[i], line, "factor"));
    return groups::direct_product(std::move(moduli));
  }
  if (kind == "lattice") {
    need(3);
    return groups::integer_lattice(parse_uint(t[2], line, "rank"));
  }
  if (kind == "boolean-sum") {
    need(2);
    return groups::boolean_sum();
  }
  if (kind == "symmetric") {
    need(3);
    return groups::symmetric(parse_uint(t[2], line, "degree"));
  }
  if (kind == "dihedral") {
    need(3);
    return groups::dihedral(parse_uint(t[2], line, "degree"));
  }
  if (kind == "quaternion") {
    need(2);
    return groups::quaternion();
  }
  if (kind == "permutation") {
    if (t.size() < 4)
      throw ParseError(line, "permutation needs a degree and generators");
    std::size_t degree = parse_uint(t[2], line, "degree");
    std::vector<Element> gens;
    for (std::size_t i = 3; i < t.size(); ++i) {
      try {
        gens.push_back(Element{parse_int_list(t[i], "permutation image")});
      } catch (const Error& e) {
        throw ParseError(line, e.what());
      }
    }
    return groups::permutation(degree, std::move(gens));
  }
  if (kind == "cayley") {
    if (t.size() < 3) throw ParseError(line, "cayley needs an order");
    std::size_t n = parse_uint(t[2], line, "order");
    if (t.size() != 3 + n * n)
      throw ParseError(line, "cayley table needs " + std::to_string(n * n) +
                                 " entries");
    std::vector<std::vector<std::uint32_t>> table(
        n, std::vector<std::uint32_t>(n));
    for (std::size_t i = 0; i < n * n; ++i)
      table[i / n][i % n] =
          static_cast<std::uint32_t>(parse_uint(t[3 + i], line, "entry"));
    try {
      return groups::cayley(std::move(table));
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
  }
  throw ParseError(line, "unknown group kind '" + kind + "'");
}

inline BaseSet parse_topology_line(const GroupPtr& g,
                                   const std::vector<std::string>& t,
                                   std::size_t line) {
  if (t.size() < 2) throw ParseError(line, "topology line needs a kind");
  const std::string& kind = t[1];
  try {
    if (kind == "explicit" || kind == "cofinite") {
      std::vector<Element> elems;
      for (std::size_t i = 2; i < t.size(); ++i)
        elems.push_back(g->parse(t[i]));
      return kind == "explicit" ? BaseSet::explicit_set(g, std::move(elems))
                                : BaseSet::cofinite(g, std::move(elems));
    }
    if (kind == "ap") {
      if (t.size() != 4)
        throw ParseError(line, "ap needs a modulus and a residue vector");
      return BaseSet::arithmetic_progression(g, parse_paren_vector(t[2], line),
                                             parse_paren_vector(t[3], line));
    }
    if (kind == "cylinder") {
      std::vector<std::int64_t> ones, zeros;
      for (std::size_t i = 2; i < t.size(); ++i) {
        auto colon = t[i].find(':');
        if (colon == std::string::npos)
          throw ParseError(line, "cylinder pins look like coord:bit");
        std::int64_t coord = static_cast<std::int64_t>(
            parse_uint(t[i].substr(0, colon), line, "coordinate"));
        const std::string bit = t[i].substr(colon + 1);
        if (bit == "1") ones.push_back(coord);
        else if (bit == "0") zeros.push_back(coord);
        else throw ParseError(line, "cylinder bit must be 0 or 1");
      }
      return BaseSet::cylinder(g, std::move(ones), std::move(zeros));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
  throw ParseError(line, "unknown topology kind '" + kind + "'");
}

inline std::vector<std::vector<std::string>> split_levels(
    const std::vector<std::string>& t, std::size_t first, std::size_t line) {
  std::vector<std::vector<std::string>> levels(1);
  for (std::size_t i = first; i < t.size(); ++i) {
    if (t[i] == ";") {
      levels.emplace_back();
    } else {
      levels.back().push_back(t[i]);
    }
  }
  for (const auto& level : levels)
    if (level.empty())
      throw ParseError(line, "empty filtration level");
  return levels;
}

inline Filtration parse_filtration_line(const GroupPtr& g,
                                        const std::vector<std::string>& t,
                                        std::size_t line,
                                        std::uint64_t bound) {
  if (t.size() < 3) throw ParseError(line, "filtration line needs a form");
  const std::string& form = t[1];
  auto levels = split_levels(t, 2, line);
  Filtration f;
  f.group = g;
  f.chain.push_back(Subgroup::trivial(g));
  try {
    if (form == "generators") {
      std::vector<Element> gens;
      for (const auto& level : levels) {
        for (const auto& tok : level) gens.push_back(g->parse(tok));
        f.chain.push_back(generate(g, gens, bound));
      }
    } else if (form == "elements") {
      for (const auto& level : levels) {
        std::vector<Element> elems{g->identity()};
        for (const auto& tok : level) elems.push_back(g->parse(tok));
        f.chain.push_back(Subgroup::explicit_set(g, std::move(elems)));
      }
    } else if (form == "lattice") {
      for (const auto& level : levels) {
        if (level.size() != 1)
          throw ParseError(line, "lattice levels are single moduli vectors");
        auto moduli = parse_paren_vector(level[0], line);
        bool all_ones = true;
        for (auto m : moduli) all_ones = all_ones && m == 1;
        f.chain.push_back(all_ones ? Subgroup::full(g)
                                   : Subgroup::lattice_diagonal(g, moduli));
      }
    } else {
      throw ParseError(line, "unknown filtration form '" + form + "'");
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
  const Subgroup& top = f.chain.back();
  if (g->finite()) {
    auto ts = top.size();
    f.complete = ts && *ts == *g->order();
  } else {
    f.complete = top.rep() == Subgroup::Rep::Full;
  }
  return f;
}

inline Subgroup parse_subgroup_line(const GroupPtr& g,
                                    const std::vector<std::string>& t,
                                    std::size_t line, std::uint64_t bound) {
  if (t.size() < 3) throw ParseError(line, "subgroup line needs a form");
  const std::string& form = t[1];
  try {
    if (form == "generators") {
      std::vector<Element> gens;
      for (std::size_t i = 2; i < t.size(); ++i) gens.push_back(g->parse(t[i]));
      return generate(g, gens, bound);
    }
    if (form == "elements") {
      std::vector<Element> elems{g->identity()};
      for (std::size_t i = 2; i < t.size(); ++i)
        elems.push_back(g->parse(t[i]));
      return Subgroup::explicit_set(g, std::move(elems));
    }
    if (form == "lattice") {
      if (t.size() != 3)
        throw ParseError(line, "subgroup lattice takes one moduli vector");
      return Subgroup::lattice_diagonal(g, parse_paren_vector(t[2], line));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line, e.what());
  }
  throw ParseError(line, "unknown subgroup form '" + form + "'");
}

inline std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace detail

inline constexpr std::uint64_t kDefaultProbes = 10000;
inline constexpr std::uint64_t kDefaultBound = 100000;
inline constexpr std::uint64_t kDefaultGuard = 64;

// Parses and validates a scenario document; runs the declared guards
// (infinite_guard and squares_check per base set) and records them.
inline Scenario parse_scenario(const std::string& text) {
  Scenario scn;
  std::istringstream is(text);
  std::string raw;
  std::size_t lineno = 0;

  // Field-order automaton: group < topology < filtration < subgroup <
  // element < param.
  int stage = 0;
  auto advance_to = [&](int next, std::size_t line, const std::string& field) {
    static const int order[] = {0, 1, 2, 3, 4, 5};
    (void)order;
    if (next < stage)
      throw ParseError(line, "field '" + field +
                                 "' violates the canonical field order");
    stage = next;
  };

  std::vector<std::vector<std::string>> raw_lines;
  std::vector<std::size_t> raw_linenos;
  while (std::getline(is, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    auto tokens = detail::tokenize(raw);
    if (tokens.empty()) continue;
    raw_lines.push_back(std::move(tokens));
    raw_linenos.push_back(lineno);
  }
  if (raw_lines.empty()) throw ParseError(0, "scenario is empty");

  // Params are needed before filtration parsing (closure bound), so scan
  // them first; canonical order is still enforced below.
  std::map<std::string, std::uint64_t> params;
  std::string last_param;
  for (std::size_t i = 0; i < raw_lines.size(); ++i) {
    const auto& t = raw_lines[i];
    if (t[0] != "param") continue;
    if (t.size() != 3)
      throw ParseError(raw_linenos[i], "param lines look like: param name N");
    if (!last_param.empty() && t[1] <= last_param)
      throw ParseError(raw_linenos[i],
                       "params must be in ascending name order");
    last_param = t[1];
    static const char* known[] = {"stages", "steps",  "probes", "bound",
                                  "coverage", "prefix", "up-to", "guard"};
    bool ok = false;
    for (const char* k : known) ok = ok || t[1] == k;
    if (!ok)
      throw ParseError(raw_linenos[i], "unknown param '" + t[1] + "'");
    params[t[1]] = detail::parse_uint(t[2], raw_linenos[i], "param value");
  }
  std::uint64_t bound = params.count("bound") ? params["bound"] : kDefaultBound;

  std::vector<BaseSet> base_sets;
  for (std::size_t i = 0; i < raw_lines.size(); ++i) {
    const auto& t = raw_lines[i];
    std::size_t line = raw_linenos[i];
    const std::string& field = t[0];
    if (field == "group") {
      advance_to(0, line, field);
      if (scn.group) throw ParseError(line, "duplicate group line");
      scn.group = detail::parse_group_line(t, line);
      stage = 1;
    } else if (field == "topology") {
      advance_to(1, line, field);
      if (!scn.group) throw ParseError(line, "topology before group");
      base_sets.push_back(detail::parse_topology_line(scn.group, t, line));
    } else if (field == "filtration") {
      advance_to(2, line, field);
      if (!scn.group) throw ParseError(line, "filtration before group");
      if (scn.filtration) throw ParseError(line, "duplicate filtration line");
      scn.filtration = detail::parse_filtration_line(scn.group, t, line, bound);
      stage = 3;
    } else if (field == "subgroup") {
      advance_to(3, line, field);
      if (!scn.group) throw ParseError(line, "subgroup before group");
      if (scn.subgroup) throw ParseError(line, "duplicate subgroup line");
      scn.subgroup = detail::parse_subgroup_line(scn.group, t, line, bound);
      stage = 4;
    } else if (field == "element") {
      advance_to(4, line, field);
      if (!scn.group) throw ParseError(line, "element before group");
      if (scn.element) throw ParseError(line, "duplicate element line");
      if (t.size() != 2) throw ParseError(line, "element lines take one value");
      try {
        scn.element = scn.group->parse(t[1]);
      } catch (const Error& e) {
        throw ParseError(line, e.what());
      }
      stage = 5;
    } else if (field == "param") {
      advance_to(5, line, field);
      stage = 5;
    } else {
      throw ParseError(line, "unknown field '" + field + "'");
    }
  }
  if (!scn.group) throw ParseError(0, "scenario has no group line");
  scn.topology = BaseFamily(std::move(base_sets));
  scn.params = std::move(params);

  // Guards: recorded evidence, not blockers. Thin base sets surface later
  // as explicit search-exhaustion errors.
  std::uint64_t guard = scn.param("guard", kDefaultGuard);
  for (std::size_t i = 0; i < scn.topology.size(); ++i) {
    std::uint64_t hits = infinite_guard(scn.topology[i], guard);
    scn.guard_notes.push_back("guard.U" + std::to_string(i) + "=" +
                              std::to_string(hits) + "/" +
                              std::to_string(guard));
  }

  // Canonical re-serialization and digest.
  std::ostringstream canon;
  canon << "group " << scn.group->describe() << "\n";
  for (const auto& set : scn.topology.sets())
    canon << "topology " << set.describe() << "\n";
  if (scn.filtration) {
    canon << "filtration";
    for (std::size_t i = 1; i < scn.filtration->chain.size(); ++i)
      canon << (i == 1 ? " " : " ; ") << scn.filtration->chain[i].describe();
    canon << "\n";
  }
  if (scn.subgroup) canon << "subgroup " << scn.subgroup->describe() << "\n";
  if (scn.element)
    canon << "element " << scn.group->format(*scn.element) << "\n";
  for (const auto& [k, v] : scn.params)
    canon << "param " << k << " " << v << "\n";
  scn.canonical_text = canon.str();
  scn.digest = detail::fnv1a_hex(scn.canonical_text);
  return scn;
}

}  // namespace densefactor
