#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "densefactor/element.hpp"
#include "densefactor/errors.hpp"
#include "densefactor/group.hpp"
#include "densefactor/subgroup.hpp"

namespace densefactor {

// Level parity drives the transversal side: even levels pick left-coset
// representatives, odd levels right-coset representatives.
inline Side side_of(std::size_t level) {
  return level % 2 == 0 ? Side::Left : Side::Right;
}

// An increasing subgroup chain G_0 c G_1 c ... c G_m starting at the
// trivial subgroup. `complete` declares G_m = G; desk-scale chains are
// finite, so the limit-level condition is vacuous.
struct Filtration {
  GroupPtr group;
  std::vector<Subgroup> chain;
  bool complete = false;

  std::size_t levels() const noexcept {
    return chain.empty() ? 0 : chain.size() - 1;
  }
  const Subgroup& top() const { return chain.back(); }
};

struct FiltrationReport {
  bool valid = true;
  bool complete = false;
  bool prefix_certified = false;
  std::vector<std::string> violations;
  std::vector<std::string> notes;

  void violate(std::string what) {
    valid = false;
    violations.push_back(std::move(what));
  }
};

// Checks the chain conditions: G_0 = {e}, strict inclusion at every step,
// and the declared completeness flag (exactly on finite groups, on an
// enumeration prefix for countable ones).
inline FiltrationReport validate_filtration(const Filtration& f,
                                            std::uint64_t probe = 256) {
  FiltrationReport report;
  if (f.chain.empty()) {
    report.violate("chain is empty");
    return report;
  }
  const Group& g = *f.group;
  for (const auto& level : f.chain)
    if (level.parent_ptr().get() != f.group.get())
      report.violate("chain level lives over a different group");

  const Subgroup& g0 = f.chain.front();
  if (!g0.contains(g.identity())) {
    report.violate("condition (1): G_0 does not contain the identity");
  } else if (!g0.is_trivial()) {
    Element w = g0.at(g0.at(0) == g.identity() ? 1 : 0);
    report.violate("condition (1): G_0 = {e} fails, contains " + g.format(w));
  }

  for (std::size_t i = 0; i + 1 < f.chain.size(); ++i) {
    const Subgroup& lo = f.chain[i];
    const Subgroup& hi = f.chain[i + 1];
    if (!lo.subset_of(hi, probe)) {
      report.violate("condition (2): G_" + std::to_string(i) +
                     " is not contained in G_" + std::to_string(i + 1));
      continue;
    }
    auto witness = hi.element_outside(lo, probe);
    if (!witness)
      report.violate("condition (2): G_" + std::to_string(i) + " = G_" +
                     std::to_string(i + 1) + " (no strictness witness)");
  }
  report.notes.push_back(
      "condition (3) is vacuous: finite chains have no limit levels");

  const Subgroup& top = f.top();
  if (g.finite()) {
    auto ts = top.size();
    bool is_all = ts && *ts == *g.order();
    report.complete = is_all;
    if (f.complete && !is_all)
      report.violate("declared complete but |G_m| < |G|");
    if (!f.complete && is_all)
      report.violate("declared incomplete but G_m = G");
  } else {
    if (top.rep() == Subgroup::Rep::Full) {
      report.complete = true;
    } else if (f.complete) {
      // Certify on an enumeration prefix.
      bool ok = true;
      EnumCursor cursor(f.group);
      for (std::uint64_t i = 0; i < probe && ok; ++i) {
        auto e = cursor.next();
        if (!e) break;
        if (!top.contains(*e)) {
          report.violate("declared complete but " + g.format(*e) +
                         " lies outside G_m");
          ok = false;
        }
      }
      if (ok) {
        report.complete = true;
        report.prefix_certified = true;
        report.notes.push_back("completeness certified on the first " +
                               std::to_string(probe) + " elements only");
      }
    }
  }
  if (f.complete && report.complete && top.rep() == Subgroup::Rep::Full)
    report.notes.push_back("G_m is the full group by construction");
  return report;
}

// A system of coset representatives for one stratum G_{a+1} \ G_a.
// Finite strata are materialized with enumeration-minimal representatives
// (claimed witnesses override the minimum for their cosets); countable
// non-span strata produce representatives lazily in enumeration order.
class Transversal {
public:
  Transversal(Subgroup upper, Subgroup lower, Side side,
              std::vector<Element> claimed = {})
      : upper_(std::move(upper)), lower_(std::move(lower)), side_(side) {
    const Group& g = upper_.parent();
    for (const auto& w : claimed) {
      if (!upper_.contains(w) || lower_.contains(w))
        throw UsageError("claimed representative " + g.format(w) +
                         " is not in the stratum");
      for (const auto& prev : reps_)
        if (same_coset(prev, w))
          throw UsageError("claimed representatives share a coset");
      reps_.push_back(w);
    }
    auto upper_size = upper_.size();
    if (upper_size && (upper_.rep() == Subgroup::Rep::Explicit ||
                       upper_.rep() == Subgroup::Rep::Full)) {
      materialize_by_scan(*upper_size);
    } else if (upper_.rep() == Subgroup::Rep::BooleanSpan) {
      materialize_span();
    } else {
      lazy_ = true;  // representatives appear on demand, in stream order
    }
  }

  Side side() const noexcept { return side_; }
  const Subgroup& upper() const noexcept { return upper_; }
  const Subgroup& lower() const noexcept { return lower_; }
  bool lazy() const noexcept { return lazy_; }

  bool same_coset(const Element& a, const Element& b) const {
    const Group& g = upper_.parent();
    return side_ == Side::Left ? lower_.contains(g.op(g.inv(a), b))
                               : lower_.contains(g.op(b, g.inv(a)));
  }

  // All representatives (materialized strata only), in enumeration order.
  const std::vector<Element>& reps() const {
    if (lazy_)
      throw UsageError("transversal of a countable stratum is lazy");
    return reps_;
  }

  // Representatives discovered so far (lazy strata grow on demand).
  const std::vector<Element>& known_reps() const noexcept { return reps_; }

  // The representative of g's coset; g must lie in the stratum.
  Element rep_for(const Element& g) const {
    if (lower_.contains(g) || !upper_.contains(g))
      throw UsageError("rep_for: element is not in the stratum");
    for (const auto& r : reps_)
      if (same_coset(r, g)) return r;
    if (!lazy_)
      throw UsageError("materialized transversal misses a coset");
    // Scan the stratum in enumeration order; the first element of each
    // unseen coset is its minimal representative.
    if (!cursor_index_) cursor_index_ = 0;
    constexpr std::uint64_t kScanCap = 1u << 26;
    while (*cursor_index_ < kScanCap) {
      Element e = upper_.at((*cursor_index_)++);
      if (lower_.contains(e)) continue;
      bool seen = false;
      for (const auto& r : reps_)
        if (same_coset(r, e)) { seen = true; break; }
      if (seen) continue;
      reps_.push_back(e);
      if (same_coset(e, g)) return e;
    }
    throw UsageError("lazy transversal scan exceeded its cap");
  }

private:
  void materialize_by_scan(std::uint64_t upper_size) {
    for (std::uint64_t i = 0; i < upper_size; ++i) {
      Element e = upper_.at(i);
      if (lower_.contains(e)) continue;
      bool seen = false;
      for (const auto& r : reps_)
        if (same_coset(r, e)) { seen = true; break; }
      if (!seen) reps_.push_back(e);
    }
    sort_reps();
  }

  void materialize_span() {
    const Group& g = upper_.parent();
    detail::BooleanSpan lower_span;
    if (lower_.rep() == Subgroup::Rep::BooleanSpan) {
      lower_span = lower_.span();
    } else {
      for (const auto& e : lower_.elements()) lower_span.insert(e, g);
    }
    // Extension basis: upper basis vectors that are independent modulo the
    // lower span. Cosets are exactly its nonzero combinations.
    detail::BooleanSpan ext;
    std::vector<Element> ext_basis;
    for (const auto& b : upper_.span().basis()) {
      Element r = lower_span.reduce(b, g);
      if (r.size() == 0) continue;
      if (ext.insert(r, g)) ext_basis = ext.basis();
    }
    if (ext_basis.size() > 24)
      throw UsageError("boolean stratum has too many cosets to materialize");
    std::uint64_t combos = (std::uint64_t{1} << ext_basis.size());
    for (std::uint64_t m = 1; m < combos; ++m) {
      Element c;
      for (std::size_t j = 0; m >> j; ++j)
        if ((m >> j) & 1) c = g.op(c, ext_basis[j]);
      Element rep = lower_span.reduce(c, g);  // coset minimum
      bool claimed = false;
      for (const auto& r : reps_)
        if (same_coset(r, rep)) { claimed = true; break; }
      if (!claimed) reps_.push_back(std::move(rep));
    }
    sort_reps();
  }

  void sort_reps() {
    const Group& g = upper_.parent();
    std::sort(reps_.begin(), reps_.end(),
              [&g](const Element& a, const Element& b) {
                return g.enum_less(a, b);
              });
  }

  Subgroup upper_, lower_;
  Side side_;
  bool lazy_ = false;
  mutable std::vector<Element> reps_;
  mutable std::optional<std::uint64_t> cursor_index_;
};

struct TransversalSystem {
  std::vector<Transversal> levels;

  const Transversal& at(std::size_t level) const { return levels.at(level); }
  std::size_t size() const noexcept { return levels.size(); }
};

// T_a = representatives of G_{a+1} \ G_a by G_a, side by level parity,
// minimal-enumeration tie-break.
inline TransversalSystem select_transversals(const Filtration& f) {
  if (f.chain.size() < 2)
    throw UsageError("select_transversals needs at least one stratum");
  TransversalSystem system;
  for (std::size_t a = 0; a + 1 < f.chain.size(); ++a)
    system.levels.emplace_back(f.chain[a + 1], f.chain[a], side_of(a));
  return system;
}

// The alternating decomposition: x-chain entries carry even levels in
// strictly decreasing order, y-chain entries odd levels likewise (y_0,
// the outermost factor, first). Recomposition order is
// x_0 ... x_l y_r ... y_0.
struct NormalForm {
  std::vector<std::pair<Element, std::size_t>> xchain;
  std::vector<std::pair<Element, std::size_t>> ychain;

  bool empty() const noexcept { return xchain.empty() && ychain.empty(); }
};

// Iterative peeling: locate the smallest chain level containing the
// remainder and strip the unique representative of its coset.
inline NormalForm decompose(const Element& g, const Filtration& f,
                            const TransversalSystem& t) {
  const Group& grp = *f.group;
  grp.check(g, "decompose");
  if (!f.top().contains(g)) throw ElementOutsideChain(grp.format(g));
  NormalForm nf;
  Element rem = g;
  while (rem != grp.identity()) {
    std::size_t level = 0;
    while (!f.chain[level].contains(rem)) ++level;
    if (level == 0)
      throw UsageError("remainder fell into G_0 without reaching e");
    std::size_t a = level - 1;
    const Transversal& trans = t.at(a);
    if (side_of(a) == Side::Left) {
      Element x = trans.rep_for(rem);
      rem = grp.op(grp.inv(x), rem);
      nf.xchain.emplace_back(std::move(x), a);
    } else {
      Element y = trans.rep_for(rem);
      rem = grp.op(rem, grp.inv(y));
      nf.ychain.emplace_back(std::move(y), a);
    }
  }
  return nf;
}

inline Element recompose(const NormalForm& nf, const Group& g) {
  Element acc = g.identity();
  for (const auto& [x, level] : nf.xchain) acc = g.op(acc, x);
  for (auto it = nf.ychain.rbegin(); it != nf.ychain.rend(); ++it)
    acc = g.op(acc, it->first);
  return acc;
}

// The x-part (product of the x-chain) and y-part (product of the reversed
// y-chain) of an element's normal form; g = xpart * ypart.
inline std::pair<Element, Element> factor_split(const NormalForm& nf,
                                                const Group& g) {
  Element xpart = g.identity();
  for (const auto& [x, level] : nf.xchain) xpart = g.op(xpart, x);
  Element ypart = g.identity();
  for (auto it = nf.ychain.rbegin(); it != nf.ychain.rend(); ++it)
    ypart = g.op(ypart, it->first);
  return {std::move(xpart), std::move(ypart)};
}

// "7 = x(1@2)*x(4@0)*y(2@1)" with factors in recomposition order.
inline std::string format_normal_form(const Group& g, const Element& elem,
                                      const NormalForm& nf) {
  std::string s = g.format(elem) + " = ";
  if (nf.empty()) return s + "e";
  bool first = true;
  for (const auto& [x, level] : nf.xchain) {
    if (!first) s += "*";
    s += "x(" + g.format(x) + "@" + std::to_string(level) + ")";
    first = false;
  }
  for (auto it = nf.ychain.rbegin(); it != nf.ychain.rend(); ++it) {
    if (!first) s += "*";
    s += "y(" + g.format(it->first) + "@" + std::to_string(it->second) + ")";
    first = false;
  }
  return s;
}

struct WitnessRecord {
  std::size_t stage = 0;
  std::size_t base_index = 0;
  Element witness;
  bool frontier = false;  // constructed past the blind scan window
};

struct Provenance {
  std::string construction;
  std::vector<std::string> level_sizes;
  std::string tiebreak = "MIN_ENUM";
  std::string scope;
  std::vector<WitnessRecord> witnesses;
};

// A factor pair G = A*B (or a partial one on enumeration prefixes).
struct FactorPair {
  std::vector<Element> a;
  std::vector<Element> b;
  Provenance provenance;
};

struct ExtractScope {
  static ExtractScope all() { return {true, 0}; }
  static ExtractScope prefix(std::uint64_t n) { return {false, n}; }

  bool whole_group;
  std::uint64_t prefix_length;
};

// Decomposes every element in scope and collects the x-parts into A and
// the y-parts into B.
inline FactorPair extract_factors(const Filtration& f,
                                  const TransversalSystem& t,
                                  const ExtractScope& scope) {
  const Group& g = *f.group;
  std::uint64_t n;
  if (scope.whole_group) {
    if (!g.finite())
      throw UsageError("extract_factors(ALL) requires a finite group");
    n = *g.order();
  } else {
    n = scope.prefix_length;
  }
  std::unordered_set<Element, ElementHash> aset, bset;
  EnumCursor cursor(f.group);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto e = cursor.next();
    if (!e) break;
    NormalForm nf = decompose(*e, f, t);
    auto [xpart, ypart] = factor_split(nf, g);
    aset.insert(std::move(xpart));
    bset.insert(std::move(ypart));
  }
  FactorPair pair;
  pair.a = g.sorted_by_enum({aset.begin(), aset.end()});
  pair.b = g.sorted_by_enum({bset.begin(), bset.end()});
  pair.provenance.construction = "filtration-extraction";
  pair.provenance.scope = scope.whole_group
                              ? "all"
                              : "prefix " + std::to_string(n);
  for (const auto& level : f.chain) {
    auto s = level.size();
    pair.provenance.level_sizes.push_back(s ? std::to_string(*s)
                                            : level.describe());
  }
  return pair;
}

}  // namespace densefactor
