#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "densefactor/element.hpp"
#include "densefactor/errors.hpp"
#include "densefactor/filtration.hpp"
#include "densefactor/group.hpp"
#include "densefactor/subgroup.hpp"
#include "densefactor/topology.hpp"

namespace densefactor {

struct DenseBuildResult {
  Filtration filtration;
  TransversalSystem transversals;
  std::vector<WitnessRecord> witness_log;
};

namespace detail {

inline bool coset_matches(const Group& g, const Subgroup& h, Side side,
                          const Element& a, const Element& b) {
  return side == Side::Left ? h.contains(g.op(g.inv(a), b))
                            : h.contains(g.op(b, g.inv(a)));
}

// Minimal-coordinate witness construction for boolean strata whose true
// stream position lies beyond any feasible blind scan (the subgroup span
// swallows the low enumeration range after a few stages). Candidates are
// pattern+{c} with c ascending; c = 1 + (largest coordinate in sight)
// always succeeds, so the loop terminates.
inline std::optional<Element> boolean_frontier_witness(
    const Group& g, const BaseSet& u, const Subgroup& level, Side side,
    const std::vector<Element>& claimed) {
  if (g.kind() != GroupKind::BooleanSum) return std::nullopt;
  if (u.kind() != BaseSet::Kind::Cylinder &&
      u.kind() != BaseSet::Kind::Cofinite)
    return std::nullopt;

  std::int64_t max_coord = 0;
  auto absorb = [&max_coord](const Element& e) {
    if (e.size()) max_coord = std::max(max_coord, e.data().back());
  };
  if (level.rep() == Subgroup::Rep::BooleanSpan) {
    for (const auto& b : level.span().basis()) absorb(b);
  } else if (level.rep() == Subgroup::Rep::Explicit) {
    for (const auto& e : level.elements()) absorb(e);
  } else {
    return std::nullopt;
  }
  for (const auto& w : claimed) absorb(w);

  std::vector<std::int64_t> pattern;
  std::vector<std::int64_t> avoid;
  if (u.kind() == BaseSet::Kind::Cylinder) {
    pattern = u.cylinder_ones();
    avoid = u.cylinder_zeros();
    for (auto c : pattern) max_coord = std::max(max_coord, c);
  }
  for (std::int64_t c = 0; c <= max_coord + 2; ++c) {
    if (std::binary_search(pattern.begin(), pattern.end(), c)) continue;
    if (std::binary_search(avoid.begin(), avoid.end(), c)) continue;
    std::vector<std::int64_t> coords = pattern;
    coords.insert(std::lower_bound(coords.begin(), coords.end(), c), c);
    Element candidate{std::move(coords)};
    if (!u.contains(candidate)) continue;  // cofinite exclusions
    if (level.contains(candidate)) continue;
    bool fresh = true;
    for (const auto& w : claimed)
      if (coset_matches(g, level, side, w, candidate)) { fresh = false; break; }
    if (fresh) return candidate;
  }
  return std::nullopt;
}

inline Element find_witness(const GroupPtr& gptr, const BaseSet& u,
                            const Subgroup& level, Side side,
                            const std::vector<Element>& claimed,
                            std::size_t base_index, std::size_t stage,
                            std::uint64_t probes, bool& frontier) {
  const Group& g = *gptr;
  MemberCursor cursor(u);
  for (std::uint64_t probe = 0; probe < probes; ++probe) {
    auto m = cursor.next();
    if (!m) break;  // finite base set ran dry
    if (level.contains(*m)) continue;
    bool fresh = true;
    for (const auto& w : claimed)
      if (coset_matches(g, level, side, w, *m)) { fresh = false; break; }
    if (fresh) { frontier = false; return *m; }
  }
  if (auto fw = boolean_frontier_witness(g, u, level, side, claimed)) {
    frontier = true;
    return *fw;
  }
  throw WitnessSearchExhausted(base_index, stage, probes);
}

// Next chain level: the closure of the current level together with the
// stage witnesses. Boolean parents use the exact span representation and
// only materialize while the span stays within bound.
inline Subgroup extend_level(const GroupPtr& gptr, const Subgroup& level,
                             const std::vector<Element>& witnesses,
                             std::uint64_t bound) {
  const Group& g = *gptr;
  if (g.kind() == GroupKind::BooleanSum) {
    BooleanSpan span;
    if (level.rep() == Subgroup::Rep::BooleanSpan) {
      span = level.span();
    } else {
      for (const auto& e : level.elements()) span.insert(e, g);
    }
    for (const auto& w : witnesses) span.insert(w, g);
    std::vector<Element> basis = span.basis();
    if (span.dim() <= 62) {
      std::uint64_t size = std::uint64_t{1} << span.dim();
      if (size <= bound && size <= kMaxMaterialize) {
        std::vector<Element> elems;
        elems.reserve(size);
        for (std::uint64_t m = 0; m < size; ++m)
          elems.push_back(span.combo(m, g));
        return Subgroup::explicit_set(gptr, std::move(elems),
                                      /*validate=*/false);
      }
    }
    return Subgroup::boolean_span(gptr, basis);
  }
  std::vector<Element> gens;
  if (level.rep() != Subgroup::Rep::Explicit)
    throw UsageError(
        "dense filtration requires materialized levels for this group kind");
  gens = level.elements();
  gens.insert(gens.end(), witnesses.begin(), witnesses.end());
  return generate(gptr, gens, bound);
}

}  // namespace detail

// The Theorem's construction at desk scale. Starting from G_0 = {e}, stage
// a claims one fresh-coset witness from each of U_0..U_a (capped by the
// family size), closes the level over them, and installs the full stratum
// transversal with the witnesses as their cosets' representatives. The
// output satisfies T_a meet U_c != empty for every c <= a < stages.
inline DenseBuildResult build_dense_filtration(GroupPtr gptr,
                                               const BaseFamily& base,
                                               std::size_t stages,
                                               std::uint64_t bound,
                                               std::uint64_t probes) {
  if (base.empty()) throw UsageError("dense filtration needs a base family");
  if (stages == 0) throw UsageError("dense filtration needs stages >= 1");
  for (const auto& set : base.sets())
    if (set.group_ptr().get() != gptr.get())
      throw UsageError("base family lives over a different group");

  const Group& g = *gptr;
  DenseBuildResult result;
  result.filtration.group = gptr;
  result.filtration.chain.push_back(Subgroup::trivial(gptr));

  for (std::size_t stage = 0; stage < stages; ++stage) {
    const Subgroup& level = result.filtration.chain.back();
    if (g.finite()) {
      auto ls = level.size();
      if (ls && *ls == *g.order()) break;  // chain already complete
    }
    Side side = side_of(stage);
    std::vector<Element> claimed;
    std::size_t top_base = std::min(stage + 1, base.size());
    for (std::size_t c = 0; c < top_base; ++c) {
      bool frontier = false;
      Element w = detail::find_witness(gptr, base[c], level, side, claimed, c,
                                       stage, probes, frontier);
      claimed.push_back(w);
      result.witness_log.push_back({stage, c, std::move(w), frontier});
    }
    Subgroup next = detail::extend_level(gptr, level, claimed, bound);
    result.transversals.levels.emplace_back(next, level, side, claimed);
    result.filtration.chain.push_back(std::move(next));
  }

  if (g.finite()) {
    auto ts = result.filtration.top().size();
    result.filtration.complete = ts && *ts == *g.order();
  }
  return result;
}

struct TransversalFactorization {
  FactorPair pair;
  Subgroup subgroup;          // the A side as given
  std::uint64_t coverage = 0; // enumeration prefix guaranteed covered
};

// Comment-7 construction: a dense set B of right-coset representatives of
// G by A. Phase 1 claims one unclaimed coset out of every base set; phase 2
// walks the enumeration prefix and claims every still-unclaimed coset met,
// so each enumerated element up to `coverage` lands in A*B.
inline TransversalFactorization subgroup_transversal_factorize(
    const Subgroup& a, const BaseFamily& base, std::uint64_t coverage,
    std::uint64_t probes) {
  const GroupPtr& gptr = a.parent_ptr();
  const Group& g = *gptr;
  auto asize = a.size();
  if (!asize || *asize > kMaxMaterialize)
    throw UsageError(
        "transversal factorization requires a materializable subgroup A");
  for (const auto& set : base.sets())
    if (set.group_ptr().get() != gptr.get())
      throw UsageError("base family lives over a different group");

  {  // A must be proper.
    bool proper = false;
    EnumCursor cursor(gptr);
    for (std::uint64_t i = 0; i < std::max<std::uint64_t>(probes, *asize + 1);
         ++i) {
      auto e = cursor.next();
      if (!e) break;
      if (!a.contains(*e)) { proper = true; break; }
    }
    if (!proper)
      throw UsageError("subgroup A is not proper (no outside element found)");
  }

  TransversalFactorization result{FactorPair{}, a, coverage};
  std::vector<Element> reps;
  auto claimed = [&](const Element& u) {
    for (const auto& b : reps)
      if (a.contains(g.op(u, g.inv(b)))) return true;  // A*u == A*b
    return false;
  };

  for (std::size_t n = 0; n < base.size(); ++n) {
    MemberCursor cursor(base[n]);
    bool found = false;
    for (std::uint64_t probe = 0; probe < probes && !found; ++probe) {
      auto u = cursor.next();
      if (!u) break;
      if (claimed(*u)) continue;
      reps.push_back(*u);
      result.pair.provenance.witnesses.push_back({1, n, *u, false});
      found = true;
    }
    if (!found) throw WitnessSearchExhausted(n, 1, probes);
  }

  EnumCursor cursor(gptr);
  for (std::uint64_t i = 0; i < coverage; ++i) {
    auto e = cursor.next();
    if (!e) break;
    if (claimed(*e)) continue;
    reps.push_back(*e);
    result.pair.provenance.witnesses.push_back({2, 0, *e, false});
  }

  result.pair.a.reserve(*asize);
  for (std::uint64_t i = 0; i < *asize; ++i)
    result.pair.a.push_back(a.at(i));
  result.pair.b = g.sorted_by_enum(std::move(reps));
  result.pair.provenance.construction = "subgroup-transversal";
  result.pair.provenance.scope = "coverage " + std::to_string(coverage);
  result.pair.provenance.level_sizes = {a.describe()};
  return result;
}

}  // namespace densefactor
