#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "densefactor/element.hpp"
#include "densefactor/errors.hpp"
#include "densefactor/filtration.hpp"
#include "densefactor/group.hpp"
#include "densefactor/topology.hpp"

namespace densefactor {

// Brute-force verdicts. A fail always carries at least one witness line.
struct VerificationReport {
  bool pass = true;
  std::vector<std::string> witnesses;
  std::uint64_t products_computed = 0;
  std::uint64_t elements_checked = 0;

  void fail(std::string witness) {
    pass = false;
    witnesses.push_back(std::move(witness));
  }
};

// All |A|*|B| products, distinctness checked by canonical-encoding hashing;
// collisions are reported as the quadruple (a,b) vs (a',b').
inline VerificationReport is_partial_factorization(
    const Group& g, const std::vector<Element>& a,
    const std::vector<Element>& b, std::size_t max_witnesses = 8) {
  VerificationReport report;
  std::unordered_map<Element, std::pair<std::size_t, std::size_t>, ElementHash>
      products;
  products.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      Element p = g.op(a[i], b[j]);
      ++report.products_computed;
      auto [it, fresh] = products.emplace(std::move(p), std::make_pair(i, j));
      if (!fresh && report.witnesses.size() < max_witnesses) {
        auto [pi, pj] = it->second;
        report.fail("collision " + g.format(a[pi]) + "*" + g.format(b[pj]) +
                    " = " + g.format(a[i]) + "*" + g.format(b[j]) + " = " +
                    g.format(it->first));
      } else if (!fresh) {
        report.pass = false;
      }
    }
  }
  return report;
}

// Partial factorization + exact cardinality: then A x B -> G is a bijection.
inline VerificationReport is_factorization(const Group& g,
                                           const std::vector<Element>& a,
                                           const std::vector<Element>& b) {
  if (!g.finite())
    throw UsageError("is_factorization requires a finite group");
  VerificationReport report = is_partial_factorization(g, a, b);
  std::uint64_t covered = static_cast<std::uint64_t>(a.size()) * b.size();
  if (covered != *g.order())
    report.fail("covers " + std::to_string(covered) + " of " +
                std::to_string(*g.order()) + " elements");
  return report;
}

// Prefix density: S must meet each of U_0..U_{upTo-1}.
inline VerificationReport density_report(const std::vector<Element>& s,
                                         const BaseFamily& base,
                                         std::size_t up_to) {
  if (up_to > base.size())
    throw UsageError("density_report: upTo exceeds the base family size");
  VerificationReport report;
  for (std::size_t n = 0; n < up_to; ++n) {
    bool hit = false;
    for (const auto& e : s) {
      ++report.elements_checked;
      if (base[n].contains(e)) { hit = true; break; }
    }
    if (!hit) report.fail("misses base set U_" + std::to_string(n));
  }
  return report;
}

// Number of distinct squares g*g over the first k members of U. In a
// Boolean group this is always 1; the Comment-4 hypothesis wants it large.
inline std::uint64_t squares_check(const BaseSet& u, std::uint64_t k) {
  if (k < 1) throw UsageError("squares_check: k must be at least 1");
  const Group& g = u.group();
  std::unordered_map<Element, bool, ElementHash> seen;
  MemberCursor cursor(u);
  for (std::uint64_t i = 0; i < k; ++i) {
    auto e = cursor.next();
    if (!e) break;
    seen.emplace(g.op(*e, *e), true);
  }
  return seen.size();
}

struct AuditScope {
  static AuditScope all() { return {true, 0}; }
  static AuditScope prefix(std::uint64_t n) { return {false, n}; }

  bool whole_group;
  std::uint64_t prefix_length;
};

// Roundtrip (recompose after decompose is the identity), purity (x-parts
// decompose with empty y-chains and vice versa), chain monotonicity, and on
// finite groups the full bijectivity of the extracted factor pair.
inline VerificationReport filtration_audit(const Filtration& f,
                                           const TransversalSystem& t,
                                           const AuditScope& scope) {
  const Group& g = *f.group;
  VerificationReport report;
  std::uint64_t n;
  if (scope.whole_group) {
    if (!g.finite())
      throw UsageError("filtration_audit(ALL) requires a finite group");
    n = *g.order();
  } else {
    n = scope.prefix_length;
  }

  EnumCursor cursor(f.group);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto e = cursor.next();
    if (!e) break;
    ++report.elements_checked;
    NormalForm nf;
    try {
      nf = decompose(*e, f, t);
    } catch (const Error& err) {
      report.fail("decompose(" + g.format(*e) + ") failed: " + err.what());
      continue;
    }
    if (recompose(nf, g) != *e)
      report.fail("roundtrip fails for " + g.format(*e));
    for (std::size_t j = 1; j < nf.xchain.size(); ++j)
      if (nf.xchain[j - 1].second <= nf.xchain[j].second)
        report.fail("x-chain levels not strictly decreasing for " +
                    g.format(*e));
    for (std::size_t j = 1; j < nf.ychain.size(); ++j)
      if (nf.ychain[j - 1].second <= nf.ychain[j].second)
        report.fail("y-chain levels not strictly decreasing for " +
                    g.format(*e));

    auto [xpart, ypart] = factor_split(nf, g);
    NormalForm xnf = decompose(xpart, f, t);
    if (!xnf.ychain.empty())
      report.fail("x-part " + g.format(xpart) + " of " + g.format(*e) +
                  " is not pure");
    NormalForm ynf = decompose(ypart, f, t);
    if (!ynf.xchain.empty())
      report.fail("y-part " + g.format(ypart) + " of " + g.format(*e) +
                  " is not pure");
  }

  if (scope.whole_group) {
    FactorPair pair = extract_factors(f, t, ExtractScope::all());
    VerificationReport bijective = is_factorization(g, pair.a, pair.b);
    report.products_computed += bijective.products_computed;
    if (!bijective.pass) {
      for (auto& w : bijective.witnesses)
        report.fail("bijectivity: " + w);
      if (bijective.witnesses.empty()) report.pass = false;
    }
  }
  return report;
}

}  // namespace densefactor
