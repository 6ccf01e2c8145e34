#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "densefactor/element.hpp"
#include "densefactor/errors.hpp"
#include "densefactor/group.hpp"
#include "densefactor/topology.hpp"
#include "densefactor/verify.hpp"

namespace densefactor {

// Deterministic candidate source; nullopt ends the stream.
using CandidateStream = std::function<std::optional<Element>()>;

inline CandidateStream stream_of(MemberCursor cursor) {
  auto shared = std::make_shared<MemberCursor>(std::move(cursor));
  return [shared]() { return shared->next(); };
}

inline CandidateStream stream_of(EnumCursor cursor) {
  auto shared = std::make_shared<EnumCursor>(std::move(cursor));
  return [shared]() { return shared->next(); };
}

inline CandidateStream stream_of(std::vector<Element> elems) {
  auto shared = std::make_shared<std::pair<std::vector<Element>, std::size_t>>(
      std::move(elems), 0);
  return [shared]() -> std::optional<Element> {
    if (shared->second >= shared->first.size()) return std::nullopt;
    return shared->first[shared->second++];
  };
}

// Aggregated candidate accounting; criterion material for the filter/oracle
// agreement check.
struct ExtensionStats {
  std::uint64_t probed = 0;
  std::uint64_t filter_accepted = 0;
  std::uint64_t oracle_confirmed = 0;
  std::uint64_t mismatches = 0;

  void add(const ExtensionStats& other) {
    probed += other.probed;
    filter_accepted += other.filter_accepted;
    oracle_confirmed += other.oracle_confirmed;
    mismatches += other.mismatches;
  }
};

// Finite pair (A, B) with all products a*b pairwise distinct, maintained
// incrementally through a product index. The symmetricA flag additionally
// pins A = A^{-1} and e in A meet B.
class PartialFactorization {
public:
  PartialFactorization(GroupPtr group, bool symmetric_a)
      : group_(std::move(group)), symmetric_a_(symmetric_a) {
    push_a_raw(group_->identity());
    push_b_raw(group_->identity());
  }

  static PartialFactorization from_sets(GroupPtr group,
                                        std::vector<Element> a,
                                        std::vector<Element> b,
                                        bool symmetric_a) {
    PartialFactorization pf(group, symmetric_a);
    pf.a_.clear(), pf.b_.clear();
    pf.aset_.clear(), pf.bset_.clear(), pf.products_.clear();
    for (auto& e : a) pf.push_a_raw(std::move(e));
    for (auto& e : b) pf.push_b_raw(std::move(e));
    VerificationReport oracle =
        is_partial_factorization(*pf.group_, pf.a_, pf.b_);
    if (!oracle.pass)
      throw UsageError("from_sets: " + oracle.witnesses.front());
    if (symmetric_a && !pf.symmetry_holds())
      throw UsageError("from_sets: A is not symmetric");
    return pf;
  }

  const GroupPtr& group_ptr() const noexcept { return group_; }
  const Group& group() const noexcept { return *group_; }
  bool symmetric_a() const noexcept { return symmetric_a_; }
  const std::vector<Element>& a() const noexcept { return a_; }
  const std::vector<Element>& b() const noexcept { return b_; }

  bool a_contains(const Element& e) const { return aset_.count(e) > 0; }
  bool b_contains(const Element& e) const { return bset_.count(e) > 0; }
  bool product_covered(const Element& e) const {
    return products_.count(e) > 0;
  }

  // The unique witness pair (a, b) with a*b = g, when covered.
  std::optional<std::pair<Element, Element>> witness(const Element& g) const {
    auto it = products_.find(g);
    if (it == products_.end()) return std::nullopt;
    return std::make_pair(a_[it->second.first], b_[it->second.second]);
  }

  // Exact incremental row checks: would the extended pair keep all
  // products distinct?
  bool b_candidate_ok(const Element& x) const {
    std::unordered_set<Element, ElementHash> fresh;
    for (const auto& a : a_) {
      Element p = group_->op(a, x);
      if (products_.count(p) || !fresh.insert(std::move(p)).second)
        return false;
    }
    return true;
  }
  bool a_candidate_ok(const Element& x) const {
    std::unordered_set<Element, ElementHash> fresh;
    for (const auto& b : b_) {
      Element p = group_->op(x, b);
      if (products_.count(p) || !fresh.insert(std::move(p)).second)
        return false;
    }
    return true;
  }
  bool a_pair_candidate_ok(const Element& x, const Element& xi) const {
    std::unordered_set<Element, ElementHash> fresh;
    for (const auto& cand : {x, xi}) {
      for (const auto& b : b_) {
        Element p = group_->op(cand, b);
        if (products_.count(p) || !fresh.insert(std::move(p)).second)
          return false;
      }
    }
    return true;
  }

  void push_b(const Element& x) {
    if (bset_.count(x)) return;
    if (!b_candidate_ok(x))
      throw UsageError("push_b would break the partial factorization");
    push_b_raw(x);
  }
  void push_a(const Element& x) {
    if (aset_.count(x)) return;
    if (!a_candidate_ok(x))
      throw UsageError("push_a would break the partial factorization");
    push_a_raw(x);
  }

  bool symmetry_holds() const {
    for (const auto& a : a_)
      if (!aset_.count(group_->inv(a))) return false;
    return true;
  }

  // Set-inclusion test against a previous state (monotone growth check).
  bool contains_all(const std::vector<Element>& prev_a,
                    const std::vector<Element>& prev_b) const {
    for (const auto& e : prev_a)
      if (!aset_.count(e)) return false;
    for (const auto& e : prev_b)
      if (!bset_.count(e)) return false;
    return true;
  }

private:
  void push_a_raw(Element x) {
    std::size_t ai = a_.size();
    for (std::size_t j = 0; j < b_.size(); ++j)
      products_[group_->op(x, b_[j])] = {ai, j};
    aset_.insert(x);
    a_.push_back(std::move(x));
  }
  void push_b_raw(Element x) {
    std::size_t bj = b_.size();
    for (std::size_t i = 0; i < a_.size(); ++i)
      products_[group_->op(a_[i], x)] = {i, bj};
    bset_.insert(x);
    b_.push_back(std::move(x));
  }

  GroupPtr group_;
  bool symmetric_a_;
  std::vector<Element> a_, b_;
  std::unordered_set<Element, ElementHash> aset_, bset_;
  std::unordered_map<Element, std::pair<std::size_t, std::size_t>, ElementHash>
      products_;
};

namespace detail {

// Shared accept step: re-verify the extended pair with the brute-force
// oracle. Filter acceptance without oracle confirmation is the bug trap.
inline void confirm_with_oracle(const PartialFactorization& pf,
                                const char* op, ExtensionStats& stats) {
  VerificationReport oracle =
      is_partial_factorization(pf.group(), pf.a(), pf.b());
  if (!oracle.pass) {
    ++stats.mismatches;
    throw FilterOracleMismatch(std::string(op) +
                               ": filter accepted but oracle rejected: " +
                               oracle.witnesses.front());
  }
  ++stats.oracle_confirmed;
}

}  // namespace detail

// Statement (5): the first stream element x with x not in B such that
// A(B + {x}) stays a partial factorization.
inline PartialFactorization extend_B(const PartialFactorization& pf,
                                     CandidateStream stream,
                                     std::uint64_t probes,
                                     ExtensionStats& stats) {
  for (std::uint64_t probe = 0; probe < probes; ++probe) {
    auto x = stream();
    if (!x) throw SearchExhausted("extend_B", probe);
    ++stats.probed;
    if (pf.b_contains(*x)) continue;
    if (!pf.b_candidate_ok(*x)) continue;
    ++stats.filter_accepted;
    PartialFactorization next = pf;
    next.push_b(*x);
    detail::confirm_with_oracle(next, "extend_B", stats);
    return next;
  }
  throw SearchExhausted("extend_B", probes);
}

// Statement (6): the first x whose pair {x, x^{-1}} adds two distinct fresh
// rows. x = x^{-1} makes the two rows coincide (x^2 = e lies in B*B^{-1}),
// so Boolean groups reject every candidate; this is the squares-condition
// failure made operational.
inline PartialFactorization extend_A_symmetric(const PartialFactorization& pf,
                                               CandidateStream stream,
                                               std::uint64_t probes,
                                               ExtensionStats& stats) {
  if (!pf.symmetric_a())
    throw UsageError("extend_A_symmetric requires a symmetric A");
  const Group& g = pf.group();
  for (std::uint64_t probe = 0; probe < probes; ++probe) {
    auto x = stream();
    if (!x) throw SearchExhausted("extend_A_symmetric", probe);
    ++stats.probed;
    if (pf.a_contains(*x)) continue;
    Element xi = g.inv(*x);
    if (xi == *x) continue;  // the pair must contribute two distinct rows
    if (!pf.a_pair_candidate_ok(*x, xi)) continue;
    ++stats.filter_accepted;
    PartialFactorization next = pf;
    next.push_a(*x);
    next.push_a(xi);
    detail::confirm_with_oracle(next, "extend_A_symmetric", stats);
    return next;
  }
  throw SearchExhausted("extend_A_symmetric", probes);
}

// Comment 6's A-side growth: one element, no symmetry bookkeeping.
inline PartialFactorization extend_A_plain(const PartialFactorization& pf,
                                           CandidateStream stream,
                                           std::uint64_t probes,
                                           ExtensionStats& stats) {
  for (std::uint64_t probe = 0; probe < probes; ++probe) {
    auto x = stream();
    if (!x) throw SearchExhausted("extend_A_plain", probe);
    ++stats.probed;
    if (pf.a_contains(*x)) continue;
    if (!pf.a_candidate_ok(*x)) continue;
    ++stats.filter_accepted;
    PartialFactorization next = pf;
    next.push_a(*x);
    detail::confirm_with_oracle(next, "extend_A_plain", stats);
    return next;
  }
  throw SearchExhausted("extend_A_plain", probes);
}

// Statement (7): cover g by adjoining the pair {x, x^{-1}} to A and
// x^{-1}g to B. The fast filter is the paper's condition list plus the
// clause x^2 not in B*B^{-1} (which rules out the x*b = x^{-1}*b' collision
// the printed list leaves open); the brute-force oracle stays authoritative.
inline PartialFactorization cover_element(const PartialFactorization& pf,
                                          const Element& g_target,
                                          CandidateStream stream,
                                          std::uint64_t probes,
                                          ExtensionStats& stats) {
  if (!pf.symmetric_a())
    throw UsageError("cover_element requires a symmetric A");
  if (pf.product_covered(g_target))
    throw UsageError("cover_element: target is already covered");
  const Group& g = pf.group();
  const Element& e = g.identity();
  for (std::uint64_t probe = 0; probe < probes; ++probe) {
    auto x = stream();
    if (!x) throw SearchExhausted("cover_element", probe);
    ++stats.probed;
    if (*x == e || pf.a_contains(*x)) continue;
    Element xi = g.inv(*x);
    Element xg = g.op(*x, g_target);
    Element xig = g.op(xi, g_target);

    // A{x,xi}g and AB must not meet.
    std::unordered_set<Element, ElementHash> aug;
    bool ok = true;
    for (const auto& a : pf.a()) {
      for (const Element& ug : {xg, xig}) {
        Element p = g.op(a, ug);
        if (pf.product_covered(p)) { ok = false; break; }
        aug.insert(std::move(p));
      }
      if (!ok) break;
    }
    if (!ok) continue;
    // {x,xi}B must avoid AB and A{x,xi}g.
    for (const auto& b : pf.b()) {
      for (const Element& u : {*x, xi}) {
        Element p = g.op(u, b);
        if (pf.product_covered(p) || aug.count(p)) { ok = false; break; }
      }
      if (!ok) break;
    }
    if (!ok) continue;
    // {x^2, xi^2}g must avoid AB.
    Element xx = g.op(*x, *x);
    Element xixi = g.op(xi, xi);
    if (pf.product_covered(g.op(xx, g_target)) ||
        pf.product_covered(g.op(xixi, g_target)))
      continue;
    // x^2 must avoid B*B^{-1}; in particular x != x^{-1}.
    for (const auto& b : pf.b())
      if (pf.b_contains(g.op(xx, b))) { ok = false; break; }
    if (!ok) continue;

    ++stats.filter_accepted;
    PartialFactorization next = pf;
    next.push_a(*x);
    next.push_a(xi);
    next.push_b(g.op(xi, g_target));
    detail::confirm_with_oracle(next, "cover_element", stats);
    if (!next.product_covered(g_target))
      throw FilterOracleMismatch("cover_element: target not covered");
    return next;
  }
  throw SearchExhausted("cover_element", probes);
}

struct StepSnapshot {
  std::size_t step = 0;
  std::uint64_t size_a = 0, size_b = 0;
  std::uint64_t covered = 0;   // covered elements among g_0..g_step
  std::uint64_t probes_used = 0;
  bool monotone = true;
  bool symmetric = true;
  bool oracle = true;
  bool g_covered = true;
  bool hit_a = true;
  bool hit_b = true;
  std::vector<Element> a, b;  // state copy for mirror/intermediate audits

  bool all_ok(bool need_symmetry) const {
    return monotone && (!need_symmetry || symmetric) && oracle && g_covered &&
           hit_a && hit_b;
  }
};

struct RunTrace {
  std::vector<StepSnapshot> steps;
  ExtensionStats stats;
  std::vector<std::pair<std::size_t, std::uint64_t>> squares_evidence;
  std::string status = "ok";  // "ok" | "search-exhausted"
  std::string detail;
};

struct GreedyResult {
  PartialFactorization pf;
  RunTrace trace;

  bool ok() const { return trace.status == "ok"; }
};

namespace detail {

inline bool meets(const std::vector<Element>& s, const BaseSet& u) {
  for (const auto& e : s)
    if (u.contains(e)) return true;
  return false;
}

inline StepSnapshot snapshot_step(const PartialFactorization& pf,
                                  std::size_t step,
                                  const std::vector<Element>& prefix,
                                  const BaseSet& u, bool need_symmetry,
                                  const StepSnapshot* prev) {
  StepSnapshot snap;
  snap.step = step;
  snap.size_a = pf.a().size();
  snap.size_b = pf.b().size();
  for (const auto& e : prefix)
    if (pf.product_covered(e)) ++snap.covered;
  snap.monotone = prev == nullptr || pf.contains_all(prev->a, prev->b);
  snap.symmetric = !need_symmetry || pf.symmetry_holds();
  snap.oracle = is_partial_factorization(pf.group(), pf.a(), pf.b()).pass;
  snap.g_covered = pf.product_covered(prefix.back());
  snap.hit_a = meets(pf.a(), u);
  snap.hit_b = meets(pf.b(), u);
  snap.a = pf.a();
  snap.b = pf.b();
  return snap;
}

}  // namespace detail

// Comment 4: cover g_n, then restore A- and B-density against U_n, keeping
// A symmetric and the oracle green at every step. Base sets cycle once the
// step index passes the family size. A SearchExhausted aborts the run and
// leaves the partial trace as the empirical signal.
inline GreedyResult run_comment4(GroupPtr group, const BaseFamily& base,
                                 std::size_t steps, std::uint64_t probes) {
  if (base.empty()) throw UsageError("run_comment4 needs a base family");
  GreedyResult result{PartialFactorization(group, /*symmetric_a=*/true), {}};
  for (std::size_t i = 0; i < base.size(); ++i)
    result.trace.squares_evidence.emplace_back(i, squares_check(base[i], 64));

  std::vector<Element> prefix;
  EnumCursor enumerator(group);
  for (std::size_t n = 0; n < steps; ++n) {
    const BaseSet& u = base[n % base.size()];
    auto g_n = enumerator.next();
    if (!g_n) break;  // finite group exhausted
    prefix.push_back(*g_n);
    ExtensionStats before = result.trace.stats;
    try {
      if (!result.pf.product_covered(*g_n))
        result.pf = cover_element(result.pf, *g_n, stream_of(EnumCursor(group)),
                                  probes, result.trace.stats);
      if (!detail::meets(result.pf.a(), u))
        result.pf = extend_A_symmetric(result.pf, stream_of(MemberCursor(u)),
                                       probes, result.trace.stats);
      if (!detail::meets(result.pf.b(), u))
        result.pf = extend_B(result.pf, stream_of(MemberCursor(u)), probes,
                             result.trace.stats);
    } catch (const SearchExhausted& ex) {
      result.trace.status = "search-exhausted";
      result.trace.detail = ex.op() + " at step " + std::to_string(n);
      break;
    }
    const StepSnapshot* prev =
        result.trace.steps.empty() ? nullptr : &result.trace.steps.back();
    StepSnapshot snap = detail::snapshot_step(result.pf, n, prefix, u,
                                              /*need_symmetry=*/true, prev);
    snap.probes_used = result.trace.stats.probed - before.probed;
    result.trace.steps.push_back(std::move(snap));
  }
  return result;
}

// Comment 6: no squares hypothesis and no coverage goal; alternately grow
// A (plain) and B against the cycling base sets until both are prefix-dense.
inline GreedyResult run_comment6(GroupPtr group, const BaseFamily& base,
                                 std::size_t steps, std::uint64_t probes) {
  if (base.empty()) throw UsageError("run_comment6 needs a base family");
  GreedyResult result{PartialFactorization(group, /*symmetric_a=*/false), {}};

  std::vector<Element> prefix;
  EnumCursor enumerator(group);
  for (std::size_t n = 0; n < steps; ++n) {
    const BaseSet& u = base[n % base.size()];
    auto g_n = enumerator.next();
    if (g_n) prefix.push_back(*g_n);
    ExtensionStats before = result.trace.stats;
    try {
      if (!detail::meets(result.pf.a(), u))
        result.pf = extend_A_plain(result.pf, stream_of(MemberCursor(u)),
                                   probes, result.trace.stats);
      if (!detail::meets(result.pf.b(), u))
        result.pf = extend_B(result.pf, stream_of(MemberCursor(u)), probes,
                             result.trace.stats);
    } catch (const SearchExhausted& ex) {
      result.trace.status = "search-exhausted";
      result.trace.detail = ex.op() + " at step " + std::to_string(n);
      break;
    }
    const StepSnapshot* prev =
        result.trace.steps.empty() ? nullptr : &result.trace.steps.back();
    StepSnapshot snap = detail::snapshot_step(
        result.pf, n, prefix, u, /*need_symmetry=*/false, prev);
    snap.probes_used = result.trace.stats.probed - before.probed;
    snap.g_covered = true;  // no coverage goal in this driver
    result.trace.steps.push_back(std::move(snap));
  }
  return result;
}

}  // namespace densefactor
