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

namespace densefactor {

enum class Side { Left, Right };

inline const char* side_name(Side s) {
  return s == Side::Left ? "LEFT" : "RIGHT";
}

namespace detail {

// Reduced-echelon basis over F2 for subgroups of the Boolean sum. Basis
// vectors are kept sorted by leading (largest) coordinate, and each leading
// coordinate occurs in exactly one basis vector.
class BooleanSpan {
public:
  BooleanSpan() = default;

  const std::vector<Element>& basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return basis_.size(); }

  static std::int64_t leading(const Element& v) { return v.data().back(); }

  // Canonical coset fingerprint: e reduced by the basis. The reduced form
  // is also the enumeration-minimal element of e's coset.
  Element reduce(const Element& e, const Group& g) const {
    Element r = e;
    for (auto it = basis_.rbegin(); it != basis_.rend(); ++it) {
      if (r.size() == 0) break;
      if (has_coord(r, leading(*it))) r = g.op(r, *it);
    }
    return r;
  }

  bool contains(const Element& e, const Group& g) const {
    return reduce(e, g).size() == 0;
  }

  // Returns true if the vector was independent and extended the basis.
  bool insert(const Element& e, const Group& g) {
    Element r = reduce(e, g);
    if (r.size() == 0) return false;
    std::int64_t lead = leading(r);
    // Clear the new leading coordinate from existing basis vectors.
    for (auto& b : basis_)
      if (has_coord(b, lead)) b = g.op(b, r);
    auto pos = std::lower_bound(
        basis_.begin(), basis_.end(), lead,
        [](const Element& b, std::int64_t l) { return leading(b) < l; });
    basis_.insert(pos, std::move(r));
    return true;
  }

  // i-th span member in parent (binary-value) enumeration order: the XOR of
  // the basis vectors selected by the bits of i, basis ordered by ascending
  // leading coordinate.
  Element combo(std::uint64_t i, const Group& g) const {
    Element acc;
    for (std::size_t j = 0; i; ++j, i >>= 1)
      if (i & 1) acc = g.op(acc, basis_[j]);
    return acc;
  }

  std::int64_t max_coordinate() const {
    std::int64_t m = -1;
    for (const auto& b : basis_) m = std::max(m, leading(b));
    return m;
  }

  static bool has_coord(const Element& e, std::int64_t c) {
    return std::binary_search(e.data().begin(), e.data().end(), c);
  }

private:
  std::vector<Element> basis_;
};

}  // namespace detail

// A subgroup of a Group: materialized element list, F2 span, diagonal
// sublattice, or the full group. Explicit lists are sorted by enumeration
// index; lazy kinds enumerate by filtering the parent enumeration (spans
// enumerate basis combinations, which yields the same order).
class Subgroup {
public:
  enum class Rep { Explicit, BooleanSpan, LatticeDiagonal, Full };

  static Subgroup trivial(GroupPtr g) {
    Element e = g->identity();
    return Subgroup(std::move(g), Rep::Explicit, {std::move(e)}, {}, {});
  }

  static Subgroup explicit_set(GroupPtr g, std::vector<Element> elems,
                               bool validate = true) {
    if (elems.empty()) throw UsageError("subgroup cannot be empty");
    elems = g->sorted_by_enum(std::move(elems));
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    Subgroup s(std::move(g), Rep::Explicit, std::move(elems), {}, {});
    if (validate) s.validate_closure();
    return s;
  }

  static Subgroup full(GroupPtr g) {
    return Subgroup(std::move(g), Rep::Full, {}, {}, {});
  }

  static Subgroup boolean_span(GroupPtr g, const std::vector<Element>& gens) {
    if (g->kind() != GroupKind::BooleanSum)
      throw UsageError("boolean_span requires the boolean-sum group");
    detail::BooleanSpan span;
    for (const auto& e : gens) {
      g->check(e, "boolean_span");
      span.insert(e, *g);
    }
    return Subgroup(std::move(g), Rep::BooleanSpan, {}, std::move(span), {});
  }

  // moduli[i] == 0 pins coordinate i to zero; m > 0 keeps multiples of m.
  static Subgroup lattice_diagonal(GroupPtr g,
                                   std::vector<std::int64_t> moduli) {
    if (g->kind() != GroupKind::IntegerLattice)
      throw UsageError("lattice_diagonal requires an integer-lattice group");
    auto* lat = static_cast<const detail::IntegerLatticeGroup*>(g.get());
    if (moduli.size() != lat->rank())
      throw UsageError("moduli arity must match the lattice rank");
    for (auto m : moduli)
      if (m < 0) throw UsageError("moduli must be non-negative");
    return Subgroup(std::move(g), Rep::LatticeDiagonal, {}, {},
                    std::move(moduli));
  }

  Rep rep() const noexcept { return rep_; }
  const GroupPtr& parent_ptr() const noexcept { return state_->group; }
  const Group& parent() const noexcept { return *state_->group; }

  bool contains(const Element& e) const {
    const Group& g = parent();
    switch (rep_) {
      case Rep::Full:
        return g.valid_element(e);
      case Rep::Explicit:
        return state_->lookup.count(e) > 0;
      case Rep::BooleanSpan:
        return state_->span.contains(e, g);
      case Rep::LatticeDiagonal: {
        const auto& m = state_->moduli;
        for (std::size_t i = 0; i < m.size(); ++i) {
          if (m[i] == 0) {
            if (e[i] != 0) return false;
          } else if (e[i] % m[i] != 0) {
            return false;
          }
        }
        return true;
      }
    }
    return false;
  }

  std::optional<std::uint64_t> size() const {
    switch (rep_) {
      case Rep::Full:
        return parent().order();
      case Rep::Explicit:
        return state_->elements.size();
      case Rep::BooleanSpan: {
        std::size_t d = state_->span.dim();
        if (d > 62) return std::nullopt;  // finite but not representable
        return std::uint64_t{1} << d;
      }
      case Rep::LatticeDiagonal: {
        for (auto m : state_->moduli)
          if (m != 0) return std::nullopt;
        return 1;  // all coordinates pinned: the trivial subgroup
      }
    }
    return std::nullopt;
  }

  bool is_trivial() const {
    auto s = size();
    return s && *s == 1;
  }

  // Subgroup enumeration: bijective onto the subgroup, identity at 0,
  // ordered by the parent enumeration order.
  Element at(std::uint64_t i) const {
    const Group& g = parent();
    switch (rep_) {
      case Rep::Full:
        return g.at(i);
      case Rep::Explicit:
        if (i >= state_->elements.size())
          throw UsageError("subgroup enumeration index out of range");
        return state_->elements[i];
      case Rep::BooleanSpan: {
        auto s = size();
        if (s && i >= *s)
          throw UsageError("subgroup enumeration index out of range");
        return state_->span.combo(i, g);
      }
      case Rep::LatticeDiagonal: {
        auto& memo = state_->memo;
        if (!state_->cursor) state_->cursor.emplace(parent_ptr());
        while (memo.size() <= i) {
          auto e = state_->cursor->next();
          if (!e) throw UsageError("subgroup enumeration exhausted");
          if (contains(*e)) memo.push_back(std::move(*e));
        }
        return memo[i];
      }
    }
    throw UsageError("unreachable subgroup representation");
  }

  // Explicit element list (Explicit rep only).
  const std::vector<Element>& elements() const {
    if (rep_ != Rep::Explicit)
      throw UsageError("subgroup is not materialized");
    return state_->elements;
  }

  const detail::BooleanSpan& span() const {
    if (rep_ != Rep::BooleanSpan)
      throw UsageError("subgroup is not a boolean span");
    return state_->span;
  }

  const std::vector<std::int64_t>& moduli() const {
    if (rep_ != Rep::LatticeDiagonal)
      throw UsageError("subgroup is not a diagonal sublattice");
    return state_->moduli;
  }

  std::string describe() const {
    switch (rep_) {
      case Rep::Full:
        return "full";
      case Rep::Explicit: {
        if (state_->elements.size() > 64)
          return "explicit[" + std::to_string(state_->elements.size()) + "]";
        std::string s = "explicit[";
        for (std::size_t i = 0; i < state_->elements.size(); ++i)
          s += (i ? " " : "") + parent().format(state_->elements[i]);
        return s + "]";
      }
      case Rep::BooleanSpan: {
        std::string s = "span[";
        for (std::size_t i = 0; i < state_->span.basis().size(); ++i)
          s += (i ? " " : "") + parent().format(state_->span.basis()[i]);
        return s + "]";
      }
      case Rep::LatticeDiagonal: {
        std::string s = "diagonal(";
        for (std::size_t i = 0; i < state_->moduli.size(); ++i)
          s += (i ? "," : "") + std::to_string(state_->moduli[i]);
        return s + ")";
      }
    }
    return "?";
  }

  // Exact subset test where a closed form exists, otherwise a certificate
  // on the first `probe` enumerated elements of this subgroup.
  bool subset_of(const Subgroup& k, std::uint64_t probe = 256) const {
    if (k.rep_ == Rep::Full) return true;
    switch (rep_) {
      case Rep::Explicit: {
        for (const auto& e : state_->elements)
          if (!k.contains(e)) return false;
        return true;
      }
      case Rep::BooleanSpan: {
        for (const auto& b : state_->span.basis())
          if (!k.contains(b)) return false;
        return true;
      }
      case Rep::LatticeDiagonal: {
        if (k.rep_ == Rep::LatticeDiagonal) {
          const auto& mine = state_->moduli;
          const auto& theirs = k.state_->moduli;
          for (std::size_t i = 0; i < mine.size(); ++i) {
            if (theirs[i] == 0) {
              if (mine[i] != 0) return false;
            } else if (mine[i] == 0) {
              continue;
            } else if (mine[i] % theirs[i] != 0) {
              return false;
            }
          }
          return true;
        }
        for (std::uint64_t i = 0; i < probe; ++i) {
          auto s = size();
          if (s && i >= *s) break;
          if (!k.contains(at(i))) return false;
        }
        return true;  // prefix-certified
      }
      case Rep::Full: {
        // Full fits inside k only if k exhausts the (finite) parent.
        auto ks = k.size();
        return parent().order() && ks && *ks == *parent().order();
      }
    }
    return false;
  }

  // An element of this subgroup outside `h`. Exact for explicit sets,
  // spans and diagonal sublattices (their generators witness strictness);
  // the full-group representation falls back to an enumeration prefix.
  std::optional<Element> element_outside(const Subgroup& h,
                                         std::uint64_t probe = 4096) const {
    switch (rep_) {
      case Rep::Explicit: {
        for (const auto& e : state_->elements)
          if (!h.contains(e)) return e;
        return std::nullopt;
      }
      case Rep::BooleanSpan: {
        for (const auto& b : state_->span.basis())
          if (!h.contains(b)) return b;
        return std::nullopt;  // basis inside h means the whole span is
      }
      case Rep::LatticeDiagonal: {
        const auto& m = state_->moduli;
        for (std::size_t i = 0; i < m.size(); ++i) {
          if (m[i] == 0) continue;
          std::vector<std::int64_t> v(m.size(), 0);
          v[i] = m[i];
          Element gen{std::move(v)};
          if (!h.contains(gen)) return gen;
        }
        return std::nullopt;  // coordinate generators inside h
      }
      case Rep::Full: {
        for (std::uint64_t i = 0; i < probe; ++i) {
          auto s = size();
          if (s && i >= *s) break;
          Element e = at(i);
          if (!h.contains(e)) return e;
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

private:
  struct State {
    GroupPtr group;
    std::vector<Element> elements;                      // Explicit
    std::unordered_set<Element, ElementHash> lookup;    // Explicit
    detail::BooleanSpan span;                           // BooleanSpan
    std::vector<std::int64_t> moduli;                   // LatticeDiagonal
    mutable std::vector<Element> memo;                  // LatticeDiagonal
    mutable std::optional<EnumCursor> cursor;           // LatticeDiagonal
  };

  Subgroup(GroupPtr g, Rep rep, std::vector<Element> elems,
           detail::BooleanSpan span, std::vector<std::int64_t> moduli)
      : rep_(rep), state_(std::make_shared<State>()) {
    state_->group = std::move(g);
    state_->elements = std::move(elems);
    state_->span = std::move(span);
    state_->moduli = std::move(moduli);
    for (const auto& e : state_->elements) state_->lookup.insert(e);
  }

  void validate_closure() const {
    const Group& g = parent();
    if (!contains(g.identity()))
      throw UsageError("subgroup must contain the identity");
    for (const auto& a : state_->elements) {
      if (!contains(g.inv(a)))
        throw UsageError("subgroup not closed under inverse: " + g.format(a));
      for (const auto& b : state_->elements)
        if (!contains(g.op(a, b)))
          throw UsageError("subgroup not closed under product: " +
                           g.format(a) + " * " + g.format(b));
    }
  }

  Rep rep_;
  std::shared_ptr<State> state_;
};

// Closure of gens together with the identity under product and inverse.
// Materialized while the closure stays within `bound`; a boolean-sum parent
// falls back to the exact span representation past the bound, any other
// kind throws ClosureExceedsBound.
inline Subgroup generate(GroupPtr g, const std::vector<Element>& gens,
                         std::uint64_t bound) {
  if (bound < 1) throw UsageError("generate: bound must be at least 1");
  for (const auto& e : gens) g->check(e, "generate");
  std::unordered_set<Element, ElementHash> seen{g->identity()};
  std::vector<Element> frontier{g->identity()};
  bool exceeded = false;
  for (const auto& e : gens) {
    if (seen.insert(e).second) frontier.push_back(e);
  }
  std::size_t scan = 0;
  while (scan < frontier.size() && !exceeded) {
    Element cur = frontier[scan++];
    for (const auto& gen : gens) {
      for (Element prod : {g->op(cur, gen), g->op(gen, cur), g->inv(cur)}) {
        if (seen.count(prod)) continue;
        if (seen.size() >= bound) { exceeded = true; break; }
        seen.insert(prod);
        frontier.push_back(std::move(prod));
      }
      if (exceeded) break;
    }
  }
  if (exceeded) {
    if (g->kind() == GroupKind::BooleanSum)
      return Subgroup::boolean_span(std::move(g), gens);
    throw ClosureExceedsBound(bound);
  }
  return Subgroup::explicit_set(
      std::move(g), std::vector<Element>(frontier.begin(), frontier.end()),
      /*validate=*/false);
}

// One representative per coset of H inside K\H, LEFT meaning cosets rH and
// RIGHT meaning Hr. Every representative is the enumeration-minimal element
// of its coset (the scan below visits K in enumeration order, so the first
// element seen in each coset is its minimum).
inline std::vector<Element> coset_reps(const Subgroup& k, const Subgroup& h,
                                       Side side) {
  if (k.parent_ptr().get() != h.parent_ptr().get())
    throw UsageError("coset_reps: subgroups of different groups");
  if (k.rep() != Subgroup::Rep::Explicit && k.rep() != Subgroup::Rep::Full)
    throw UsageError("coset_reps requires a materialized K");
  const Group& g = k.parent();
  if (!h.subset_of(k))
    throw UsageError("coset_reps: H is not contained in K");
  auto hsize = h.size();
  if (!hsize) throw UsageError("coset_reps requires a finite H");
  std::vector<Element> helems;
  helems.reserve(*hsize);
  for (std::uint64_t i = 0; i < *hsize; ++i) helems.push_back(h.at(i));

  auto ksize = k.size();
  if (!ksize) throw UsageError("coset_reps requires a finite K");
  std::unordered_set<Element, ElementHash> visited;
  std::vector<Element> reps;
  for (std::uint64_t i = 0; i < *ksize; ++i) {
    Element e = k.at(i);
    if (h.contains(e) || visited.count(e)) continue;
    reps.push_back(e);
    for (const auto& hh : helems)
      visited.insert(side == Side::Left ? g.op(e, hh) : g.op(hh, e));
  }
  return reps;
}

}  // namespace densefactor
