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

// A member of the base family standing in for the paper's open sets:
// explicit finite list, arithmetic progression over an integer lattice,
// cylinder over the boolean sum, or a cofinite set. The non-explicit kinds
// are infinite by construction and only live over countable groups.
class BaseSet {
public:
  enum class Kind { Explicit, ArithmeticProgression, Cylinder, Cofinite };

  static BaseSet explicit_set(GroupPtr g, std::vector<Element> elems) {
    for (const auto& e : elems) g->check(e, "base set");
    elems = g->sorted_by_enum(std::move(elems));
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    BaseSet b(std::move(g), Kind::Explicit);
    b.state_->elements = std::move(elems);
    for (const auto& e : b.state_->elements) b.state_->lookup.insert(e);
    return b;
  }

  // { v : v[i] == residue[i] (mod modulus[i]) } over an integer lattice.
  static BaseSet arithmetic_progression(GroupPtr g,
                                        std::vector<std::int64_t> moduli,
                                        std::vector<std::int64_t> residues) {
    if (g->kind() != GroupKind::IntegerLattice)
      throw UsageError("arithmetic progressions require an integer lattice");
    auto* lat = static_cast<const detail::IntegerLatticeGroup*>(g.get());
    if (moduli.size() != lat->rank() || residues.size() != lat->rank())
      throw UsageError("AP moduli/residues arity must match the lattice rank");
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      if (moduli[i] < 1) throw UsageError("AP moduli must be positive");
      if (residues[i] < 0 || residues[i] >= moduli[i])
        throw UsageError("AP residues must satisfy 0 <= r < m");
    }
    BaseSet b(std::move(g), Kind::ArithmeticProgression);
    b.state_->moduli = std::move(moduli);
    b.state_->residues = std::move(residues);
    return b;
  }

  // { s : c in s for c in ones, c not in s for c in zeros } over the
  // boolean sum.
  static BaseSet cylinder(GroupPtr g, std::vector<std::int64_t> ones,
                          std::vector<std::int64_t> zeros) {
    if (g->kind() != GroupKind::BooleanSum)
      throw UsageError("cylinders require the boolean-sum group");
    std::sort(ones.begin(), ones.end());
    std::sort(zeros.begin(), zeros.end());
    for (auto c : ones)
      if (c < 0) throw UsageError("cylinder coordinates must be non-negative");
    for (auto c : zeros) {
      if (c < 0) throw UsageError("cylinder coordinates must be non-negative");
      if (std::binary_search(ones.begin(), ones.end(), c))
        throw UsageError("cylinder pins a coordinate to both 0 and 1");
    }
    if (!ones.empty() &&
        std::adjacent_find(ones.begin(), ones.end()) != ones.end())
      throw UsageError("duplicate cylinder coordinate");
    BaseSet b(std::move(g), Kind::Cylinder);
    b.state_->ones = std::move(ones);
    b.state_->zeros = std::move(zeros);
    return b;
  }

  static BaseSet cofinite(GroupPtr g, std::vector<Element> excluded) {
    if (g->finite())
      throw UsageError("cofinite base sets require a countable group");
    for (const auto& e : excluded) g->check(e, "cofinite exclusion");
    excluded = g->sorted_by_enum(std::move(excluded));
    BaseSet b(std::move(g), Kind::Cofinite);
    b.state_->elements = std::move(excluded);
    for (const auto& e : b.state_->elements) b.state_->lookup.insert(e);
    return b;
  }

  Kind kind() const noexcept { return kind_; }
  const GroupPtr& group_ptr() const noexcept { return state_->group; }
  const Group& group() const noexcept { return *state_->group; }

  bool contains(const Element& e) const {
    const Group& g = group();
    g.check(e, "contains");
    switch (kind_) {
      case Kind::Explicit:
        return state_->lookup.count(e) > 0;
      case Kind::ArithmeticProgression: {
        for (std::size_t i = 0; i < state_->moduli.size(); ++i) {
          std::int64_t d = e[i] - state_->residues[i];
          if (d % state_->moduli[i] != 0) return false;
        }
        return true;
      }
      case Kind::Cylinder: {
        for (auto c : state_->ones)
          if (!detail::BooleanSpan::has_coord(e, c)) return false;
        for (auto c : state_->zeros)
          if (detail::BooleanSpan::has_coord(e, c)) return false;
        return true;
      }
      case Kind::Cofinite:
        return state_->lookup.count(e) == 0;
    }
    return false;
  }

  // The i-th member in the parent group's enumeration order. Throws for
  // exhausted finite (explicit) sets.
  Element member(std::uint64_t i) const {
    switch (kind_) {
      case Kind::Explicit:
        if (i >= state_->elements.size())
          throw UsageError("explicit base set exhausted");
        return state_->elements[i];
      case Kind::Cylinder: {
        // Deposit the bits of i onto the free coordinates in ascending
        // order, then add the pinned ones; this is monotone in i.
        std::vector<std::int64_t> coords = state_->ones;
        std::int64_t c = 0;
        auto pinned = [&](std::int64_t coord) {
          return std::binary_search(state_->ones.begin(), state_->ones.end(),
                                    coord) ||
                 std::binary_search(state_->zeros.begin(),
                                    state_->zeros.end(), coord);
        };
        for (std::uint64_t bits = i; bits; bits >>= 1) {
          while (pinned(c)) ++c;
          if (bits & 1) coords.push_back(c);
          ++c;
        }
        std::sort(coords.begin(), coords.end());
        return Element{std::move(coords)};
      }
      case Kind::ArithmeticProgression:
      case Kind::Cofinite: {
        auto& memo = state_->memo;
        if (!state_->cursor) state_->cursor.emplace(group_ptr());
        while (memo.size() <= i) {
          auto e = state_->cursor->next();
          if (!e) throw UsageError("base set stream exhausted");
          if (contains(*e)) memo.push_back(std::move(*e));
        }
        return memo[i];
      }
    }
    throw UsageError("unreachable base set kind");
  }

  std::optional<std::uint64_t> finite_size() const {
    if (kind_ == Kind::Explicit) return state_->elements.size();
    return std::nullopt;
  }

  const std::vector<std::int64_t>& cylinder_ones() const {
    return state_->ones;
  }
  const std::vector<std::int64_t>& cylinder_zeros() const {
    return state_->zeros;
  }
  const std::vector<Element>& explicit_elements() const {
    return state_->elements;
  }

  std::string describe() const {
    const Group& g = group();
    switch (kind_) {
      case Kind::Explicit: {
        std::string s = "explicit";
        for (const auto& e : state_->elements) s += " " + g.format(e);
        return s;
      }
      case Kind::ArithmeticProgression: {
        auto vec = [](const std::vector<std::int64_t>& v) {
          std::string s = "(";
          for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + std::to_string(v[i]);
          return s + ")";
        };
        return "ap " + vec(state_->moduli) + " " + vec(state_->residues);
      }
      case Kind::Cylinder: {
        std::string s = "cylinder";
        for (auto c : state_->ones) s += " " + std::to_string(c) + ":1";
        for (auto c : state_->zeros) s += " " + std::to_string(c) + ":0";
        return s;
      }
      case Kind::Cofinite: {
        std::string s = "cofinite";
        for (const auto& e : state_->elements) s += " " + g.format(e);
        return s;
      }
    }
    return "?";
  }

private:
  struct State {
    GroupPtr group;
    std::vector<Element> elements;
    std::unordered_set<Element, ElementHash> lookup;
    std::vector<std::int64_t> moduli, residues;  // AP
    std::vector<std::int64_t> ones, zeros;       // cylinder
    mutable std::vector<Element> memo;           // filtered streams
    mutable std::optional<EnumCursor> cursor;
  };

  BaseSet(GroupPtr g, Kind kind) : kind_(kind), state_(std::make_shared<State>()) {
    state_->group = std::move(g);
  }

  Kind kind_;
  std::shared_ptr<State> state_;
};

// Sequential member stream over a base set; nullopt once a finite set is
// exhausted.
class MemberCursor {
public:
  explicit MemberCursor(BaseSet set) : set_(std::move(set)) {}

  std::optional<Element> next() {
    auto size = set_.finite_size();
    if (size && index_ >= *size) return std::nullopt;
    return set_.member(index_++);
  }

  std::uint64_t position() const noexcept { return index_; }
  const BaseSet& set() const noexcept { return set_; }

private:
  BaseSet set_;
  std::uint64_t index_ = 0;
};

// An indexed family of base sets over one group; the index order is the
// priority order used by the density obligations.
class BaseFamily {
public:
  BaseFamily() = default;
  explicit BaseFamily(std::vector<BaseSet> sets) : sets_(std::move(sets)) {
    for (std::size_t i = 1; i < sets_.size(); ++i)
      if (sets_[i].group_ptr().get() != sets_[0].group_ptr().get())
        throw UsageError("base family must live over a single group");
  }

  std::size_t size() const noexcept { return sets_.size(); }
  bool empty() const noexcept { return sets_.empty(); }
  const BaseSet& operator[](std::size_t i) const { return sets_.at(i); }
  const std::vector<BaseSet>& sets() const noexcept { return sets_; }

private:
  std::vector<BaseSet> sets_;
};

// Count of distinct members among the first k stream draws. A full count of
// k is the desk-scale evidence for "this base set is infinite".
inline std::uint64_t infinite_guard(const BaseSet& set, std::uint64_t k) {
  if (k < 1) throw UsageError("infinite_guard: k must be at least 1");
  MemberCursor cursor(set);
  std::uint64_t found = 0;
  while (found < k && cursor.next()) ++found;
  return found;
}

}  // namespace densefactor
