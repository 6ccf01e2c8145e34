#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "densefactor/element.hpp"
#include "densefactor/errors.hpp"

namespace densefactor {

inline constexpr std::uint64_t kMaxMaterialize = 1u << 20;

enum class GroupKind {
  FiniteCayley,
  Cyclic,
  DirectProduct,
  Permutation,
  IntegerLattice,
  BooleanSum,
};

// Uniform group interface: identity, product, inverse and a canonical
// enumeration (a bijection from 0..|G|-1, or from all naturals for the
// countable kinds, with index 0 mapping to the identity).
class Group {
public:
  virtual ~Group() = default;

  GroupKind kind() const noexcept { return kind_; }
  // nullopt means countably infinite.
  std::optional<std::uint64_t> order() const noexcept { return order_; }
  bool finite() const noexcept { return order_.has_value(); }
  const Element& identity() const noexcept { return identity_; }
  const std::string& describe() const noexcept { return description_; }

  virtual Element op(const Element& g, const Element& h) const = 0;
  virtual Element inv(const Element& g) const = 0;
  // Canonical enumeration. Throws UsageError past the end of a finite group.
  virtual Element at(std::uint64_t index) const = 0;
  virtual bool valid_element(const Element& g) const = 0;
  // Exact enumeration index. nullopt when the index does not fit in 64 bits
  // (possible for boolean-sum elements with coordinates above 62).
  virtual std::optional<std::uint64_t> index_of(const Element& g) const = 0;
  // Strict enumeration order; total on valid elements.
  virtual bool enum_less(const Element& a, const Element& b) const = 0;

  virtual std::string format(const Element& g) const = 0;
  virtual Element parse(std::string_view text) const = 0;

  void check(const Element& g, const char* who) const {
    if (!valid_element(g))
      throw UsageError(std::string(who) + ": operand " + debug_text(g) +
                       " does not belong to " + describe());
  }

  std::vector<Element> sorted_by_enum(std::vector<Element> elems) const {
    std::sort(elems.begin(), elems.end(),
              [this](const Element& a, const Element& b) {
                return enum_less(a, b);
              });
    return elems;
  }

protected:
  Group(GroupKind kind, std::optional<std::uint64_t> order, Element identity,
        std::string description)
      : kind_(kind), order_(order), identity_(std::move(identity)),
        description_(std::move(description)) {}

  static std::string debug_text(const Element& g) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < g.size(); ++i)
      os << (i ? "," : "") << g[i];
    os << "]";
    return os.str();
  }

private:
  GroupKind kind_;
  std::optional<std::uint64_t> order_;
  Element identity_;
  std::string description_;
};

using GroupPtr = std::shared_ptr<const Group>;

namespace detail {

inline std::int64_t parse_int(std::string_view text, const char* what) {
  std::size_t pos = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(std::string(text), &pos);
  } catch (const std::exception&) {
    throw UsageError(std::string("cannot parse ") + what + " from '" +
                     std::string(text) + "'");
  }
  if (pos != text.size())
    throw UsageError(std::string("trailing characters in ") + what + " '" +
                     std::string(text) + "'");
  return value;
}

inline std::vector<std::int64_t> parse_int_list(std::string_view body,
                                                const char* what) {
  std::vector<std::int64_t> out;
  if (body.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = body.find(',', start);
    std::string_view tok = comma == std::string_view::npos
                               ? body.substr(start)
                               : body.substr(start, comma - start);
    out.push_back(parse_int(tok, what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class CyclicGroup final : public Group {
public:
  explicit CyclicGroup(std::uint64_t n)
      : Group(GroupKind::Cyclic, n, Element{{0}},
              "cyclic " + std::to_string(n)),
        n_(static_cast<std::int64_t>(n)) {
    if (n == 0) throw UsageError("cyclic group order must be positive");
  }

  Element op(const Element& g, const Element& h) const override {
    check(g, "op"), check(h, "op");
    return Element{{(g[0] + h[0]) % n_}};
  }
  Element inv(const Element& g) const override {
    check(g, "inv");
    return Element{{g[0] == 0 ? 0 : n_ - g[0]}};
  }
  Element at(std::uint64_t index) const override {
    if (index >= static_cast<std::uint64_t>(n_))
      throw UsageError("enumeration index out of range");
    return Element{{static_cast<std::int64_t>(index)}};
  }
  bool valid_element(const Element& g) const override {
    return g.size() == 1 && g[0] >= 0 && g[0] < n_;
  }
  std::optional<std::uint64_t> index_of(const Element& g) const override {
    check(g, "index_of");
    return static_cast<std::uint64_t>(g[0]);
  }
  bool enum_less(const Element& a, const Element& b) const override {
    return a[0] < b[0];
  }
  std::string format(const Element& g) const override {
    return std::to_string(g[0]);
  }
  Element parse(std::string_view text) const override {
    Element e{{parse_int(text, "cyclic element")}};
    check(e, "parse");
    return e;
  }

private:
  std::int64_t n_;
};

class CayleyGroup final : public Group {
public:
  CayleyGroup(std::vector<std::vector<std::uint32_t>> table, std::string name)
      : Group(GroupKind::FiniteCayley, table.size(), Element{{0}},
              std::move(name)),
        table_(std::move(table)) {
    const std::size_t n = table_.size();
    if (n == 0) throw UsageError("cayley table must be non-empty");
    for (const auto& row : table_) {
      if (row.size() != n) throw UsageError("cayley table must be square");
      for (auto v : row)
        if (v >= n) throw UsageError("cayley table entry out of range");
    }
    for (std::size_t j = 0; j < n; ++j)
      if (table_[0][j] != j || table_[j][0] != j)
        throw UsageError("cayley table: index 0 is not an identity");
    inverse_.assign(n, static_cast<std::uint32_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<bool> seen_row(n, false), seen_col(n, false);
      for (std::size_t j = 0; j < n; ++j) {
        if (seen_row[table_[i][j]] || seen_col[table_[j][i]])
          throw UsageError("cayley table rows/columns must be permutations");
        seen_row[table_[i][j]] = seen_col[table_[j][i]] = true;
        if (table_[i][j] == 0) inverse_[i] = static_cast<std::uint32_t>(j);
      }
      if (inverse_[i] == n) throw UsageError("cayley table: missing inverse");
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
            throw UsageError("cayley table is not associative");
  }

  Element op(const Element& g, const Element& h) const override {
    check(g, "op"), check(h, "op");
    return Element{{static_cast<std::int64_t>(table_[g[0]][h[0]])}};
  }
  Element inv(const Element& g) const override {
    check(g, "inv");
    return Element{{static_cast<std::int64_t>(inverse_[g[0]])}};
  }
  Element at(std::uint64_t index) const override {
    if (index >= table_.size())
      throw UsageError("enumeration index out of range");
    return Element{{static_cast<std::int64_t>(index)}};
  }
  bool valid_element(const Element& g) const override {
    return g.size() == 1 && g[0] >= 0 &&
           g[0] < static_cast<std::int64_t>(table_.size());
  }
  std::optional<std::uint64_t> index_of(const Element& g) const override {
    check(g, "index_of");
    return static_cast<std::uint64_t>(g[0]);
  }
  bool enum_less(const Element& a, const Element& b) const override {
    return a[0] < b[0];
  }
  std::string format(const Element& g) const override {
    return std::to_string(g[0]);
  }
  Element parse(std::string_view text) const override {
    Element e{{parse_int(text, "cayley element")}};
    check(e, "parse");
    return e;
  }

private:
  std::vector<std::vector<std::uint32_t>> table_;
  std::vector<std::uint32_t> inverse_;
};

class DirectProductGroup final : public Group {
public:
  explicit DirectProductGroup(std::vector<std::uint64_t> moduli)
      : Group(GroupKind::DirectProduct, product_order(moduli),
              Element{std::vector<std::int64_t>(moduli.size(), 0)},
              describe_moduli(moduli)),
        moduli_(std::move(moduli)) {}

  Element op(const Element& g, const Element& h) const override {
    check(g, "op"), check(h, "op");
    std::vector<std::int64_t> out(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i)
      out[i] = (g[i] + h[i]) % static_cast<std::int64_t>(moduli_[i]);
    return Element{std::move(out)};
  }
  Element inv(const Element& g) const override {
    check(g, "inv");
    std::vector<std::int64_t> out(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i)
      out[i] = g[i] == 0 ? 0 : static_cast<std::int64_t>(moduli_[i]) - g[i];
    return Element{std::move(out)};
  }
  Element at(std::uint64_t index) const override {
    if (index >= *order()) throw UsageError("enumeration index out of range");
    std::vector<std::int64_t> out(moduli_.size());
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      out[i] = static_cast<std::int64_t>(index % moduli_[i]);
      index /= moduli_[i];
    }
    return Element{std::move(out)};
  }
  bool valid_element(const Element& g) const override {
    if (g.size() != moduli_.size()) return false;
    for (std::size_t i = 0; i < moduli_.size(); ++i)
      if (g[i] < 0 || g[i] >= static_cast<std::int64_t>(moduli_[i]))
        return false;
    return true;
  }
  std::optional<std::uint64_t> index_of(const Element& g) const override {
    check(g, "index_of");
    std::uint64_t idx = 0, stride = 1;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      idx += static_cast<std::uint64_t>(g[i]) * stride;
      stride *= moduli_[i];
    }
    return idx;
  }
  bool enum_less(const Element& a, const Element& b) const override {
    return *index_of(a) < *index_of(b);
  }
  std::string format(const Element& g) const override {
    return std::to_string(*index_of(g));
  }
  Element parse(std::string_view text) const override {
    auto idx = parse_int(text, "direct-product element");
    if (idx < 0 || static_cast<std::uint64_t>(idx) >= *order())
      throw UsageError("direct-product element index out of range");
    return at(static_cast<std::uint64_t>(idx));
  }

private:
  static std::uint64_t product_order(const std::vector<std::uint64_t>& m) {
    if (m.empty()) throw UsageError("direct product needs at least one factor");
    std::uint64_t n = 1;
    for (auto v : m) {
      if (v == 0) throw UsageError("direct product factors must be finite");
      if (n > kMaxMaterialize / v)
        throw UsageError("direct product order too large");
      n *= v;
    }
    return n;
  }
  static std::string describe_moduli(const std::vector<std::uint64_t>& m) {
    std::string s = "direct-product";
    for (auto v : m) s += " " + std::to_string(v);
    return s;
  }

  std::vector<std::uint64_t> moduli_;
};

class PermutationGroup final : public Group {
public:
  PermutationGroup(std::size_t degree, const std::vector<Element>& generators,
                   std::string name)
      : PermutationGroup(Closed{close(degree, generators)}, degree,
                         std::move(name)) {}

  Element op(const Element& g, const Element& h) const override {
    check(g, "op"), check(h, "op");
    Element prod = compose(g, h);
    if (!index_.count(prod))
      throw UsageError("permutation operand outside the group closure");
    return prod;
  }
  Element inv(const Element& g) const override {
    check(g, "inv");
    std::vector<std::int64_t> out(degree_);
    for (std::size_t i = 0; i < degree_; ++i)
      out[static_cast<std::size_t>(g[i])] = static_cast<std::int64_t>(i);
    return Element{std::move(out)};
  }
  Element at(std::uint64_t index) const override {
    if (index >= elements_.size())
      throw UsageError("enumeration index out of range");
    return elements_[index];
  }
  bool valid_element(const Element& g) const override {
    if (g.size() != degree_) return false;
    std::vector<bool> seen(degree_, false);
    for (std::size_t i = 0; i < degree_; ++i) {
      if (g[i] < 0 || g[i] >= static_cast<std::int64_t>(degree_) ||
          seen[static_cast<std::size_t>(g[i])])
        return false;
      seen[static_cast<std::size_t>(g[i])] = true;
    }
    return true;
  }
  std::optional<std::uint64_t> index_of(const Element& g) const override {
    auto it = index_.find(g);
    if (it == index_.end())
      throw UsageError("index_of: permutation not in group");
    return it->second;
  }
  bool enum_less(const Element& a, const Element& b) const override {
    return a.data() < b.data();
  }
  std::string format(const Element& g) const override {
    std::string s;
    for (std::size_t i = 0; i < g.size(); ++i)
      s += (i ? "," : "") + std::to_string(g[i]);
    return s;
  }
  Element parse(std::string_view text) const override {
    Element e{parse_int_list(text, "permutation image")};
    check(e, "parse");
    if (!index_.count(e)) throw UsageError("permutation not in this group");
    return e;
  }

  std::size_t degree() const noexcept { return degree_; }

  // (g*h)(i) = g(h(i))
  static Element compose(const Element& g, const Element& h) {
    std::vector<std::int64_t> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      out[i] = g[static_cast<std::size_t>(h[i])];
    return Element{std::move(out)};
  }

private:
  struct Closed {
    std::vector<Element> elements;
  };

  PermutationGroup(Closed closed, std::size_t degree, std::string name)
      : Group(GroupKind::Permutation, closed.elements.size(),
              identity_perm(degree), std::move(name)),
        degree_(degree), elements_(std::move(closed.elements)) {
    for (std::size_t i = 0; i < elements_.size(); ++i)
      index_[elements_[i]] = i;
  }

  static Element identity_perm(std::size_t degree) {
    if (degree == 0) throw UsageError("permutation degree must be positive");
    std::vector<std::int64_t> img(degree);
    for (std::size_t i = 0; i < degree; ++i)
      img[i] = static_cast<std::int64_t>(i);
    return Element{std::move(img)};
  }

  // BFS closure; the sorted one-line images give the enumeration, and the
  // identity image is lexicographically minimal, so it lands at index 0.
  static std::vector<Element> close(std::size_t degree,
                                    const std::vector<Element>& generators) {
    Element id = identity_perm(degree);
    std::set<Element> seen{id};
    std::queue<Element> todo;
    todo.push(id);
    for (const auto& g : generators) {
      if (g.size() != degree)
        throw UsageError("permutation generator has wrong degree");
      if (seen.insert(g).second) todo.push(g);
    }
    while (!todo.empty()) {
      Element cur = todo.front();
      todo.pop();
      for (const auto& gen : generators) {
        for (Element prod : {compose(cur, gen), compose(gen, cur)}) {
          if (seen.size() >= kMaxMaterialize)
            throw UsageError("permutation group too large to materialize");
          if (seen.insert(prod).second) todo.push(prod);
        }
      }
    }
    return {seen.begin(), seen.end()};
  }

  std::size_t degree_;
  std::vector<Element> elements_;
  std::unordered_map<Element, std::uint64_t> index_;
};

// Walks Z^k in the spiral enumeration order: max-norm shells, and within a
// shell lexicographic order on the per-coordinate spiral ranks
// 0,1,-1,2,-2,... (first coordinate most significant).
class LatticeWalker {
public:
  explicit LatticeWalker(std::size_t rank) : rank_(rank), ranks_(rank, 0) {}

  Element next() {
    if (shell_ == 0) {
      shell_ = 1;
      std::fill(ranks_.begin(), ranks_.end(), 0);
      fresh_ = true;
      return Element{std::vector<std::int64_t>(rank_, 0)};
    }
    while (true) {
      if (!fresh_ && !advance()) {
        ++shell_;
        std::fill(ranks_.begin(), ranks_.end(), 0);
        fresh_ = true;
        continue;
      }
      fresh_ = false;
      if (on_shell()) {
        std::vector<std::int64_t> v(rank_);
        for (std::size_t i = 0; i < rank_; ++i) v[i] = value(ranks_[i]);
        return Element{std::move(v)};
      }
      // The all-interior prefix forces the last coordinate onto the shell;
      // jump straight there instead of stepping through the interior.
      if (ranks_[rank_ - 1] < 2 * shell_ - 1) {
        bool prefix_interior = true;
        for (std::size_t i = 0; i + 1 < rank_; ++i)
          if (ranks_[i] >= 2 * shell_ - 1) { prefix_interior = false; break; }
        if (prefix_interior) {
          ranks_[rank_ - 1] = 2 * shell_ - 1;
          fresh_ = true;
        }
      }
    }
  }

  static std::int64_t rank_of(std::int64_t v) {
    return v > 0 ? 2 * v - 1 : -2 * v;
  }
  static std::int64_t value(std::int64_t rank) {
    return rank % 2 ? (rank + 1) / 2 : -rank / 2;
  }

private:
  bool advance() {
    std::size_t pos = rank_;
    while (pos > 0 && ranks_[pos - 1] == 2 * shell_) ranks_[--pos] = 0;
    if (pos == 0) return false;
    ++ranks_[pos - 1];
    return true;
  }
  bool on_shell() const {
    for (std::size_t i = 0; i < rank_; ++i)
      if (ranks_[i] >= 2 * shell_ - 1) return true;
    return false;
  }

  std::size_t rank_;
  std::int64_t shell_ = 0;
  std::vector<std::int64_t> ranks_;
  bool fresh_ = true;
};

class IntegerLatticeGroup final : public Group {
public:
  explicit IntegerLatticeGroup(std::size_t rank)
      : Group(GroupKind::IntegerLattice, std::nullopt,
              Element{std::vector<std::int64_t>(rank, 0)},
              "lattice " + std::to_string(rank)),
        rank_(rank) {
    if (rank == 0) throw UsageError("lattice rank must be positive");
  }

  Element op(const Element& g, const Element& h) const override {
    check(g, "op"), check(h, "op");
    std::vector<std::int64_t> out(rank_);
    for (std::size_t i = 0; i < rank_; ++i) out[i] = g[i] + h[i];
    return Element{std::move(out)};
  }
  Element inv(const Element& g) const override {
    check(g, "inv");
    std::vector<std::int64_t> out(rank_);
    for (std::size_t i = 0; i < rank_; ++i) out[i] = -g[i];
    return Element{std::move(out)};
  }
  Element at(std::uint64_t index) const override {
    LatticeWalker walker(rank_);
    Element e;
    for (std::uint64_t i = 0; i <= index; ++i) e = walker.next();
    return e;
  }
  bool valid_element(const Element& g) const override {
    return g.size() == rank_;
  }
  std::optional<std::uint64_t> index_of(const Element& g) const override {
    check(g, "index_of");
    LatticeWalker walker(rank_);
    for (std::uint64_t i = 0;; ++i)
      if (walker.next() == g) return i;
  }
  bool enum_less(const Element& a, const Element& b) const override {
    std::int64_t sa = 0, sb = 0;
    for (std::size_t i = 0; i < rank_; ++i) {
      sa = std::max(sa, std::abs(a[i]));
      sb = std::max(sb, std::abs(b[i]));
    }
    if (sa != sb) return sa < sb;
    for (std::size_t i = 0; i < rank_; ++i) {
      std::int64_t ra = LatticeWalker::rank_of(a[i]);
      std::int64_t rb = LatticeWalker::rank_of(b[i]);
      if (ra != rb) return ra < rb;
    }
    return false;
  }
  std::string format(const Element& g) const override {
    std::string s = "(";
    for (std::size_t i = 0; i < rank_; ++i)
      s += (i ? "," : "") + std::to_string(g[i]);
    return s + ")";
  }
  Element parse(std::string_view text) const override {
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
      throw UsageError("lattice element must look like (a,b,...)");
    Element e{parse_int_list(text.substr(1, text.size() - 2),
                             "lattice coordinate")};
    check(e, "parse");
    return e;
  }

  std::size_t rank() const noexcept { return rank_; }

private:
  std::size_t rank_;
};

// Countable Boolean group: the direct sum of countably many copies of Z_2.
// Elements are finite coordinate sets, the product is symmetric difference,
// enumeration index n maps to the set of 1-bit positions of n.
class BooleanSumGroup final : public Group {
public:
  BooleanSumGroup()
      : Group(GroupKind::BooleanSum, std::nullopt, Element{}, "boolean-sum") {}

  Element op(const Element& g, const Element& h) const override {
    check(g, "op"), check(h, "op");
    std::vector<std::int64_t> out;
    out.reserve(g.size() + h.size());
    std::size_t i = 0, j = 0;
    while (i < g.size() && j < h.size()) {
      if (g[i] < h[j]) out.push_back(g[i++]);
      else if (h[j] < g[i]) out.push_back(h[j++]);
      else ++i, ++j;
    }
    while (i < g.size()) out.push_back(g[i++]);
    while (j < h.size()) out.push_back(h[j++]);
    return Element{std::move(out)};
  }
  Element inv(const Element& g) const override {
    check(g, "inv");
    return g;  // exponent 2
  }
  Element at(std::uint64_t index) const override {
    std::vector<std::int64_t> out;
    for (std::int64_t bit = 0; index; ++bit, index >>= 1)
      if (index & 1) out.push_back(bit);
    return Element{std::move(out)};
  }
  bool valid_element(const Element& g) const override {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] < 0) return false;
      if (i && g[i] <= g[i - 1]) return false;
    }
    return true;
  }
  std::optional<std::uint64_t> index_of(const Element& g) const override {
    check(g, "index_of");
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] > 62) return std::nullopt;
      idx |= std::uint64_t{1} << g[i];
    }
    return idx;
  }
  bool enum_less(const Element& a, const Element& b) const override {
    // Binary value order: the largest coordinate present in exactly one of
    // the two sets decides.
    std::size_t i = a.size(), j = b.size();
    while (i > 0 && j > 0) {
      if (a[i - 1] > b[j - 1]) return false;
      if (a[i - 1] < b[j - 1]) return true;
      --i, --j;
    }
    return i == 0 && j > 0;
  }
  std::string format(const Element& g) const override {
    std::string s = "{";
    for (std::size_t i = 0; i < g.size(); ++i)
      s += (i ? "," : "") + std::to_string(g[i]);
    return s + "}";
  }
  Element parse(std::string_view text) const override {
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
      throw UsageError("boolean element must look like {0,2} or {}");
    auto coords = parse_int_list(text.substr(1, text.size() - 2),
                                 "boolean coordinate");
    std::sort(coords.begin(), coords.end());
    Element e{std::move(coords)};
    check(e, "parse");
    return e;
  }
};

inline std::vector<std::vector<std::uint32_t>> quaternion_table() {
  // Elements (sign s, axis a) with axes 1,i,j,k; index = 4*s + a.
  auto axis_mul = [](int a, int b) -> std::pair<int, int> {
    if (a == 0) return {0, b};
    if (b == 0) return {0, a};
    if (a == b) return {1, 0};
    static const int prod[4][4] = {{0, 0, 0, 0},
                                   {0, 0, 3, 2},
                                   {0, 3, 0, 1},
                                   {0, 2, 1, 0}};
    static const int sign[4][4] = {{0, 0, 0, 0},
                                   {0, 0, 0, 1},
                                   {0, 1, 0, 0},
                                   {0, 0, 1, 0}};
    return {sign[a][b], prod[a][b]};
  };
  std::vector<std::vector<std::uint32_t>> table(8,
                                                std::vector<std::uint32_t>(8));
  for (int x = 0; x < 8; ++x) {
    for (int y = 0; y < 8; ++y) {
      auto [ms, ma] = axis_mul(x % 4, y % 4);
      int s = (x / 4 + y / 4 + ms) % 2;
      table[x][y] = static_cast<std::uint32_t>(4 * s + ma);
    }
  }
  return table;
}

}  // namespace detail

struct groups {
  static GroupPtr cyclic(std::uint64_t n) {
    return std::make_shared<detail::CyclicGroup>(n);
  }
  static GroupPtr cayley(std::vector<std::vector<std::uint32_t>> table,
                         std::string name = "") {
    if (name.empty()) name = "cayley " + std::to_string(table.size());
    return std::make_shared<detail::CayleyGroup>(std::move(table),
                                                 std::move(name));
  }
  static GroupPtr direct_product(std::vector<std::uint64_t> moduli) {
    return std::make_shared<detail::DirectProductGroup>(std::move(moduli));
  }
  static GroupPtr permutation(std::size_t degree,
                              std::vector<Element> generators,
                              std::string name = "") {
    if (name.empty()) name = "permutation " + std::to_string(degree);
    return std::make_shared<detail::PermutationGroup>(degree, generators,
                                                      std::move(name));
  }
  static GroupPtr symmetric(std::size_t degree) {
    if (degree < 1 || degree > 8)
      throw UsageError("symmetric group degree must be in 1..8");
    std::vector<Element> gens;
    if (degree >= 2) {
      std::vector<std::int64_t> cycle(degree), swap(degree);
      for (std::size_t i = 0; i < degree; ++i) {
        cycle[i] = static_cast<std::int64_t>((i + 1) % degree);
        swap[i] = static_cast<std::int64_t>(i);
      }
      std::swap(swap[0], swap[1]);
      gens = {Element{std::move(cycle)}, Element{std::move(swap)}};
    }
    return std::make_shared<detail::PermutationGroup>(
        degree, gens, "symmetric " + std::to_string(degree));
  }
  static GroupPtr dihedral(std::size_t n) {
    if (n < 3 || n > 16) throw UsageError("dihedral degree must be in 3..16");
    std::vector<std::int64_t> rot(n), refl(n);
    for (std::size_t i = 0; i < n; ++i) {
      rot[i] = static_cast<std::int64_t>((i + 1) % n);
      refl[i] = static_cast<std::int64_t>((n - i) % n);
    }
    return std::make_shared<detail::PermutationGroup>(
        n,
        std::vector<Element>{Element{std::move(rot)}, Element{std::move(refl)}},
        "dihedral " + std::to_string(n));
  }
  static GroupPtr quaternion() {
    return std::make_shared<detail::CayleyGroup>(detail::quaternion_table(),
                                                 "quaternion");
  }
  static GroupPtr integer_lattice(std::size_t rank) {
    return std::make_shared<detail::IntegerLatticeGroup>(rank);
  }
  static GroupPtr boolean_sum() {
    return std::make_shared<detail::BooleanSumGroup>();
  }
};

// Sequential enumeration cursor; equivalent to Group::at with increasing
// indices but incremental for the lattice kinds.
class EnumCursor {
public:
  explicit EnumCursor(GroupPtr group) : group_(std::move(group)) {
    if (group_->kind() == GroupKind::IntegerLattice) {
      auto* lat = static_cast<const detail::IntegerLatticeGroup*>(group_.get());
      walker_.emplace(lat->rank());
    }
  }

  // Returns nullopt past the end of a finite group.
  std::optional<Element> next() {
    if (group_->order() && index_ >= *group_->order()) return std::nullopt;
    ++index_;
    if (walker_) return walker_->next();
    return group_->at(index_ - 1);
  }

  std::uint64_t position() const noexcept { return index_; }

private:
  GroupPtr group_;
  std::uint64_t index_ = 0;
  std::optional<detail::LatticeWalker> walker_;
};

}  // namespace densefactor
