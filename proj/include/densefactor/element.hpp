#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <utility>
#include <vector>

namespace densefactor {

// Canonical group element encoding. The payload is a vector of integers
// whose meaning is fixed by the owning group kind:
//   finite-cayley / cyclic : {index}
//   direct-product         : residues, one per factor
//   permutation            : one-line image
//   integer-lattice        : coordinates
//   boolean-direct-sum     : strictly increasing list of set coordinates
// Equality of encodings is equality of elements within one group.
class Element {
public:
  Element() = default;
  explicit Element(std::vector<std::int64_t> data) : data_(std::move(data)) {}
  Element(std::initializer_list<std::int64_t> init) : data_(init) {}

  const std::vector<std::int64_t>& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::int64_t operator[](std::size_t i) const { return data_[i]; }

  friend bool operator==(const Element& a, const Element& b) {
    return a.data_ == b.data_;
  }
  friend bool operator!=(const Element& a, const Element& b) {
    return !(a == b);
  }
  // Lexicographic encoding order. This is *not* enumeration order in
  // general; use Group::enum_less for that.
  friend bool operator<(const Element& a, const Element& b) {
    return a.data_ < b.data_;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (std::int64_t v : data_) {
      auto u = static_cast<std::uint64_t>(v);
      for (int i = 0; i < 8; ++i) {
        h ^= (u >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }

private:
  std::vector<std::int64_t> data_;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept { return e.hash(); }
};

}  // namespace densefactor

template <>
struct std::hash<densefactor::Element> {
  std::size_t operator()(const densefactor::Element& e) const noexcept {
    return e.hash();
  }
};
