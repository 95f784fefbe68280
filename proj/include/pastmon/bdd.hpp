#pragma once

// Reduced ordered binary decision diagrams with hash-consed nodes and a
// memoized if-then-else. Nodes are never freed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace pastmon {

using BddRef = std::uint32_t;

class BddKernel {
 public:
  static constexpr BddRef kFalse = 0;
  static constexpr BddRef kTrue = 1;

  explicit BddKernel(unsigned variable_count = 0);

  unsigned variable_count() const { return variable_count_; }

  /// The function that is true iff bit `index` is set.
  BddRef variable(unsigned index);

  BddRef make_node(unsigned var, BddRef low, BddRef high);

  BddRef ite(BddRef f, BddRef g, BddRef h);
  BddRef negate(BddRef f) { return ite(f, kFalse, kTrue); }
  BddRef conjoin(BddRef f, BddRef g) { return ite(f, g, kFalse); }
  BddRef disjoin(BddRef f, BddRef g) { return ite(f, kTrue, g); }

  /// Existential quantification over bits [first, first + width).
  BddRef exists(BddRef f, unsigned first, unsigned width);
  BddRef forall(BddRef f, unsigned first, unsigned width) {
    return negate(exists(negate(f), first, width));
  }

  /// Bits [first, first + width) spell `value`, most significant bit first.
  BddRef cube(unsigned first, unsigned width, std::uint64_t value);
  /// Bits [first, first + width) spell a number <= `bound`.
  BddRef at_most(unsigned first, unsigned width, std::uint64_t bound);

  bool evaluate(BddRef f, const std::vector<bool>& bits) const;

  bool is_terminal(BddRef f) const { return f <= kTrue; }
  unsigned var_of(BddRef f) const { return nodes_[f].var; }
  BddRef low(BddRef f) const { return nodes_[f].low; }
  BddRef high(BddRef f) const { return nodes_[f].high; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t cache_hits() const { return hits_; }
  std::size_t cache_lookups() const { return lookups_; }
  std::string stats() const;

 private:
  struct Node {
    unsigned var;
    BddRef low, high;
  };
  struct Key {
    std::uint32_t a, b, c, d;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t x = (std::uint64_t{k.a} << 32) ^ k.b;
      std::uint64_t y = (std::uint64_t{k.c} << 32) ^ k.d;
      x ^= y * 0x9e3779b97f4a7c15ULL;
      x ^= x >> 29;
      return static_cast<std::size_t>(x * 0xbf58476d1ce4e5b9ULL);
    }
  };

  unsigned top_var(BddRef f) const { return nodes_[f].var; }
  BddRef exists_rec(BddRef f, unsigned first, unsigned last);

  unsigned variable_count_;
  std::vector<Node> nodes_;
  std::unordered_map<Key, BddRef, KeyHash> unique_;
  std::unordered_map<Key, BddRef, KeyHash> cache_;
  std::size_t hits_ = 0;
  std::size_t lookups_ = 0;
};

}  // namespace pastmon
