#include "pastmon/bdd.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace pastmon {

namespace {
constexpr unsigned kTerminalVar = std::numeric_limits<unsigned>::max();
constexpr std::uint32_t kIteTag = 1;
constexpr std::uint32_t kExistsTag = 2;
}  // namespace

BddKernel::BddKernel(unsigned variable_count) : variable_count_(variable_count) {
  nodes_.push_back({kTerminalVar, kFalse, kFalse});
  nodes_.push_back({kTerminalVar, kTrue, kTrue});
}

BddRef BddKernel::variable(unsigned index) { return make_node(index, kFalse, kTrue); }

BddRef BddKernel::make_node(unsigned var, BddRef low, BddRef high) {
  if (low == high) return low;
  Key key{var, low, high, 0};
  auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  auto ref = static_cast<BddRef>(nodes_.size());
  nodes_.push_back({var, low, high});
  unique_.emplace(key, ref);
  return ref;
}

BddRef BddKernel::ite(BddRef f, BddRef g, BddRef h) {
  if (f == kTrue) return g;
  if (f == kFalse) return h;
  if (g == h) return g;
  if (g == kTrue && h == kFalse) return f;

  Key key{kIteTag, f, g, h};
  ++lookups_;
  if (auto it = cache_.find(key); it != cache_.end()) {
    ++hits_;
    return it->second;
  }
  unsigned v = std::min({top_var(f), top_var(g), top_var(h)});
  auto cofactor = [&](BddRef x, bool positive) {
    if (top_var(x) != v) return x;
    return positive ? nodes_[x].high : nodes_[x].low;
  };
  BddRef lo = ite(cofactor(f, false), cofactor(g, false), cofactor(h, false));
  BddRef hi = ite(cofactor(f, true), cofactor(g, true), cofactor(h, true));
  BddRef r = make_node(v, lo, hi);
  cache_.emplace(key, r);
  return r;
}

BddRef BddKernel::exists(BddRef f, unsigned first, unsigned width) {
  if (width == 0) return f;
  return exists_rec(f, first, first + width);
}

BddRef BddKernel::exists_rec(BddRef f, unsigned first, unsigned last) {
  if (is_terminal(f) || top_var(f) >= last) return f;
  Key key{kExistsTag, f, first, last};
  ++lookups_;
  if (auto it = cache_.find(key); it != cache_.end()) {
    ++hits_;
    return it->second;
  }
  const Node n = nodes_[f];
  BddRef lo = exists_rec(n.low, first, last);
  BddRef hi = exists_rec(n.high, first, last);
  BddRef r = n.var < first ? make_node(n.var, lo, hi) : disjoin(lo, hi);
  cache_.emplace(key, r);
  return r;
}

BddRef BddKernel::cube(unsigned first, unsigned width, std::uint64_t value) {
  BddRef r = kTrue;
  for (unsigned i = width; i-- > 0;) {
    bool bit = (value >> (width - 1 - i)) & 1U;
    r = bit ? make_node(first + i, kFalse, r) : make_node(first + i, r, kFalse);
  }
  return r;
}

BddRef BddKernel::at_most(unsigned first, unsigned width, std::uint64_t bound) {
  // Built from the least significant bit upwards: r is "the suffix is <= the
  // suffix of bound".
  BddRef r = kTrue;
  for (unsigned i = width; i-- > 0;) {
    bool bit = (bound >> (width - 1 - i)) & 1U;
    r = bit ? make_node(first + i, kTrue, r) : make_node(first + i, r, kFalse);
  }
  return r;
}

bool BddKernel::evaluate(BddRef f, const std::vector<bool>& bits) const {
  while (!is_terminal(f)) {
    const Node& n = nodes_[f];
    f = bits.at(n.var) ? n.high : n.low;
  }
  return f == kTrue;
}

std::string BddKernel::stats() const {
  std::ostringstream out;
  out << "{\"bdd_nodes\": " << nodes_.size() << ", \"cache_lookups\": " << lookups_
      << ", \"cache_hits\": " << hits_ << ", \"cache_hit_rate\": "
      << (lookups_ ? static_cast<double>(hits_) / static_cast<double>(lookups_) : 0.0) << "}";
  return out.str();
}

}  // namespace pastmon
