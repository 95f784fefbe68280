#pragma once

// First-order discrete-time monitoring. Each subformula's value is the set of
// assignments to the quantified variables that satisfy it, encoded as a BDD
// over `bits` bits per variable. Observed strings get codes 1, 2, ...; code 0
// stands for every value not observed so far. Codes that are still unused are
// treated exactly like code 0 by every operator, so a value seen for the first
// time inherits the history of the unseen class.

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pastmon/bdd.hpp"
#include "pastmon/network.hpp"

namespace pastmon {

class ValueDictionary {
 public:
  explicit ValueDictionary(unsigned bits);

  /// Code of `value`, assigning the next free code on first sight.
  std::uint64_t code(std::string_view value);
  std::optional<std::uint64_t> find(std::string_view value) const;
  /// Number of codes a batch of values would add; used to fail before mutating.
  std::size_t missing(const std::vector<std::string_view>& values) const;

  std::size_t size() const { return codes_.size(); }
  unsigned bits() const { return bits_; }
  std::uint64_t capacity() const;

 private:
  unsigned bits_;
  std::unordered_map<std::string, std::uint64_t> codes_;
};

/// Assignment set "variable `var` equals `value`".
BddRef encode_eq(BddKernel& kernel, unsigned var, unsigned bits, std::string_view value,
                 ValueDictionary& dictionary);

class FirstOrderEngine {
 public:
  FirstOrderEngine(std::shared_ptr<const MonitorNetwork> network, unsigned bits);

  /// Verdict of the closed output formula at step `t`.
  bool step(const FieldMap& fields, Time t);

  const BddKernel& kernel() const { return kernel_; }
  const ValueDictionary& dictionary() const { return dictionary_; }
  BddRef output_set() const { return values_[net_->output]; }

 private:
  struct Memory {
    BddRef last = BddKernel::kFalse;
    std::deque<std::pair<Time, BddRef>> pending;   // not yet inside the window
    std::deque<std::pair<Time, BddRef>> released;  // inside the window
    BddRef settled = BddKernel::kFalse;            // window without upper bound
  };

  void check(const FieldMap& fields) const;
  BddRef leaf(const Node& n, const FieldMap& fields);
  BddRef advance(const Node& n, Memory& m, Time t);
  BddRef window_fold(const Node& n, Memory& m, Time t, BddRef input, bool join);
  BddRef timed_since(const Node& n, Memory& m, Time t, BddRef phi, BddRef psi);
  BddRef domain(unsigned var);

  std::shared_ptr<const MonitorNetwork> net_;
  unsigned bits_;
  BddKernel kernel_;
  ValueDictionary dictionary_;
  std::vector<BddRef> values_;
  std::vector<Memory> memory_;
  std::unordered_map<std::uint64_t, BddRef> domain_cache_;
};

}  // namespace pastmon
