#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jtprop {

/// Variables are the numbers 1..n.
using VarId = std::uint32_t;

/// A subset of the variables, bit (v-1) set iff variable v is in it.
using SubsetMask = std::uint64_t;

inline constexpr std::size_t kMaxVars = 63;

inline SubsetMask var_bit(VarId v) { return SubsetMask{1} << (v - 1); }

/// An ordered set of variables. Tables over a scope are indexed by subset:
/// entry t holds the value on { j-th scope element : bit (j-1) of t set },
/// so the smallest scope element is the least significant bit.
class Scope {
 public:
  Scope() = default;
  Scope(std::initializer_list<VarId> vars) : Scope(std::vector<VarId>(vars)) {}
  explicit Scope(std::vector<VarId> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
    if (!vars_.empty() && vars_.front() == 0)
      throw std::invalid_argument("variable ids start at 1");
    if (!vars_.empty() && vars_.back() > kMaxVars)
      throw std::invalid_argument("variable id exceeds the 63-bit index width");
  }

  static Scope from_mask(SubsetMask m) {
    std::vector<VarId> v;
    for (VarId x = 1; m != 0; ++x, m >>= 1)
      if (m & 1) v.push_back(x);
    return Scope(std::move(v));
  }

  std::size_t size() const noexcept { return vars_.size(); }
  bool empty() const noexcept { return vars_.empty(); }
  VarId operator[](std::size_t i) const { return vars_[i]; }
  auto begin() const noexcept { return vars_.begin(); }
  auto end() const noexcept { return vars_.end(); }
  const std::vector<VarId>& vars() const noexcept { return vars_; }

  VarId min_var() const { return vars_.front(); }
  VarId max_var() const { return vars_.back(); }

  bool contains(VarId v) const {
    return std::binary_search(vars_.begin(), vars_.end(), v);
  }
  bool is_subset_of(const Scope& other) const {
    return std::includes(other.vars_.begin(), other.vars_.end(), vars_.begin(), vars_.end());
  }

  Scope unite(const Scope& other) const {
    std::vector<VarId> out;
    std::set_union(vars_.begin(), vars_.end(), other.vars_.begin(), other.vars_.end(),
                   std::back_inserter(out));
    return Scope(std::move(out));
  }
  Scope intersect(const Scope& other) const {
    std::vector<VarId> out;
    std::set_intersection(vars_.begin(), vars_.end(), other.vars_.begin(), other.vars_.end(),
                          std::back_inserter(out));
    return Scope(std::move(out));
  }
  Scope difference(const Scope& other) const {
    std::vector<VarId> out;
    std::set_difference(vars_.begin(), vars_.end(), other.vars_.begin(), other.vars_.end(),
                        std::back_inserter(out));
    return Scope(std::move(out));
  }

  bool operator==(const Scope& other) const noexcept { return vars_ == other.vars_; }

  /// Number of table entries, 2^size().
  std::size_t table_size() const { return std::size_t{1} << vars_.size(); }

  SubsetMask full_mask() const {
    SubsetMask m = 0;
    for (VarId v : vars_) m |= var_bit(v);
    return m;
  }

  /// Global mask of the subset stored at table index t.
  SubsetMask mask_of_index(std::uint64_t t) const {
    SubsetMask m = 0;
    for (std::size_t j = 0; j < vars_.size(); ++j)
      if (t & (std::uint64_t{1} << j)) m |= var_bit(vars_[j]);
    return m;
  }

  /// Table index of a subset given as a global mask; bits outside the scope are ignored.
  std::uint64_t index_of_mask(SubsetMask m) const {
    std::uint64_t t = 0;
    for (std::size_t j = 0; j < vars_.size(); ++j)
      if (m & var_bit(vars_[j])) t |= std::uint64_t{1} << j;
    return t;
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(vars_[i]);
    }
    return s + "}";
  }

 private:
  std::vector<VarId> vars_;  // strictly ascending
};

/// Incremental projection of a subset index over `outer` onto `inner` ⊆ outer
/// while the outer index counts 0,1,2,... in binary order. advance(t) applies
/// the flip of outer bits 0..t in O(1).
class SubsetProjector {
 public:
  SubsetProjector(const Scope& outer, const Scope& inner) {
    std::vector<std::uint64_t> bit_image(outer.size(), 0);
    std::size_t j = 0;
    for (std::size_t i = 0; i < outer.size(); ++i) {
      if (j < inner.size() && inner[j] == outer[i]) {
        bit_image[i] = std::uint64_t{1} << j;
        ++j;
      }
    }
    if (j != inner.size())
      throw std::invalid_argument("SubsetProjector: inner scope not contained in outer");
    flip_image_.resize(outer.size() + 1, 0);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < outer.size(); ++i) {
      acc ^= bit_image[i];
      flip_image_[i] = acc;  // image of flipping outer bits 0..i
    }
  }

  std::uint64_t current() const noexcept { return current_; }
  void advance(unsigned trailing) noexcept { current_ ^= flip_image_[trailing]; }
  void reset() noexcept { current_ = 0; }

 private:
  std::vector<std::uint64_t> flip_image_;
  std::uint64_t current_ = 0;
};

}  // namespace jtprop
