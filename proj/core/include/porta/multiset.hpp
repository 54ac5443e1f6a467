#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <utility>
#include <vector>

namespace porta {

// Finite multiset over an ordered element type. Entries are kept as
// (element, multiplicity) pairs, strictly increasing in the element order,
// with positive multiplicities only. Two multisets are equal iff their
// entry lists are equal, so Multiset values can key std::map/std::set.
template <typename T>
class Multiset {
 public:
  using Entry = std::pair<T, int>;

  Multiset() = default;

  explicit Multiset(const std::vector<T>& elems) {
    for (const T& e : elems) add(e, 1);
  }

  void add(const T& elem, int count = 1) {
    if (count <= 0) return;
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), elem,
        [](const Entry& en, const T& v) { return en.first < v; });
    if (it != entries_.end() && !(elem < it->first)) {
      it->second += count;
    } else {
      entries_.insert(it, {elem, count});
    }
  }

  // Removes `count` copies; the element must be present that often.
  void remove(const T& elem, int count = 1) {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), elem,
        [](const Entry& en, const T& v) { return en.first < v; });
    it->second -= count;
    if (it->second <= 0) entries_.erase(it);
  }

  int count(const T& elem) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), elem,
        [](const Entry& en, const T& v) { return en.first < v; });
    if (it != entries_.end() && !(elem < it->first)) return it->second;
    return 0;
  }

  bool contains(const T& elem) const { return count(elem) > 0; }

  std::size_t size() const {
    std::size_t n = 0;
    for (const Entry& e : entries_) n += static_cast<std::size_t>(e.second);
    return n;
  }

  bool empty() const { return entries_.empty(); }

  // Disjoint union: multiplicities add up.
  Multiset operator+(const Multiset& other) const {
    Multiset out = *this;
    for (const Entry& e : other.entries_) out.add(e.first, e.second);
    return out;
  }

  // Multiset difference; other must be a sub-multiset of *this.
  Multiset operator-(const Multiset& other) const {
    Multiset out = *this;
    for (const Entry& e : other.entries_) out.remove(e.first, e.second);
    return out;
  }

  bool is_subset_of(const Multiset& other) const {
    for (const Entry& e : entries_)
      if (other.count(e.first) < e.second) return false;
    return true;
  }

  const std::vector<Entry>& entries() const { return entries_; }

  // Elements repeated by multiplicity, in order.
  std::vector<T> expand() const {
    std::vector<T> out;
    for (const Entry& e : entries_)
      for (int i = 0; i < e.second; ++i) out.push_back(e.first);
    return out;
  }

  bool operator==(const Multiset& o) const { return entries_ == o.entries_; }
  bool operator!=(const Multiset& o) const { return !(*this == o); }
  bool operator<(const Multiset& o) const { return entries_ < o.entries_; }

 private:
  std::vector<Entry> entries_;
};

}  // namespace porta
