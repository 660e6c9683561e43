#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bgpc {

/// Sorted set of 1-based indices inside the universe {1..n}.
///
/// All shift arithmetic is modulo n and maps back into {1..n}; index 0 never appears.
class IndexSet {
public:
  IndexSet() = default;
  /// Throws ParameterError on out-of-range members or n < 1. Duplicates are rejected.
  IndexSet(int n, std::vector<int> members);

  static IndexSet universe(int n);
  /// Contiguous run {first, first+1, ..., first+len-1} modulo n.
  static IndexSet run(int n, int first, int len);
  /// Members given as a bitmask over bit positions 0..n-1 (bit i <-> index i+1).
  static IndexSet from_mask(int n, std::uint64_t mask);

  int n() const { return n_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  const std::vector<int>& members() const { return members_; }
  bool contains(int j) const;

  /// {j + k mod n}
  IndexSet shifted(int k) const;
  /// {-j mod n}
  IndexSet flipped() const;
  IndexSet complement() const;
  IndexSet with(int j) const;

  /// 0-based member positions, for matrix indexing.
  std::vector<int> zero_based() const;
  /// Bit i set iff i+1 is a member. Requires n <= 64.
  std::uint64_t mask() const;

  std::string to_string() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend auto operator<=>(const IndexSet&, const IndexSet&) = default;

private:
  int n_ = 0;
  std::vector<int> members_;
};

/// Set of (vertical, horizontal) index pairs on a side x side grid, 1-based.
class IndexPairSet {
public:
  IndexPairSet() = default;
  IndexPairSet(int side, std::vector<std::pair<int, int>> members);

  /// Converts a 1D row support of an n = side^2 vector (vertical index varies fastest).
  static IndexPairSet from_linear(const IndexSet& J);
  IndexSet to_linear() const;

  int side() const { return side_; }
  int size() const { return static_cast<int>(members_.size()); }
  const std::vector<std::pair<int, int>>& members() const { return members_; }

  IndexPairSet shifted(int dv, int dh) const;

  friend bool operator==(const IndexPairSet&, const IndexPairSet&) = default;

private:
  int side_ = 0;
  std::vector<std::pair<int, int>> members_;
};

/// Linear 1-based row index j <-> (v, h) pair, vertical index fastest.
std::pair<int, int> linear_to_pair(int j, int side);
int pair_to_linear(std::pair<int, int> vh, int side);

/// All l in {1..n-1} with J + l = J (mod n). Empty means J is not periodic.
std::vector<int> periods(const IndexSet& J);
std::optional<int> fundamental_period(const IndexSet& J);
bool is_periodic(const IndexSet& J);

/// All (lv, lh) != (0, 0) with components in [0, side) leaving J invariant.
std::vector<std::pair<int, int>> periods_2d(const IndexPairSet& J);

/// True iff the intersection graph of the sets is connected.
bool sets_connected(const std::vector<IndexSet>& sets);

/// Circular contiguity (sets like {n, 1, 2} count as contiguous).
bool is_contiguous(const IndexSet& J);

/// True iff K is a circular shift of J.
bool is_shift_of(const IndexSet& K, const IndexSet& J);

/// Lexicographically smallest circular shift of J.
IndexSet canonical_shift(const IndexSet& J);

/// Upper bound on n for the exhaustive friendliness / shift-union enumeration.
struct EnumerationGuard {
  int max_n = 24;
};

/// Decides friendliness from the sufficient/necessary propositions alone:
/// |J| <= 2 with n >= 4 is never friendly; contiguous with |J| >= 3 is friendly;
/// |J| > n/2 and not periodic is friendly. Returns nullopt when none applies.
std::optional<bool> friendly_fast_path(const IndexSet& J);

/// Friendliness by direct enumeration of every choice of n - s distinct shifts.
bool is_friendly_exhaustive(const IndexSet& J, EnumerationGuard guard = {});

/// Fast path when decisive, exhaustive otherwise. J = {1..n} is friendly.
bool is_friendly(const IndexSet& J, EnumerationGuard guard = {});

/// Minimum over all choices of n - s distinct shifts of |union of shifted sets|.
int min_shift_union(const IndexSet& J, EnumerationGuard guard = {});

/// Calls fn(mask) for every size-k subset of {0..n-1}, in increasing bit order
/// of the lowest differing element (lexicographic on sorted members).
/// Stops early when fn returns false.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::uint64_t mask = 0;
    for (int v : idx) mask |= std::uint64_t{1} << v;
    if (!fn(mask)) return;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// n choose k, saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

}  // namespace bgpc
