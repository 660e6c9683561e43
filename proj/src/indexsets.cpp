#include "bgpc/indexsets.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <sstream>

#include "bgpc/errors.hpp"

namespace bgpc {

namespace {

int wrap(int j, int n) {
  // maps any integer to {1..n}
  int r = (j - 1) % n;
  if (r < 0) r += n;
  return r + 1;
}

std::uint64_t rotate_mask(std::uint64_t mask, int k, int n) {
  k %= n;
  if (k == 0) return mask;
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return ((mask << k) | (mask >> (n - k))) & full;
}

void check_guard(const IndexSet& J, EnumerationGuard guard) {
  if (guard.max_n > 63) throw ParameterError("enumeration guard cannot exceed 63");
  if (J.n() > guard.max_n)
    throw GuardError("shift-choice enumeration refused for n = " + std::to_string(J.n()) +
                     " (guard " + std::to_string(guard.max_n) + ")");
}

bool masks_connected(const std::vector<std::uint64_t>& nodes) {
  if (nodes.empty()) return true;
  std::vector<bool> seen(nodes.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (!seen[v] && (nodes[u] & nodes[v]) != 0) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == nodes.size();
}

}  // namespace

IndexSet::IndexSet(int n, std::vector<int> members) : n_(n), members_(std::move(members)) {
  if (n < 1) throw ParameterError("IndexSet universe size must be >= 1");
  std::sort(members_.begin(), members_.end());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 1 || members_[i] > n)
      throw ParameterError("index " + std::to_string(members_[i]) + " outside {1.." + std::to_string(n) + "}");
    if (i > 0 && members_[i] == members_[i - 1])
      throw ParameterError("duplicate index " + std::to_string(members_[i]));
  }
}

IndexSet IndexSet::universe(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 1);
  return IndexSet(n, std::move(m));
}

IndexSet IndexSet::run(int n, int first, int len) {
  std::vector<int> m;
  for (int i = 0; i < len; ++i) m.push_back(wrap(first + i, n));
  return IndexSet(n, std::move(m));
}

IndexSet IndexSet::from_mask(int n, std::uint64_t mask) {
  std::vector<int> m;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1U) m.push_back(i + 1);
  return IndexSet(n, std::move(m));
}

bool IndexSet::contains(int j) const { return std::binary_search(members_.begin(), members_.end(), j); }

IndexSet IndexSet::shifted(int k) const {
  std::vector<int> m;
  m.reserve(members_.size());
  for (int j : members_) m.push_back(wrap(j + k, n_));
  return IndexSet(n_, std::move(m));
}

IndexSet IndexSet::flipped() const {
  std::vector<int> m;
  m.reserve(members_.size());
  for (int j : members_) m.push_back(wrap(-j, n_));
  return IndexSet(n_, std::move(m));
}

IndexSet IndexSet::complement() const {
  std::vector<int> m;
  for (int j = 1; j <= n_; ++j)
    if (!contains(j)) m.push_back(j);
  return IndexSet(n_, std::move(m));
}

IndexSet IndexSet::with(int j) const {
  if (contains(j)) return *this;
  auto m = members_;
  m.push_back(j);
  return IndexSet(n_, std::move(m));
}

std::vector<int> IndexSet::zero_based() const {
  std::vector<int> z;
  z.reserve(members_.size());
  for (int j : members_) z.push_back(j - 1);
  return z;
}

std::uint64_t IndexSet::mask() const {
  if (n_ > 64) throw ParameterError("IndexSet::mask needs n <= 64");
  std::uint64_t m = 0;
  for (int j : members_) m |= std::uint64_t{1} << (j - 1);
  return m;
}

std::string IndexSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < members_.size(); ++i) os << (i ? "," : "") << members_[i];
  os << '}';
  return os.str();
}

IndexPairSet::IndexPairSet(int side, std::vector<std::pair<int, int>> members)
    : side_(side), members_(std::move(members)) {
  if (side < 1) throw ParameterError("IndexPairSet side must be >= 1");
  std::sort(members_.begin(), members_.end());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto [v, h] = members_[i];
    if (v < 1 || v > side || h < 1 || h > side) throw ParameterError("index pair outside the grid");
    if (i > 0 && members_[i] == members_[i - 1]) throw ParameterError("duplicate index pair");
  }
}

std::pair<int, int> linear_to_pair(int j, int side) {
  const int q = (j - 1) / side;
  return {j - side * q, q + 1};
}

int pair_to_linear(std::pair<int, int> vh, int side) { return (vh.second - 1) * side + vh.first; }

IndexPairSet IndexPairSet::from_linear(const IndexSet& J) {
  const int n = J.n();
  int side = 0;
  while (side * side < n) ++side;
  if (side * side != n) throw DimensionError("2D support needs n to be a perfect square");
  std::vector<std::pair<int, int>> m;
  for (int j : J.members()) m.push_back(linear_to_pair(j, side));
  return IndexPairSet(side, std::move(m));
}

IndexSet IndexPairSet::to_linear() const {
  std::vector<int> m;
  for (const auto& p : members_) m.push_back(pair_to_linear(p, side_));
  return IndexSet(side_ * side_, std::move(m));
}

IndexPairSet IndexPairSet::shifted(int dv, int dh) const {
  std::vector<std::pair<int, int>> m;
  m.reserve(members_.size());
  for (const auto& [v, h] : members_) m.emplace_back(wrap(v + dv, side_), wrap(h + dh, side_));
  return IndexPairSet(side_, std::move(m));
}

std::vector<int> periods(const IndexSet& J) {
  if (J.empty()) throw ParameterError("periods: J must be nonempty");
  std::vector<int> out;
  for (int l = 1; l < J.n(); ++l)
    if (J.shifted(l) == J) out.push_back(l);
  return out;
}

std::optional<int> fundamental_period(const IndexSet& J) {
  const auto p = periods(J);
  if (p.empty()) return std::nullopt;
  return p.front();
}

bool is_periodic(const IndexSet& J) { return !periods(J).empty(); }

std::vector<std::pair<int, int>> periods_2d(const IndexPairSet& J) {
  if (J.size() == 0) throw ParameterError("periods_2d: J must be nonempty");
  std::vector<std::pair<int, int>> out;
  for (int lv = 0; lv < J.side(); ++lv)
    for (int lh = 0; lh < J.side(); ++lh) {
      if (lv == 0 && lh == 0) continue;
      if (J.shifted(lv, lh) == J) out.emplace_back(lv, lh);
    }
  return out;
}

bool sets_connected(const std::vector<IndexSet>& sets) {
  if (sets.empty()) throw ParameterError("sets_connected: empty list");
  const std::size_t t = sets.size();
  std::vector<bool> seen(t, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  auto intersects = [](const IndexSet& a, const IndexSet& b) {
    const auto& x = a.members();
    const auto& y = b.members();
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
      if (x[i] == y[j]) return true;
      if (x[i] < y[j]) ++i; else ++j;
    }
    return false;
  };
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < t; ++v) {
      if (!seen[v] && intersects(sets[u], sets[v])) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == t;
}

bool is_contiguous(const IndexSet& J) {
  const int s = J.size();
  if (s == 0) return false;
  if (s == J.n()) return true;
  // contiguous iff exactly one member whose predecessor is absent
  int starts = 0;
  for (int j : J.members())
    if (!J.contains(wrap(j - 1, J.n()))) ++starts;
  return starts == 1;
}

bool is_shift_of(const IndexSet& K, const IndexSet& J) {
  if (K.n() != J.n() || K.size() != J.size()) return false;
  for (int k = 0; k < J.n(); ++k)
    if (J.shifted(k) == K) return true;
  return false;
}

IndexSet canonical_shift(const IndexSet& J) {
  IndexSet best = J;
  for (int k = 1; k < J.n(); ++k) {
    auto c = J.shifted(k);
    if (c.members() < best.members()) best = std::move(c);
  }
  return best;
}

std::optional<bool> friendly_fast_path(const IndexSet& J) {
  const int n = J.n();
  const int s = J.size();
  if (s == n) return true;
  if (n >= 4 && s <= 2) return false;
  if (s >= 3 && is_contiguous(J)) return true;
  if (2 * s > n && !is_periodic(J)) return true;
  return std::nullopt;
}

bool is_friendly_exhaustive(const IndexSet& J, EnumerationGuard guard) {
  if (J.empty()) throw ParameterError("is_friendly: J must be nonempty");
  const int n = J.n();
  const int s = J.size();
  if (s == n) return true;
  check_guard(J, guard);

  const std::uint64_t base = J.mask();
  std::vector<std::uint64_t> rotations(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) rotations[static_cast<std::size_t>(k)] = rotate_mask(base, k, n);

  bool friendly = true;
  std::vector<std::uint64_t> chosen;
  for_each_subset(n, n - s, [&](std::uint64_t shifts) {
    chosen.clear();
    std::uint64_t uni = 0;
    for (int k = 0; k < n; ++k)
      if (shifts >> k & 1U) {
        chosen.push_back(rotations[static_cast<std::size_t>(k)]);
        uni |= rotations[static_cast<std::size_t>(k)];
      }
    if (std::popcount(uni) < n - 1 || !masks_connected(chosen)) {
      friendly = false;
      return false;
    }
    return true;
  });
  return friendly;
}

bool is_friendly(const IndexSet& J, EnumerationGuard guard) {
  if (J.empty()) throw ParameterError("is_friendly: J must be nonempty");
  if (auto fast = friendly_fast_path(J)) return *fast;
  return is_friendly_exhaustive(J, guard);
}

int min_shift_union(const IndexSet& J, EnumerationGuard guard) {
  const int n = J.n();
  const int s = J.size();
  if (s == 0 || s >= n) throw ParameterError("min_shift_union needs 0 < |J| < n");
  check_guard(J, guard);

  const std::uint64_t base = J.mask();
  std::vector<std::uint64_t> rotations(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) rotations[static_cast<std::size_t>(k)] = rotate_mask(base, k, n);

  int best = std::numeric_limits<int>::max();
  for_each_subset(n, n - s, [&](std::uint64_t shifts) {
    std::uint64_t uni = 0;
    for (int k = 0; k < n; ++k)
      if (shifts >> k & 1U) uni |= rotations[static_cast<std::size_t>(k)];
    best = std::min(best, std::popcount(uni));
    return true;
  });
  return best;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace bgpc
