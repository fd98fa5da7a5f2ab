#pragma once

// Digraph view of a nonnegative matrix: edge i -> j iff a(i, j) > 0, with no
// tolerance. Strong components come from an iterative Tarjan pass; the
// Frobenius normal form orders them topologically, always releasing the
// ready component with the smallest member index first, so the output is a
// deterministic function of the input.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "perronroot/matrix.hpp"

namespace perronroot {

/// Half-open index range [offset, offset + size) of a diagonal block.
struct BlockRange {
  std::size_t offset;
  std::size_t size;

  bool operator==(const BlockRange&) const = default;
};

struct FrobeniusNormalForm {
  Permutation perm;
  std::vector<BlockRange> blocks;
  std::vector<NonNegMatrix> block_matrices;

  std::vector<std::size_t> block_sizes() const {
    std::vector<std::size_t> s;
    s.reserve(blocks.size());
    for (const auto& b : blocks) s.push_back(b.size);
    return s;
  }
};

inline bool has_edge(double entry) noexcept { return entry > 0.0; }

/// Strongly connected components; each component lists its vertices in
/// ascending order. Components are returned in Tarjan completion order
/// (every edge between components points to an earlier entry).
inline std::vector<std::vector<std::size_t>> strongly_connected_components(const RealMatrix& a) {
  const std::size_t n = a.size();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  std::vector<Frame> call;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call.empty()) {
      Frame& f = call.back();
      const std::size_t v = f.v;
      bool descended = false;
      while (f.next < n) {
        const std::size_t w = f.next++;
        if (!has_edge(a(v, w))) continue;
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;

      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return components;
}

/// True iff the digraph of a is strongly connected. Every 1x1 matrix,
/// including [0], counts as irreducible.
inline bool is_irreducible(const RealMatrix& a) {
  if (a.size() == 1) return true;
  return strongly_connected_components(a).size() == 1;
}

inline FrobeniusNormalForm frobenius_normal_form(const NonNegMatrix& a) {
  const std::size_t n = a.size();
  const auto comps = strongly_connected_components(a);
  const std::size_t m = comps.size();

  std::vector<std::size_t> comp_of(n);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t v : comps[c]) comp_of[v] = c;

  // Condensation in-degrees, counting each inter-component pair once.
  std::vector<std::vector<std::size_t>> succ(m);
  std::vector<std::size_t> indegree(m, 0);
  {
    std::vector<std::vector<bool>> linked(m, std::vector<bool>(m, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t ci = comp_of[i], cj = comp_of[j];
        if (ci != cj && has_edge(a(i, j)) && !linked[ci][cj]) {
          linked[ci][cj] = true;
          succ[ci].push_back(cj);
          ++indegree[cj];
        }
      }
  }

  // Kahn's algorithm keyed by the smallest vertex of each component.
  using Key = std::pair<std::size_t, std::size_t>;  // (min vertex, component)
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (std::size_t c = 0; c < m; ++c)
    if (indegree[c] == 0) ready.push({comps[c].front(), c});

  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<BlockRange> blocks;
  while (!ready.empty()) {
    const std::size_t c = ready.top().second;
    ready.pop();
    blocks.push_back({order.size(), comps[c].size()});
    order.insert(order.end(), comps[c].begin(), comps[c].end());
    for (std::size_t d : succ[c])
      if (--indegree[d] == 0) ready.push({comps[d].front(), d});
  }

  Permutation perm(std::move(order));
  const NonNegMatrix permuted = apply_symmetric_permutation(a, perm);
  std::vector<NonNegMatrix> mats;
  mats.reserve(blocks.size());
  for (const auto& b : blocks) mats.push_back(principal_block(permuted, b.offset, b.size));
  return FrobeniusNormalForm{std::move(perm), std::move(blocks), std::move(mats)};
}

/// Smallest p with A^p = 0, or nullopt when A is not nilpotent. Powers are
/// taken on the zero pattern, which is exact for nonnegative matrices.
inline std::optional<std::size_t> nilpotency_index(const NonNegMatrix& a) {
  const auto fnf = frobenius_normal_form(a);
  for (const auto& b : fnf.block_matrices)
    if (b.size() != 1 || b(0, 0) != 0.0) return std::nullopt;

  const std::size_t n = a.size();
  std::vector<char> base(n * n), power(n * n), next(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) base[i * n + j] = has_edge(a(i, j));
  power = base;
  for (std::size_t p = 1; p <= n; ++p) {
    if (std::none_of(power.begin(), power.end(), [](char c) { return c != 0; })) return p;
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (power[i * n + k])
          for (std::size_t j = 0; j < n; ++j) next[i * n + j] |= base[k * n + j];
    power.swap(next);
  }
  // Unreachable: an acyclic digraph on n vertices has no path of length n.
  return n;
}

inline bool is_nilpotent(const NonNegMatrix& a) { return nilpotency_index(a).has_value(); }

}  // namespace perronroot
