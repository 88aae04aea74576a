#include "cjsr/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace cjsr {

namespace {

std::vector<bool> reachable_from(std::size_t start, std::size_t n,
                                 const std::vector<Arc>& arcs, bool reversed) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const Arc& a : arcs) {
    if (reversed)
      adj[a.target].push_back(a.source);
    else
      adj[a.source].push_back(a.target);
  }
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

bool check_strong_connectivity(std::size_t node_count, const std::vector<Arc>& arcs) {
  if (node_count == 0) return false;
  for (const Arc& a : arcs)
    if (a.source >= node_count || a.target >= node_count) return false;
  const auto fwd = reachable_from(0, node_count, arcs, false);
  const auto bwd = reachable_from(0, node_count, arcs, true);
  for (std::size_t v = 0; v < node_count; ++v)
    if (!fwd[v] || !bwd[v]) return false;
  return true;
}

Automaton::Automaton(std::size_t node_count, std::vector<Arc> arcs)
    : node_count_(node_count), arcs_(std::move(arcs)) {
  if (node_count_ == 0) throw Error("Automaton: empty node set");
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  for (const Arc& a : arcs_) {
    if (a.source >= node_count_ || a.target >= node_count_)
      throw Error("Automaton: arc endpoint out of range");
    if (!seen.insert({a.source, a.target, a.label}).second)
      throw Error("Automaton: duplicate (source, target, label) arc");
  }
  if (!check_strong_connectivity(node_count_, arcs_))
    throw Error("Automaton: graph is not strongly connected");
  out_arcs_.resize(node_count_);
  in_arcs_.resize(node_count_);
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    out_arcs_[arcs_[i].source].push_back(i);
    in_arcs_[arcs_[i].target].push_back(i);
  }
}

std::size_t Automaton::max_label() const {
  std::size_t m = 0;
  for (const Arc& a : arcs_) m = std::max(m, a.label);
  return m;
}

Automaton Automaton::transpose() const {
  std::vector<Arc> rev(arcs_.size());
  for (std::size_t i = 0; i < arcs_.size(); ++i)
    rev[i] = Arc{arcs_[i].target, arcs_[i].source, arcs_[i].label};
  return Automaton(node_count_, std::move(rev));
}

Matrix Automaton::adjacency_matrix() const {
  Matrix a(node_count_, node_count_);
  for (const Arc& e : arcs_) a(e.source, e.target) += 1.0;
  return a;
}

double Automaton::adjacency_spectral_radius() const {
  return spectral_radius(adjacency_matrix());
}

std::vector<std::size_t> Automaton::path_nodes(const Path& p) const {
  std::vector<std::size_t> nodes;
  if (p.empty()) return nodes;
  nodes.reserve(p.length() + 1);
  nodes.push_back(arcs_[p.arcs.front()].source);
  for (std::size_t e : p.arcs) nodes.push_back(arcs_[e].target);
  return nodes;
}

std::vector<std::size_t> Automaton::path_labels(const Path& p) const {
  std::vector<std::size_t> labels;
  labels.reserve(p.length());
  for (std::size_t e : p.arcs) labels.push_back(arcs_[e].label);
  return labels;
}

bool Automaton::path_is_valid(const Path& p) const {
  for (std::size_t i = 0; i < p.arcs.size(); ++i) {
    if (p.arcs[i] >= arcs_.size()) return false;
    if (i > 0 && arcs_[p.arcs[i - 1]].target != arcs_[p.arcs[i]].source) return false;
  }
  return true;
}

std::vector<Path> enumerate_paths(const Automaton& g, std::size_t k,
                                  const PathFilter& filter) {
  if (k == 0) throw Error("enumerate_paths: k must be positive");
  using Kind = PathFilter::Kind;
  std::vector<Path> out;

  // first-arc candidates
  std::vector<std::size_t> first;
  switch (filter.kind) {
    case Kind::starting_with_arc:
      first.push_back(filter.arc);
      break;
    case Kind::starting_at:
    case Kind::between:
      first = g.out_arcs(filter.node_a);
      break;
    default:
      first.resize(g.arc_count());
      for (std::size_t i = 0; i < g.arc_count(); ++i) first[i] = i;
  }

  const auto emit_ok = [&](const std::vector<std::size_t>& arcs) {
    switch (filter.kind) {
      case Kind::ending_at:
        return g.arc(arcs.back()).target == filter.node_b;
      case Kind::between:
        return g.arc(arcs.back()).target == filter.node_b;
      case Kind::ending_with_arc:
        return arcs.back() == filter.arc;
      default:
        return true;
    }
  };

  // iterative DFS; frame = (arc index chosen, position in candidate list of next level)
  std::vector<std::size_t> current;
  std::vector<std::size_t> cursor;  // cursor[depth] = next candidate position
  std::size_t explored = 0;
  current.reserve(k);
  cursor.assign(1, 0);
  while (true) {
    const std::size_t depth = current.size();
    const std::vector<std::size_t>* cands;
    if (depth == 0) {
      cands = &first;
    } else {
      cands = &g.out_arcs(g.arc(current.back()).target);
    }
    if (cursor[depth] >= cands->size()) {
      if (depth == 0) break;
      current.pop_back();
      cursor.pop_back();
      ++cursor[current.size()];
      continue;
    }
    const std::size_t e = (*cands)[cursor[depth]];
    current.push_back(e);
    if (current.size() == k) {
      if (++explored > kPathEnumerationCap)
        throw Error("enumerate_paths: path count cap exceeded");
      if (emit_ok(current)) out.push_back(Path{current});
      current.pop_back();
      ++cursor[depth];
    } else {
      cursor.push_back(0);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Path& a, const Path& b) { return a.arcs < b.arcs; });
  return out;
}

std::size_t count_paths_into(const Automaton& g, std::size_t k, std::size_t v) {
  // column sums of A(G)^k restricted to target v, via repeated vector products
  std::vector<double> cnt(g.node_count(), 0.0);
  cnt[v] = 1.0;
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<double> next(g.node_count(), 0.0);
    for (const Arc& a : g.arcs()) next[a.source] += cnt[a.target];
    cnt = std::move(next);
  }
  double total = 0.0;
  for (double c : cnt) total += c;
  return static_cast<std::size_t>(total + 0.5);
}

std::size_t count_paths_from(const Automaton& g, std::size_t k, std::size_t v) {
  std::vector<double> cnt(g.node_count(), 0.0);
  cnt[v] = 1.0;
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<double> next(g.node_count(), 0.0);
    for (const Arc& a : g.arcs()) next[a.target] += cnt[a.source];
    cnt = std::move(next);
  }
  double total = 0.0;
  for (double c : cnt) total += c;
  return static_cast<std::size_t>(total + 0.5);
}

namespace {

// depth-limited DFS over tight arcs, arcs tried in ascending index order
bool find_cycle_dfs(const Automaton& g, const std::vector<std::vector<std::size_t>>& tight_out,
                    std::size_t start, std::size_t node, std::size_t remaining,
                    std::vector<std::size_t>& acc) {
  if (remaining == 0) return node == start;
  for (std::size_t e : tight_out[node]) {
    acc.push_back(e);
    if (find_cycle_dfs(g, tight_out, start, g.arc(e).target, remaining - 1, acc)) return true;
    acc.pop_back();
  }
  return false;
}

}  // namespace

std::vector<std::vector<std::size_t>> strongly_connected_components(
    std::size_t node_count, const std::vector<Arc>& arcs) {
  // Kosaraju
  std::vector<std::vector<std::size_t>> fwd(node_count), bwd(node_count);
  for (const Arc& a : arcs) {
    fwd[a.source].push_back(a.target);
    bwd[a.target].push_back(a.source);
  }
  std::vector<bool> seen(node_count, false);
  std::vector<std::size_t> order;
  order.reserve(node_count);
  for (std::size_t s = 0; s < node_count; ++s) {
    if (seen[s]) continue;
    // iterative post-order
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    seen[s] = true;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < fwd[v].size()) {
        const std::size_t w = fwd[v][idx++];
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<std::vector<std::size_t>> comps;
  std::vector<bool> assigned(node_count, false);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (assigned[*it]) continue;
    std::vector<std::size_t> comp;
    std::vector<std::size_t> stack{*it};
    assigned[*it] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (std::size_t w : bwd[v]) {
        if (!assigned[w]) {
          assigned[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

MaxCycleMean max_cycle_mean(const Automaton& g, const std::vector<double>& w) {
  if (w.size() != g.arc_count()) throw Error("max_cycle_mean: weight count mismatch");
  const std::size_t n = g.node_count();
  const double ninf = -std::numeric_limits<double>::infinity();

  // Karp: D[k][v] = max weight of a k-arc walk from node 0 to v
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, ninf));
  d[0][0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t e = 0; e < g.arc_count(); ++e) {
      const Arc& a = g.arc(e);
      if (d[k - 1][a.source] == ninf) continue;
      d[k][a.target] = std::max(d[k][a.target], d[k - 1][a.source] + w[e]);
    }
  }
  double lambda = ninf;
  for (std::size_t v = 0; v < n; ++v) {
    if (d[n][v] == ninf) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (d[k][v] == ninf) continue;
      worst = std::min(worst, (d[n][v] - d[k][v]) / static_cast<double>(n - k));
    }
    lambda = std::max(lambda, worst);
  }
  if (lambda == ninf) throw Error("max_cycle_mean: no cycle reachable");

  // potentials for the shifted weights; all max-mean cycles become tight
  double wmax = 0.0;
  for (double x : w) wmax = std::max(wmax, std::abs(x));
  const double eps = 1e-9 * (1.0 + std::abs(lambda) + wmax);
  std::vector<double> h(n, 0.0);
  for (std::size_t it = 0; it < 2 * n + 4; ++it) {
    bool changed = false;
    for (std::size_t e = 0; e < g.arc_count(); ++e) {
      const Arc& a = g.arc(e);
      const double cand = h[a.source] + w[e] - lambda;
      if (cand > h[a.target] + 1e-14 * (1.0 + std::abs(h[a.target]))) {
        h[a.target] = cand;
        changed = true;
      }
    }
    if (!changed) break;
  }
  // shortest tight cycle, deterministic tie-breaking; widen eps if the
  // floating-point shift left no tight cycle
  double cur_eps = eps;
  for (int attempt = 0; attempt < 6; ++attempt, cur_eps *= 100.0) {
    std::vector<std::vector<std::size_t>> tight_out(n);
    for (std::size_t e = 0; e < g.arc_count(); ++e) {
      const Arc& a = g.arc(e);
      if (h[a.source] + w[e] - lambda >= h[a.target] - cur_eps)
        tight_out[a.source].push_back(e);
    }
    for (std::size_t len = 1; len <= n; ++len) {
      for (std::size_t start = 0; start < n; ++start) {
        std::vector<std::size_t> acc;
        if (find_cycle_dfs(g, tight_out, start, start, len, acc))
          return MaxCycleMean{lambda, Path{std::move(acc)}};
      }
    }
  }
  throw Error("max_cycle_mean: tight cycle extraction failed");
}

}  // namespace cjsr
