#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cjsr/matrix.hpp"

namespace cjsr {

/// Labelled arc u -> v carrying a mode index in [0, m).
struct Arc {
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t label = 0;
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// A path is a chain of arc indices into an automaton's arc list.
struct Path {
  std::vector<std::size_t> arcs;
  bool empty() const { return arcs.empty(); }
  std::size_t length() const { return arcs.size(); }
  friend bool operator==(const Path&, const Path&) = default;
};

struct PathFilter {
  enum class Kind { none, starting_at, ending_at, starting_with_arc, ending_with_arc, between };
  Kind kind = Kind::none;
  std::size_t node_a = 0;  // start node (starting_at, between)
  std::size_t node_b = 0;  // end node (ending_at, between)
  std::size_t arc = 0;     // arc index (starting_with_arc, ending_with_arc)

  static PathFilter none() { return {}; }
  static PathFilter starting_at(std::size_t v) { return {Kind::starting_at, v, 0, 0}; }
  static PathFilter ending_at(std::size_t v) { return {Kind::ending_at, 0, v, 0}; }
  static PathFilter starting_with_arc(std::size_t e) {
    return {Kind::starting_with_arc, 0, 0, e};
  }
  static PathFilter ending_with_arc(std::size_t e) { return {Kind::ending_with_arc, 0, 0, e}; }
  static PathFilter between(std::size_t u, std::size_t v) { return {Kind::between, u, v, 0}; }
};

bool check_strong_connectivity(std::size_t node_count, const std::vector<Arc>& arcs);

/// Strongly connected labelled multigraph constraining the switching signal.
/// Immutable after validated construction.
class Automaton {
 public:
  Automaton(std::size_t node_count, std::vector<Arc> arcs);

  std::size_t node_count() const { return node_count_; }
  std::size_t arc_count() const { return arcs_.size(); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(std::size_t i) const { return arcs_[i]; }

  const std::vector<std::size_t>& out_arcs(std::size_t v) const { return out_arcs_[v]; }
  const std::vector<std::size_t>& in_arcs(std::size_t v) const { return in_arcs_[v]; }
  std::size_t out_degree(std::size_t v) const { return out_arcs_[v].size(); }
  std::size_t in_degree(std::size_t v) const { return in_arcs_[v].size(); }
  std::size_t max_label() const;  // largest label present

  Automaton transpose() const;

  /// Adjacency counts: entry (u, v) = number of parallel arcs u -> v.
  Matrix adjacency_matrix() const;
  double adjacency_spectral_radius() const;

  std::size_t path_start(const Path& p) const { return arcs_[p.arcs.front()].source; }
  std::size_t path_end(const Path& p) const { return arcs_[p.arcs.back()].target; }
  std::vector<std::size_t> path_nodes(const Path& p) const;
  std::vector<std::size_t> path_labels(const Path& p) const;
  bool path_is_cycle(const Path& p) const {
    return !p.empty() && path_start(p) == path_end(p);
  }
  bool path_is_valid(const Path& p) const;

 private:
  std::size_t node_count_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> out_arcs_;
  std::vector<std::vector<std::size_t>> in_arcs_;
};

inline constexpr std::size_t kPathEnumerationCap = 10'000'000;

/// All admissible paths of length k matching the filter, sorted
/// lexicographically by arc index sequence.
std::vector<Path> enumerate_paths(const Automaton& g, std::size_t k,
                                  const PathFilter& filter = PathFilter::none());

/// Number of length-k paths ending at v (indegree d^-_k) or starting at v (d^+_k).
std::size_t count_paths_into(const Automaton& g, std::size_t k, std::size_t v);
std::size_t count_paths_from(const Automaton& g, std::size_t k, std::size_t v);

struct MaxCycleMean {
  double mean = 0.0;
  Path cycle;
};

/// Karp's algorithm; ties broken by shortest cycle, then lexicographically.
MaxCycleMean max_cycle_mean(const Automaton& g, const std::vector<double>& arc_weights);

/// Admissible closed path together with its growth rate rho(A_c)^{1/k}.
struct CycleCertificate {
  Path cycle;
  double growth = 0.0;
};

/// Strongly connected components of an arbitrary arc list (no connectivity
/// assumption); each component is a sorted list of node ids.
std::vector<std::vector<std::size_t>> strongly_connected_components(
    std::size_t node_count, const std::vector<Arc>& arcs);

}  // namespace cjsr
