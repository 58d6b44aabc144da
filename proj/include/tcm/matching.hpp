// SPDX-License-Identifier: MIT
// Perfect matchings of [l], cycle types of matching pairs, and the space of
// matchings of grouped half-edges that realizes regular multigraphs.
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tcm/graph.hpp"

namespace tcm {

// partner[i] = element matched with i.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::vector<std::uint8_t> partner);
  static Matching from_pairs(int ell, const std::vector<std::pair<int, int>>& pairs);
  int ell() const { return static_cast<int>(partner_.size()); }
  int partner(int i) const { return partner_[i]; }
  // Sorted pairs (a, b) with a < b.
  std::vector<std::pair<int, int>> pairs() const;
  bool operator==(const Matching&) const = default;

 private:
  std::vector<std::uint8_t> partner_;
};

// All (l-1)!! matchings in a fixed recursive order; the first pairs 2k with 2k+1.
std::vector<Matching> all_matchings(int ell);

// Cycle type of the union graph of two matchings, packed as 4-bit counts of
// cycles per half-length (bits 4k..4k+3 count cycles using k edges of each).
using CycleCode = std::uint64_t;
CycleCode cycle_type(const Matching& a, const Matching& b);
int cycle_count(CycleCode code);
// Partition of l/2 (non-increasing parts) for a code, and back.
std::vector<int> code_partition(CycleCode code);
CycleCode partition_code(const std::vector<int>& parts);

struct EnumerationLimits {
  int max_half_edges = 16;  // pd guard
};

struct GraphClass {
  Multigraph graph;                  // canonical representative
  std::uint64_t eaut = 0;            // closed: |eAut(G)|; open: |eAut(chop G)|
  std::uint64_t realizations = 0;    // matchings of the half-edge space realizing G
};

// Half-edges grouped into vertex blocks; every perfect matching realizes a
// multigraph. Closed: d blocks of size p. Chopped: one block of p-1 then
// d-1 blocks of p. Pendant: one block of size 1 then d blocks of p; the
// degree-1 vertex stands for the open edge.
class RealizationSpace {
 public:
  enum class Kind { Closed, Chopped, Pendant };
  RealizationSpace(Kind kind, int d, int p, EnumerationLimits limits = {}, bool keep_matchings = true);

  Kind kind() const { return kind_; }
  int d() const { return d_; }
  int p() const { return p_; }
  int ell() const { return static_cast<int>(block_of_.size()); }
  const std::vector<int>& block_of() const { return block_of_; }
  const std::vector<int>& block_sizes() const { return block_sizes_; }
  // Matchings are stored only when keep_matchings was set.
  const std::vector<Matching>& matchings() const { return matchings_; }
  const std::vector<int>& class_of_matching() const { return class_of_; }
  std::uint64_t matching_count() const { return matching_count_; }
  const std::vector<GraphClass>& classes() const { return classes_; }
  int index_of(const std::string& key) const;
  // Graph on the blocks realized by a matching (pendant block included).
  LabeledGraph realize(const Matching& m) const;
  // Class representative as seen by this space (open graphs for Chopped and Pendant).
  Multigraph classify(const Matching& m) const;

 private:
  Kind kind_;
  int d_, p_;
  std::vector<int> block_of_, block_sizes_;
  std::vector<Matching> matchings_;
  std::vector<int> class_of_;
  std::uint64_t matching_count_ = 0;
  std::vector<GraphClass> classes_;
  std::unordered_map<std::string, int> index_;
};

// One representative per isomorphism class, sorted by key, with |eAut| attached.
std::vector<GraphClass> enumerate_closed(int d, int p, EnumerationLimits limits = {});
std::vector<GraphClass> enumerate_open(int d, int p, EnumerationLimits limits = {});

}  // namespace tcm
