// SPDX-License-Identifier: MIT
#include "tcm/matching.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "tcm/combinatorics.hpp"
#include "tcm/error.hpp"

namespace tcm {

Matching::Matching(std::vector<std::uint8_t> partner) : partner_(std::move(partner)) {
  const int ell = static_cast<int>(partner_.size());
  for (int i = 0; i < ell; ++i)
    require(partner_[i] < ell && partner_[i] != i && partner_[partner_[i]] == i, "not a perfect matching");
}

Matching Matching::from_pairs(int ell, const std::vector<std::pair<int, int>>& pairs) {
  require(ell % 2 == 0 && static_cast<int>(pairs.size()) * 2 == ell, "pair count does not cover [l]");
  std::vector<std::uint8_t> partner(ell, 0xff);
  for (auto [a, b] : pairs) {
    require(a >= 0 && a < ell && b >= 0 && b < ell && a != b, "pair out of range");
    require(partner[a] == 0xff && partner[b] == 0xff, "element matched twice");
    partner[a] = static_cast<std::uint8_t>(b);
    partner[b] = static_cast<std::uint8_t>(a);
  }
  return Matching(std::move(partner));
}

std::vector<std::pair<int, int>> Matching::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < ell(); ++i)
    if (i < partner_[i]) out.emplace_back(i, partner_[i]);
  return out;
}

namespace {

void for_each_matching(int ell, const std::function<void(const std::vector<std::uint8_t>&)>& visit) {
  std::vector<std::uint8_t> partner(ell, 0xff);
  std::function<void(int)> rec = [&](int first) {
    while (first < ell && partner[first] != 0xff) ++first;
    if (first == ell) {
      visit(partner);
      return;
    }
    for (int j = first + 1; j < ell; ++j) {
      if (partner[j] != 0xff) continue;
      partner[first] = static_cast<std::uint8_t>(j);
      partner[j] = static_cast<std::uint8_t>(first);
      rec(first + 1);
      partner[first] = partner[j] = 0xff;
    }
  };
  rec(0);
}

}  // namespace

std::vector<Matching> all_matchings(int ell) {
  require(ell >= 0 && ell % 2 == 0, "matchings need an even ground set");
  require(ell <= 16, "matching enumeration limited to l <= 16");
  std::vector<Matching> out;
  for_each_matching(ell, [&](const std::vector<std::uint8_t>& partner) { out.emplace_back(partner); });
  return out;
}

CycleCode cycle_type(const Matching& a, const Matching& b) {
  const int ell = a.ell();
  require(b.ell() == ell, "matchings on different ground sets");
  std::uint32_t seen = 0;
  CycleCode code = 0;
  for (int i = 0; i < ell; ++i) {
    if (seen >> i & 1u) continue;
    int len = 0;
    int x = i;
    do {
      seen |= 1u << x;
      const int y = a.partner(x);
      seen |= 1u << y;
      ++len;
      x = b.partner(y);
    } while (x != i);
    code += CycleCode{1} << (4 * len);
  }
  return code;
}

int cycle_count(CycleCode code) {
  int c = 0;
  for (; code; code >>= 4) c += static_cast<int>(code & 0xf);
  return c;
}

std::vector<int> code_partition(CycleCode code) {
  std::vector<int> parts;
  for (int len = 15; len >= 1; --len) {
    const int cnt = static_cast<int>((code >> (4 * len)) & 0xf);
    for (int k = 0; k < cnt; ++k) parts.push_back(len);
  }
  return parts;
}

CycleCode partition_code(const std::vector<int>& parts) {
  CycleCode code = 0;
  for (int len : parts) {
    require(len >= 1 && len <= 15, "cycle length out of range");
    code += CycleCode{1} << (4 * len);
  }
  return code;
}

RealizationSpace::RealizationSpace(Kind kind, int d, int p, EnumerationLimits limits, bool keep_matchings)
    : kind_(kind), d_(d), p_(p) {
  require(p >= 1 && d >= 0, "invalid (d, p)");
  switch (kind) {
    case Kind::Closed:
      require((p * d) % 2 == 0, "closed p-regular graphs need p*d even");
      block_sizes_.assign(d, p);
      break;
    case Kind::Chopped:
      require(d >= 1 && (p * d) % 2 == 1, "1-open graphs need p*d odd");
      block_sizes_.assign(d, p);
      block_sizes_[0] = p - 1;
      break;
    case Kind::Pendant:
      require(d >= 1 && (p * d) % 2 == 1, "1-open graphs need p*d odd");
      block_sizes_.assign(d + 1, p);
      block_sizes_[0] = 1;
      break;
  }
  for (int b = 0; b < static_cast<int>(block_sizes_.size()); ++b)
    for (int k = 0; k < block_sizes_[b]; ++k) block_of_.push_back(b);
  if (ell() > limits.max_half_edges)
    throw CapacityError("half-edge count " + std::to_string(ell()) + " exceeds guard " +
                        std::to_string(limits.max_half_edges));

  std::unordered_map<std::string, int> labeled_cache;
  std::map<std::string, int> key_index;
  std::vector<std::uint64_t> counts;
  std::vector<Multigraph> reps;
  std::vector<int> raw_class;
  const std::size_t cache_cap = 1u << 20;
  for_each_matching(ell(), [&](const std::vector<std::uint8_t>& partner) {
    Matching m(partner);
    const LabeledGraph g = realize(m);
    const std::string adj_bytes(reinterpret_cast<const char*>(g.adjacency().data()),
                                g.adjacency().size() * sizeof(int));
    int cls;
    auto hit = labeled_cache.find(adj_bytes);
    if (hit != labeled_cache.end()) {
      cls = hit->second;
    } else {
      Multigraph rep = classify(m);
      auto [it, fresh] = key_index.emplace(rep.key(), static_cast<int>(reps.size()));
      if (fresh) {
        reps.push_back(rep.canonical());
        counts.push_back(0);
      }
      cls = it->second;
      if (labeled_cache.size() < cache_cap) labeled_cache.emplace(adj_bytes, cls);
    }
    ++counts[cls];
    ++matching_count_;
    if (keep_matchings) {
      matchings_.push_back(std::move(m));
      raw_class.push_back(cls);
    }
  });

  // Sort classes by key and cross-check |eAut| against realization counts.
  std::vector<int> remap(reps.size());
  BigInt labeled_total = 1;
  std::map<int, int> size_multiplicity;
  for (std::size_t b = (kind == Kind::Closed ? 0 : 1); b < block_sizes_.size(); ++b) ++size_multiplicity[block_sizes_[b]];
  for (int s : block_sizes_) labeled_total *= factorial(s);
  for (auto [s, m] : size_multiplicity) labeled_total *= factorial(m);
  int next = 0;
  for (auto& [key, raw] : key_index) {
    remap[raw] = next++;
    GraphClass gc{reps[raw], reps[raw].eaut(), counts[raw]};
    if (BigInt(gc.eaut) * gc.realizations != labeled_total)
      throw NumericError("realization count disagrees with eAut for " + key);
    index_.emplace(key, static_cast<int>(classes_.size()));
    classes_.push_back(std::move(gc));
  }
  class_of_.reserve(raw_class.size());
  for (int c : raw_class) class_of_.push_back(remap[c]);
}

int RealizationSpace::index_of(const std::string& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

LabeledGraph RealizationSpace::realize(const Matching& m) const {
  LabeledGraph g(static_cast<int>(block_sizes_.size()));
  for (auto [a, b] : m.pairs()) g.add_edge(block_of_[a], block_of_[b]);
  return g;
}

Multigraph RealizationSpace::classify(const Matching& m) const {
  const LabeledGraph g = realize(m);
  switch (kind_) {
    case Kind::Closed:
      return Multigraph(p_, g);
    case Kind::Chopped:
      return Multigraph(p_, g, 0);
    case Kind::Pendant: {
      int anchor = -1;
      for (int w = 1; w < g.size(); ++w)
        if (g.mult(0, w) > 0) anchor = w;
      std::vector<int> rest;
      for (int w = 1; w < g.size(); ++w) rest.push_back(w);
      return Multigraph(p_, g.induced(rest), anchor - 1);
    }
  }
  throw InputError("unknown realization space kind");
}

std::vector<GraphClass> enumerate_closed(int d, int p, EnumerationLimits limits) {
  require(p >= 1 && d >= 0, "invalid (d, p)");
  if ((p * d) % 2 != 0) throw InputError("p*d must be even for closed p-regular graphs");
  return RealizationSpace(RealizationSpace::Kind::Closed, d, p, limits, false).classes();
}

std::vector<GraphClass> enumerate_open(int d, int p, EnumerationLimits limits) {
  require(p >= 1 && d >= 1, "invalid (d, p)");
  if ((p * d) % 2 != 1) throw InputError("p*d must be odd for 1-open p-regular graphs");
  return RealizationSpace(RealizationSpace::Kind::Chopped, d, p, limits, false).classes();
}

}  // namespace tcm
