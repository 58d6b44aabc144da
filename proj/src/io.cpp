// SPDX-License-Identifier: MIT
#include "tcm/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "tcm/error.hpp"

namespace tcm {

namespace {
constexpr char kMagic[8] = {'T', 'C', 'M', 'S', 'Y', 'M', '0', '1'};
static_assert(std::endian::native == std::endian::little, "snapshot IO assumes a little-endian host");
}  // namespace

std::string graph_to_json(const Multigraph& g) {
  nlohmann::json j;
  j["p"] = g.p();
  j["d"] = g.d();
  j["edges"] = nlohmann::json::array();
  for (auto [u, v] : g.graph().edges()) j["edges"].push_back({u, v});
  if (g.is_open()) j["open"] = g.open_vertex();
  return j.dump();
}

Multigraph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("graph JSON: ") + e.what());
  }
  require(j.is_object() && j.contains("p") && j.contains("d") && j.contains("edges"),
          "graph JSON needs fields p, d and edges");
  const int p = j.at("p").get<int>();
  const int d = j.at("d").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    require(e.is_array() && e.size() == 2, "each edge must be a pair [u, v]");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  const int open = j.contains("open") ? j.at("open").get<int>() : -1;
  return Multigraph::from_edges(p, d, edges, open);
}

Multigraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return graph_from_json(ss.str());
}

void write_graph_file(const std::string& path, const Multigraph& g) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write graph file " + path);
  out << graph_to_json(g) << "\n";
}

void write_tensor(std::ostream& out, const SymmetricTensor& t) {
  const std::int64_t header[2] = {t.p(), t.n()};
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(reinterpret_cast<const char*>(t.values().data()),
            static_cast<std::streamsize>(t.values().size() * sizeof(double)));
  if (!out) throw InputError("failed to write tensor snapshot");
}

SymmetricTensor read_tensor(std::istream& in) {
  char magic[8];
  std::int64_t header[2];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw InputError("not a tensor snapshot");
  in.read(reinterpret_cast<char*>(header), sizeof header);
  require(in && header[0] >= 1 && header[1] >= 0 && header[0] <= 64 && header[1] <= 100000,
          "corrupt tensor snapshot header");
  SymmetricTensor t(static_cast<int>(header[0]), static_cast<int>(header[1]));
  in.read(reinterpret_cast<char*>(t.values().data()), static_cast<std::streamsize>(t.values().size() * sizeof(double)));
  if (!in) throw InputError("truncated tensor snapshot");
  return t;
}

void write_tensor_file(const std::string& path, const SymmetricTensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write tensor file " + path);
  write_tensor(out, t);
}

SymmetricTensor read_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open tensor file " + path);
  return read_tensor(in);
}

}  // namespace tcm
