// SPDX-License-Identifier: MIT
// File formats: graph JSON and the binary symmetric tensor snapshot.
#pragma once

#include <iosfwd>
#include <string>

#include "tcm/graph.hpp"
#include "tcm/tensor.hpp"

namespace tcm {

// {"p":P,"d":D,"edges":[[u,v],...]} with loops as [i,i]; optional "open":v.
std::string graph_to_json(const Multigraph& g);
Multigraph graph_from_json(const std::string& text);
Multigraph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const Multigraph& g);

// 8-byte magic "TCMSYM01", int64 p, int64 n, then float64 little-endian
// values in multiset order.
void write_tensor(std::ostream& out, const SymmetricTensor& t);
SymmetricTensor read_tensor(std::istream& in);
void write_tensor_file(const std::string& path, const SymmetricTensor& t);
SymmetricTensor read_tensor_file(const std::string& path);

}  // namespace tcm
