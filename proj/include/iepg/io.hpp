#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "iepg/blocksolver.hpp"
#include "iepg/graph.hpp"
#include "iepg/ssp.hpp"
#include "iepg/symmat.hpp"

namespace iepg::io {

using nlohmann::json;

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [i, j] : g.edges()) edges.push_back(json::array({i, j}));
  return json{{"n", g.order()}, {"edges", edges}};
}

inline Graph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
    throw std::invalid_argument("graph: missing or non-integer field 'n'");
  if (!j.contains("edges") || !j["edges"].is_array())
    throw std::invalid_argument("graph: missing or non-array field 'edges'");
  const int n = j["n"].get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
      throw std::invalid_argument("graph: field 'edges' must hold [i, j] pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return Graph(n, std::move(edges));
}

/// Compact one-line form: "n; i-j,i-j,...". An edgeless graph is just "n;".
inline std::string graph_to_text(const Graph& g) {
  std::ostringstream out;
  out << g.order() << ";";
  bool first = true;
  for (const auto& [i, j] : g.edges()) {
    out << (first ? " " : ",") << i << "-" << j;
    first = false;
  }
  return out.str();
}

inline Graph graph_from_text(const std::string& text) {
  const auto semi = text.find(';');
  if (semi == std::string::npos)
    throw std::invalid_argument("graph text: expected 'n; i-j,...' with a ';'");
  int n = 0;
  {
    std::istringstream head(text.substr(0, semi));
    if (!(head >> n)) throw std::invalid_argument("graph text: order before ';' must be an integer");
    std::string leftover;
    if (head >> leftover) throw std::invalid_argument("graph text: junk before ';'");
  }
  std::vector<std::pair<int, int>> edges;
  std::string rest = text.substr(semi + 1);
  std::istringstream body(rest);
  std::string item;
  while (std::getline(body, item, ',')) {
    const auto stripped_begin = item.find_first_not_of(" \t\r\n");
    if (stripped_begin == std::string::npos) {
      if (edges.empty() && body.peek() == EOF) break;  // bare "n;"
      throw std::invalid_argument("graph text: empty edge entry");
    }
    int i = 0, k = 0;
    char dash = 0;
    std::istringstream es(item);
    if (!(es >> i >> dash >> k) || dash != '-')
      throw std::invalid_argument("graph text: edge entries must look like 'i-j'");
    std::string leftover;
    if (es >> leftover) throw std::invalid_argument("graph text: junk in edge entry");
    edges.emplace_back(i, k);
  }
  return Graph(n, std::move(edges));
}

inline json to_json(const SymMatrix& a) {
  json rows = json::array();
  for (int i = 0; i < a.order(); ++i) {
    json row = json::array();
    for (int j = 0; j < a.order(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"n", a.order()}, {"rows", rows}};
}

/// Parse a dense square matrix and fold it to symmetric storage. Mismatched
/// halves beyond a 1e-12 relative gap are rejected; smaller gaps average.
inline SymMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
    throw std::invalid_argument("matrix: missing or non-integer field 'n'");
  if (!j.contains("rows") || !j["rows"].is_array())
    throw std::invalid_argument("matrix: missing or non-array field 'rows'");
  const int n = j["n"].get<int>();
  if (n < 0) throw std::invalid_argument("matrix: field 'n' must be >= 0");
  const json& rows = j["rows"];
  if (static_cast<int>(rows.size()) != n)
    throw std::invalid_argument("matrix: field 'rows' must hold n rows");
  Matrix full(n, n);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
      throw std::invalid_argument("matrix: each row in 'rows' must hold n numbers");
    for (int k = 0; k < n; ++k) {
      if (!rows[i][k].is_number())
        throw std::invalid_argument("matrix: each row in 'rows' must hold n numbers");
      full(i, k) = rows[i][k].get<double>();
    }
  }
  SymMatrix a(n);
  for (int i = 0; i < n; ++i) {
    a.set(i, i, full(i, i));
    for (int k = i + 1; k < n; ++k) {
      const double x = full(i, k), y = full(k, i);
      const double tol = 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
      if (std::abs(x - y) > tol)
        throw std::invalid_argument("matrix: field 'rows' is not symmetric");
      a.set(i, k, 0.5 * (x + y));
    }
  }
  return a;
}

/// Non-finite margins (the vacuous complete-pattern case) serialize as null.
inline json to_json(const SspVerdict& v) {
  json out{{"has_ssp", v.has_ssp},
           {"kernel_dim", v.kernel_dim},
           {"margin", std::isfinite(v.margin) ? json(v.margin) : json(nullptr)},
           {"marginal", v.marginal}};
  out["witness"] = v.witness ? to_json(*v.witness) : json(nullptr);
  return out;
}

inline json to_json(const FeasibilityWitness& w) {
  json refinement = json::array();
  for (const auto& parts : w.refinement) refinement.push_back(parts);
  return json{{"block", w.block}, {"k", w.k}, {"refinement", refinement}};
}

inline json to_json(const RealizationCertificate& cert) {
  json out{{"graph", to_json(cert.graph)},
           {"target_spectrum", cert.target},
           {"matrix", to_json(cert.matrix)},
           {"spectral_deviation", cert.spectral_deviation},
           {"pattern_ok", cert.pattern_ok}};
  out["ssp"] = cert.reduced_ssp ? to_json(*cert.reduced_ssp) : json(nullptr);
  out["witness"] = cert.witness ? to_json(*cert.witness) : json(nullptr);
  out["stages"] = cert.stages;
  return out;
}

/// Canonical dump used by the command line tool: sorted keys (the default
/// object ordering), two-space indent, trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace iepg::io
