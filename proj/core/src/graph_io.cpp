#include "pindelay/graph_io.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace pindelay {

using nlohmann::json;

DirectedGraph read_graph_json(std::istream& in, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseFailure, origin + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges"))
    throw Error(ErrorCode::ParseFailure,
                origin + ": expected an object with \"n\" and \"edges\"");
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1)
    throw Error(ErrorCode::ParseFailure, origin + ": \"n\" must be a positive integer");
  const int n = doc["n"].get<int>();
  if (!doc["edges"].is_array())
    throw Error(ErrorCode::ParseFailure, origin + ": \"edges\" must be an array");

  Matrix w = Matrix::Zero(n, n);
  size_t pos = 0;
  for (const auto& e : doc["edges"]) {
    const std::string where = origin + ": edge " + std::to_string(pos);
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !e[2].is_number())
      throw Error(ErrorCode::ParseFailure,
                  where + " must be [to:int, from:int, weight:number]");
    const int to = e[0].get<int>();
    const int from = e[1].get<int>();
    const double weight = e[2].get<double>();
    if (to < 0 || to >= n || from < 0 || from >= n)
      throw Error(ErrorCode::ParseFailure,
                  where + ": node index out of range [0, " + std::to_string(n) + ")");
    if (to == from)
      throw Error(ErrorCode::ParseFailure, where + ": self-loops are not allowed");
    if (!(weight > 0.0) || !std::isfinite(weight))
      throw Error(ErrorCode::ParseFailure, where + ": weight must be finite and > 0");
    if (w(to, from) != 0.0)
      throw Error(ErrorCode::ParseFailure,
                  where + ": duplicate of link (" + std::to_string(to) + ", " +
                      std::to_string(from) + ")");
    w(to, from) = weight;
    ++pos;
  }
  return DirectedGraph(std::move(w));
}

DirectedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ParseFailure, path + ": cannot open for reading");
  return read_graph_json(in, path);
}

void write_graph_json(const DirectedGraph& g, std::ostream& out) {
  json edges = json::array();
  const Matrix& w = g.weights();
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j)
      if (w(i, j) > 0.0) edges.push_back(json::array({i, j, w(i, j)}));
  json doc;
  doc["n"] = g.size();
  doc["edges"] = std::move(edges);
  out << doc.dump(2) << "\n";
}

void save_graph(const DirectedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::ParseFailure, path + ": cannot open for writing");
  write_graph_json(g, out);
}

}  // namespace pindelay
