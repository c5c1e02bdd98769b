#include "privmst/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace privmst {

namespace {

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

WeightedGraph load_weighted_graph(const std::string& path, double mu) {
  std::ifstream in = open_for_read(path);
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<double> weights;
  int max_node = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream fields(line);
    long long u, v;
    double w;
    if (!(fields >> u >> v >> w))
      throw io_error(path + ":" + std::to_string(line_no) + ": expected `u v w`");
    if (u < 0 || v < 0)
      throw io_error(path + ":" + std::to_string(line_no) + ": negative node id");
    pairs.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    weights.push_back(w);
    max_node = std::max(max_node, static_cast<int>(std::max(u, v)));
  }
  if (pairs.empty()) throw io_error(path + ": no edges");
  std::shared_ptr<const GraphTopology> topo;
  try {
    topo = std::make_shared<GraphTopology>(max_node + 1, std::move(pairs));
  } catch (const std::invalid_argument& e) {
    throw io_error(path + ": " + e.what());
  }
  if (!topo->is_connected()) throw io_error(path + ": graph is not connected");
  return WeightedGraph{topo, WeightFunction{std::move(weights), mu}};
}

void save_weighted_graph(const std::string& path, const WeightedGraph& g) {
  std::ofstream out = open_for_write(path);
  out << "# privmst edge list v1: u v w\n";
  for (EdgeId e = 0; e < g.topology->edge_count(); ++e) {
    const auto& [u, v] = g.topology->edge(e);
    out << u << ' ' << v << ' ' << format_weight(g.weight(e)) << '\n';
  }
  if (!out) throw io_error("write failed: " + path);
}

NodePartition load_partition(const std::string& path, int expected_nodes) {
  std::ifstream in = open_for_read(path);
  std::vector<int> labels(expected_nodes, 0);
  std::vector<char> assigned(expected_nodes, 0);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream fields(line);
    long long node, label;
    if (!(fields >> node >> label))
      throw io_error(path + ":" + std::to_string(line_no) + ": expected `node label`");
    if (node < 0 || node >= expected_nodes)
      throw io_error(path + ":" + std::to_string(line_no) + ": node id out of range");
    if (assigned[node])
      throw io_error(path + ":" + std::to_string(line_no) + ": node assigned twice");
    assigned[node] = 1;
    labels[node] = static_cast<int>(label);
  }
  for (int v = 0; v < expected_nodes; ++v)
    if (!assigned[v]) throw io_error(path + ": node " + std::to_string(v) + " unassigned");
  try {
    return NodePartition(std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw io_error(path + ": " + e.what());
  }
}

void save_partition(const std::string& path, const NodePartition& p) {
  std::ofstream out = open_for_write(path);
  out << "# privmst partition v1: node label\n";
  for (NodeId v = 0; v < p.node_count(); ++v)
    out << v << ' ' << p.label_of(v) << '\n';
  if (!out) throw io_error("write failed: " + path);
}

std::vector<std::array<double, 2>> load_coordinates(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::vector<std::array<double, 2>> positions;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream fields(line);
    long long node;
    double x, y;
    if (!(fields >> node >> x >> y))
      throw io_error(path + ":" + std::to_string(line_no) + ": expected `node x y`");
    if (node != static_cast<long long>(positions.size()))
      throw io_error(path + ":" + std::to_string(line_no) + ": nodes must be 0,1,2,...");
    positions.push_back({x, y});
  }
  return positions;
}

void save_coordinates(const std::string& path,
                      const std::vector<std::array<double, 2>>& positions) {
  std::ofstream out = open_for_write(path);
  out << "# privmst coordinates v1: node x y\n";
  for (std::size_t v = 0; v < positions.size(); ++v)
    out << v << ' ' << format_weight(positions[v][0]) << ' '
        << format_weight(positions[v][1]) << '\n';
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace privmst
