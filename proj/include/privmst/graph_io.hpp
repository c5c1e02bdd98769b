// Text formats: edge lists (`u v w`), partitions (`node label`), and 2-D
// coordinates (`node x y`). `#` starts a comment line. Weights round-trip
// exactly (17 significant digits).
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "privmst/graph.hpp"

namespace privmst {

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Loads and validates: simple, undirected, connected.
WeightedGraph load_weighted_graph(const std::string& path, double mu = 0.1);
void save_weighted_graph(const std::string& path, const WeightedGraph& g);

NodePartition load_partition(const std::string& path, int expected_nodes);
void save_partition(const std::string& path, const NodePartition& p);

std::vector<std::array<double, 2>> load_coordinates(const std::string& path);
void save_coordinates(const std::string& path,
                      const std::vector<std::array<double, 2>>& positions);

// 17-significant-digit rendering used by every writer (exact round trip).
std::string format_weight(double w);

}  // namespace privmst
