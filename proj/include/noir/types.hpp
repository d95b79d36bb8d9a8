#pragma once

#include <compare>

#include <Eigen/Dense>

namespace noir {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// 1-based road-element index. Classification (inlet/outlet/interior) is a
/// pure function of the index given the graph's partition bounds.
using NodeId = int;

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  auto operator<=>(const Edge&) const = default;
};

}  // namespace noir
