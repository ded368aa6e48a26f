#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "voxplan/shape.hpp"

namespace voxplan {

using NodeId = std::int32_t;

namespace op {

struct Input {};

/// Same padding, stride 1, zero-filled borders; kernel size must be odd.
struct Conv3d {
  int kernel = 3;
  std::int64_t out_channels = 1;
};

struct ReLU {};
struct Sigmoid {};

/// 2x2x2 windows, stride 2; requires even spatial dims.
struct MaxPool3d {};

/// Nearest-neighbor, factor 2.
struct Upsample3d {};

/// Channel-axis concatenation; inputs must agree on n, d, h, w.
struct Concat {};

}  // namespace op

using NodeKind = std::variant<op::Input, op::Conv3d, op::ReLU, op::Sigmoid,
                              op::MaxPool3d, op::Upsample3d, op::Concat>;

const char* kind_name(const NodeKind& kind);

struct Node {
  NodeId id = -1;
  NodeKind kind;
  std::vector<NodeId> inputs;
  TensorShape out_shape;
};

/// DAG of 3D ops. Construction order is topological and is the one canonical
/// schedule; node ids are dense and ascending. Immutable once built (the
/// mutating members are only meaningful while assembling the graph).
class Graph {
 public:
  /// Adds the single input node carrying the batch. Must be the first node.
  NodeId add_input(const TensorShape& shape);

  /// Appends a node; output shape is inferred immediately.
  NodeId add(NodeKind kind, std::vector<NodeId> inputs);

  const Node& node(NodeId id) const;
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  NodeId input_id() const { return input_id_; }
  NodeId output_id() const { return static_cast<NodeId>(nodes_.size()) - 1; }
  const TensorShape& input_shape() const { return node(input_id_).out_shape; }
  const TensorShape& output_shape() const { return node(output_id()).out_shape; }

  /// Ids of nodes that consume `id`'s output, ascending.
  std::vector<NodeId> consumers(NodeId id) const;

 private:
  std::vector<Node> nodes_;
  NodeId input_id_ = -1;
};

/// Output shape of one node given its input shapes. Throws on rule
/// violations (odd dims under pooling, concat mismatch, ...).
TensorShape infer_node_shape(const NodeKind& kind, const std::vector<TensorShape>& in_shapes);

/// Re-derives every node's out_shape from a fresh input shape.
Graph infer_shapes(const Graph& graph, const TensorShape& input_shape);

/// Canonical schedule: ascending ids (construction order).
std::vector<NodeId> topo_order(const Graph& graph);

/// k^3 * c_in * c_out + c_out for conv nodes, 0 otherwise.
std::int64_t node_param_count(const Graph& graph, NodeId id);

std::int64_t param_count(const Graph& graph);

/// Structural checks used by the planner and executor: exactly one input
/// node, inputs reference smaller ids, and every non-output node has at
/// least one consumer.
void validate(const Graph& graph);

}  // namespace voxplan
