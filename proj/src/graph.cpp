#include "voxplan/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace voxplan {

Precision parse_precision(const std::string& name) {
  if (name == "single" || name == "f32" || name == "float32") return Precision::f32;
  if (name == "double" || name == "f64" || name == "float64") return Precision::f64;
  throw std::invalid_argument("unknown precision '" + name + "' (expected 'single' or 'double')");
}

const char* kind_name(const NodeKind& kind) {
  struct Namer {
    const char* operator()(const op::Input&) const { return "input"; }
    const char* operator()(const op::Conv3d&) const { return "conv3d"; }
    const char* operator()(const op::ReLU&) const { return "relu"; }
    const char* operator()(const op::Sigmoid&) const { return "sigmoid"; }
    const char* operator()(const op::MaxPool3d&) const { return "maxpool3d"; }
    const char* operator()(const op::Upsample3d&) const { return "upsample3d"; }
    const char* operator()(const op::Concat&) const { return "concat"; }
  };
  return std::visit(Namer{}, kind);
}

NodeId Graph::add_input(const TensorShape& shape) {
  if (input_id_ >= 0) throw std::invalid_argument("graph already has an input node");
  if (!nodes_.empty()) throw std::invalid_argument("input node must be the first node");
  shape.require_valid();
  Node n;
  n.id = 0;
  n.kind = op::Input{};
  n.out_shape = shape;
  nodes_.push_back(std::move(n));
  input_id_ = 0;
  return 0;
}

NodeId Graph::add(NodeKind kind, std::vector<NodeId> inputs) {
  if (std::holds_alternative<op::Input>(kind)) {
    throw std::invalid_argument("use add_input for the input node");
  }
  if (nodes_.empty()) throw std::invalid_argument("graph needs an input node first");
  const NodeId id = static_cast<NodeId>(nodes_.size());
  std::vector<TensorShape> in_shapes;
  in_shapes.reserve(inputs.size());
  for (NodeId in : inputs) {
    if (in < 0 || in >= id) {
      throw std::invalid_argument("node " + std::to_string(id) + " references invalid input id " +
                                  std::to_string(in));
    }
    in_shapes.push_back(nodes_[static_cast<std::size_t>(in)].out_shape);
  }
  Node n;
  n.id = id;
  n.kind = std::move(kind);
  n.inputs = std::move(inputs);
  n.out_shape = infer_node_shape(n.kind, in_shapes);
  nodes_.push_back(std::move(n));
  return id;
}

const Node& Graph::node(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
    throw std::out_of_range("no node with id " + std::to_string(id));
  }
  return nodes_[static_cast<std::size_t>(id)];
}

std::vector<NodeId> Graph::consumers(NodeId id) const {
  std::vector<NodeId> out;
  for (const Node& n : nodes_) {
    if (std::find(n.inputs.begin(), n.inputs.end(), id) != n.inputs.end()) out.push_back(n.id);
  }
  return out;
}

TensorShape infer_node_shape(const NodeKind& kind, const std::vector<TensorShape>& in_shapes) {
  auto arity = [&](std::size_t want, const char* name) {
    if (in_shapes.size() != want) {
      throw std::invalid_argument(std::string(name) + " expects " + std::to_string(want) +
                                  " input(s), got " + std::to_string(in_shapes.size()));
    }
  };

  if (std::holds_alternative<op::Input>(kind)) {
    throw std::invalid_argument("input nodes have no inferable shape");
  }
  if (const auto* conv = std::get_if<op::Conv3d>(&kind)) {
    arity(1, "conv3d");
    if (conv->kernel < 1 || conv->kernel % 2 == 0) {
      throw std::invalid_argument("conv3d kernel size must be odd and positive, got " +
                                  std::to_string(conv->kernel));
    }
    if (conv->out_channels < 1) throw std::invalid_argument("conv3d out_channels must be >= 1");
    TensorShape s = in_shapes[0];
    s.c = conv->out_channels;  // same padding, stride 1 preserves d, h, w
    return s;
  }
  if (std::holds_alternative<op::ReLU>(kind) || std::holds_alternative<op::Sigmoid>(kind)) {
    arity(1, "elementwise op");
    return in_shapes[0];
  }
  if (std::holds_alternative<op::MaxPool3d>(kind)) {
    arity(1, "maxpool3d");
    const TensorShape& s = in_shapes[0];
    if (s.d % 2 != 0 || s.h % 2 != 0 || s.w % 2 != 0) {
      throw std::invalid_argument("maxpool3d requires even spatial dims, got " + s.to_string());
    }
    return TensorShape{s.n, s.c, s.d / 2, s.h / 2, s.w / 2};
  }
  if (std::holds_alternative<op::Upsample3d>(kind)) {
    arity(1, "upsample3d");
    const TensorShape& s = in_shapes[0];
    return TensorShape{s.n, s.c, s.d * 2, s.h * 2, s.w * 2};
  }
  if (std::holds_alternative<op::Concat>(kind)) {
    if (in_shapes.size() < 2) throw std::invalid_argument("concat expects at least 2 inputs");
    TensorShape s = in_shapes[0];
    for (std::size_t i = 1; i < in_shapes.size(); ++i) {
      const TensorShape& t = in_shapes[i];
      if (t.n != s.n || t.d != s.d || t.h != s.h || t.w != s.w) {
        throw std::invalid_argument("concat inputs disagree on (n,d,h,w): " + s.to_string() +
                                    " vs " + t.to_string());
      }
      s.c += t.c;
    }
    return s;
  }
  throw std::logic_error("unhandled node kind");
}

Graph infer_shapes(const Graph& graph, const TensorShape& input_shape) {
  input_shape.require_valid();
  Graph out;
  for (const Node& n : graph.nodes()) {
    if (std::holds_alternative<op::Input>(n.kind)) {
      out.add_input(input_shape);
    } else {
      out.add(n.kind, n.inputs);
    }
  }
  return out;
}

std::vector<NodeId> topo_order(const Graph& graph) {
  std::vector<NodeId> order(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) order[i] = static_cast<NodeId>(i);
  return order;
}

std::int64_t node_param_count(const Graph& graph, NodeId id) {
  const Node& n = graph.node(id);
  const auto* conv = std::get_if<op::Conv3d>(&n.kind);
  if (conv == nullptr) return 0;
  const std::int64_t c_in = graph.node(n.inputs[0]).out_shape.c;
  const std::int64_t k = conv->kernel;
  return k * k * k * c_in * conv->out_channels + conv->out_channels;
}

std::int64_t param_count(const Graph& graph) {
  std::int64_t total = 0;
  for (const Node& n : graph.nodes()) total += node_param_count(graph, n.id);
  return total;
}

void validate(const Graph& graph) {
  if (graph.empty()) throw std::invalid_argument("graph is empty");
  if (graph.input_id() != 0) throw std::invalid_argument("graph has no input node");
  std::size_t input_count = 0;
  std::vector<int> consumer_count(graph.size(), 0);
  for (const Node& n : graph.nodes()) {
    if (std::holds_alternative<op::Input>(n.kind)) {
      ++input_count;
      if (!n.inputs.empty()) throw std::invalid_argument("input node must not have inputs");
    } else if (n.inputs.empty()) {
      throw std::invalid_argument("node " + std::to_string(n.id) + " has no inputs");
    }
    for (NodeId in : n.inputs) {
      if (in >= n.id) {
        throw std::invalid_argument("node " + std::to_string(n.id) +
                                    " must reference strictly smaller ids");
      }
      ++consumer_count[static_cast<std::size_t>(in)];
    }
  }
  if (input_count != 1) throw std::invalid_argument("graph must have exactly one input node");
  for (const Node& n : graph.nodes()) {
    if (n.id != graph.output_id() && consumer_count[static_cast<std::size_t>(n.id)] == 0) {
      throw std::invalid_argument("node " + std::to_string(n.id) +
                                  " is dangling (not reachable from the output)");
    }
  }
}

}  // namespace voxplan
