#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "voxplan/alloc.hpp"
#include "voxplan/graph.hpp"
#include "voxplan/losses.hpp"
#include "voxplan/memplan.hpp"
#include "voxplan/optim.hpp"
#include "voxplan/tensor.hpp"

namespace voxplan {

/// Resident training state: per-conv weights/biases, their gradient
/// buffers and the optimizer state. params/grads interleave as
/// [w0, b0, w1, b1, ...] following conv_ids (ascending node order).
template <typename T>
struct Model {
  Graph graph;
  std::vector<NodeId> conv_ids;
  std::vector<Tensor<T>> params;
  std::vector<Tensor<T>> grads;
  OptimizerState<T> opt;

  Tensor<T>& weight(std::size_t conv_index) { return params[2 * conv_index]; }
  Tensor<T>& bias(std::size_t conv_index) { return params[2 * conv_index + 1]; }
  const Tensor<T>& weight(std::size_t conv_index) const { return params[2 * conv_index]; }
  const Tensor<T>& bias(std::size_t conv_index) const { return params[2 * conv_index + 1]; }
};

/// He-initialized weights (normal, stddev sqrt(2 / fan_in)), zero biases;
/// deterministic per seed. All buffers route through the tracker.
template <typename T>
Model<T> init_model(const Graph& graph, OptimizerKind optimizer, std::uint64_t seed,
                    MemTracker* tracker = nullptr);

template <typename T>
struct StepResult {
  double loss = 0.0;
  AllocStats stats;
};

/// One training step over the canonical schedule (the same one the planner
/// prices): forward in topo order retaining every activation, loss, backward
/// in reverse order with the planned alloc/free points, then the optimizer
/// update. Throws on a non-finite loss. The returned stats carry the peak
/// since step entry; at return, live bytes are exactly the resident buffers.
///
/// batch/targets may have any batch count n >= 1 but must match the graph's
/// input/output channels and spatial dims. They are read in place; the input
/// activation is a tracked copy of `batch`.
template <typename T>
StepResult<T> run_training_step(Model<T>& model, const Tensor<T>& batch, const Tensor<T>& targets,
                                LossKind loss, const OptimHyper& hyper, MemTracker& tracker);

/// Forward-only pass; intermediate activations are freed as soon as their
/// consumers are done.
template <typename T>
Tensor<T> predict(const Model<T>& model, const Tensor<T>& batch, MemTracker* tracker = nullptr);

/// Parameter checkpoint: magic "VXCK", u16 version, then per conv node
/// (ascending id): u32 node id, raw little-endian weight then bias elements
/// in the model's precision.
template <typename T>
void save_checkpoint(const std::string& path, const Model<T>& model);

template <typename T>
void load_checkpoint(const std::string& path, Model<T>& model);

}  // namespace voxplan
