#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "voxplan/graph.hpp"
#include "voxplan/shape.hpp"
#include "voxplan/unet.hpp"

namespace voxplan {

enum class OptimizerKind { sgd, sgd_momentum, adam };

OptimizerKind parse_optimizer(const std::string& name);
const char* optimizer_name(OptimizerKind kind);

/// Bytes of per-parameter optimizer state, as a multiple of param_bytes.
inline int optimizer_state_multiplier(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::sgd: return 0;
    case OptimizerKind::sgd_momentum: return 1;
    case OptimizerKind::adam: return 2;
  }
  return 0;
}

/// n*c*d*h*w*byte_width with checked arithmetic.
std::uint64_t tensor_bytes(const TensorShape& shape, Precision precision);

enum class BufClass { activation, gradient, parameter, optimizer_state };
enum class BufSlot { output, aux, param };

const char* buf_class_name(BufClass cls);

struct TensorTag {
  NodeId node_id = -1;
  BufClass cls = BufClass::activation;
  BufSlot slot = BufSlot::output;
  bool operator==(const TensorTag&) const = default;
};

enum class MemAction { alloc, release };

struct MemEvent {
  std::int32_t step_index = 0;
  MemAction action = MemAction::alloc;
  TensorTag tag;
  std::uint64_t bytes = 0;
};

/// Ordered alloc/free schedule for one training step plus the peak of its
/// running live-byte sum (resident buffers included). Buffers never freed
/// within the step (parameters, gradients, optimizer state) simply survive
/// to the end of the event list.
struct LivenessTimeline {
  std::vector<MemEvent> events;
  std::uint64_t peak_bytes = 0;
  std::int32_t peak_step_index = 0;
};

struct MemReport {
  std::uint64_t param_bytes = 0;
  std::uint64_t grad_bytes = 0;
  std::uint64_t optimizer_state_bytes = 0;
  std::uint64_t activation_peak_bytes = 0;
  std::uint64_t grand_peak_bytes = 0;
  std::map<NodeId, std::uint64_t> per_node_bytes;
};

/// Canonical one-step schedule shared by the planner and the executor.
///
/// Forward visits nodes in topo order, allocating each output activation
/// (max-pool also allocates its index buffer). Backward visits non-input
/// nodes in reverse topo order; at each step the gradient buffers first
/// written there are allocated (the output node's loss-gradient seed, then
/// the step's input gradients), and buffers whose last use is that step are
/// freed afterwards. A node's own activation and output gradient die at its
/// own backward step; an input node's buffers die at the backward step of
/// its smallest-id consumer (the last one executed).
struct StepSchedule {
  struct BackwardStep {
    NodeId node = -1;
    std::vector<NodeId> grad_allocs;
    std::vector<NodeId> act_frees;   // includes the aux buffer of max-pool nodes
    std::vector<NodeId> grad_frees;
  };
  std::vector<NodeId> forward;
  std::vector<BackwardStep> backward;
};

StepSchedule build_step_schedule(const Graph& graph);

/// Byte-exact plan of one training step (forward + backward + update).
/// Every node output is retained for backward; no recomputation.
std::pair<MemReport, LivenessTimeline> plan_training_memory(const Graph& graph,
                                                            Precision precision,
                                                            OptimizerKind optimizer);

struct TimeEstimate {
  std::int64_t steps_per_epoch = 0;
  std::int64_t total_steps = 0;
  double seconds_per_epoch = 0.0;
  double seconds_total = 0.0;
};

TimeEstimate estimate_completion_time(std::int64_t num_train_samples, std::int64_t batch,
                                      std::int64_t epochs, double seconds_per_image);

enum class SweepAxis { batch, spatial, filters };

SweepAxis parse_sweep_axis(const std::string& name);
const char* sweep_axis_name(SweepAxis axis);

struct SweepRow {
  std::int64_t axis_value = 0;
  std::uint64_t param_bytes = 0;
  std::uint64_t activation_peak_bytes = 0;
  std::uint64_t grand_peak_bytes = 0;
};

/// Applies each value to the template spec along one axis and plans it.
/// Rows are returned in the given order. The spatial axis sets d = h = w.
std::vector<SweepRow> sweep(const UNetSpec& spec_template, SweepAxis axis,
                            const std::vector<std::int64_t>& values,
                            OptimizerKind optimizer);

/// Clones the spec with one axis value applied (shared with the CLI so
/// sweep-point validation can name the failing value).
UNetSpec apply_sweep_value(const UNetSpec& spec_template, SweepAxis axis, std::int64_t value);

}  // namespace voxplan
