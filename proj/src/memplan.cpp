#include "voxplan/memplan.hpp"

#include <algorithm>
#include <stdexcept>

namespace voxplan {

OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "sgd") return OptimizerKind::sgd;
  if (name == "sgd_momentum" || name == "momentum") return OptimizerKind::sgd_momentum;
  if (name == "adam") return OptimizerKind::adam;
  throw std::invalid_argument("unknown optimizer '" + name + "' (expected sgd, sgd_momentum or adam)");
}

const char* optimizer_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::sgd_momentum: return "sgd_momentum";
    case OptimizerKind::adam: return "adam";
  }
  return "?";
}

const char* buf_class_name(BufClass cls) {
  switch (cls) {
    case BufClass::activation: return "activation";
    case BufClass::gradient: return "gradient";
    case BufClass::parameter: return "parameter";
    case BufClass::optimizer_state: return "optimizer_state";
  }
  return "?";
}

std::uint64_t tensor_bytes(const TensorShape& shape, Precision precision) {
  const std::uint64_t elems = shape.elem_count();
  return checked_mul(elems, static_cast<std::uint64_t>(byte_width(precision)),
                     ("bytes of " + shape.to_string()).c_str());
}

StepSchedule build_step_schedule(const Graph& graph) {
  validate(graph);
  StepSchedule sched;
  sched.forward = topo_order(graph);

  const std::size_t count = graph.size();
  std::vector<bool> grad_assigned(count, false);
  std::vector<bool> is_input(count, false);
  for (const Node& n : graph.nodes()) {
    is_input[static_cast<std::size_t>(n.id)] = std::holds_alternative<op::Input>(n.kind);
  }

  for (auto it = sched.forward.rbegin(); it != sched.forward.rend(); ++it) {
    const NodeId id = *it;
    if (is_input[static_cast<std::size_t>(id)]) continue;
    StepSchedule::BackwardStep step;
    step.node = id;
    if (id == graph.output_id()) {
      step.grad_allocs.push_back(id);  // loss-gradient seed
      grad_assigned[static_cast<std::size_t>(id)] = true;
    }
    for (NodeId in : graph.node(id).inputs) {
      if (!grad_assigned[static_cast<std::size_t>(in)]) {
        step.grad_allocs.push_back(in);
        grad_assigned[static_cast<std::size_t>(in)] = true;
      }
    }
    step.act_frees.push_back(id);
    step.grad_frees.push_back(id);
    sched.backward.push_back(std::move(step));
  }

  // An input node's activation and gradient die after the backward step of
  // its smallest-id consumer, which is the last one executed.
  for (const Node& n : graph.nodes()) {
    if (!is_input[static_cast<std::size_t>(n.id)]) continue;
    const std::vector<NodeId> users = graph.consumers(n.id);
    if (users.empty()) continue;  // survives the step (input-only graph)
    const NodeId last_step = *std::min_element(users.begin(), users.end());
    for (auto& step : sched.backward) {
      if (step.node == last_step) {
        step.act_frees.push_back(n.id);
        if (grad_assigned[static_cast<std::size_t>(n.id)]) step.grad_frees.push_back(n.id);
        break;
      }
    }
  }
  return sched;
}

namespace {

bool is_resident(const TensorTag& tag) { return tag.slot == BufSlot::param; }

std::uint64_t aux_bytes(const Graph& graph, NodeId id, Precision precision) {
  if (!std::holds_alternative<op::MaxPool3d>(graph.node(id).kind)) return 0;
  // max-pool keeps one argmax index per output element, at element width
  // (4 bytes in single precision) so byte figures scale exactly with
  // precision
  return checked_mul(graph.node(id).out_shape.elem_count(),
                     static_cast<std::uint64_t>(byte_width(precision)), "argmax bytes");
}

}  // namespace

std::pair<MemReport, LivenessTimeline> plan_training_memory(const Graph& graph,
                                                            Precision precision,
                                                            OptimizerKind optimizer) {
  const StepSchedule sched = build_step_schedule(graph);
  const int bw = byte_width(precision);
  const int opt_mult = optimizer_state_multiplier(optimizer);

  MemReport report;
  LivenessTimeline timeline;
  auto push = [&](std::int32_t step, MemAction action, TensorTag tag, std::uint64_t bytes) {
    timeline.events.push_back(MemEvent{step, action, tag, bytes});
  };

  // step 0: resident buffers (parameters, parameter gradients, optimizer
  // state), live for the whole step
  for (const Node& n : graph.nodes()) {
    const std::uint64_t pbytes =
        checked_mul(static_cast<std::uint64_t>(node_param_count(graph, n.id)),
                    static_cast<std::uint64_t>(bw), "param bytes");
    if (pbytes == 0) continue;
    report.param_bytes += pbytes;
    push(0, MemAction::alloc, TensorTag{n.id, BufClass::parameter, BufSlot::param}, pbytes);
    push(0, MemAction::alloc, TensorTag{n.id, BufClass::gradient, BufSlot::param}, pbytes);
    if (opt_mult > 0) {
      push(0, MemAction::alloc, TensorTag{n.id, BufClass::optimizer_state, BufSlot::param},
           checked_mul(pbytes, static_cast<std::uint64_t>(opt_mult), "optimizer bytes"));
    }
  }
  report.grad_bytes = report.param_bytes;
  report.optimizer_state_bytes = report.param_bytes * static_cast<std::uint64_t>(opt_mult);

  std::int32_t step_index = 1;
  for (NodeId id : sched.forward) {
    const std::uint64_t act = tensor_bytes(graph.node(id).out_shape, precision);
    const std::uint64_t aux = aux_bytes(graph, id, precision);
    push(step_index, MemAction::alloc, TensorTag{id, BufClass::activation, BufSlot::output}, act);
    if (aux > 0) {
      push(step_index, MemAction::alloc, TensorTag{id, BufClass::activation, BufSlot::aux}, aux);
    }
    report.per_node_bytes[id] = act + aux;
    ++step_index;
  }

  for (const auto& bstep : sched.backward) {
    for (NodeId id : bstep.grad_allocs) {
      push(step_index, MemAction::alloc, TensorTag{id, BufClass::gradient, BufSlot::output},
           tensor_bytes(graph.node(id).out_shape, precision));
    }
    for (NodeId id : bstep.act_frees) {
      push(step_index, MemAction::release, TensorTag{id, BufClass::activation, BufSlot::output},
           tensor_bytes(graph.node(id).out_shape, precision));
      const std::uint64_t aux = aux_bytes(graph, id, precision);
      if (aux > 0) {
        push(step_index, MemAction::release, TensorTag{id, BufClass::activation, BufSlot::aux}, aux);
      }
    }
    for (NodeId id : bstep.grad_frees) {
      push(step_index, MemAction::release, TensorTag{id, BufClass::gradient, BufSlot::output},
           tensor_bytes(graph.node(id).out_shape, precision));
    }
    ++step_index;
  }

  std::uint64_t live = 0;
  std::uint64_t transient_live = 0;
  std::uint64_t transient_peak = 0;
  for (const MemEvent& ev : timeline.events) {
    if (ev.action == MemAction::alloc) {
      live += ev.bytes;
      if (!is_resident(ev.tag)) {
        transient_live += ev.bytes;
        transient_peak = std::max(transient_peak, transient_live);
      }
      if (live > timeline.peak_bytes) {
        timeline.peak_bytes = live;
        timeline.peak_step_index = ev.step_index;
      }
    } else {
      live -= ev.bytes;
      if (!is_resident(ev.tag)) transient_live -= ev.bytes;
    }
  }

  report.activation_peak_bytes = transient_peak;
  report.grand_peak_bytes = timeline.peak_bytes;
  return {report, timeline};
}

TimeEstimate estimate_completion_time(std::int64_t num_train_samples, std::int64_t batch,
                                      std::int64_t epochs, double seconds_per_image) {
  if (batch < 1) throw std::invalid_argument("batch must be >= 1");
  if (num_train_samples < 1) throw std::invalid_argument("num_train_samples must be >= 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(seconds_per_image > 0)) throw std::invalid_argument("seconds_per_image must be > 0");
  TimeEstimate t;
  t.steps_per_epoch = (num_train_samples + batch - 1) / batch;
  t.total_steps = t.steps_per_epoch * epochs;
  t.seconds_per_epoch = static_cast<double>(num_train_samples) * seconds_per_image;
  t.seconds_total = static_cast<double>(epochs) * t.seconds_per_epoch;
  return t;
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "batch") return SweepAxis::batch;
  if (name == "spatial") return SweepAxis::spatial;
  if (name == "filters") return SweepAxis::filters;
  throw std::invalid_argument("unknown sweep axis '" + name + "' (expected batch, spatial or filters)");
}

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::batch: return "batch";
    case SweepAxis::spatial: return "spatial";
    case SweepAxis::filters: return "filters";
  }
  return "?";
}

UNetSpec apply_sweep_value(const UNetSpec& spec_template, SweepAxis axis, std::int64_t value) {
  UNetSpec spec = spec_template;
  switch (axis) {
    case SweepAxis::batch: spec.batch = value; break;
    case SweepAxis::spatial: spec.d = spec.h = spec.w = value; break;
    case SweepAxis::filters: spec.base_filters = value; break;
  }
  return spec;
}

std::vector<SweepRow> sweep(const UNetSpec& spec_template, SweepAxis axis,
                            const std::vector<std::int64_t>& values, OptimizerKind optimizer) {
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (std::int64_t value : values) {
    const UNetSpec spec = apply_sweep_value(spec_template, axis, value);
    const Graph graph = build_unet(spec);
    const auto [report, timeline] = plan_training_memory(graph, spec.precision, optimizer);
    rows.push_back(SweepRow{value, report.param_bytes, report.activation_peak_bytes,
                            report.grand_peak_bytes});
  }
  return rows;
}

}  // namespace voxplan
