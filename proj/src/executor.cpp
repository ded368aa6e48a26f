#include "voxplan/executor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "io_util.hpp"
#include "voxplan/kernels.hpp"
#include "voxplan/rng.hpp"

namespace voxplan {

namespace {

template <typename T>
std::size_t conv_index_of(const Model<T>& model, NodeId id) {
  const auto it = std::lower_bound(model.conv_ids.begin(), model.conv_ids.end(), id);
  if (it == model.conv_ids.end() || *it != id) {
    throw std::logic_error("node " + std::to_string(id) + " is not a conv node of this model");
  }
  return static_cast<std::size_t>(it - model.conv_ids.begin());
}

template <typename T>
void check_feed_shapes(const Graph& graph, const Tensor<T>& batch, const Tensor<T>& targets) {
  const TensorShape& in = graph.input_shape();
  const TensorShape& out = graph.output_shape();
  const TensorShape& b = batch.shape();
  const TensorShape& t = targets.shape();
  if (b.c != in.c || b.d != in.d || b.h != in.h || b.w != in.w) {
    throw std::invalid_argument("batch shape " + b.to_string() + " does not match graph input " +
                                in.to_string() + " on (c,d,h,w)");
  }
  if (t.c != out.c || t.d != out.d || t.h != out.h || t.w != out.w) {
    throw std::invalid_argument("target shape " + t.to_string() + " does not match graph output " +
                                out.to_string() + " on (c,d,h,w)");
  }
  if (b.n != t.n) throw std::invalid_argument("batch and target batch counts differ");
}

}  // namespace

template <typename T>
Model<T> init_model(const Graph& graph, OptimizerKind optimizer, std::uint64_t seed,
                    MemTracker* tracker) {
  validate(graph);
  Model<T> model;
  model.graph = graph;
  DetRng rng(seed);
  for (const Node& n : graph.nodes()) {
    const auto* conv = std::get_if<op::Conv3d>(&n.kind);
    if (conv == nullptr) continue;
    const std::int64_t k = conv->kernel;
    const std::int64_t c_in = graph.node(n.inputs[0]).out_shape.c;
    const std::int64_t c_out = conv->out_channels;
    Tensor<T> weight(TensorShape{k, k, k, c_in, c_out}, tracker);
    const double stddev = std::sqrt(2.0 / static_cast<double>(k * k * k * c_in));
    for (std::uint64_t i = 0; i < weight.elems(); ++i) {
      weight[i] = static_cast<T>(stddev * rng.normal());
    }
    Tensor<T> bias(TensorShape{1, 1, 1, 1, c_out}, tracker);
    model.conv_ids.push_back(n.id);
    model.params.push_back(std::move(weight));
    model.params.push_back(std::move(bias));
  }
  for (const Tensor<T>& p : model.params) model.grads.emplace_back(p.shape(), tracker);
  model.opt = make_optimizer_state<T>(optimizer, model.params, tracker);
  return model;
}

namespace {

template <typename T>
Tensor<T> forward_node(const Model<T>& model, const Node& n, const std::vector<Tensor<T>>& acts,
                       std::vector<Tensor<index_t<T>>>& argmax, MemTracker* tracker) {
  struct Visitor {
    const Model<T>& model;
    const Node& n;
    const std::vector<Tensor<T>>& acts;
    std::vector<Tensor<index_t<T>>>& argmax;
    MemTracker* tracker;

    const Tensor<T>& in(std::size_t i = 0) const {
      return acts[static_cast<std::size_t>(n.inputs[i])];
    }

    Tensor<T> operator()(const op::Input&) { throw std::logic_error("input nodes are not computed"); }
    Tensor<T> operator()(const op::Conv3d&) {
      const std::size_t ci = conv_index_of(model, n.id);
      return kernels::conv3d_forward(in(), model.weight(ci), model.bias(ci), tracker);
    }
    Tensor<T> operator()(const op::ReLU&) { return kernels::relu_forward(in(), tracker); }
    Tensor<T> operator()(const op::Sigmoid&) { return kernels::sigmoid_forward(in(), tracker); }
    Tensor<T> operator()(const op::MaxPool3d&) {
      auto [out, idx] = kernels::maxpool3d_forward(in(), tracker);
      argmax[static_cast<std::size_t>(n.id)] = std::move(idx);
      return std::move(out);
    }
    Tensor<T> operator()(const op::Upsample3d&) { return kernels::upsample3d_forward(in(), tracker); }
    Tensor<T> operator()(const op::Concat&) {
      std::vector<const Tensor<T>*> ins;
      ins.reserve(n.inputs.size());
      for (NodeId id : n.inputs) ins.push_back(&acts[static_cast<std::size_t>(id)]);
      return kernels::concat_forward(ins, tracker);
    }
  };
  return std::visit(Visitor{model, n, acts, argmax, tracker}, n.kind);
}

template <typename T>
void backward_node(Model<T>& model, const Node& n, const std::vector<Tensor<T>>& acts,
                   const std::vector<Tensor<index_t<T>>>& argmax, std::vector<Tensor<T>>& grads) {
  const auto gid = [&](NodeId id) -> Tensor<T>& { return grads[static_cast<std::size_t>(id)]; };
  const auto aid = [&](NodeId id) -> const Tensor<T>& { return acts[static_cast<std::size_t>(id)]; };

  if (const auto* conv = std::get_if<op::Conv3d>(&n.kind)) {
    (void)conv;
    const std::size_t ci = conv_index_of(model, n.id);
    kernels::conv3d_backward_acc(gid(n.id), aid(n.inputs[0]), model.weight(ci), gid(n.inputs[0]),
                                 model.grads[2 * ci], model.grads[2 * ci + 1]);
  } else if (std::holds_alternative<op::ReLU>(n.kind)) {
    kernels::relu_backward_acc(gid(n.id), aid(n.id), gid(n.inputs[0]));
  } else if (std::holds_alternative<op::Sigmoid>(n.kind)) {
    kernels::sigmoid_backward_acc(gid(n.id), aid(n.id), gid(n.inputs[0]));
  } else if (std::holds_alternative<op::MaxPool3d>(n.kind)) {
    kernels::maxpool3d_backward_acc(gid(n.id), argmax[static_cast<std::size_t>(n.id)],
                                    gid(n.inputs[0]));
  } else if (std::holds_alternative<op::Upsample3d>(n.kind)) {
    kernels::upsample3d_backward_acc(gid(n.id), gid(n.inputs[0]));
  } else if (std::holds_alternative<op::Concat>(n.kind)) {
    std::vector<Tensor<T>*> gins;
    gins.reserve(n.inputs.size());
    for (NodeId id : n.inputs) gins.push_back(&gid(id));
    kernels::concat_backward_acc(gid(n.id), gins);
  } else {
    throw std::logic_error("unhandled node kind in backward");
  }
}

}  // namespace

template <typename T>
StepResult<T> run_training_step(Model<T>& model, const Tensor<T>& batch, const Tensor<T>& targets,
                                LossKind loss, const OptimHyper& hyper, MemTracker& tracker) {
  const Graph& graph = model.graph;
  check_feed_shapes(graph, batch, targets);
  const StepSchedule sched = build_step_schedule(graph);
  tracker.rebase_peak();

  for (Tensor<T>& g : model.grads) g.fill(T(0));

  std::vector<Tensor<T>> acts(graph.size());
  std::vector<Tensor<index_t<T>>> argmax(graph.size());
  for (NodeId id : sched.forward) {
    const Node& n = graph.node(id);
    if (std::holds_alternative<op::Input>(n.kind)) {
      acts[static_cast<std::size_t>(id)] = batch.clone(&tracker);
    } else {
      acts[static_cast<std::size_t>(id)] = forward_node(model, n, acts, argmax, &tracker);
    }
  }

  const NodeId out_id = graph.output_id();
  const double loss_value = loss_forward(loss, acts[static_cast<std::size_t>(out_id)], targets);
  if (!std::isfinite(loss_value)) {
    throw std::runtime_error("training step produced a non-finite loss");
  }

  std::vector<Tensor<T>> grads(graph.size());
  for (const StepSchedule::BackwardStep& bstep : sched.backward) {
    for (NodeId id : bstep.grad_allocs) {
      grads[static_cast<std::size_t>(id)] = Tensor<T>(graph.node(id).out_shape, &tracker);
    }
    if (bstep.node == out_id) {
      loss_backward_acc(loss, acts[static_cast<std::size_t>(out_id)], targets,
                        grads[static_cast<std::size_t>(out_id)]);
    }
    backward_node(model, graph.node(bstep.node), acts, argmax, grads);
    for (NodeId id : bstep.act_frees) {
      acts[static_cast<std::size_t>(id)].reset();
      argmax[static_cast<std::size_t>(id)].reset();
    }
    for (NodeId id : bstep.grad_frees) grads[static_cast<std::size_t>(id)].reset();
  }

  apply_update(model.opt, model.params, model.grads, hyper);

  StepResult<T> result;
  result.loss = loss_value;
  result.stats = tracker.stats();
  return result;
}

template <typename T>
Tensor<T> predict(const Model<T>& model, const Tensor<T>& batch, MemTracker* tracker) {
  const Graph& graph = model.graph;
  const TensorShape& in = graph.input_shape();
  const TensorShape& b = batch.shape();
  if (b.c != in.c || b.d != in.d || b.h != in.h || b.w != in.w) {
    throw std::invalid_argument("batch shape " + b.to_string() + " does not match graph input " +
                                in.to_string() + " on (c,d,h,w)");
  }
  std::vector<int> remaining(graph.size(), 0);
  for (const Node& n : graph.nodes()) {
    for (NodeId id : n.inputs) ++remaining[static_cast<std::size_t>(id)];
  }
  std::vector<Tensor<T>> acts(graph.size());
  std::vector<Tensor<index_t<T>>> argmax(graph.size());
  for (const Node& n : graph.nodes()) {
    if (std::holds_alternative<op::Input>(n.kind)) {
      acts[static_cast<std::size_t>(n.id)] = batch;  // shared, not copied
    } else {
      acts[static_cast<std::size_t>(n.id)] = forward_node(model, n, acts, argmax, tracker);
      argmax[static_cast<std::size_t>(n.id)].reset();  // only needed for backward
      for (NodeId id : n.inputs) {
        if (--remaining[static_cast<std::size_t>(id)] == 0 && id != graph.output_id()) {
          acts[static_cast<std::size_t>(id)].reset();
        }
      }
    }
  }
  return std::move(acts[static_cast<std::size_t>(graph.output_id())]);
}

namespace {
constexpr unsigned char kCheckpointMagic[4] = {'V', 'X', 'C', 'K'};
constexpr std::uint16_t kCheckpointVersion = 1;
}  // namespace

template <typename T>
void save_checkpoint(const std::string& path, const Model<T>& model) {
  std::vector<unsigned char> out;
  std::uint64_t payload = 0;
  for (const Tensor<T>& p : model.params) payload += p.elems() * sizeof(T);
  out.reserve(6 + model.conv_ids.size() * 4 + payload);
  out.insert(out.end(), kCheckpointMagic, kCheckpointMagic + 4);
  unsigned char u16[2];
  detail::store_le16(u16, kCheckpointVersion);
  out.insert(out.end(), u16, u16 + 2);
  for (std::size_t ci = 0; ci < model.conv_ids.size(); ++ci) {
    unsigned char u32[4];
    detail::store_le32(u32, static_cast<std::uint32_t>(model.conv_ids[ci]));
    out.insert(out.end(), u32, u32 + 4);
    for (const Tensor<T>* t : {&model.params[2 * ci], &model.params[2 * ci + 1]}) {
      const std::size_t at = out.size();
      out.resize(at + t->elems() * sizeof(T));
      for (std::uint64_t i = 0; i < t->elems(); ++i) {
        detail::store_le_elem(out.data() + at + i * sizeof(T), (*t)[i]);
      }
    }
  }
  detail::write_file(path, out);
}

template <typename T>
void load_checkpoint(const std::string& path, Model<T>& model) {
  const std::vector<unsigned char> in = detail::read_file(path);
  if (in.size() < 6) throw IoError(IoError::Code::truncated, path + ": shorter than a checkpoint header");
  if (std::memcmp(in.data(), kCheckpointMagic, 4) != 0) {
    throw IoError(IoError::Code::bad_magic, path + ": not a VXCK checkpoint");
  }
  if (detail::load_le16(in.data() + 4) != kCheckpointVersion) {
    throw IoError(IoError::Code::bad_version, path + ": unsupported checkpoint version");
  }
  std::size_t at = 6;
  for (std::size_t ci = 0; ci < model.conv_ids.size(); ++ci) {
    if (at + 4 > in.size()) throw IoError(IoError::Code::truncated, path + ": truncated checkpoint");
    const NodeId id = static_cast<NodeId>(detail::load_le32(in.data() + at));
    at += 4;
    if (id != model.conv_ids[ci]) {
      throw IoError(IoError::Code::bad_header,
                    path + ": checkpoint node id " + std::to_string(id) +
                        " does not match graph conv node " + std::to_string(model.conv_ids[ci]));
    }
    for (Tensor<T>* t : {&model.params[2 * ci], &model.params[2 * ci + 1]}) {
      const std::uint64_t bytes = t->elems() * sizeof(T);
      if (at + bytes > in.size()) {
        throw IoError(IoError::Code::truncated, path + ": truncated checkpoint payload");
      }
      for (std::uint64_t i = 0; i < t->elems(); ++i) {
        (*t)[i] = detail::load_le_elem<T>(in.data() + at + i * sizeof(T));
      }
      at += bytes;
    }
  }
  if (at != in.size()) {
    throw IoError(IoError::Code::length_mismatch, path + ": trailing bytes after checkpoint payload");
  }
}

#define VOXPLAN_INSTANTIATE(T)                                                                    \
  template Model<T> init_model<T>(const Graph&, OptimizerKind, std::uint64_t, MemTracker*);       \
  template StepResult<T> run_training_step<T>(Model<T>&, const Tensor<T>&, const Tensor<T>&,      \
                                              LossKind, const OptimHyper&, MemTracker&);          \
  template Tensor<T> predict<T>(const Model<T>&, const Tensor<T>&, MemTracker*);                  \
  template void save_checkpoint<T>(const std::string&, const Model<T>&);                          \
  template void load_checkpoint<T>(const std::string&, Model<T>&);

VOXPLAN_INSTANTIATE(float)
VOXPLAN_INSTANTIATE(double)

#undef VOXPLAN_INSTANTIATE

}  // namespace voxplan
