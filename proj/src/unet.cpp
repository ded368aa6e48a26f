#include "voxplan/unet.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace voxplan {

void UNetSpec::validate() const {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1, got " + std::to_string(depth));
  if (base_filters < 1) throw std::invalid_argument("base_filters must be >= 1");
  if (in_channels < 1) throw std::invalid_argument("in_channels must be >= 1");
  if (num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
  if (batch < 1) throw std::invalid_argument("batch must be >= 1");
  if (depth > 30) throw std::invalid_argument("depth too large");
  const std::int64_t div = std::int64_t{1} << depth;
  auto check_dim = [&](std::int64_t v, const char* name) {
    if (v < 1) throw std::invalid_argument(std::string("dim ") + name + " must be >= 1");
    if (v % div != 0) {
      throw std::invalid_argument("dim " + std::string(name) + "=" + std::to_string(v) +
                                  " is not divisible by 2^depth = " + std::to_string(div));
    }
  };
  check_dim(d, "d");
  check_dim(h, "h");
  check_dim(w, "w");
}

Graph build_unet(const UNetSpec& spec) {
  spec.validate();
  Graph g;
  NodeId cur = g.add_input(spec.input_shape());

  auto conv_block = [&](NodeId in, std::int64_t filters) {
    NodeId c1 = g.add(op::Conv3d{3, filters}, {in});
    NodeId r1 = g.add(op::ReLU{}, {c1});
    NodeId c2 = g.add(op::Conv3d{3, filters}, {r1});
    return g.add(op::ReLU{}, {c2});
  };

  // encoder; skips[i] holds the level-i output feeding the decoder
  std::vector<NodeId> skips;
  cur = conv_block(cur, spec.base_filters);
  skips.push_back(cur);
  for (int level = 1; level <= spec.depth; ++level) {
    cur = g.add(op::MaxPool3d{}, {cur});
    cur = conv_block(cur, spec.base_filters << level);
    skips.push_back(cur);
  }

  for (int level = spec.depth - 1; level >= 0; --level) {
    cur = g.add(op::Upsample3d{}, {cur});
    cur = g.add(op::Concat{}, {cur, skips[static_cast<std::size_t>(level)]});
    cur = conv_block(cur, spec.base_filters << level);
  }

  cur = g.add(op::Conv3d{1, spec.num_classes}, {cur});
  g.add(op::Sigmoid{}, {cur});
  validate(g);
  return g;
}

}  // namespace voxplan
