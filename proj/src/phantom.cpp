#include "voxplan/phantom.hpp"

#include <algorithm>
#include <stdexcept>

#include "voxplan/rng.hpp"

namespace voxplan {

void PhantomSpec::validate() const {
  if (d < 1 || h < 1 || w < 1) throw std::invalid_argument("phantom dims must be >= 1");
  if (min_ellipsoids < 0 || max_ellipsoids < min_ellipsoids) {
    throw std::invalid_argument("phantom ellipsoid count range is empty");
  }
  if (!(min_radius > 0) || max_radius < min_radius) {
    throw std::invalid_argument("phantom radius range is empty or non-positive");
  }
  if (max_intensity < min_intensity) throw std::invalid_argument("phantom intensity range is empty");
  if (noise_stddev < 0) throw std::invalid_argument("phantom noise stddev must be >= 0");
  const double min_dim = static_cast<double>(std::min({d, h, w}));
  if (max_ellipsoids > 0 && 2.0 * max_radius > min_dim - 1.0) {
    throw std::invalid_argument("impossible geometry: max_radius " + std::to_string(max_radius) +
                                " does not fit inside dims " + std::to_string(d) + "x" +
                                std::to_string(h) + "x" + std::to_string(w));
  }
}

template <typename T>
Sample<T> generate_phantom(const PhantomSpec& spec, std::vector<Ellipsoid>* shapes_out) {
  spec.validate();
  DetRng rng(spec.seed);
  Sample<T> sample;
  sample.image = Volume<T>(spec.d, spec.h, spec.w);
  sample.mask = Volume<T>(spec.d, spec.h, spec.w);

  for (std::size_t i = 0; i < sample.image.data.size(); ++i) {
    sample.image.data[i] = static_cast<T>(spec.noise_stddev * rng.normal());
  }

  const std::int64_t count = rng.uniform_int(spec.min_ellipsoids, spec.max_ellipsoids);
  std::vector<Ellipsoid> shapes;
  shapes.reserve(static_cast<std::size_t>(count));
  for (std::int64_t e = 0; e < count; ++e) {
    Ellipsoid el;
    el.rz = rng.uniform(spec.min_radius, spec.max_radius);
    el.ry = rng.uniform(spec.min_radius, spec.max_radius);
    el.rx = rng.uniform(spec.min_radius, spec.max_radius);
    el.cz = rng.uniform(el.rz, static_cast<double>(spec.d - 1) - el.rz);
    el.cy = rng.uniform(el.ry, static_cast<double>(spec.h - 1) - el.ry);
    el.cx = rng.uniform(el.rx, static_cast<double>(spec.w - 1) - el.rx);
    el.intensity = rng.uniform(spec.min_intensity, spec.max_intensity);
    shapes.push_back(el);
  }

  for (const Ellipsoid& el : shapes) {
    const std::int64_t z0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(el.cz - el.rz));
    const std::int64_t z1 = std::min<std::int64_t>(spec.d - 1, static_cast<std::int64_t>(el.cz + el.rz) + 1);
    const std::int64_t y0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(el.cy - el.ry));
    const std::int64_t y1 = std::min<std::int64_t>(spec.h - 1, static_cast<std::int64_t>(el.cy + el.ry) + 1);
    const std::int64_t x0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(el.cx - el.rx));
    const std::int64_t x1 = std::min<std::int64_t>(spec.w - 1, static_cast<std::int64_t>(el.cx + el.rx) + 1);
    for (std::int64_t z = z0; z <= z1; ++z) {
      for (std::int64_t y = y0; y <= y1; ++y) {
        for (std::int64_t x = x0; x <= x1; ++x) {
          if (!el.contains(z, y, x)) continue;
          const std::size_t i = static_cast<std::size_t>((z * spec.h + y) * spec.w + x);
          sample.image.data[i] += static_cast<T>(el.intensity);
          sample.mask.data[i] = T(1);
        }
      }
    }
  }

  if (shapes_out != nullptr) *shapes_out = std::move(shapes);
  return sample;
}

template Sample<float> generate_phantom<float>(const PhantomSpec&, std::vector<Ellipsoid>*);
template Sample<double> generate_phantom<double>(const PhantomSpec&, std::vector<Ellipsoid>*);

}  // namespace voxplan
