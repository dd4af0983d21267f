#pragma once

#include "curvedborn/types.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace curvedborn {

/// Closed rectangular box in parameter space.
struct ParamBox {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  Vec center() const { return 0.5 * (lo + hi); }
  bool contains(const Vec& u, double slack = 0.0) const;
  bool contains(const ParamBox& other, double slack = 1e-12) const;
  bool overlaps(const ParamBox& other) const;
};

void validate(const ParamBox& box);

/// Tensor-product midpoint grid over a box.
struct Grid {
  ParamBox box;
  std::vector<int> shape;

  std::size_t size() const;
  double cell_volume() const;
  std::vector<int> multi_index(std::size_t flat) const;
  Vec node(std::size_t flat) const;
  /// True when the node lies in the outermost layer of cells.
  bool on_boundary(std::size_t flat) const;
};

Grid refined(const Grid& grid);

/// Grid shape for a sub-rectangle of @p box keeping the parent's node density.
std::vector<int> scaled_shape(const ParamBox& box, const std::vector<int>& shape, const ParamBox& sub);

struct IntegralResult {
  double value = 0.0;
  /// Richardson estimate of the discretisation error of `value`.
  double error_estimate = 0.0;
  /// Estimated mass lost by cutting an unbounded surface to its box (0 when compact).
  double truncation_estimate = 0.0;
  std::size_t nodes = 0;

  double error_budget() const { return error_estimate + truncation_estimate; }
  IntegralResult& operator+=(const IntegralResult& other);
};

/// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> values);

/// Midpoint rule over node values laid out in Grid order.
double midpoint_sum(const Grid& grid, std::span<const double> values);

/// Fine value with the error estimate |fine - coarse| / (2^order - 1).
IntegralResult richardson(double coarse, double fine, int order = 2);

/// Midpoint rule on `shape` and on the doubled shape; returns the fine value.
IntegralResult integrate_midpoint(const ParamBox& box, const std::vector<int>& shape,
                                  const std::function<double(const Vec&)>& f);

}  // namespace curvedborn
