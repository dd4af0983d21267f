#include "curvedborn/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace curvedborn {

double ParamBox::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool ParamBox::contains(const Vec& u, double slack) const {
  if (u.size() != lo.size()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (u[i] < lo[i] - slack || u[i] > hi[i] + slack) return false;
  }
  return true;
}

bool ParamBox::contains(const ParamBox& other, double slack) const {
  if (other.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const double tol = slack * (1.0 + std::abs(lo[i]) + std::abs(hi[i]));
    if (other.lo[i] < lo[i] - tol || other.hi[i] > hi[i] + tol) return false;
  }
  return true;
}

bool ParamBox::overlaps(const ParamBox& other) const {
  for (int i = 0; i < dim(); ++i) {
    if (std::min(hi[i], other.hi[i]) <= std::max(lo[i], other.lo[i])) return false;
  }
  return true;
}

void validate(const ParamBox& box) {
  if (box.lo.size() != box.hi.size() || box.lo.size() == 0) {
    throw Error(ErrorKind::InvalidArgument, "parameter box bounds have mismatched lengths");
  }
  for (int i = 0; i < box.dim(); ++i) {
    if (!(box.lo[i] < box.hi[i]) || !std::isfinite(box.lo[i]) || !std::isfinite(box.hi[i])) {
      throw Error(ErrorKind::InvalidArgument, "parameter box interval " + std::to_string(i) + " is empty or infinite");
    }
  }
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  return n;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < shape.size(); ++i) v *= (box.hi[i] - box.lo[i]) / shape[i];
  return v;
}

// Last axis varies fastest.
std::vector<int> Grid::multi_index(std::size_t flat) const {
  std::vector<int> idx(shape.size());
  for (std::size_t k = shape.size(); k-- > 0;) {
    idx[k] = static_cast<int>(flat % static_cast<std::size_t>(shape[k]));
    flat /= static_cast<std::size_t>(shape[k]);
  }
  return idx;
}

Vec Grid::node(std::size_t flat) const {
  const auto idx = multi_index(flat);
  Vec u(static_cast<Eigen::Index>(shape.size()));
  for (std::size_t k = 0; k < shape.size(); ++k) {
    const double h = (box.hi[k] - box.lo[k]) / shape[k];
    u[k] = box.lo[k] + (idx[k] + 0.5) * h;
  }
  return u;
}

bool Grid::on_boundary(std::size_t flat) const {
  const auto idx = multi_index(flat);
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (idx[k] == 0 || idx[k] == shape[k] - 1) return true;
  }
  return false;
}

Grid refined(const Grid& grid) {
  Grid fine = grid;
  for (int& s : fine.shape) s *= 2;
  return fine;
}

std::vector<int> scaled_shape(const ParamBox& box, const std::vector<int>& shape, const ParamBox& sub) {
  std::vector<int> out(shape.size());
  for (std::size_t k = 0; k < shape.size(); ++k) {
    const double frac = (sub.hi[k] - sub.lo[k]) / (box.hi[k] - box.lo[k]);
    out[k] = std::max(2, static_cast<int>(std::ceil(shape[k] * frac - 1e-9)));
  }
  return out;
}

IntegralResult& IntegralResult::operator+=(const IntegralResult& other) {
  value += other.value;
  error_estimate += other.error_estimate;
  truncation_estimate += other.truncation_estimate;
  nodes += other.nodes;
  return *this;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double midpoint_sum(const Grid& grid, std::span<const double> values) {
  return grid.cell_volume() * pairwise_sum(values);
}

IntegralResult richardson(double coarse, double fine, int order) {
  IntegralResult r;
  r.value = fine;
  r.error_estimate = std::abs(fine - coarse) / (std::pow(2.0, order) - 1.0);
  return r;
}

IntegralResult integrate_midpoint(const ParamBox& box, const std::vector<int>& shape,
                                  const std::function<double(const Vec&)>& f) {
  validate(box);
  const Grid coarse{box, shape};
  const Grid fine = refined(coarse);
  auto eval = [&f](const Grid& g) {
    std::vector<double> values(g.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(g.node(i));
    return midpoint_sum(g, values);
  };
  IntegralResult r = richardson(eval(coarse), eval(fine));
  r.nodes = coarse.size() + fine.size();
  return r;
}

}  // namespace curvedborn
