#include "ipg/prox.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ipg/rng.hpp"

namespace ipg {

namespace {

// Below this distance a point counts as inside the ball, avoiding division by
// a vanishing distance in the step-toward-projection branch.
constexpr double kInsideTol = 1e-14;

}  // namespace

BallSet::BallSet(Vector center_, double radius_)
    : center(std::move(center_)), radius(radius_) {
  if (center.empty()) throw std::invalid_argument("BallSet: empty center");
  if (!(radius > 0.0)) throw std::invalid_argument("BallSet: radius must be positive");
}

Vector soft_threshold(const Vector& x, double r) {
  if (r < 0.0) throw std::invalid_argument("soft_threshold: negative step");
  Vector y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double mag = std::abs(x[j]) - r;
    y[j] = mag > 0.0 ? (x[j] > 0.0 ? mag : -mag) : 0.0;
  }
  return y;
}

Vector project_ball(const Vector& x, const BallSet& ball) {
  if (x.size() != ball.center.size()) {
    throw std::invalid_argument("project_ball: dimension mismatch");
  }
  const double d = dist(x, ball.center);
  if (d <= ball.radius) return x;
  Vector y(ball.center);
  const double scale = ball.radius / d;
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += scale * (x[j] - ball.center[j]);
  return y;
}

Vector prox_dist_ball(const Vector& x, double r, const BallSet& ball) {
  if (r < 0.0) throw std::invalid_argument("prox_dist_ball: negative step");
  if (x.size() != ball.center.size()) {
    throw std::invalid_argument("prox_dist_ball: dimension mismatch");
  }
  const double d_center = dist(x, ball.center);
  const double d = d_center - ball.radius;
  if (d < kInsideTol) return x;
  Vector proj = project_ball(x, ball);
  if (d <= r) return proj;
  const double scale = r / d;
  for (std::size_t j = 0; j < proj.size(); ++j) {
    proj[j] = x[j] + scale * (proj[j] - x[j]);
  }
  return proj;
}

Vector prox_scaled_sq_norm(const Vector& x, double r, double lambda) {
  if (r < 0.0) throw std::invalid_argument("prox_scaled_sq_norm: negative step");
  if (lambda < 0.0) throw std::invalid_argument("prox_scaled_sq_norm: negative weight");
  return scaled(x, 1.0 / (1.0 + r * lambda));
}

Vector IdentityTransform::forward(const Vector& x) const {
  if (x.size() != size_) throw std::invalid_argument("IdentityTransform: size mismatch");
  return x;
}

Vector IdentityTransform::inverse(const Vector& coeffs) const {
  if (coeffs.size() != size_) throw std::invalid_argument("IdentityTransform: size mismatch");
  return coeffs;
}

ProxL1Orthogonal::ProxL1Orthogonal(std::shared_ptr<const OrthogonalTransform> transform)
    : transform_(std::move(transform)) {
  if (!transform_) throw std::invalid_argument("ProxL1Orthogonal: null transform");
  SeededRng probes(0x70726f78u);
  for (int trial = 0; trial < 3; ++trial) {
    Vector p(transform_->size());
    for (double& v : p) v = probes.uniform(-1.0, 1.0);
    const Vector image = transform_->forward(p);
    const double tol = 1e-10 * std::max(1.0, norm(p));
    if (std::abs(norm(image) - norm(p)) > tol) {
      throw std::invalid_argument("ProxL1Orthogonal: transform does not preserve norms");
    }
    if (dist(transform_->inverse(image), p) > tol) {
      throw std::invalid_argument("ProxL1Orthogonal: transform round trip failed");
    }
  }
}

Vector ProxL1Orthogonal::operator()(const Vector& x, double r) const {
  return transform_->inverse(soft_threshold(transform_->forward(x), r));
}

}  // namespace ipg
