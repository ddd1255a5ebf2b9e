#pragma once

#include <cstddef>
#include <functional>
#include <memory>

#include "ipg/vector_ops.hpp"

namespace ipg {

// prox_{r f}: (point, step r) -> point. All maps here are exact closed forms
// and firmly nonexpansive.
using ProxMap = std::function<Vector(const Vector&, double)>;

struct BallSet {
  Vector center;
  double radius;

  BallSet(Vector center_, double radius_);
};

// Componentwise sign(x_j) * max(|x_j| - r, 0); prox of r * l1 norm.
Vector soft_threshold(const Vector& x, double r);

// Euclidean projection onto the ball.
Vector project_ball(const Vector& x, const BallSet& ball);

// Exact prox of r * dist(., ball): projection when the distance is at most r,
// otherwise a step of length r toward the projection.
Vector prox_dist_ball(const Vector& x, double r, const BallSet& ball);

// Prox of r * (lambda/2) * ||.||^2, i.e. x / (1 + r*lambda).
Vector prox_scaled_sq_norm(const Vector& x, double r, double lambda);

// Linear map whose inverse equals its transpose.
class OrthogonalTransform {
 public:
  virtual ~OrthogonalTransform() = default;

  virtual std::size_t size() const = 0;
  virtual Vector forward(const Vector& x) const = 0;
  virtual Vector inverse(const Vector& coeffs) const = 0;
};

class IdentityTransform final : public OrthogonalTransform {
 public:
  explicit IdentityTransform(std::size_t size) : size_(size) {}

  std::size_t size() const override { return size_; }
  Vector forward(const Vector& x) const override;
  Vector inverse(const Vector& coeffs) const override;

 private:
  std::size_t size_;
};

// Prox of r * ||W . ||_1 for orthogonal W: inverse(soft_threshold(forward(x), r)).
// The round trip inverse(forward(p)) = p is checked on seeded probes at
// construction so a non-orthogonal transform is rejected up front.
class ProxL1Orthogonal {
 public:
  explicit ProxL1Orthogonal(std::shared_ptr<const OrthogonalTransform> transform);

  Vector operator()(const Vector& x, double r) const;

  const OrthogonalTransform& transform() const { return *transform_; }

 private:
  std::shared_ptr<const OrthogonalTransform> transform_;
};

}  // namespace ipg
