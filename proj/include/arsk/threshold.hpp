#ifndef ARSK_THRESHOLD_HPP
#define ARSK_THRESHOLD_HPP

#include <Eigen/Dense>

#include "arsk/model.hpp"

namespace arsk {

// Scalar soft thresholding, the prox of lambda*|w|.
double soft_scalar(double x, double lambda);

// Scalar SCAD thresholding (soft up to 2*lambda, linear interpolation up to
// a*lambda, identity beyond), the prox of the SCAD penalty for a > 2.
double scad_scalar(double x, double lambda, double a = 3.7);

// Shrinkage factors c such that the group operator returns c * z for a vector
// with Euclidean norm `norm`. A zero norm yields 0 for any lambda > 0.
double soft_group_factor(double norm, double lambda);
double scad_group_factor(double norm, double lambda, double a = 3.7);

// Multivariate (group) operators: z * max(0, 1 - lambda/||z||) and its SCAD
// counterpart. Both return a vector collinear with z.
Eigen::VectorXd soft_group(const Eigen::VectorXd& z, double lambda);
Eigen::VectorXd scad_group(const Eigen::VectorXd& z, double lambda, double a = 3.7);

// Dispatch on spec.kind.
double threshold_scalar(const PenaltySpec& spec, double x);
double group_factor(const PenaltySpec& spec, double norm);

// P(v; lambda) for v >= 0: lambda*v for lasso, the three-piece SCAD penalty
// otherwise. v is |w_j| for weight penalties or ||E_i||_2 for group penalties.
double penalty_value(const PenaltySpec& spec, double v);

}  // namespace arsk

#endif  // ARSK_THRESHOLD_HPP
