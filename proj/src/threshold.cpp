#include "arsk/threshold.hpp"

#include <cmath>
#include <string>

#include "arsk/errors.hpp"

namespace arsk {

namespace {

void check_lambda(double lambda) {
    if (!(lambda >= 0.0)) {
        throw InvalidParameter("lambda must be nonnegative, got " + std::to_string(lambda));
    }
}

void check_a(double a) {
    if (!(a > 2.0)) {
        throw InvalidParameter("SCAD parameter a must exceed 2, got " + std::to_string(a));
    }
}

}  // namespace

double soft_scalar(double x, double lambda) {
    check_lambda(lambda);
    if (x > lambda) {
        return x - lambda;
    }
    if (x < -lambda) {
        return x + lambda;
    }
    return 0.0;
}

double scad_scalar(double x, double lambda, double a) {
    check_lambda(lambda);
    check_a(a);
    const double ax = std::abs(x);
    if (ax <= 2.0 * lambda) {
        return soft_scalar(x, lambda);
    }
    if (ax < a * lambda) {
        const double sign = x > 0.0 ? 1.0 : -1.0;
        return ((a - 1.0) * x - a * lambda * sign) / (a - 2.0);
    }
    return x;
}

double soft_group_factor(double norm, double lambda) {
    check_lambda(lambda);
    if (lambda == 0.0) {
        return 1.0;
    }
    if (norm <= lambda) {
        return 0.0;
    }
    return 1.0 - lambda / norm;
}

double scad_group_factor(double norm, double lambda, double a) {
    check_lambda(lambda);
    check_a(a);
    if (norm <= 2.0 * lambda) {
        return soft_group_factor(norm, lambda);
    }
    if (norm <= a * lambda) {
        return (a - 1.0) / (a - 2.0) * soft_group_factor(norm, a * lambda / (a - 1.0));
    }
    return 1.0;
}

Eigen::VectorXd soft_group(const Eigen::VectorXd& z, double lambda) {
    const double c = soft_group_factor(z.norm(), lambda);
    return c == 1.0 ? z : Eigen::VectorXd(c * z);
}

Eigen::VectorXd scad_group(const Eigen::VectorXd& z, double lambda, double a) {
    const double c = scad_group_factor(z.norm(), lambda, a);
    return c == 1.0 ? z : Eigen::VectorXd(c * z);
}

double threshold_scalar(const PenaltySpec& spec, double x) {
    return spec.kind == PenaltyKind::Lasso ? soft_scalar(x, spec.lambda) : scad_scalar(x, spec.lambda, spec.a);
}

double group_factor(const PenaltySpec& spec, double norm) {
    return spec.kind == PenaltyKind::Lasso ? soft_group_factor(norm, spec.lambda)
                                           : scad_group_factor(norm, spec.lambda, spec.a);
}

double penalty_value(const PenaltySpec& spec, double v) {
    if (!(v >= 0.0)) {
        throw InvalidParameter("penalty argument must be nonnegative, got " + std::to_string(v));
    }
    spec.check();
    const double lambda = spec.lambda;
    if (spec.kind == PenaltyKind::Lasso) {
        return lambda * v;
    }
    const double a = spec.a;
    if (v <= lambda) {
        return lambda * v;
    }
    if (v <= a * lambda) {
        return -(v * v - 2.0 * a * lambda * v + lambda * lambda) / (2.0 * (a - 1.0));
    }
    return (a + 1.0) * lambda * lambda / 2.0;
}

}  // namespace arsk
