#pragma once

#include <stdexcept>
#include <string>

namespace bvp {

struct UnsupportedDerivative : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidExponent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PointOutOfInterval : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidPartition : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OrderOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedExponent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NeverWellPosed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a problem is ill-posed: the characteristic matrix is rank
/// deficient at the configured tolerance. Carries the d-characteristics.
struct SingularProblem : std::runtime_error {
    int dim_ker;
    int dim_coker;
    SingularProblem(int ker, int coker)
        : std::runtime_error("singular boundary-value problem, d-characteristics (" +
                             std::to_string(ker) + "," + std::to_string(coker) + ")"),
          dim_ker(ker), dim_coker(coker) {}
};

}  // namespace bvp
