#pragma once

#include <stdexcept>
#include <string>

namespace fsqc {

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
    double residual;
    explicit SolverError(const std::string& msg, double achievedResidual = -1.0)
        : std::runtime_error(msg), residual(achievedResidual) {}
};

struct NonManifoldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fsqc
