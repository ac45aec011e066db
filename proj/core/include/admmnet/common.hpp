#ifndef ADMMNET_COMMON_HPP
#define ADMMNET_COMMON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace admmnet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidEdge : Error { using Error::Error; };
struct DisconnectedGraph : Error { using Error::Error; };
struct NotSymmetric : Error { using Error::Error; };
struct AllZeroSpectrum : Error { using Error::Error; };
struct SolverDivergence : Error { using Error::Error; };
struct NotStronglyConvex : Error { using Error::Error; };
struct MajorityViolated : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct ConditionInfeasible : Error { using Error::Error; };
struct InconsistentSystem : Error { using Error::Error; };
struct MissingFields : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

}  // namespace admmnet

#endif
