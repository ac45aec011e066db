#ifndef ADMMNET_ERROR_MODEL_HPP
#define ADMMNET_ERROR_MODEL_HPP

#include <map>
#include <set>
#include <string>

#include "admmnet/common.hpp"
#include "admmnet/topology.hpp"

namespace admmnet {

enum class ErrorKind { None, Gaussian, Bounded, LinearDecay, Scripted };

/// Per-agent, per-iteration broadcast error e^k. Reliable agents always emit
/// zero; everything is a pure function of (seed, agent, k).
struct ErrorModel {
  ErrorKind kind = ErrorKind::None;
  std::set<int> unreliable;
  std::uint64_t rng_seed = 0;

  // Gaussian
  double mu_b = 0.0;
  double sigma_b = 0.0;
  // Bounded: ||e^k||^2 <= e_cap
  double e_cap = 0.0;
  // LinearDecay: ||e^k||^2 = e0 * R^k, direction fixed per agent at k = 0
  double e0 = 0.0;
  double decay_rate = 0.0;
  // Scripted: (k, agent) -> vector
  std::map<std::pair<int, int>, Vec> script;

  static ErrorModel none() { return {}; }
  static ErrorModel gaussian(std::set<int> agents, double mu, double sigma,
                             std::uint64_t seed);
  static ErrorModel bounded(std::set<int> agents, double cap,
                            std::uint64_t seed);
  static ErrorModel linear_decay(std::set<int> agents, double e0, double rate,
                                 std::uint64_t seed);
  static ErrorModel scripted(std::set<int> agents,
                             std::map<std::pair<int, int>, Vec> table);
};

/// Stacked error vector e^k for a D*N state. `x` is accepted for interface
/// parity; none of the built-in kinds reads the state.
Vec sample_error(const ErrorModel& model, int k, int D, int N,
                 const Vec& x = Vec());

/// Deterministic m-subset of unreliable agents. With a topology, enforces
/// that every agent keeps a strict majority of reliable neighbors.
std::set<int> pick_unreliable(int D, int m, std::uint64_t seed,
                              const Topology* topo = nullptr);

/// CSV columns: k, agent, components...
std::map<std::pair<int, int>, Vec> load_scripted_errors_csv(
    const std::string& path);

}  // namespace admmnet

#endif
