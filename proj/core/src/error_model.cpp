#include "admmnet/error_model.hpp"

#include <fstream>
#include <sstream>

#include "admmnet/rng.hpp"

namespace admmnet {

ErrorModel ErrorModel::gaussian(std::set<int> agents, double mu, double sigma,
                                std::uint64_t seed) {
  ErrorModel m;
  m.kind = ErrorKind::Gaussian;
  m.unreliable = std::move(agents);
  m.mu_b = mu;
  m.sigma_b = sigma;
  m.rng_seed = seed;
  return m;
}

ErrorModel ErrorModel::bounded(std::set<int> agents, double cap,
                               std::uint64_t seed) {
  ErrorModel m;
  m.kind = ErrorKind::Bounded;
  m.unreliable = std::move(agents);
  m.e_cap = cap;
  m.rng_seed = seed;
  return m;
}

ErrorModel ErrorModel::linear_decay(std::set<int> agents, double e0,
                                    double rate, std::uint64_t seed) {
  ErrorModel m;
  m.kind = ErrorKind::LinearDecay;
  m.unreliable = std::move(agents);
  m.e0 = e0;
  m.decay_rate = rate;
  m.rng_seed = seed;
  return m;
}

ErrorModel ErrorModel::scripted(std::set<int> agents,
                                std::map<std::pair<int, int>, Vec> table) {
  ErrorModel m;
  m.kind = ErrorKind::Scripted;
  m.unreliable = std::move(agents);
  m.script = std::move(table);
  return m;
}

Vec sample_error(const ErrorModel& model, int k, int D, int N, const Vec&) {
  if (k < 0) throw DomainError("sample_error: negative iteration");
  Vec e = Vec::Zero(static_cast<long>(D) * N);
  if (model.kind == ErrorKind::None || model.unreliable.empty()) return e;

  switch (model.kind) {
    case ErrorKind::Gaussian:
      for (int i : model.unreliable)
        for (int d = 0; d < N; ++d)
          e[i * N + d] = model.mu_b +
                         model.sigma_b * rng::normal(model.rng_seed, i, k, d);
      break;
    case ErrorKind::Bounded: {
      // Random direction over the unreliable support, magnitude drawn so
      // ||e^k||^2 <= e_cap holds for every k.
      Vec dir = Vec::Zero(e.size());
      for (int i : model.unreliable)
        for (int d = 0; d < N; ++d)
          dir[i * N + d] = rng::normal(model.rng_seed, i, k, d);
      const double norm = dir.norm();
      if (norm == 0) break;
      const double mag = std::sqrt(
          model.e_cap * rng::uniform(model.rng_seed, 0x0b0d, k, 0));
      e = (mag / norm) * dir;
      break;
    }
    case ErrorKind::LinearDecay: {
      // Direction fixed at k = 0 so the magnitude schedule is exact.
      Vec dir = Vec::Zero(e.size());
      for (int i : model.unreliable)
        for (int d = 0; d < N; ++d)
          dir[i * N + d] = rng::normal(model.rng_seed, i, 0, d);
      const double norm = dir.norm();
      if (norm == 0) break;
      const double mag = std::sqrt(model.e0 * std::pow(model.decay_rate, k));
      e = (mag / norm) * dir;
      break;
    }
    case ErrorKind::Scripted:
      for (int i : model.unreliable) {
        auto it = model.script.find({k, i});
        if (it == model.script.end()) continue;
        if (it->second.size() != N)
          throw DimensionMismatch("sample_error: scripted row dimension");
        e.segment(i * N, N) = it->second;
      }
      break;
    default:
      break;
  }
  return e;
}

std::set<int> pick_unreliable(int D, int m, std::uint64_t seed,
                              const Topology* topo) {
  if (m < 0 || m > D) throw DomainError("pick_unreliable: bad count");
  if (m == 0) return {};

  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    // Fisher-Yates prefix of a keyed permutation.
    std::vector<int> perm(D);
    for (int i = 0; i < D; ++i) perm[i] = i;
    for (int i = D - 1; i > 0; --i) {
      const int j = static_cast<int>(rng::uniform(seed, attempt, i, 0) * (i + 1));
      std::swap(perm[i], perm[std::min(j, i)]);
    }
    std::set<int> chosen(perm.begin(), perm.begin() + m);
    if (!topo) return chosen;

    bool ok = true;
    for (int i = 0; i < D && ok; ++i) {
      int bad = 0;
      for (int j : topo->neighbors[i]) bad += chosen.count(j);
      if (2 * bad >= topo->degree(i)) ok = false;  // need strict majority
    }
    if (ok) return chosen;
  }
  throw MajorityViolated(
      "pick_unreliable: no assignment keeps a reliable-neighbor majority");
}

std::map<std::pair<int, int>, Vec> load_scripted_errors_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_scripted_errors_csv: cannot open " + path);
  std::map<std::pair<int, int>, Vec> table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-')
      continue;  // header line
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(std::stod(tok));
    if (fields.size() < 3) throw Error("load_scripted_errors_csv: short row");
    Vec v(fields.size() - 2);
    for (size_t i = 2; i < fields.size(); ++i) v[i - 2] = fields[i];
    table[{static_cast<int>(fields[0]), static_cast<int>(fields[1])}] = v;
  }
  return table;
}

}  // namespace admmnet
