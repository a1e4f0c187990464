#include "arbor/ensemble.hpp"

#include <stdexcept>

#include "arbor/errors.hpp"

namespace arbor {

SimulatedEnsembleSource::SimulatedEnsembleSource(TransitionMatrix p,
                                                 std::vector<int> init,
                                                 RngStream rng)
    : p_(std::move(p)), state_(std::move(init)), rng_(rng) {
  if (state_.size() != static_cast<std::size_t>(p_.size()))
    throw StructureError("initial vector length must equal the state count");
  for (int s : state_)
    if (s < 1 || s > p_.size())
      throw StructureError("initial state outside [n]");
}

const std::vector<int>& SimulatedEnsembleSource::next() {
  if (!started_) {
    started_ = true;
    return state_;
  }
  for (int& s : state_) s = step(p_, s, rng_);
  return state_;
}

std::unique_ptr<EnsembleSource> make_ensemble_source(const TransitionMatrix& p,
                                                     std::vector<int> init,
                                                     RngStream rng) {
  return std::make_unique<SimulatedEnsembleSource>(p, std::move(init), rng);
}

std::vector<int> lift_two_state(const std::vector<int>& traj, int n, RngStream& rng) {
  if (n < 3) throw std::domain_error("lift_two_state needs n >= 3");
  std::vector<int> out;
  out.reserve(traj.size());
  for (int x : traj) {
    if (x == 1) {
      out.push_back(1);
    } else if (x == 2) {
      out.push_back(1 + rng.uniform_index(n - 1));
    } else {
      throw std::domain_error("lift_two_state: trajectory value outside {1,2}");
    }
  }
  return out;
}

}  // namespace arbor
