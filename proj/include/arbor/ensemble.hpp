#ifndef ARBOR_ENSEMBLE_HPP
#define ARBOR_ENSEMBLE_HPP

#include <memory>
#include <vector>

#include "arbor/rng.hpp"
#include "arbor/transition_matrix.hpp"

namespace arbor {

// Passive, read-only stream of synchronized state vectors. The single
// method is deliberate: an observer can only watch, never reset or
// steer the copies.
class EnsembleSource {
 public:
  virtual ~EnsembleSource() = default;

  // The state vector at the next time step, starting at t = 0.
  // The reference stays valid until the following call.
  virtual const std::vector<int>& next() = 0;
};

// n synchronized copies of the chain, conditionally independent given
// the initial vector. Coordinates advance in index order each tick so
// runs are reproducible for a fixed stream.
class SimulatedEnsembleSource final : public EnsembleSource {
 public:
  SimulatedEnsembleSource(TransitionMatrix p, std::vector<int> init, RngStream rng);

  const std::vector<int>& next() override;

 private:
  TransitionMatrix p_;
  std::vector<int> state_;
  RngStream rng_;
  bool started_ = false;
};

std::unique_ptr<EnsembleSource> make_ensemble_source(const TransitionMatrix& p,
                                                     std::vector<int> init,
                                                     RngStream rng);

// Lift a {1,2}-valued trajectory to [n]: state 1 maps to 1, each visit
// to state 2 maps to a fresh uniform draw from {2,...,n}.
std::vector<int> lift_two_state(const std::vector<int>& traj, int n, RngStream& rng);

}  // namespace arbor

#endif
