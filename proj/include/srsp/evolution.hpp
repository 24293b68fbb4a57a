#pragma once

#include <utility>
#include <vector>

#include "srsp/casimir.hpp"
#include "srsp/state.hpp"

namespace srsp {

struct EvolutionConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 1;       // observable sampling stride in steps
  int renormalize_every = 0;  // 0 disables periodic re-orthonormalization

  void validate() const;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> casimir;
  std::vector<double> ortho_defect;
  std::vector<double> hminus1_dist;  // NaN when no reference density was given
  std::vector<double> mass;
  bool aborted = false;
  double last_valid_time = 0.0;

  std::size_t rows() const { return times.size(); }
};

// One splitting step: half kinetic phase, full potential phase with the
// potential rebuilt from the half-step density, half kinetic phase.  The
// returned state lives on the full grid-resolution mode set, where both phase
// factors are exactly unitary; occupations pass through untouched.  A step of
// -dt undoes a step of dt to roundoff, because the potential phase leaves the
// density it was built from unchanged.
MixedState strang_step(const MixedState& state, double dt);

// Fixed-step propagation with observables sampled every record_every steps
// (always at t = 0 and t_end).  A non-finite observable aborts the run and
// leaves the trajectory at the last valid record.  When `reference` is given,
// hminus1_dist tracks the dual-norm distance between the evolving density and
// the reference density.
std::pair<MixedState, TrajectoryRecord> evolve(const MixedState& state,
                                               const EvolutionConfig& config,
                                               const CasimirDistribution& dist,
                                               const ModeField* reference_density = nullptr);

// Defect of the integral (mild) form of the dynamics over one step of size dt:
//   | psi(dt) - e^{-iT dt} psi(0) + i int_0^dt e^{-iT(dt-s)} V[psi(s)] psi(s) ds |
// with the integral approximated by the midpoint rule and the midpoint state
// by a half step.  Third order in dt, so halving dt shrinks it by about 8.
double mild_residual(const MixedState& state0, const MixedState& state_dt, double dt);

}  // namespace srsp
