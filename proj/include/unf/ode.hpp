#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "unf/dopri5.hpp"
#include "unf/model.hpp"
#include "unf/ode_config.hpp"

namespace unf {

using Field3 = std::function<State(const State&)>;

inline Vec<3> to_vec(const State& s) { return {s.x, s.y, s.z}; }
inline State to_state(const Vec<3>& v) { return {v[0], v[1], v[2]}; }

/// Lifted polar angle of (x, y), unwrapped continuously from sample to sample.
class AngleTracker {
 public:
  AngleTracker() = default;
  AngleTracker(double x, double y) { reset(x, y); }

  void reset(double x, double y);
  /// Adds the signed change from the previous sample; returns the increment.
  double feed(double x, double y);
  double total() const { return total_; }
  bool started() const { return started_; }

 private:
  double last_ = 0.0;
  double total_ = 0.0;
  bool started_ = false;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<State> states;
  Outcome outcome = Outcome::Completed;
};

/// Integrates over [0, t_span] (negative span runs in reverse time). With
/// sample_dt > 0 the dense output is sampled on a uniform grid, otherwise every
/// accepted step is recorded. Throws Escaped / StepSizeUnderflow.
Trajectory integrate(const Field3& field, const State& s0, double t_span, const IntegratorConfig& cfg,
                     double sample_dt = 0.0);

/// Same as integrate but reports the outcome instead of throwing.
Trajectory try_integrate(const Field3& field, const State& s0, double t_span, const IntegratorConfig& cfg,
                         double sample_dt = 0.0);

/// Crossing direction through y = 0: Down means y decreasing.
enum class CrossingDirection { Down, Up, Any };

struct SectionCrossing {
  State state;
  double time = 0.0;
  /// +1 for x > 0, -1 otherwise.
  int side = 1;
  /// Lifted angle of (x, y) accumulated since the start of the run.
  double theta = 0.0;
};

struct CrossingResult {
  Outcome outcome = Outcome::EventNotFound;
  std::optional<SectionCrossing> crossing;
  State last;
  double t_last = 0.0;
};

inline constexpr double kSectionTolerance = 1e-10;

/// First crossing of S = {y = 0, z > 0} in the requested direction, within
/// |t| <= cfg.t_max (sign of time_direction selects forward or reverse time).
CrossingResult try_integrate_to_section(const Field3& field, const State& s0, CrossingDirection dir,
                                        const IntegratorConfig& cfg, double time_direction = 1.0);

/// Throwing variant: EventNotFound, Escaped or StepSizeUnderflow.
SectionCrossing integrate_to_section(const Field3& field, const State& s0, CrossingDirection dir,
                                     const IntegratorConfig& cfg, double time_direction = 1.0);

/// Locates y = 0 inside one dense step and polishes the state with a short
/// Taylor-corrected step so that |y| <= kSectionTolerance. Assumes the sign of
/// y differs at the step ends.
SectionCrossing refine_crossing(const Field3& field, const DenseStep<3>& step);

/// CSV with header t,x,y,z.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace unf
