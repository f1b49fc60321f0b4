#include "unf/ode.hpp"

#include <cmath>
#include <numbers>

#include "unf/error.hpp"
#include "unf/io.hpp"

namespace unf {

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Completed: return "Completed";
    case Outcome::Stopped: return "Stopped";
    case Outcome::Escaped: return "Escaped";
    case Outcome::StepSizeUnderflow: return "StepSizeUnderflow";
    case Outcome::EventNotFound: return "EventNotFound";
  }
  return "Unknown";
}

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw Error(ErrorKind::InvalidDomain, "rtol and atol must be positive");
  if (!(t_max > 0.0)) throw Error(ErrorKind::InvalidDomain, "t_max must be positive");
  if (!(escape_radius > 0.0)) throw Error(ErrorKind::InvalidDomain, "escape_radius must be positive");
  if (!(max_step > 0.0)) throw Error(ErrorKind::InvalidDomain, "max_step must be positive");
}

void AngleTracker::reset(double x, double y) {
  last_ = std::atan2(y, x);
  total_ = 0.0;
  started_ = true;
}

double AngleTracker::feed(double x, double y) {
  const double a = std::atan2(y, x);
  if (!started_) {
    last_ = a;
    started_ = true;
    return 0.0;
  }
  double d = a - last_;
  if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
  if (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
  last_ = a;
  total_ += d;
  return d;
}

namespace {

auto wrap(const Field3& field) {
  return [&field](const Vec<3>& y) { return to_vec(field(to_state(y))); };
}

[[noreturn]] void throw_outcome(Outcome o, double t, const Vec<3>& y) {
  const std::string where = " at t=" + format_double(t) + " state=(" + format_double(y[0]) + "," +
                            format_double(y[1]) + "," + format_double(y[2]) + ")";
  switch (o) {
    case Outcome::Escaped: throw Error(ErrorKind::Escaped, "trajectory left the escape radius" + where);
    case Outcome::StepSizeUnderflow: throw Error(ErrorKind::StepSizeUnderflow, "step size underflow" + where);
    default: throw Error(ErrorKind::EventNotFound, "no section crossing before the horizon" + where);
  }
}

Trajectory run(const Field3& field, const State& s0, double t_span, const IntegratorConfig& cfg,
               double sample_dt) {
  cfg.validate();
  Trajectory traj;
  traj.t.push_back(0.0);
  traj.states.push_back(s0);
  const double dir = t_span >= 0.0 ? 1.0 : -1.0;
  std::size_t next = 1;
  auto obs = [&](const DenseStep<3>& ds) {
    if (sample_dt > 0.0) {
      for (;;) {
        const double ts = dir * sample_dt * static_cast<double>(next);
        if (dir * (ts - ds.t1) > 0.0) break;
        traj.t.push_back(ts);
        traj.states.push_back(ts == ds.t1 ? to_state(ds.y1) : to_state(ds(ts)));
        ++next;
      }
    } else {
      traj.t.push_back(ds.t1);
      traj.states.push_back(to_state(ds.y1));
    }
    return false;
  };
  const auto res = dopri5<3>(wrap(field), to_vec(s0), 0.0, t_span, cfg, obs);
  traj.outcome = res.outcome;
  if (res.outcome != Outcome::Completed && (traj.t.empty() || traj.t.back() != res.t)) {
    traj.t.push_back(res.t);
    traj.states.push_back(to_state(res.y));
  }
  return traj;
}

}  // namespace

Trajectory try_integrate(const Field3& field, const State& s0, double t_span, const IntegratorConfig& cfg,
                         double sample_dt) {
  return run(field, s0, t_span, cfg, sample_dt);
}

Trajectory integrate(const Field3& field, const State& s0, double t_span, const IntegratorConfig& cfg,
                     double sample_dt) {
  auto traj = run(field, s0, t_span, cfg, sample_dt);
  if (traj.outcome != Outcome::Completed) throw_outcome(traj.outcome, traj.t.back(), to_vec(traj.states.back()));
  return traj;
}

SectionCrossing refine_crossing(const Field3& field, const DenseStep<3>& step) {
  double ta = step.t0, tb = step.t1;
  double ya = step.y0[1], yb = step.y1[1];
  // Illinois variant of regula falsi on the interpolant.
  int side = 0;
  double tc = ta;
  for (int it = 0; it < 200; ++it) {
    tc = (ta * yb - tb * ya) / (yb - ya);
    if (!(tc > std::min(ta, tb) && tc < std::max(ta, tb))) tc = 0.5 * (ta + tb);
    const double yc = step(tc)[1];
    if (std::abs(yc) <= 1e-14 || std::abs(tb - ta) <= 1e-15 * std::max(1.0, std::abs(tc))) break;
    if ((yc > 0.0) == (yb > 0.0)) {
      tb = tc;
      yb = yc;
      if (side == -1) ya *= 0.5;
      side = -1;
    } else {
      ta = tc;
      ya = yc;
      if (side == 1) yb *= 0.5;
      side = 1;
    }
  }
  State s = to_state(step(tc));
  double t = tc;
  // Newton polish along the flow: short RK4 steps of length -y / y'.
  for (int it = 0; it < 3 && std::abs(s.y) > 1e-15; ++it) {
    const State f0 = field(s);
    if (f0.y == 0.0) break;
    const double dt = -s.y / f0.y;
    if (std::abs(dt) > 1e-3) break;
    const State k1 = f0;
    const State k2 = field(s + (0.5 * dt) * k1);
    const State k3 = field(s + (0.5 * dt) * k2);
    const State k4 = field(s + dt * k3);
    s = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += dt;
  }
  SectionCrossing c;
  c.state = s;
  c.time = t;
  c.side = s.x > 0.0 ? 1 : -1;
  return c;
}

CrossingResult try_integrate_to_section(const Field3& field, const State& s0, CrossingDirection dir,
                                        const IntegratorConfig& cfg, double time_direction) {
  cfg.validate();
  if (std::abs(s0.y) <= kSectionTolerance) {
    throw Error(ErrorKind::InvalidDomain, "initial state lies on the section");
  }
  CrossingResult out;
  AngleTracker angle(s0.x, s0.y);
  const double sgn = time_direction >= 0.0 ? 1.0 : -1.0;
  auto obs = [&](const DenseStep<3>& ds) {
    const double ya = ds.y0[1], yb = ds.y1[1];
    const bool crossed = (ya > 0.0 && yb <= 0.0) || (ya < 0.0 && yb >= 0.0);
    if (crossed) {
      // Direction in forward time: sign of dy/dt at the crossing.
      const bool down_in_time = sgn > 0.0 ? (ya > 0.0) : (ya < 0.0);
      const bool dir_ok = dir == CrossingDirection::Any || (dir == CrossingDirection::Down && down_in_time) ||
                          (dir == CrossingDirection::Up && !down_in_time);
      if (dir_ok) {
        SectionCrossing c = refine_crossing(field, ds);
        if (c.state.z > 0.0) {
          // Angle up to the crossing point, sampled along the interpolant.
          for (int i = 1; i <= 4; ++i) {
            const double ti = ds.t0 + (c.time - ds.t0) * i / 4.0;
            const auto yi = ds(ti);
            angle.feed(yi[0], yi[1]);
          }
          angle.feed(c.state.x, c.state.y);
          c.theta = angle.total();
          out.crossing = c;
          return true;
        }
      }
    }
    for (int i = 1; i <= 4; ++i) {
      const auto yi = i == 4 ? ds.y1 : ds(ds.t0 + (ds.t1 - ds.t0) * i / 4.0);
      angle.feed(yi[0], yi[1]);
    }
    return false;
  };
  const auto res = dopri5<3>(wrap(field), to_vec(s0), 0.0, sgn * cfg.t_max, cfg, obs);
  out.last = to_state(res.y);
  out.t_last = res.t;
  if (out.crossing) {
    out.outcome = Outcome::Stopped;
  } else if (res.outcome == Outcome::Completed) {
    out.outcome = Outcome::EventNotFound;
  } else {
    out.outcome = res.outcome;
  }
  return out;
}

SectionCrossing integrate_to_section(const Field3& field, const State& s0, CrossingDirection dir,
                                     const IntegratorConfig& cfg, double time_direction) {
  auto r = try_integrate_to_section(field, s0, dir, cfg, time_direction);
  if (!r.crossing) throw_outcome(r.outcome, r.t_last, to_vec(r.last));
  return *r.crossing;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,y,z\n";
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const auto& s = traj.states[i];
    os << format_double(traj.t[i]) << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
       << format_double(s.z) << '\n';
  }
}

}  // namespace unf
