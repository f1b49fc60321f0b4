#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "unf/homoclinic.hpp"
#include "unf/lyapunov.hpp"

namespace unf {

/// Inclusive linspace; n = 1 denotes the single value lo (hi must equal lo).
struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;
  double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

struct SweepConfig {
  LyapunovConfig lyap;
  double eps_zero = 5e-3;
};

struct SweepCell {
  double alpha = 0.0;
  double lambda = 0.0;
  double Lambda = 0.0;
  AttractorClass cls = AttractorClass::Error;
};

struct SweepGrid {
  double beta = 0.0;
  Axis alpha;
  Axis lambda;
  /// Row-major with lambda as the row index: cells[i_lambda * alpha.n + i_alpha].
  std::vector<SweepCell> cells;
  /// Per alpha column: the Tigan line lambda = A and the Hopf threshold
  /// (NaN where the threshold does not exist).
  std::vector<double> tigan_lambda;
  std::vector<double> hopf_lambda;

  const SweepCell& at(int i_alpha, int i_lambda) const { return cells[i_lambda * alpha.n + i_alpha]; }
};

/// Throws InvalidDomain for beta <= 0, alpha <= 0, lambda < 0, n < 1 or
/// workers < 1. Cell failures are stored as class Error.
SweepGrid sweep_grid(double beta, const Axis& alpha, const Axis& lambda, int workers, const SweepConfig& cfg = {});

void write_sweep_csv(std::ostream& os, const SweepGrid& g);
/// Reads the cells and axes back; overlays are recomputed.
SweepGrid read_sweep_csv(std::istream& is);
/// Columns alpha,tigan_lambda,hopf_lambda.
void write_overlay_csv(std::ostream& os, const SweepGrid& g);

struct TraceConfig {
  SplitConfig split;
  /// Search window for the first root.
  double lambda_lo = 0.55;
  double lambda_hi = 0.95;
  /// Among several roots in the window, take the one closest to this value;
  /// without it the lowest one is taken.
  std::optional<double> lambda_guess;
  int scan_points = 32;
  /// Half width of the continuation bracket around the predicted root.
  double bracket_halfwidth = 0.01;
  double tol = 1e-6;
  double min_step = 1e-4;
  double max_step = 2e-2;
};

struct CurvePoint {
  double alpha = 0.0;
  double lambda = 0.0;
  double residual = 0.0;
  int half_turns = 0;
};

struct CurveTrace {
  int k = 0;
  double beta = 0.0;
  std::vector<CurvePoint> points;
  /// Alpha intervals skipped because no root could be located.
  std::vector<std::pair<double, double>> gaps;
};

/// Continuation in alpha of the k-th homoclinic curve lambda_k(alpha) at
/// fixed beta, from alpha.lo to alpha.hi. The nominal step is
/// (hi - lo) / (n - 1), halved on failure and doubled after three successes
/// within [min_step, max_step]. Throws EmptyTrace when no point is found.
CurveTrace trace_curve(double beta, int k, const Axis& alpha, const TraceConfig& cfg = {});

/// Columns alpha,lambda,k,residual.
void write_curve_csv(std::ostream& os, const CurveTrace& c);

}  // namespace unf
