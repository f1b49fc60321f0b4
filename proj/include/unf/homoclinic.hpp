#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unf/error.hpp"
#include "unf/manifolds.hpp"
#include "unf/model.hpp"
#include "unf/ode.hpp"

namespace unf {

enum class FateKind { SectionHit, ConvergedToFocusPlus, ConvergedToFocusMinus, Diverged, Undecided };

std::string_view to_string(FateKind k) noexcept;

struct FateLabel {
  FateKind kind = FateKind::Undecided;
  /// Time and position of the deciding event (end of run for Undecided).
  double time = 0.0;
  State position;
};

class FateInterferenceError : public Error {
 public:
  FateInterferenceError(const std::string& what, FateLabel label,
                        std::optional<std::pair<double, double>> sub_bracket = std::nullopt)
      : Error(ErrorKind::FateInterference, what), label_(label), sub_bracket_(sub_bracket) {}
  const FateLabel& label() const noexcept { return label_; }
  const std::optional<std::pair<double, double>>& sub_bracket() const noexcept { return sub_bracket_; }

 private:
  FateLabel label_;
  std::optional<std::pair<double, double>> sub_bracket_;
};

/// Fate of the x > 0 branch of W^u. Without follow_through the first S+ hit
/// decides; with it the run continues to t_max and reports the limit
/// (focus capture within 1e-6, escape) or SectionHit for recurrent orbits.
FateLabel classify_wu_fate(const UnfParams& p, const IntegratorConfig& cfg = {}, bool follow_through = false);

struct SplitConfig {
  IntegratorConfig ode;
  ReturnConfig ret;
  double seed_offset = kDefaultSeedOffset;
  /// Resolution of the W^s trace location on the section.
  double trace_tol = 1e-10;
};

struct SplitResult {
  /// Twist index: half-turns of the flight from p^u back to the saddle.
  int k = 0;
  /// Delta_k, negative when p^u lies inside b_k.
  double delta = 0.0;
  int half_turns = 0;
  bool inside = false;
  double x_u = 0.0;
  double z_u = 0.0;
  /// Nearest W^s trace on the segment {y = 0, z = z_u}; NaN when unresolved.
  double x_s = 0.0;
  bool trace_found = false;
  /// Side on which the flight from p^u leaves the saddle (or the captured focus).
  int exit_side = 0;
  /// Index of the ladder interval (z_k, z_{k+1}) containing z_u; -1 if unknown.
  int ladder_index = -1;
  /// Twist angle within 1e-9 of a multiple of pi; k is the lower count.
  bool boundary_degenerate = false;
};

/// Throws FateInterferenceError when W^u misses S+ or its flight from p^u
/// neither returns to the saddle nor settles on a focus.
SplitResult split_function(const UnfParams& p, const SplitConfig& cfg = {});

/// Continuous root function sign(exit side) * |x_u - x_s|; changes sign
/// exactly where p^u crosses W^s.
double split_root_value(const SplitResult& r);

enum class Orientation { Oriented, NonOriented };

std::string_view to_string(Orientation o) noexcept;

inline Orientation orientation_of(int k) { return k % 2 == 0 ? Orientation::Oriented : Orientation::NonOriented; }

struct BifurcationPoint {
  UnfParams params;
  int k = 0;
  Orientation orientation = Orientation::Oriented;
  /// |Delta_k| at the accepted parameter.
  double residual = 0.0;
  int half_turns = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int evaluations = 0;
};

/// Root of lambda -> Delta_0 at fixed (alpha, beta). Throws
/// BracketNotSignChanging, FateInterferenceError, TwistMismatch.
BifurcationPoint find_lambda0(double alpha, double beta, double lambda_lo, double lambda_hi, double tol = 1e-6,
                              const SplitConfig& cfg = {});

/// Root of alpha -> Delta_k at fixed (lambda, beta) with twist verification.
BifurcationPoint find_alpha_k(double lambda, double beta, int k, double alpha_lo, double alpha_hi,
                              double tol = 1e-6, const SplitConfig& cfg = {});

/// Root of lambda -> Delta_k at fixed (alpha, beta); k = 0 is find_lambda0.
BifurcationPoint find_lambda_k(double alpha, double beta, int k, double lambda_lo, double lambda_hi,
                               double tol = 1e-6, const SplitConfig& cfg = {});

/// Sub-brackets of [lo, hi] (n uniform cells) over which the exit side of
/// p^u flips, with the twist counts at both ends. Cells with fate
/// interference are skipped.
struct SignChange {
  double lo = 0.0;
  double hi = 0.0;
  int k_lo = 0;
  int k_hi = 0;
};
std::vector<SignChange> scan_sign_changes(const std::function<UnfParams(double)>& at, double lo, double hi, int n,
                                          const SplitConfig& cfg = {});

/// floor(|theta| / pi) for an angle already restricted to the focus region.
int winding_half_turns(double theta_total);

struct Symbol {
  /// 'L' for excursions around E-, 'R' around E+.
  char side = 'R';
  int half_turns = 0;
};

/// One symbol per outer turning point of x (y = 0 with x^2 + z > 1); the side
/// is sign(x). half_turns counts the half-turns about I since the previous
/// symbol: passages between successive y = 0 crossings that change the sign
/// of x while staying above z = 1 + lambda^2/4.
/// Throws FateInterferenceError when the orbit escapes or settles on a focus.
std::vector<Symbol> symbolic_sequence(const UnfParams& p, const State& s0, int n_symbols,
                                      const IntegratorConfig& cfg = {});

}  // namespace unf
