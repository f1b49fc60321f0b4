#pragma once

#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "unf/homoclinic.hpp"
#include "unf/lyapunov.hpp"
#include "unf/manifolds.hpp"
#include "unf/model.hpp"
#include "unf/sweep.hpp"

namespace unf {

using Json = nlohmann::ordered_json;

/// Schema version written as the top-level "v" field.
inline constexpr int kSchemaVersion = 1;

/// Numbers that JSON cannot hold (NaN, +-inf) are written as the strings
/// "nan", "inf", "-inf" and read back as such.
Json number(double v);
double number_from(const Json& j);

Json to_json(const State& s);
Json to_json(const UnfParams& p);
Json to_json(const GlParams& g);
Json to_json(const RegionLabel& r);
Json to_json(const FateLabel& f);
Json to_json(const UnstableHit& h);
Json to_json(const SplitResult& r);
Json to_json(const BifurcationPoint& b);
Json to_json(const LyapunovResult& r);
Json to_json(const RiccatiLadder& l);
Json to_json(const StableCurve& c);
Json to_json(const CurveTrace& c);
Json to_json(const std::vector<Symbol>& s);

UnfParams unf_params_from_json(const Json& j);
SplitResult split_result_from_json(const Json& j);
BifurcationPoint bifurcation_point_from_json(const Json& j);
LyapunovResult lyapunov_result_from_json(const Json& j);

/// Wraps a payload as {"v": 1, "kind": kind, ...payload}.
Json envelope(const std::string& kind, const Json& payload);
/// Checks the version and returns the kind; throws InvalidDomain otherwise.
std::string envelope_kind(const Json& j);

/// Columns z,x.
void write_stable_curve_csv(std::ostream& os, const StableCurve& c);
/// Columns k,tau,zk.
void write_ladder_csv(std::ostream& os, const RiccatiLadder& l);
/// Columns index,side,half_turns.
void write_symbols_csv(std::ostream& os, const std::vector<Symbol>& s);

}  // namespace unf
