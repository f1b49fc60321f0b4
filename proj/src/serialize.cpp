#include "unf/serialize.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "unf/io.hpp"

namespace unf {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw Error(ErrorKind::InvalidDomain, "expected a number, got " + j.dump());
}

namespace {

double num(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::InvalidDomain, std::string("missing field '") + key + "'");
  return number_from(j.at(key));
}

}  // namespace

Json to_json(const State& s) {
  Json j = Json::array();
  j.push_back(number(s.x));
  j.push_back(number(s.y));
  j.push_back(number(s.z));
  return j;
}

Json to_json(const UnfParams& p) {
  return {{"lambda", number(p.lambda)}, {"alpha", number(p.alpha)}, {"beta", number(p.beta)}, {"A", number(p.A())}};
}

Json to_json(const GlParams& g) {
  return {{"a", number(g.a)}, {"b", number(g.b)}, {"r", number(g.r)}, {"q", number(g.q)}};
}

Json to_json(const RegionLabel& r) {
  return {{"zone", std::string(to_string(r.zone))}, {"on_chen_curve", r.on_chen_curve}, {"on_lu_curve", r.on_lu_curve}};
}

Json to_json(const FateLabel& f) {
  return {{"kind", std::string(to_string(f.kind))}, {"time", number(f.time)}, {"position", to_json(f.position)}};
}

Json to_json(const UnstableHit& h) {
  return {{"x_u", number(h.x_u)},
          {"z_u", number(h.z_u)},
          {"theta", number(h.theta)},
          {"t_flight", number(h.t_flight)},
          {"seed_shift", number(h.seed_shift)}};
}

Json to_json(const SplitResult& r) {
  return {{"k", r.k},
          {"delta", number(r.delta)},
          {"half_turns", r.half_turns},
          {"inside", r.inside},
          {"x_u", number(r.x_u)},
          {"z_u", number(r.z_u)},
          {"x_s", number(r.x_s)},
          {"trace_found", r.trace_found},
          {"exit_side", r.exit_side},
          {"ladder_index", r.ladder_index},
          {"boundary_degenerate", r.boundary_degenerate}};
}

SplitResult split_result_from_json(const Json& j) {
  SplitResult r;
  r.k = j.at("k").get<int>();
  r.delta = num(j, "delta");
  r.half_turns = j.at("half_turns").get<int>();
  r.inside = j.at("inside").get<bool>();
  r.x_u = num(j, "x_u");
  r.z_u = num(j, "z_u");
  r.x_s = num(j, "x_s");
  r.trace_found = j.at("trace_found").get<bool>();
  r.exit_side = j.at("exit_side").get<int>();
  r.ladder_index = j.at("ladder_index").get<int>();
  r.boundary_degenerate = j.at("boundary_degenerate").get<bool>();
  return r;
}

UnfParams unf_params_from_json(const Json& j) { return {num(j, "lambda"), num(j, "alpha"), num(j, "beta")}; }

Json to_json(const BifurcationPoint& b) {
  return {{"params", to_json(b.params)},
          {"k", b.k},
          {"orientation", std::string(to_string(b.orientation))},
          {"residual", number(b.residual)},
          {"half_turns", b.half_turns},
          {"bracket", Json::array({number(b.bracket_lo), number(b.bracket_hi)})},
          {"evaluations", b.evaluations}};
}

BifurcationPoint bifurcation_point_from_json(const Json& j) {
  BifurcationPoint b;
  b.params = unf_params_from_json(j.at("params"));
  b.k = j.at("k").get<int>();
  const auto o = j.at("orientation").get<std::string>();
  if (o == "Oriented") b.orientation = Orientation::Oriented;
  else if (o == "NonOriented") b.orientation = Orientation::NonOriented;
  else throw Error(ErrorKind::InvalidDomain, "unknown orientation '" + o + "'");
  b.residual = num(j, "residual");
  b.half_turns = j.at("half_turns").get<int>();
  b.bracket_lo = number_from(j.at("bracket").at(0));
  b.bracket_hi = number_from(j.at("bracket").at(1));
  b.evaluations = j.at("evaluations").get<int>();
  return b;
}

Json to_json(const LyapunovResult& r) {
  return {{"Lambda", number(r.Lambda)},
          {"t_used", number(r.t_used)},
          {"converged", r.converged},
          {"uncertainty", number(r.uncertainty)},
          {"escaped", r.escaped}};
}

LyapunovResult lyapunov_result_from_json(const Json& j) {
  LyapunovResult r;
  r.Lambda = num(j, "Lambda");
  r.t_used = num(j, "t_used");
  r.converged = j.at("converged").get<bool>();
  r.uncertainty = num(j, "uncertainty");
  r.escaped = j.at("escaped").get<bool>();
  return r;
}

Json to_json(const RiccatiLadder& l) {
  Json tau = Json::array(), zk = Json::array();
  for (double t : l.tau) tau.push_back(number(t));
  for (double z : l.zk) zk.push_back(number(z));
  return {{"eta0", number(l.eta0)}, {"tau", tau},       {"zk", zk}, {"T_inf", number(l.T_inf)},
          {"z_star", number(l.z_star)}, {"truncated", l.truncated}};
}

Json to_json(const StableCurve& c) {
  Json s = Json::array(), z = Json::array();
  for (const auto& p : c.samples) s.push_back(Json::array({number(p.z), number(p.x)}));
  for (double v : c.zero_ladder) z.push_back(number(v));
  return {{"samples", s}, {"zero_ladder", z}, {"z_star", number(c.z_star)}};
}

Json to_json(const CurveTrace& c) {
  Json pts = Json::array(), gaps = Json::array();
  for (const auto& p : c.points) {
    pts.push_back({{"alpha", number(p.alpha)},
                   {"lambda", number(p.lambda)},
                   {"residual", number(p.residual)},
                   {"half_turns", p.half_turns}});
  }
  for (const auto& g : c.gaps) gaps.push_back(Json::array({number(g.first), number(g.second)}));
  return {{"k", c.k}, {"beta", number(c.beta)}, {"points", pts}, {"gaps", gaps}};
}

Json to_json(const std::vector<Symbol>& s) {
  Json out = Json::array();
  for (const auto& x : s) out.push_back({{"side", std::string(1, x.side)}, {"half_turns", x.half_turns}});
  return out;
}

Json envelope(const std::string& kind, const Json& payload) {
  Json j = {{"v", kSchemaVersion}, {"kind", kind}};
  if (payload.is_object()) {
    for (const auto& [k, v] : payload.items()) j[k] = v;
  } else {
    j["data"] = payload;
  }
  return j;
}

std::string envelope_kind(const Json& j) {
  if (!j.is_object() || !j.contains("v") || j.at("v") != kSchemaVersion) {
    throw Error(ErrorKind::InvalidDomain, "not a v1 document");
  }
  if (!j.contains("kind") || !j.at("kind").is_string()) throw Error(ErrorKind::InvalidDomain, "missing kind");
  return j.at("kind").get<std::string>();
}

void write_stable_curve_csv(std::ostream& os, const StableCurve& c) {
  os << "z,x\n";
  for (const auto& s : c.samples) os << format_double(s.z) << ',' << format_double(s.x) << '\n';
}

void write_ladder_csv(std::ostream& os, const RiccatiLadder& l) {
  os << "k,tau,zk\n";
  for (std::size_t k = 0; k < l.tau.size(); ++k) {
    os << k + 1 << ',' << format_double(l.tau[k]) << ',' << format_double(l.zk[k]) << '\n';
  }
}

void write_symbols_csv(std::ostream& os, const std::vector<Symbol>& s) {
  os << "index,side,half_turns\n";
  for (std::size_t i = 0; i < s.size(); ++i) os << i << ',' << s[i].side << ',' << s[i].half_turns << '\n';
}

}  // namespace unf
