#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "unf/error.hpp"
#include "unf/serialize.hpp"

using namespace unf;

TEST_CASE("non-finite numbers") {
  CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(number(std::nan("")) == "nan");
  CHECK(std::isnan(number_from(number(std::nan("")))));
  CHECK(number_from(Json(0.1)) == 0.1);
  CHECK_THROWS_AS(number_from(Json("x")), Error);
  CHECK_THROWS_AS(number_from(Json::array()), Error);
}

TEST_CASE("round trips through text") {
  auto through_text = [](const Json& j) { return Json::parse(j.dump()); };

  const UnfParams p{0.1 + 0.2, 1.0 / 3, 2.4713322};
  const auto q = unf_params_from_json(through_text(to_json(p)));
  CHECK(q.lambda == p.lambda);
  CHECK(q.alpha == p.alpha);
  CHECK(q.beta == p.beta);

  SplitResult s;
  s.k = 3;
  s.delta = -0.123456789012345;
  s.half_turns = 3;
  s.inside = true;
  s.x_u = 0.7;
  s.z_u = 2.25;
  s.x_s = std::nan("");
  s.exit_side = -1;
  s.ladder_index = 2;
  s.boundary_degenerate = true;
  const auto t = split_result_from_json(through_text(to_json(s)));
  CHECK(t.k == s.k);
  CHECK(t.delta == s.delta);
  CHECK(t.inside);
  CHECK(std::isnan(t.x_s));
  CHECK(t.exit_side == -1);
  CHECK(t.ladder_index == 2);
  CHECK(t.boundary_degenerate);

  BifurcationPoint b;
  b.params = p;
  b.k = 1;
  b.orientation = Orientation::NonOriented;
  b.residual = 3e-9;
  b.half_turns = 1;
  b.bracket_lo = 0.18;
  b.bracket_hi = 0.1800001;
  b.evaluations = 17;
  const auto c = bifurcation_point_from_json(through_text(to_json(b)));
  CHECK(c.params.alpha == p.alpha);
  CHECK(c.orientation == Orientation::NonOriented);
  CHECK(c.bracket_hi == b.bracket_hi);
  CHECK(c.evaluations == 17);

  LyapunovResult l;
  l.Lambda = std::numeric_limits<double>::infinity();
  l.escaped = true;
  l.t_used = 70.5;
  const auto m = lyapunov_result_from_json(through_text(to_json(l)));
  CHECK(std::isinf(m.Lambda));
  CHECK(m.escaped);
  CHECK(m.t_used == 70.5);
}

TEST_CASE("envelopes") {
  const Json e = envelope("split", to_json(SplitResult{}));
  CHECK(e.at("v") == kSchemaVersion);
  CHECK(e.begin().key() == "v");
  CHECK(envelope_kind(e) == "split");
  Json wrong = e;
  wrong["v"] = 2;
  CHECK_THROWS_AS(envelope_kind(wrong), Error);
  CHECK_THROWS_AS(envelope_kind(Json::object()), Error);
}

TEST_CASE("symbol CSV") {
  std::ostringstream os;
  write_symbols_csv(os, {{'R', 0}, {'L', 2}});
  CHECK(os.str() == "index,side,half_turns\n0,R,0\n1,L,2\n");
  const Json j = to_json(std::vector<Symbol>{{'L', 1}});
  CHECK(j.dump() == R"([{"side":"L","half_turns":1}])");
}
