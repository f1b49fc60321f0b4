#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "unf/homoclinic.hpp"
#include "unf/io.hpp"
#include "unf/lyapunov.hpp"
#include "unf/manifolds.hpp"
#include "unf/model.hpp"
#include "unf/ode.hpp"
#include "unf/serialize.hpp"
#include "unf/sweep.hpp"

using namespace unf;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitNumeric = 3;

struct Globals {
  IntegratorConfig ode;
  int workers = 1;
  std::string out;
  std::string format = "json";
};

struct Point {
  double lambda = 0.0, alpha = 0.0, beta = 0.0;
  UnfParams params() const { return {lambda, alpha, beta}; }
};

void add_point(CLI::App* c, Point& p) {
  c->add_option("--lambda", p.lambda, "lambda")->required();
  c->add_option("--alpha", p.alpha, "alpha")->required();
  c->add_option("--beta", p.beta, "beta")->required();
}

Axis parse_axis(const std::string& s, const char* name) {
  std::istringstream is(s);
  std::string lo, hi, n;
  if (!std::getline(is, lo, ':') || !std::getline(is, hi, ':') || !std::getline(is, n)) {
    throw Error(ErrorKind::InvalidDomain, std::string(name) + " must be lo:hi:n");
  }
  try {
    return {std::stod(lo), std::stod(hi), std::stoi(n)};
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidDomain, std::string(name) + " must be lo:hi:n");
  }
}

class Output {
 public:
  explicit Output(const Globals& g) {
    if (!g.out.empty()) {
      file_.open(g.out, std::ios::binary);
      if (!file_) throw Error(ErrorKind::InvalidDomain, "cannot open output file " + g.out);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const Globals& g, const std::string& kind, const Json& payload) {
  Output o(g);
  o.stream() << envelope(kind, payload).dump(2) << '\n';
}

Field3 unf_field(const UnfParams& p) {
  return [p](const State& s) { return unf_vector_field(p, s); };
}

bool csv(const Globals& g) { return g.format == "csv"; }

int run_read(const std::string& path, const Globals& g) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidDomain, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.rfind("# unf-sweep v1", 0) == 0) {
    std::istringstream is(text);
    const auto grid = read_sweep_csv(is);
    if (csv(g)) {
      Output o(g);
      write_sweep_csv(o.stream(), grid);
      return 0;
    }
    emit_json(g, "sweep-summary",
              {{"beta", number(grid.beta)}, {"alpha_n", grid.alpha.n}, {"lambda_n", grid.lambda.n},
               {"cells", grid.cells.size()}});
    return 0;
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidDomain, std::string("not a v1 JSON document: ") + e.what());
  }
  const auto kind = envelope_kind(j);
  // Re-parse typed payloads to validate them against the schema.
  if (kind == "split") split_result_from_json(j.at("result"));
  else if (kind == "find-homoclinic") bifurcation_point_from_json(j.at("result"));
  else if (kind == "lyapunov") lyapunov_result_from_json(j.at("result"));
  Output o(g);
  o.stream() << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal normal form toolkit for Lorenz-like and Chen-like systems"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  Globals g;
  app.add_option("--rtol", g.ode.rtol, "relative tolerance")->envname("UNF_RTOL");
  app.add_option("--atol", g.ode.atol, "absolute tolerance")->envname("UNF_ATOL");
  app.add_option("--t-max", g.ode.t_max, "integration horizon");
  app.add_option("--escape-radius", g.ode.escape_radius, "escape radius");
  app.add_option("--workers", g.workers, "worker threads")->envname("UNF_WORKERS")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output path (stdout when empty)");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));

  // map-params
  auto* mp = app.add_subcommand("map-params", "map generalized Lorenz parameters to the normal form");
  std::string family;
  double ga = 0, gb = 0, gc = 0, gr = 0, gq = 1;
  mp->add_option("--family", family, "lorenz, chen, lu or tigan (empty: use --r/--q)")
      ->check(CLI::IsMember({"", "lorenz", "chen", "lu", "tigan"}));
  mp->add_option("--a", ga, "a")->required();
  mp->add_option("--b", gb, "b")->required();
  mp->add_option("--c", gc, "c (chen, lu, tigan)");
  mp->add_option("--r", gr, "r (lorenz or generic)");
  mp->add_option("--q", gq, "q (generic)");

  // integrate
  auto* in = app.add_subcommand("integrate", "integrate the normal form and write t,x,y,z");
  Point ip;
  add_point(in, ip);
  double x0 = 0.1, y0 = 0.0, z0 = 0.0, t_end = 100.0, sample_dt = 0.05;
  in->add_option("--x0", x0);
  in->add_option("--y0", y0);
  in->add_option("--z0", z0);
  in->add_option("--t-end", t_end, "time span (negative runs backwards)");
  in->add_option("--sample-dt", sample_dt, "output spacing (0: every step)");

  // manifold
  auto* mf = app.add_subcommand("manifold", "unstable hit, stable curve, Riccati ladder or b_k domains");
  Point mfp;
  add_point(mf, mfp);
  std::string what = "unstable";
  int k_max = 8, n_z = 40;
  double z_lo = 0.05, z_hi = 3.0, delta = kDefaultSeedOffset;
  mf->add_option("--what", what)->check(CLI::IsMember({"unstable", "stable", "ladder", "domains"}));
  mf->add_option("--k-max", k_max);
  mf->add_option("--z-lo", z_lo);
  mf->add_option("--z-hi", z_hi);
  mf->add_option("--n", n_z, "stable curve heights");
  mf->add_option("--delta", delta, "seed offset on W^u");

  // split
  auto* sp = app.add_subcommand("split", "split function Delta_k at one parameter point");
  Point spp;
  add_point(sp, spp);

  // find-homoclinic
  auto* fh = app.add_subcommand("find-homoclinic", "locate lambda_k(alpha) or alpha_k(lambda)");
  double fb = 0, fa = 0, fl = 0, flo = 0, fhi = 0, ftol = 1e-6;
  int fk = 0;
  fh->add_option("--beta", fb)->required();
  auto* o_alpha = fh->add_option("--alpha", fa, "fixed alpha (solve in lambda)");
  auto* o_lambda = fh->add_option("--lambda", fl, "fixed lambda (solve in alpha)");
  o_alpha->excludes(o_lambda);
  auto* o_llo = fh->add_option("--lambda-lo", flo);
  auto* o_lhi = fh->add_option("--lambda-hi", fhi);
  double falo = 0, fahi = 0;
  auto* o_alo = fh->add_option("--alpha-lo", falo);
  auto* o_ahi = fh->add_option("--alpha-hi", fahi);
  fh->add_option("--k", fk, "twist index")->check(CLI::NonNegativeNumber);
  fh->add_option("--tol", ftol);

  // lyapunov
  auto* ly = app.add_subcommand("lyapunov", "largest Lyapunov exponent and attractor class");
  Point lyp;
  add_point(ly, lyp);
  LyapunovConfig lcfg;
  double eps_zero = 5e-3;
  ly->add_option("--t-transient", lcfg.t_transient);
  ly->add_option("--t-total", lcfg.t_total);
  ly->add_option("--renorm-dt", lcfg.renorm_dt);
  ly->add_option("--dt", lcfg.dt);
  ly->add_option("--eps-zero", eps_zero);

  // sweep
  auto* sw = app.add_subcommand("sweep", "Lyapunov classification over an (alpha, lambda) grid");
  double sb = 1.05487;
  std::string s_alpha = "0.05:0.45:40", s_lambda = "0.55:0.85:40", overlay;
  SweepConfig scfg;
  sw->add_option("--beta", sb);
  sw->add_option("--alpha", s_alpha, "lo:hi:n");
  sw->add_option("--lambda", s_lambda, "lo:hi:n");
  sw->add_option("--t-transient", scfg.lyap.t_transient);
  sw->add_option("--t-total", scfg.lyap.t_total);
  sw->add_option("--eps-zero", scfg.eps_zero);
  sw->add_option("--overlay", overlay, "also write alpha,tigan_lambda,hopf_lambda here");

  // trace
  auto* tr = app.add_subcommand("trace", "continue a homoclinic curve lambda_k(alpha)");
  double tb = 1.05487;
  int tk = 0;
  std::string t_alpha = "0.25:0.40:16";
  TraceConfig tcfg;
  double guess = std::numeric_limits<double>::quiet_NaN();
  tr->add_option("--beta", tb);
  tr->add_option("--k", tk)->check(CLI::NonNegativeNumber);
  tr->add_option("--alpha", t_alpha, "lo:hi:n");
  tr->add_option("--lambda-lo", tcfg.lambda_lo);
  tr->add_option("--lambda-hi", tcfg.lambda_hi);
  tr->add_option("--lambda-guess", guess);
  tr->add_option("--tol", tcfg.tol);

  // symbols
  auto* sy = app.add_subcommand("symbols", "symbolic encoding of the orbit through the W^u seed");
  Point syp;
  add_point(sy, syp);
  int n_sym = 200;
  double transient = 0.0;
  sy->add_option("--n", n_sym);
  sy->add_option("--transient", transient, "time to discard before encoding");

  // read
  auto* rd = app.add_subcommand("read", "validate a v1 JSON document and echo it, or summarize a sweep CSV (--format csv re-emits it)");
  std::string rd_path;
  rd->add_option("path", rd_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitDomain;
  }

  try {
    g.ode.validate();
    if (*mp) {
      GlParams gp;
      if (family == "lorenz") gp = GlParams::lorenz(ga, gb, gr);
      else if (family == "chen") gp = GlParams::chen(ga, gb, gc);
      else if (family == "lu") gp = GlParams::lu(ga, gb, gc);
      else if (family == "tigan") gp = GlParams::tigan(ga, gb, gc);
      else gp = {ga, gb, gr, gq};
      const auto p = map_p(gp);
      const auto r = classify_region(p);
      if (csv(g)) {
        Output o(g);
        o.stream() << "lambda,alpha,beta,A,zone,on_chen_curve,on_lu_curve\n"
                   << format_double(p.lambda) << ',' << format_double(p.alpha) << ',' << format_double(p.beta) << ','
                   << format_double(p.A()) << ',' << to_string(r.zone) << ',' << r.on_chen_curve << ','
                   << r.on_lu_curve << '\n';
      } else {
        Json j = to_json(p);
        const Json region = to_json(r);
        for (const auto& [k, v] : region.items()) j[k] = v;
        j["gl"] = to_json(gp);
        j["omega"] = number(gp.omega());
        emit_json(g, "map-params", j);
      }
    } else if (*in) {
      const auto traj = integrate(unf_field(ip.params()), {x0, y0, z0}, t_end, g.ode, sample_dt);
      Output o(g);
      if (csv(g)) {
        write_trajectory_csv(o.stream(), traj);
      } else {
        Json t = Json::array(), s = Json::array();
        for (std::size_t i = 0; i < traj.t.size(); ++i) {
          t.push_back(number(traj.t[i]));
          s.push_back(to_json(traj.states[i]));
        }
        o.stream() << envelope("trajectory", {{"params", to_json(ip.params())}, {"t", t}, {"states", s}}).dump(2)
                   << '\n';
      }
    } else if (*mf) {
      const auto p = mfp.params();
      if (what == "unstable") {
        emit_json(g, "unstable-hit", {{"params", to_json(p)}, {"result", to_json(shoot_unstable(p, delta, g.ode))}});
      } else if (what == "stable") {
        const auto c = stable_curve(p, z_lo, z_hi, n_z, g.ode);
        if (csv(g)) {
          Output o(g);
          write_stable_curve_csv(o.stream(), c);
        } else {
          emit_json(g, "stable-curve", {{"params", to_json(p)}, {"result", to_json(c)}});
        }
      } else if (what == "ladder") {
        const auto l = riccati_tau(p, k_max);
        if (csv(g)) {
          Output o(g);
          write_ladder_csv(o.stream(), l);
        } else {
          emit_json(g, "ladder", {{"params", to_json(p)}, {"result", to_json(l)}});
        }
      } else {
        Json arr = Json::array();
        for (const auto& d : domains_b(p, k_max)) {
          arr.push_back({{"k", d.k}, {"z_lo", number(d.z_lo)}, {"z_hi", number(d.z_hi)},
                         {"half_turns", d.half_turns}, {"skirt", d.skirt}});
        }
        emit_json(g, "domains", {{"params", to_json(p)}, {"result", arr}});
      }
    } else if (*sp) {
      SplitConfig c;
      c.ode = g.ode;
      const auto r = split_function(spp.params(), c);
      emit_json(g, "split", {{"params", to_json(spp.params())}, {"result", to_json(r)}});
    } else if (*fh) {
      SplitConfig c;
      c.ode = g.ode;
      BifurcationPoint b;
      if (*o_alpha) {
        if (!*o_llo || !*o_lhi) throw Error(ErrorKind::InvalidDomain, "--lambda-lo and --lambda-hi are required");
        b = find_lambda_k(fa, fb, fk, flo, fhi, ftol, c);
      } else if (*o_lambda) {
        if (!*o_alo || !*o_ahi) throw Error(ErrorKind::InvalidDomain, "--alpha-lo and --alpha-hi are required");
        b = find_alpha_k(fl, fb, fk, falo, fahi, ftol, c);
      } else {
        throw Error(ErrorKind::InvalidDomain, "give --alpha (solve in lambda) or --lambda (solve in alpha)");
      }
      emit_json(g, "find-homoclinic", {{"result", to_json(b)}});
    } else if (*ly) {
      lcfg.escape_radius = g.ode.escape_radius;
      const auto p = lyp.params();
      const auto r = largest_lyapunov(p, default_lyapunov_start(p), lcfg);
      std::string cls;
      try {
        cls = std::string(to_string(classify_attractor(r, eps_zero)));
      } catch (const Error&) {
        cls = "Unconverged";
      }
      emit_json(g, "lyapunov", {{"params", to_json(p)}, {"result", to_json(r)}, {"class", cls}});
    } else if (*sw) {
      scfg.lyap.escape_radius = g.ode.escape_radius;
      const auto grid = sweep_grid(sb, parse_axis(s_alpha, "--alpha"), parse_axis(s_lambda, "--lambda"), g.workers, scfg);
      {
        Output o(g);
        write_sweep_csv(o.stream(), grid);
      }
      if (!overlay.empty()) {
        std::ofstream os(overlay, std::ios::binary);
        if (!os) throw Error(ErrorKind::InvalidDomain, "cannot open " + overlay);
        write_overlay_csv(os, grid);
      }
    } else if (*tr) {
      tcfg.split.ode = g.ode;
      if (std::isfinite(guess)) tcfg.lambda_guess = guess;
      const auto c = trace_curve(tb, tk, parse_axis(t_alpha, "--alpha"), tcfg);
      if (csv(g)) {
        Output o(g);
        write_curve_csv(o.stream(), c);
      } else {
        emit_json(g, "trace", to_json(c));
      }
    } else if (*sy) {
      const auto p = syp.params();
      State s0 = unstable_seed(p, kDefaultSeedOffset);
      if (transient > 0.0) s0 = integrate(unf_field(p), s0, transient, g.ode, transient).states.back();
      const auto s = symbolic_sequence(p, s0, n_sym, g.ode);
      if (csv(g)) {
        Output o(g);
        write_symbols_csv(o.stream(), s);
      } else {
        emit_json(g, "symbols", {{"params", to_json(p)}, {"symbols", to_json(s)}});
      }
    } else if (*rd) {
      return run_read(rd_path, g);
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return is_domain_error(e.kind()) ? kExitDomain : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
