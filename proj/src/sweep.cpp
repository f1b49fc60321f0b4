#include "unf/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "unf/io.hpp"

namespace unf {

namespace {

void check_axis(const Axis& a, const char* name, bool allow_zero) {
  const bool lo_ok = allow_zero ? a.lo >= 0.0 : a.lo > 0.0;
  if (a.n < 1 || !std::isfinite(a.lo) || !std::isfinite(a.hi) || !lo_ok || a.hi < a.lo) {
    throw Error(ErrorKind::InvalidDomain, std::string(name) + " axis needs finite 0 <= lo <= hi and n >= 1");
  }
  if (a.n == 1 && a.hi != a.lo) throw Error(ErrorKind::InvalidDomain, std::string(name) + " axis with n = 1 needs lo == hi");
}

void fill_overlays(SweepGrid& g) {
  g.tigan_lambda.resize(g.alpha.n);
  g.hopf_lambda.resize(g.alpha.n);
  for (int i = 0; i < g.alpha.n; ++i) {
    const double a = g.alpha.at(i);
    g.tigan_lambda[i] = 0.5 * (a + g.beta);
    try {
      g.hopf_lambda[i] = hopf_threshold(a, g.beta);
    } catch (const Error&) {
      g.hopf_lambda[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
}

SweepCell classify_cell(const UnfParams& p, const LyapunovResult& r, double eps_zero) {
  SweepCell c{p.alpha, p.lambda, r.Lambda, AttractorClass::Error};
  try {
    c.cls = classify_attractor(r, eps_zero);
  } catch (const Error&) {
    c.cls = AttractorClass::Error;
  }
  return c;
}

void sweep_rows(SweepGrid& g, int row_lo, int row_hi, const SweepConfig& cfg) {
  const int na = g.alpha.n;
  for (int row = row_lo; row < row_hi; ++row) {
    std::vector<UnfParams> ps;
    std::vector<State> starts;
    std::vector<int> cols;
    for (int i = 0; i < na; ++i) {
      const UnfParams p{g.lambda.at(row), g.alpha.at(i), g.beta};
      SweepCell& cell = g.cells[row * na + i];
      cell = {p.alpha, p.lambda, std::numeric_limits<double>::quiet_NaN(), AttractorClass::Error};
      try {
        starts.push_back(default_lyapunov_start(p));
        ps.push_back(p);
        cols.push_back(i);
      } catch (const Error&) {
      }
    }
    const auto res = largest_lyapunov_batch(ps, starts, cfg.lyap);
    for (std::size_t j = 0; j < res.size(); ++j) g.cells[row * na + cols[j]] = classify_cell(ps[j], res[j], cfg.eps_zero);
  }
}

}  // namespace

SweepGrid sweep_grid(double beta, const Axis& alpha, const Axis& lambda, int workers, const SweepConfig& cfg) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorKind::InvalidDomain, "beta must be positive");
  check_axis(alpha, "alpha", false);
  check_axis(lambda, "lambda", true);
  if (workers < 1) throw Error(ErrorKind::InvalidDomain, "workers must be at least 1");
  cfg.lyap.validate();
  SweepGrid g;
  g.beta = beta;
  g.alpha = alpha;
  g.lambda = lambda;
  g.cells.resize(static_cast<std::size_t>(alpha.n) * lambda.n);
  fill_overlays(g);

  // Static contiguous row blocks; every cell is computed independently so
  // the result does not depend on the block layout.
  const int nw = std::min(workers, lambda.n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nw);
  for (int w = 0; w < nw; ++w) {
    const int lo = lambda.n * w / nw, hi = lambda.n * (w + 1) / nw;
    pool.emplace_back([&, w, lo, hi] {
      try {
        sweep_rows(g, lo, hi, cfg);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return g;
}

void write_sweep_csv(std::ostream& os, const SweepGrid& g) {
  os << "# unf-sweep v1; beta=" << format_double(g.beta) << "; alpha=" << format_double(g.alpha.lo) << ':'
     << format_double(g.alpha.hi) << ':' << g.alpha.n << "; lambda=" << format_double(g.lambda.lo) << ':'
     << format_double(g.lambda.hi) << ':' << g.lambda.n << '\n';
  os << "alpha,lambda,Lambda,class\n";
  for (const auto& c : g.cells) {
    os << format_double(c.alpha) << ',' << format_double(c.lambda) << ',' << format_double(c.Lambda) << ','
       << class_code(c.cls) << '\n';
  }
}

namespace {

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw Error(ErrorKind::InvalidDomain, "malformed number '" + s + "'");
  return v;
}

Axis parse_axis(const std::string& s) {
  const auto a = s.find(':'), b = s.rfind(':');
  if (a == std::string::npos || a == b) throw Error(ErrorKind::InvalidDomain, "malformed axis '" + s + "'");
  return {parse_double(s.substr(0, a)), parse_double(s.substr(a + 1, b - a - 1)), std::stoi(s.substr(b + 1))};
}

}  // namespace

SweepGrid read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# unf-sweep v1; ", 0) != 0) {
    throw Error(ErrorKind::InvalidDomain, "missing unf-sweep v1 header");
  }
  SweepGrid g;
  std::istringstream hs(line.substr(16));
  std::string field;
  while (std::getline(hs, field, ';')) {
    const auto start = field.find_first_not_of(' ');
    const auto eq = field.find('=');
    if (start == std::string::npos || eq == std::string::npos) continue;
    const std::string key = field.substr(start, eq - start), val = field.substr(eq + 1);
    if (key == "beta") g.beta = parse_double(val);
    else if (key == "alpha") g.alpha = parse_axis(val);
    else if (key == "lambda") g.lambda = parse_axis(val);
  }
  if (!std::getline(is, line) || line != "alpha,lambda,Lambda,class") {
    throw Error(ErrorKind::InvalidDomain, "missing column header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, l, L, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, l, ',') || !std::getline(ls, L, ',') || !std::getline(ls, c) ||
        c.size() != 1) {
      throw Error(ErrorKind::InvalidDomain, "malformed row '" + line + "'");
    }
    g.cells.push_back({parse_double(a), parse_double(l), parse_double(L), class_from_code(c[0])});
  }
  if (g.cells.size() != static_cast<std::size_t>(g.alpha.n) * g.lambda.n) {
    throw Error(ErrorKind::InvalidDomain, "cell count does not match the axes");
  }
  fill_overlays(g);
  return g;
}

void write_overlay_csv(std::ostream& os, const SweepGrid& g) {
  os << "alpha,tigan_lambda,hopf_lambda\n";
  for (int i = 0; i < g.alpha.n; ++i) {
    os << format_double(g.alpha.at(i)) << ',' << format_double(g.tigan_lambda[i]) << ','
       << format_double(g.hopf_lambda[i]) << '\n';
  }
}

namespace {

std::optional<BifurcationPoint> root_in(double alpha, double beta, int k, double lo, double hi, double target, int n,
                                        const TraceConfig& cfg, bool nearest) {
  auto at = [&](double l) { return UnfParams{l, alpha, beta}; };
  try {
    return find_lambda_k(alpha, beta, k, lo, hi, cfg.tol, cfg.split);
  } catch (const Error&) {
  }
  std::vector<SignChange> cands;
  try {
    for (const auto& s : scan_sign_changes(at, lo, hi, n, cfg.split)) {
      if (s.k_lo == k && s.k_hi == k) cands.push_back(s);
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  if (nearest) {
    std::stable_sort(cands.begin(), cands.end(), [&](const SignChange& a, const SignChange& b) {
      return std::abs(0.5 * (a.lo + a.hi) - target) < std::abs(0.5 * (b.lo + b.hi) - target);
    });
  }
  for (const auto& s : cands) {
    try {
      return find_lambda_k(alpha, beta, k, s.lo, s.hi, cfg.tol, cfg.split);
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

}  // namespace

CurveTrace trace_curve(double beta, int k, const Axis& alpha, const TraceConfig& cfg) {
  if (k < 0) throw Error(ErrorKind::InvalidDomain, "k must be non-negative");
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidDomain, "beta must be positive");
  check_axis(alpha, "alpha", false);
  if (!(cfg.lambda_lo >= 0.0) || !(cfg.lambda_hi > cfg.lambda_lo) || cfg.scan_points < 2 ||
      !(cfg.bracket_halfwidth > 0.0) || !(cfg.min_step > 0.0) || !(cfg.max_step >= cfg.min_step)) {
    throw Error(ErrorKind::InvalidDomain, "invalid trace configuration");
  }
  CurveTrace out;
  out.k = k;
  out.beta = beta;
  double step = alpha.n > 1 ? (alpha.hi - alpha.lo) / (alpha.n - 1) : cfg.max_step;
  step = std::clamp(step, cfg.min_step, cfg.max_step);
  const double w = cfg.bracket_halfwidth;
  auto push = [&](double a, const BifurcationPoint& b) {
    out.points.push_back({a, b.params.lambda, b.residual, b.half_turns});
  };

  // First root: scan the configured window, moving right until one is found.
  double a = alpha.lo;
  while (out.points.empty()) {
    const double target = cfg.lambda_guess.value_or(cfg.lambda_lo);
    if (auto b = root_in(a, beta, k, cfg.lambda_lo, cfg.lambda_hi, target, cfg.scan_points, cfg, true)) {
      push(a, *b);
      break;
    }
    if (a >= alpha.hi) throw Error(ErrorKind::EmptyTrace, "no homoclinic root found on the alpha range");
    const double next = std::min(a + step, alpha.hi);
    out.gaps.emplace_back(a, next);
    a = next;
  }

  int successes = 0;
  while (a < alpha.hi) {
    const double next = std::min(a + step, alpha.hi);
    const auto& last = out.points.back();
    double pred = last.lambda;
    if (out.points.size() >= 2) {
      const auto& prev = out.points[out.points.size() - 2];
      pred += (last.lambda - prev.lambda) / (last.alpha - prev.alpha) * (next - last.alpha);
    }
    auto b = root_in(next, beta, k, std::max(0.0, pred - w), pred + w, pred, 8, cfg, true);
    // Smoothness guard against jumping to a neighbouring sheet.
    if (b && std::abs(b->params.lambda - last.lambda) > std::max(2.0 * std::abs(pred - last.lambda), 0.25 * w)) {
      b.reset();
    }
    if (b) {
      push(next, *b);
      a = next;
      if (++successes == 3) {
        step = std::min(2.0 * step, cfg.max_step);
        successes = 0;
      }
      continue;
    }
    successes = 0;
    if (step > cfg.min_step) {
      step = std::max(0.5 * step, cfg.min_step);
      continue;
    }
    out.gaps.emplace_back(a, next);
    a = next;
  }
  return out;
}

void write_curve_csv(std::ostream& os, const CurveTrace& c) {
  os << "alpha,lambda,k,residual\n";
  for (const auto& p : c.points) {
    os << format_double(p.alpha) << ',' << format_double(p.lambda) << ',' << c.k << ',' << format_double(p.residual)
       << '\n';
  }
}

}  // namespace unf
