#include "bnlab_cli/cli.hpp"

#include "json_out.hpp"

#include <bnlab/acceptance.hpp>
#include <bnlab/constants.hpp>
#include <bnlab/errors.hpp>
#include <bnlab/reduced_energy.hpp>
#include <bnlab/shooting.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace bnlab::cli {

namespace {

using Json = nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int dim = 5;
  double quad_tol = 1e-10;
  double ode_tol = 1e-11;
  double root_tol = 1e-13;
  std::string output;
  std::string out_path;
  std::uint64_t seed = 20240611;
  int threads = 0;
  std::vector<double> eps_grid;
  double eps = kNaN, s1 = kNaN, s2 = kNaN, d1 = kNaN, d2 = kNaN;
  double lambda = kNaN, u0 = kNaN;
  bool linear = false;
  bool fast = false;
  bool timing = false;
  int samples = 400;
  std::string in_path;
};

// Parsed flags plus which ones were given explicitly.
struct Invocation {
  Config cfg;
  bool dim_given = false;
};

Json tolerances(const Config& c) {
  return Json{{"quad_rel_tol", c.quad_tol}, {"ode_rel_tol", c.ode_tol}, {"root_x_tol", c.root_tol}};
}

Json envelope(const std::string& command, const Config& c) {
  Json j;
  j["schema"] = "bnlab/1";
  j["command"] = command;
  j["dim"] = c.dim;
  j["tolerances"] = tolerances(c);
  return j;
}

int effective_threads(const Config& c) {
  int n = c.threads > 0 ? c.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("BNLAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
}

// Runs f(i) for i in [0, count) on up to `threads` workers; results are
// written by index so the gathered order is deterministic.
template <class F>
void parallel_for(std::size_t count, int threads, F f) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) f(i);
  };
  std::vector<std::jthread> pool;
  for (int t = 1; t < std::min<int>(threads, static_cast<int>(count)); ++t) pool.emplace_back(worker);
  worker();
}

std::shared_ptr<const ProblemData> problem(const Config& c) {
  return ConstantsCache::shared().get(Dimension(c.dim), c.quad_tol);
}

QuadratureSpec quad(const Config& c) {
  QuadratureSpec q;
  q.rel_tol = c.quad_tol;
  return q;
}

ShootSpec shoot_spec(const Config& c) {
  ShootSpec s;
  s.ode_rel_tol = c.ode_tol;
  s.root_x_tol = c.root_tol;
  s.nonlinear = !c.linear;
  return s;
}

void require_dim(const Config& c, std::initializer_list<int> allowed, const char* command) {
  if (std::find(allowed.begin(), allowed.end(), c.dim) == allowed.end()) {
    std::string list;
    for (int n : allowed) list += (list.empty() ? "" : ", ") + std::to_string(n);
    throw UsageError(std::string("--dim: ") + command + " supports N in {" + list + "}");
  }
}

void require(double v, const char* flag) {
  if (std::isnan(v)) throw UsageError(std::string(flag) + " is required");
}

void require_grid(const Config& c) {
  if (c.eps_grid.empty()) throw UsageError("--eps-grid is required");
  for (std::size_t i = 0; i < c.eps_grid.size(); ++i)
    if (!(c.eps_grid[i] > 0.0) || (i > 0 && !(c.eps_grid[i] < c.eps_grid[i - 1])))
      throw UsageError("--eps-grid must be positive and strictly decreasing");
}

std::string format_for(const Config& c, const char* fallback, std::initializer_list<const char*> allowed) {
  const std::string f = c.output.empty() ? fallback : c.output;
  for (const char* a : allowed)
    if (f == a) return f;
  throw UsageError("--output: format '" + f + "' not available for this command");
}

// ------------------------------------------------------------ commands

Json cmd_eig(const Config& c) {
  const auto d = problem(c);
  const auto f = eigen_functionals(d->pair, quad(c));
  Json j = envelope("eig", c);
  j["lambda1"] = d->pair.eigenvalue;
  j["e1_at_0"] = f.center_value;
  j["int_e1_sq"] = f.integral_sq;
  j["int_e1_p1"] = f.integral_critical_power;
  return j;
}

Json cmd_constants(const Config& c) {
  const auto d = problem(c);
  const auto& u = d->universal;
  Json j = envelope("constants", c);
  j["universal"] = Json{{"int_U_sq", u.bubble_sq ? Json(*u.bubble_sq) : Json(nullptr)},
                        {"int_U_sq_divergent", !u.bubble_sq.has_value()},
                        {"int_U_p", u.bubble_power},
                        {"int_U_p1", u.bubble_critical},
                        {"sobolev_S", u.sobolev}};
  if (c.dim == 4 || c.dim == 5) {
    std::optional<double> factor;
    if (c.dim == 5) factor = std::isnan(c.d2) ? critical_point_n5(coeffs_n5(d->pair, u, quad(c))).coords[1] : c.d2;
    const auto l = linear_constants(d->pair, factor, quad(c));
    Json lin{{"A", l.kernel_norm}, {"A0", l.kernel_correction}, {"B", l.eigen_coupling},
             {"B0", l.eigen_coupling_boundary}, {"C0", l.interaction ? Json(*l.interaction) : Json(nullptr)},
             {"D0", l.eigen_norm}};
    if (c.dim == 4) {
      lin["B_pz"] = l.pz_norm_leading;
      lin["B0_pz"] = l.pz_norm_correction;
    }
    if (factor) lin["C0_d2"] = *factor;
    j["linear"] = lin;
  }
  return j;
}

Json coeffs_json(const Config& c) {
  const auto d = problem(c);
  if (c.dim == 4) {
    const auto b = coeffs_n4(d->pair, d->universal, quad(c));
    return Json{{"b1", b.amplitude_quadratic}, {"b2", b.cross}, {"b3", b.concentration_quadratic}};
  }
  const auto a = coeffs_n5(d->pair, d->universal, quad(c));
  return Json{{"a1", a.amplitude_quadratic}, {"a2", a.amplitude_power}, {"a3", a.cross},
              {"a4", a.concentration_quadratic}};
}

Json cmd_coeffs(const Config& c) {
  require_dim(c, {4, 5}, "coeffs");
  Json j = envelope("coeffs", c);
  j["coeffs"] = coeffs_json(c);
  return j;
}

Json cmd_critical(const Config& c) {
  require_dim(c, {4, 5}, "critical");
  const auto d = problem(c);
  Json j = envelope("critical", c);
  j["coeffs"] = coeffs_json(c);
  if (c.dim == 4) {
    const auto b = coeffs_n4(d->pair, d->universal, quad(c));
    const auto cp = critical_point_n4(b);
    j["s1"] = cp.coords[0];
    j["s2"] = cp.coords[1];
    j["classification"] = std::string(to_string(cp.kind));
    j["discriminant"] = b.cross * b.cross - 4.0 * b.amplitude_quadratic * b.concentration_quadratic;
    j["psi"] = reduced_energy_n4(cp.coords[0], cp.coords[1], b);
    j["hessian_det"] = cp.hessian_det;
    j["hessian_trace"] = cp.hessian_trace;
  } else {
    const auto a = coeffs_n5(d->pair, d->universal, quad(c));
    const auto cp = critical_point_n5(a);
    j["d1"] = cp.coords[0];
    j["d2"] = cp.coords[1];
    j["classification"] = std::string(to_string(cp.kind));
    j["G1"] = amplitude_energy_n5(cp.coords[0], a);
    j["G2"] = concentration_energy_n5(cp.coords[0], cp.coords[1], a);
    j["hessian_det"] = cp.hessian_det;
    j["hessian_trace"] = cp.hessian_trace;
  }
  return j;
}

// Ansatz at the flags' coordinates, defaulting to the critical point.
AnsatzParams ansatz_at(const Config& c, double eps) {
  const auto d = problem(c);
  if (c.dim == 4) {
    const auto cp = critical_point_n4(coeffs_n4(d->pair, d->universal, quad(c)));
    return AnsatzParams::n4(eps, std::isnan(c.s1) ? cp.coords[0] : c.s1, std::isnan(c.s2) ? cp.coords[1] : c.s2,
                            d->pair.eigenvalue);
  }
  const auto cp = critical_point_n5(coeffs_n5(d->pair, d->universal, quad(c)));
  return AnsatzParams::n5(eps, std::isnan(c.d1) ? cp.coords[0] : c.d1, std::isnan(c.d2) ? cp.coords[1] : c.d2,
                          d->pair.eigenvalue);
}

// leading-order prediction of J - S^{N/2}/N
double predicted_excess(const Config& c, const AnsatzParams& a) {
  const auto d = problem(c);
  if (c.dim == 4) {
    const auto b = coeffs_n4(d->pair, d->universal, quad(c));
    return expansion_prefactor_n4(a.eps) * reduced_energy_n4(a.scaled[0], a.scaled[1], b);
  }
  const auto co = coeffs_n5(d->pair, d->universal, quad(c));
  return std::pow(a.eps, 2.5) * amplitude_energy_n5(a.scaled[0], co);
}

double residual_scale(int dim, double eps) {
  return dim == 4 ? eps * std::exp(-1.0 / eps) : std::pow(eps, 1.5);
}

Json ansatz_fields(const AnsatzParams& a) {
  Json j;
  j["eps"] = a.eps;
  j["lambda"] = a.lambda;
  j[a.dim.value() == 4 ? "s1" : "d1"] = a.scaled[0];
  j[a.dim.value() == 4 ? "s2" : "d2"] = a.scaled[1];
  j["delta"] = a.concentration();
  j["tau"] = a.amplitude();
  j["log_delta"] = a.log_concentration;
  j["log_tau"] = a.log_amplitude;
  return j;
}

Json cmd_energy(const Config& c) {
  require_dim(c, {4, 5}, "energy");
  require(c.eps, "--eps");
  const auto d = problem(c);
  const auto a = ansatz_at(c, c.eps);
  const double excess = ansatz_energy_excess(a, d->pair, d->universal, quad(c));
  const double level = d->universal.bubble_critical / c.dim;
  const double pred = predicted_excess(c, a);
  Json j = envelope("energy", c);
  j["ansatz"] = ansatz_fields(a);
  j["critical_level"] = level;
  j["J"] = level + excess;
  j["J_excess"] = excess;
  j["J_pred_excess"] = pred;
  j["ratio"] = excess / pred;
  return j;
}

Json cmd_residual(const Config& c) {
  require_dim(c, {4, 5}, "residual");
  require(c.eps, "--eps");
  const auto d = problem(c);
  const auto a = ansatz_at(c, c.eps);
  const double r = residual_norm(a, d->pair, quad(c));
  Json j = envelope("residual", c);
  j["ansatz"] = ansatz_fields(a);
  j["residual"] = r;
  j["scaled_residual"] = r / residual_scale(c.dim, c.eps);
  j["scale"] = c.dim == 4 ? "eps*exp(-1/eps)" : "eps^(3/2)";
  return j;
}

std::string cmd_sweep(const Config& c, std::string& format) {
  require_dim(c, {4, 5}, "sweep");
  require_grid(c);
  format = format_for(c, "csv", {"csv", "json"});
  const auto d = problem(c);
  struct Row {
    double eps, j, pred, res, ratio;
  };
  std::vector<Row> rows(c.eps_grid.size());
  std::vector<std::string> errors(rows.size());
  parallel_for(rows.size(), effective_threads(c), [&](std::size_t i) {
    try {
      const double eps = c.eps_grid[i];
      const auto a = ansatz_at(c, eps);
      const double excess = ansatz_energy_excess(a, d->pair, d->universal, quad(c));
      const double pred = predicted_excess(c, a);
      rows[i] = {eps, excess, pred, residual_norm(a, d->pair, quad(c)), excess / pred};
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw Error(e);
  if (format == "json") {
    Json j = envelope("sweep", c);
    Json arr = Json::array();
    for (const auto& r : rows)
      arr.push_back(Json{{"eps", r.eps}, {"J", r.j}, {"J_pred", r.pred}, {"residual", r.res}, {"ratio", r.ratio}});
    j["rows"] = arr;
    return dump17(j);
  }
  std::string out = "eps,J,J_pred,residual,ratio\n";
  for (const auto& r : rows)
    out += g17(r.eps) + "," + g17(r.j) + "," + g17(r.pred) + "," + g17(r.res) + "," + g17(r.ratio) + "\n";
  return out;
}

std::string cmd_shoot(const Config& c, std::string& format) {
  require(c.lambda, "--lambda");
  require(c.u0, "--u0");
  if (c.u0 == 0.0) throw UsageError("--u0 must be non-zero");
  format = format_for(c, "json", {"json", "csv"});
  const auto s = shoot(Dimension(c.dim), c.lambda, c.u0, shoot_spec(c));
  if (format == "csv") {
    std::string out = "r,u,du\n";
    const double lo = std::log(std::min(1e-3, 1e-2 * s.concentration));
    out += "0," + g17(c.u0) + ",0\n";
    for (int k = 0; k < c.samples; ++k) {
      const double r = std::exp(lo * (1.0 - static_cast<double>(k) / (c.samples - 1)));
      out += g17(r) + "," + g17(s.profile(r)) + "," + g17(s.profile.derivative(r)) + "\n";
    }
    return out;
  }
  Json j = envelope("shoot", c);
  j["lambda"] = s.lambda;
  j["u0"] = s.u0;
  j["nonlinear"] = !c.linear;
  j["blew_up"] = s.blew_up;
  j["concentration"] = s.concentration;
  j["boundary_value"] = s.boundary_value;
  j["node_count"] = s.node_count;
  j["min_value"] = s.min_value;
  j["energy"] = s.energy;
  j["ode_residual"] = ode_residual(s);
  return dump17(j);
}

const char* kBranchHeader = "eps,lambda,u0,delta_hat,tau_hat,d1_hat,d2_hat,energy,node_count,min_value\n";

std::string cmd_branch(const Config& c, std::string& format, std::string& failure) {
  require_dim(c, {4, 5, 6}, "branch");
  require_grid(c);
  format = format_for(c, "csv", {"csv", "json"});
  const auto d = problem(c);
  BranchSpec bs;
  bs.shoot = shoot_spec(c);
  const auto br = continue_branch(Dimension(c.dim), c.eps_grid, d->pair, bs);
  if (!br.complete()) failure = "branch lost: " + br.message;
  if (format == "json") {
    Json j = envelope("branch", c);
    Json arr = Json::array();
    for (const auto& p : br.points)
      arr.push_back(Json{{"eps", p.eps}, {"lambda", p.lambda}, {"u0", p.u0}, {"delta_hat", p.delta_hat},
                         {"tau_hat", p.tau_hat}, {"log_delta_hat", p.log_delta_hat}, {"log_tau_hat", p.log_tau_hat},
                         {"d1_hat", p.d1_hat}, {"d2_hat", p.d2_hat}, {"energy", p.energy},
                         {"node_count", p.node_count}, {"min_value", p.min_value}, {"separation", p.separation},
                         {"ode_residual", p.ode_residual}});
    j["points"] = arr;
    j["complete"] = br.complete();
    if (br.lost_at) j["lost_at"] = *br.lost_at;
    return dump17(j);
  }
  std::string out = kBranchHeader;
  for (const auto& p : br.points)
    out += g17(p.eps) + "," + g17(p.lambda) + "," + g17(p.u0) + "," + g17(p.delta_hat) + "," + g17(p.tau_hat) + "," +
           g17(p.d1_hat) + "," + g17(p.d2_hat) + "," + g17(p.energy) + "," + std::to_string(p.node_count) + "," +
           g17(p.min_value) + "\n";
  return out;
}

std::vector<NodalBranchPoint> read_branch_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--in: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw UsageError("--in: empty file");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) cols.push_back(f);
  }
  auto index = [&](const char* name) {
    const auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end()) throw UsageError(std::string("--in: missing column ") + name);
    return static_cast<std::size_t>(it - cols.begin());
  };
  const std::size_t ie = index("eps"), il = index("lambda"), iu = index("u0"), id = index("delta_hat"),
                    it = index("tau_hat"), i1 = index("d1_hat"), i2 = index("d2_hat"), ij = index("energy"),
                    in_ = index("node_count"), im = index("min_value");
  std::vector<NodalBranchPoint> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) v.push_back(std::strtod(f.c_str(), nullptr));
    if (v.size() != cols.size()) throw UsageError("--in: ragged row");
    NodalBranchPoint p{};
    p.eps = v[ie];
    p.lambda = v[il];
    p.u0 = v[iu];
    p.delta_hat = v[id];
    p.tau_hat = v[it];
    p.log_delta_hat = std::log(p.delta_hat);
    p.log_tau_hat = std::log(p.tau_hat);
    p.d1_hat = v[i1];
    p.d2_hat = v[i2];
    p.energy = v[ij];
    p.node_count = static_cast<int>(v[in_]);
    p.min_value = v[im];
    pts.push_back(p);
  }
  return pts;
}

Json cmd_fit(const Config& c) {
  require_dim(c, {4, 5, 6}, "fit");
  if (c.in_path.empty()) throw UsageError("--in is required");
  const auto pts = read_branch_csv(c.in_path);
  const auto fit = fit_asymptotics(pts, c.dim);
  Json j = envelope("fit", c);
  j["points"] = pts.size();
  if (c.dim == 4) {
    Json q = Json::array(), s = Json::array();
    for (std::size_t i = 0; i < fit.eps.size(); ++i) {
      q.push_back(Json{{"eps", fit.eps[i]}, {"q", fit.exponent_ratio[i]}});
      s.push_back(Json{{"eps", fit.eps[i]}, {"log_s1_hat", fit.log_scale_factor[i]}});
    }
    j["q"] = q;
    j["log_s1_hat"] = s;
  } else {
    j["slope_log_tau"] = fit.amplitude_slope;
    j["slope_log_delta"] = fit.concentration_slope;
    j["d1_hat"] = fit.amplitude_limit;
    j["d2_hat"] = fit.concentration_limit;
  }
  return j;
}

int cmd_verify(const Invocation& inv, std::string& text, std::string& format) {
  const Config& c = inv.cfg;
  format = format_for(c, "text", {"text", "json"});
  AcceptanceOptions o;
  o.fast = c.fast;
  o.seed = c.seed;
  o.threads = effective_threads(c);
  if (inv.dim_given) o.dim = c.dim;
  const auto results = run_acceptance(o);
  const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  if (format == "json") {
    Json j;
    j["schema"] = "bnlab/1";
    j["command"] = "verify";
    j["fast"] = c.fast;
    j["seed"] = c.seed;
    j["dim"] = inv.dim_given ? Json(c.dim) : Json(nullptr);
    Json arr = Json::array();
    for (const auto& r : results) {
      Json e{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}};
      if (c.timing) e["seconds"] = r.seconds;
      arr.push_back(e);
    }
    j["criteria"] = arr;
    j["all_pass"] = all;
    text = dump17(j);
  } else {
    for (const auto& r : results) text += format_result_line(r, c.timing) + "\n";
    int passed = 0;
    for (const auto& r : results) passed += r.pass;
    text += std::to_string(passed) + "/" + std::to_string(results.size()) + " criteria passed\n";
  }
  return all ? 0 : 1;
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw UsageError("--out: cannot write '" + c.out_path + "'");
  f << text;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Invocation inv;
  Config& c = inv.cfg;
  CLI::App app{"bnlab: sign-changing blow-up solutions of the critical Dirichlet problem on the unit ball"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file mirroring the flags; flags take precedence");
  auto* dim_opt = app.add_option("--dim", c.dim, "space dimension N")->check(CLI::Range(3, 6));
  app.add_option("--quad-tol", c.quad_tol, "quadrature relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--ode-tol", c.ode_tol, "shooting ODE relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--root-tol", c.root_tol, "root tolerance on log u0")->check(CLI::PositiveNumber);
  app.add_option("--output", c.output, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", c.out_path, "write output to this file instead of stdout");
  app.add_option("--seed", c.seed, "seed for randomized checks");
  app.add_option("--threads", c.threads, "worker threads (capped by BNLAB_THREADS)")->check(CLI::NonNegativeNumber);
  app.add_option("--eps-grid", c.eps_grid, "strictly decreasing eps values")->delimiter(',');
  app.add_option("--eps", c.eps, "eps = |lambda - lambda1|")->check(CLI::PositiveNumber);
  app.add_option("--s1", c.s1, "N=4 concentration coordinate")->check(CLI::PositiveNumber);
  app.add_option("--s2", c.s2, "N=4 amplitude coordinate")->check(CLI::PositiveNumber);
  app.add_option("--d1", c.d1, "N=5 amplitude coordinate")->check(CLI::PositiveNumber);
  app.add_option("--d2", c.d2, "N=5 concentration coordinate")->check(CLI::PositiveNumber);
  app.add_option("--lambda", c.lambda, "lambda for shoot");
  app.add_option("--u0", c.u0, "shooting height u(0)");
  app.add_flag("--linear", c.linear, "shoot the linear equation (nonlinearity off)");
  app.add_option("--samples", c.samples, "profile samples for shoot --output csv")->check(CLI::Range(2, 1000000));
  app.add_option("--in", c.in_path, "branch CSV for fit");
  app.add_flag("--fast", c.fast, "verify: coarser sweeps, same tolerances");
  app.add_flag("--timing", c.timing, "verify: include per-criterion wall time");

  const std::vector<std::pair<const char*, const char*>> commands{
      {"eig", "first eigenpair of the ball"},
      {"constants", "universal integrals and linear-theory constants"},
      {"coeffs", "reduced-energy coefficients"},
      {"critical", "critical point of the reduced energy"},
      {"energy", "ansatz energy against its expansion"},
      {"residual", "ansatz residual norm"},
      {"sweep", "energy and residual over an eps grid (CSV)"},
      {"shoot", "one radial shot"},
      {"branch", "two-nodal-region branch continuation (CSV)"},
      {"fit", "asymptotic fit of a branch CSV"},
      {"verify", "run the acceptance criteria"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  inv.dim_given = dim_opt->count() > 0;
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::string text, format = "json";
    int code = 0;
    if (command == "verify") {
      code = cmd_verify(inv, text, format);
    } else if (command == "sweep") {
      text = cmd_sweep(c, format);
    } else if (command == "shoot") {
      text = cmd_shoot(c, format);
    } else if (command == "branch") {
      std::string failure;
      text = cmd_branch(c, format, failure);
      if (!failure.empty()) {
        err << failure << "\n";
        code = 1;
      }
    } else {
      format_for(c, "json", {"json"});
      Json j;
      if (command == "eig") j = cmd_eig(c);
      else if (command == "constants") j = cmd_constants(c);
      else if (command == "coeffs") j = cmd_coeffs(c);
      else if (command == "critical") j = cmd_critical(c);
      else if (command == "energy") j = cmd_energy(c);
      else if (command == "residual") j = cmd_residual(c);
      else if (command == "fit") j = cmd_fit(c);
      text = dump17(j);
    }
    emit(c, text, out);
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace bnlab::cli
