#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <future>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "linealloc/analytic.hpp"
#include "linealloc/assign.hpp"
#include "linealloc/common.hpp"
#include "linealloc/distributions.hpp"
#include "linealloc/embed.hpp"
#include "linealloc/hetcap.hpp"
#include "linealloc/spatial.hpp"

namespace linealloc {

using json = nlohmann::json;

inline std::string fmtg(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// CSV cells never carry separators; anything foreign (error text) is scrubbed.
inline std::string csv_safe(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  return s;
}

inline std::string law_token(const DistanceLaw& d) {
  char buf[120];
  switch (d.kind) {
    case LawKind::Exponential:
      std::snprintf(buf, sizeof buf, "exp(rate=%.12g)", d.rate);
      break;
    case LawKind::Deterministic:
      std::snprintf(buf, sizeof buf, "det(value=%.12g)", d.value);
      break;
    case LawKind::Uniform:
      std::snprintf(buf, sizeof buf, "unif(max=%.12g)", d.b);
      break;
    case LawKind::HyperExp2:
      std::snprintf(buf, sizeof buf, "h2(p1=%.12g mu1=%.12g mu2=%.12g)", d.p1,
                    d.mu1, d.mu2);
      break;
  }
  return buf;
}

// Same family, rescaled to the requested mean (rates scale inversely).
inline DistanceLaw law_scaled_to_mean(const DistanceLaw& d, double mean) {
  if (!(mean > 0)) throw std::invalid_argument("target mean must be positive");
  switch (d.kind) {
    case LawKind::Exponential: return DistanceLaw::Exponential(1.0 / mean);
    case LawKind::Deterministic: return DistanceLaw::Deterministic(mean);
    case LawKind::Uniform: return DistanceLaw::Uniform(2.0 * mean);
    case LawKind::HyperExp2: {
      double f = d.mean() / mean;
      return DistanceLaw::HyperExp2(d.p1, d.mu1 * f, d.mu2 * f);
    }
  }
  throw std::invalid_argument("unknown law kind");
}

// One scenario's output: a CSV table plus an optional one-line JSON summary.
struct ScenarioResult {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string summary;

  std::string to_csv() const {
    std::ostringstream out;
    for (size_t i = 0; i < header.size(); ++i)
      out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << row[i];
      out << "\n";
    }
    return out.str();
  }
};

namespace config_detail {

// Collects every complaint before throwing, so a bad config reports all of
// its offending fields at once.
struct Checker {
  const json& j;
  std::vector<std::string> problems;

  bool has(const char* field) const { return j.contains(field); }
  void complain(const std::string& what) { problems.push_back(what); }

  template <typename T>
  T field_or(const char* field, T fallback) {
    if (!j.contains(field)) return fallback;
    try {
      return j.at(field).get<T>();
    } catch (const std::exception&) {
      complain(std::string(field) + ": wrong type");
      return fallback;
    }
  }

  template <typename T>
  T require(const char* field, T fallback) {
    if (!j.contains(field)) {
      complain(std::string(field) + ": missing");
      return fallback;
    }
    return field_or(field, fallback);
  }

  DistanceLaw law(const char* field, bool required) {
    if (!j.contains(field)) {
      if (required) complain(std::string(field) + ": missing");
      return DistanceLaw::Exponential(1.0);
    }
    try {
      return j.at(field).get<DistanceLaw>();
    } catch (const std::exception& e) {
      complain(std::string(field) + ": " + e.what());
      return DistanceLaw::Exponential(1.0);
    }
  }

  CapacityModel capacity() {
    if (!j.contains("capacity")) return CapacityModel::fixed(1);
    try {
      const json& c = j.at("capacity");
      if (c.contains("fixed")) return CapacityModel::fixed(c.at("fixed").get<int>());
      return CapacityModel::uniform_int(c.at("lo").get<int>(), c.at("hi").get<int>());
    } catch (const std::exception& e) {
      complain(std::string("capacity: ") + e.what());
      return CapacityModel::fixed(1);
    }
  }

  void finish(const char* scenario) const {
    if (problems.empty()) return;
    std::string msg = std::string("invalid ") + scenario + " config: ";
    for (size_t i = 0; i < problems.size(); ++i)
      msg += (i ? "; " : "") + problems[i];
    throw std::invalid_argument(msg);
  }
};

inline int default_workers() {
  unsigned hw = std::thread::hardware_concurrency();
  return int(std::clamp(hw, 1u, 8u));
}

// Runs fn(0..count-1) in bounded batches; results keep index order.
template <typename Fn>
auto ordered_parallel(int count, int workers, Fn fn) {
  using Out = decltype(fn(0));
  std::vector<Out> done(count);
  workers = std::max(1, workers);
  for (int start = 0; start < count; start += workers) {
    int end = std::min(count, start + workers);
    std::vector<std::future<Out>> batch;
    batch.reserve(end - start);
    for (int i = start; i < end; ++i)
      batch.push_back(std::async(std::launch::async, fn, i));
    for (int i = start; i < end; ++i) done[i] = batch[i - start].get();
  }
  return done;
}

inline AssignmentResult run_policy(const std::string& p,
                                   const SpatialInstance& inst) {
  if (p == "mtr") return allocate_mtr(inst);
  if (p == "ugs") return allocate_ugs(inst);
  if (p == "nn") return allocate_nn(inst);
  if (p == "gs") return allocate_gs(inst);
  if (p == "opt") return opt_dp(inst);
  throw std::invalid_argument("unknown policy: " + p);
}

inline double power_cost(const SpatialInstance& inst,
                         const AssignmentResult& res, double warmup,
                         double t0, double beta) {
  auto d = res.matched_distances(inst);
  size_t skip = size_t(warmup * d.size());
  if (d.size() - skip == 0) throw std::invalid_argument("no matched users");
  double acc = 0;
  for (size_t i = skip; i < d.size(); ++i) acc += t0 * std::pow(d[i], beta);
  return acc / double(d.size() - skip);
}

}  // namespace config_detail

// ---------------------------------------------------------------------------
// simulate: one configuration, many seeded trials, every policy on the same
// instance per trial.
// ---------------------------------------------------------------------------
inline ScenarioResult run_simulate(const json& cfg) {
  config_detail::Checker ck{cfg, {}};
  DistanceLaw user_law = ck.law("user_law", true);
  DistanceLaw server_law = ck.law("server_law", true);
  CapacityModel cap = ck.capacity();
  int n_users = ck.field_or("n_users", 100000);
  int trials = ck.field_or("trials", 50);
  uint64_t seed = ck.field_or("seed", uint64_t{1});
  double warmup = ck.field_or("warmup", 0.1);
  int workers = ck.field_or("workers", config_detail::default_workers());
  std::vector<std::string> policies = ck.field_or(
      "policies", std::vector<std::string>{"mtr", "ugs", "nn", "gs", "opt"});
  if (n_users < 1) ck.complain("n_users: must be positive");
  if (trials < 1) ck.complain("trials: must be >= 1");
  if (warmup < 0 || warmup >= 1) ck.complain("warmup: must be in [0, 1)");
  double lambda = 1.0 / user_law.mean(), mu = 1.0 / server_law.mean();
  double cap_mean = 0.5 * (cap.lo + cap.hi);
  int n_servers = 0;
  if (ck.has("n_servers")) {
    n_servers = ck.field_or("n_servers", 0);
    if (n_servers < 1) ck.complain("n_servers: must be positive");
  } else if (lambda < mu * cap_mean) {
    n_servers = int(1.05 * n_users * mu / lambda) + 16;
  } else if (ck.has("user_law") && ck.has("server_law")) {
    ck.complain("n_servers: required when lambda >= mu * mean capacity");
  }
  ck.finish("simulate");

  double rho = lambda / (mu * cap_mean);
  ScenarioResult out;
  out.header = {"scenario", "user_law", "server_law", "lambda", "mu",
                "rho",      "cap_lo",   "cap_hi",     "n_users", "n_servers",
                "warmup",   "policy",   "trial",      "seed",   "matched",
                "mean",     "variance", "max",        "error",  "version"};

  auto one_trial = [&](int t) {
    std::vector<std::vector<std::string>> rows;
    uint64_t s = seed + uint64_t(t);
    SpatialInstance inst;
    std::string gen_error;
    try {
      inst = generate_instance(user_law, server_law, n_users, n_servers, cap, s);
    } catch (const std::exception& e) {
      gen_error = e.what();
    }
    for (const auto& p : policies) {
      std::vector<std::string> row = {
          "simulate", law_token(user_law), law_token(server_law), fmtg(lambda),
          fmtg(mu),   fmtg(rho),           std::to_string(cap.lo),
          std::to_string(cap.hi),          std::to_string(n_users),
          std::to_string(n_servers),       fmtg(warmup),
          p,          std::to_string(t),   std::to_string(s)};
      try {
        if (!gen_error.empty()) throw NumericError(gen_error);
        auto res = config_detail::run_policy(p, inst);
        auto st = distance_stats(inst, res, warmup);
        row.insert(row.end(), {std::to_string(res.matched), fmtg(st.mean),
                               fmtg(st.variance), fmtg(st.max), "", kToolVersion});
      } catch (const std::exception& e) {
        row.insert(row.end(), {"", "", "", "", csv_safe(e.what()), kToolVersion});
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };

  for (auto& rows : config_detail::ordered_parallel(trials, workers, one_trial))
    for (auto& r : rows) out.rows.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------------------
// sweep: cross product over the grid axes; per cell, MTR runs first and the
// bidirectional policies rerun on the users MTR managed to match.
// ---------------------------------------------------------------------------
inline ScenarioResult run_sweep(const json& cfg) {
  config_detail::Checker ck{cfg, {}};
  DistanceLaw base_user = ck.law("user_law", true);
  DistanceLaw base_server = ck.law("server_law", true);
  CapacityModel base_cap = ck.capacity();
  int n_users = ck.field_or("n_users", 100000);
  int trials = ck.field_or("trials", 50);
  uint64_t seed = ck.field_or("seed", uint64_t{1});
  double warmup = ck.field_or("warmup", 0.1);
  double t0 = ck.field_or("t0", 1.0);
  int workers = ck.field_or("workers", config_detail::default_workers());
  std::vector<std::string> policies = ck.field_or(
      "policies", std::vector<std::string>{"mtr", "nn", "gs", "opt"});

  std::vector<double> rho_axis, cv2_axis, beta_axis;
  std::vector<int> c_axis;
  if (ck.has("grid")) {
    try {
      const json& g = cfg.at("grid");
      if (g.contains("rho")) rho_axis = g.at("rho").get<std::vector<double>>();
      if (g.contains("c")) c_axis = g.at("c").get<std::vector<int>>();
      if (g.contains("cv2")) cv2_axis = g.at("cv2").get<std::vector<double>>();
      if (g.contains("beta")) beta_axis = g.at("beta").get<std::vector<double>>();
    } catch (const std::exception& e) {
      ck.complain(std::string("grid: ") + e.what());
    }
  }
  if (rho_axis.empty() && c_axis.empty() && cv2_axis.empty() && beta_axis.empty())
    ck.complain("grid: at least one axis (rho, c, cv2, beta) required");
  if (trials < 1) ck.complain("trials: must be >= 1");
  ck.finish("sweep");

  const bool has_beta = !beta_axis.empty();
  if (rho_axis.empty()) rho_axis = {std::numeric_limits<double>::quiet_NaN()};
  if (c_axis.empty()) c_axis = {0};
  if (cv2_axis.empty()) cv2_axis = {std::numeric_limits<double>::quiet_NaN()};
  if (beta_axis.empty()) beta_axis = {std::numeric_limits<double>::quiet_NaN()};

  struct Cell {
    double rho, cv2, beta;
    int c;
    DistanceLaw user_law, server_law;
    CapacityModel cap;
  };
  std::vector<Cell> cells;
  double mu = 1.0 / base_server.mean();
  for (double rho : rho_axis)
    for (int c : c_axis)
      for (double cv2 : cv2_axis)
        for (double beta : beta_axis) {
          Cell cell{rho, cv2, beta, c, base_user, base_server, base_cap};
          if (!std::isnan(cv2))
            cell.server_law = cv2 == 1.0 ? DistanceLaw::Exponential(mu)
                                         : h2_from_cv2(1.0 / mu, cv2);
          if (c > 0) cell.cap = CapacityModel::fixed(c);
          double cap_mean = 0.5 * (cell.cap.lo + cell.cap.hi);
          if (!std::isnan(rho))
            cell.user_law =
                law_scaled_to_mean(base_user, 1.0 / (rho * mu * cap_mean));
          cells.push_back(cell);
        }

  ScenarioResult out;
  out.header = {"scenario", "rho",     "c",        "cv2",     "beta",
                "user_law", "server_law", "lambda", "mu",      "cap_lo",
                "cap_hi",   "n_users", "warmup",   "policy",  "trial",
                "seed",     "matched", "mean",     "variance", "cost",
                "error",    "version"};

  struct Job {
    int cell, trial;
  };
  std::vector<Job> jobs;
  for (int ci = 0; ci < int(cells.size()); ++ci)
    for (int t = 0; t < trials; ++t) jobs.push_back({ci, t});

  auto one_job = [&](int ji) {
    const Cell& cell = cells[jobs[ji].cell];
    int t = jobs[ji].trial;
    uint64_t s = seed + uint64_t(t);
    double lambda = 1.0 / cell.user_law.mean();
    double cell_mu = 1.0 / cell.server_law.mean();
    int n_servers = int(1.05 * n_users * cell_mu / lambda) + 16;

    auto prefix = [&](const std::string& p) {
      return std::vector<std::string>{
          "sweep",
          std::isnan(cell.rho) ? "" : fmtg(cell.rho),
          cell.c > 0 ? std::to_string(cell.c) : "",
          std::isnan(cell.cv2) ? "" : fmtg(cell.cv2),
          std::isnan(cell.beta) ? "" : fmtg(cell.beta),
          law_token(cell.user_law),
          law_token(cell.server_law),
          fmtg(lambda),
          fmtg(cell_mu),
          std::to_string(cell.cap.lo),
          std::to_string(cell.cap.hi),
          std::to_string(n_users),
          fmtg(warmup),
          p,
          std::to_string(t),
          std::to_string(s)};
    };

    std::vector<std::vector<std::string>> rows;
    SpatialInstance inst;
    AssignmentResult mtr;
    SpatialInstance restricted;
    std::string cell_error;
    try {
      inst = generate_instance(cell.user_law, cell.server_law, n_users,
                               n_servers, cell.cap, s);
      mtr = allocate_mtr(inst);
      restricted.servers = inst.servers;
      restricted.capacities = inst.capacities;
      for (size_t i = 0; i < inst.users.size(); ++i)
        if (mtr.server_of_user[i] >= 0)
          restricted.users.push_back(inst.users[i]);
    } catch (const std::exception& e) {
      cell_error = e.what();
    }

    for (const auto& p : policies) {
      auto row = prefix(p);
      try {
        if (!cell_error.empty()) throw NumericError(cell_error);
        const SpatialInstance& where =
            (p == "mtr" || p == "ugs") ? inst : restricted;
        AssignmentResult res =
            p == "mtr" ? mtr : config_detail::run_policy(p, where);
        auto st = distance_stats(where, res, warmup);
        std::string cost =
            has_beta ? fmtg(config_detail::power_cost(where, res, warmup, t0,
                                                      cell.beta))
                     : "";
        row.insert(row.end(), {std::to_string(res.matched), fmtg(st.mean),
                               fmtg(st.variance), cost, "", kToolVersion});
      } catch (const std::exception& e) {
        row.insert(row.end(), {"", "", "", "", csv_safe(e.what()), kToolVersion});
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };

  for (auto& rows :
       config_detail::ordered_parallel(int(jobs.size()), workers, one_job))
    for (auto& r : rows) out.rows.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------------------
// analytic: one closed-form evaluation per invocation, one CSV row.
// ---------------------------------------------------------------------------
inline ScenarioResult run_analytic(const json& cfg) {
  config_detail::Checker ck{cfg, {}};
  std::string model = ck.require("model", std::string{});
  ck.finish("analytic");

  ScenarioResult out;
  out.header = {"scenario", "model", "user_law", "server_law", "lambda",
                "mu",       "c",     "beta",     "t0",         "value",
                "root",     "omega", "norm_const", "mean_count", "error",
                "version"};
  std::string user_tok, server_tok, lam, mu_s, c_s, beta_s, t0_s, value, root,
      omega, norm_c, mean_count, error;

  try {
    config_detail::Checker args{cfg, {}};
    if (model == "bulk_mm1") {
      double lambda = args.require("lambda", 1.0);
      double mu = args.require("mu", 1.0);
      int c = args.field_or("c", 1);
      args.finish("analytic");
      auto sol = bulk_mm1(lambda, mu, c);
      lam = fmtg(lambda), mu_s = fmtg(mu), c_s = std::to_string(c);
      value = fmtg(sol.mean_delay), root = fmtg(sol.root);
      mean_count = fmtg(sol.mean_count);
    } else if (model == "grps") {
      DistanceLaw ul = args.law("user_law", true);
      double mu = args.require("mu", 1.0);
      int c = args.field_or("c", 1);
      args.finish("analytic");
      auto sol = gm1_batch(ul, mu, c);
      user_tok = law_token(ul), lam = fmtg(sol.lambda), mu_s = fmtg(mu);
      c_s = std::to_string(c);
      value = fmtg(sol.mean_delay), root = fmtg(sol.root);
      omega = fmtg(sol.omega), norm_c = fmtg(sol.norm_const);
      mean_count = fmtg(sol.mean_count);
    } else if (model == "prgs") {
      DistanceLaw sl = args.law("server_law", true);
      double lambda = args.require("lambda", 1.0);
      int c = args.field_or("c", 1);
      bool exc = args.field_or("exceptional_first", true);
      args.finish("analytic");
      auto sol = mg1_batch(sl, lambda, c, exc);
      server_tok = law_token(sl), lam = fmtg(lambda), mu_s = fmtg(sol.mu);
      c_s = std::to_string(c);
      value = fmtg(sol.mean_delay), mean_count = fmtg(sol.mean_count);
    } else if (model == "heavy_traffic") {
      DistanceLaw ul = args.law("user_law", true);
      DistanceLaw sl = args.law("server_law", true);
      args.finish("analytic");
      user_tok = law_token(ul), server_tok = law_token(sl);
      lam = fmtg(1.0 / ul.mean()), mu_s = fmtg(1.0 / sl.mean());
      value = fmtg(heavy_traffic_delay(ul, sl));
    } else if (model == "uncap_grps") {
      double mu = args.require("mu", 1.0);
      args.finish("analytic");
      mu_s = fmtg(mu);
      value = fmtg(uncapacitated_delay_exponential_servers(mu));
    } else if (model == "uncap_prgs") {
      DistanceLaw sl = args.law("server_law", true);
      args.finish("analytic");
      server_tok = law_token(sl), mu_s = fmtg(1.0 / sl.mean());
      value = fmtg(uncapacitated_delay_poisson_users(sl));
    } else if (model == "forkjoin") {
      double lambda = args.require("lambda", 1.0);
      double mu = args.require("mu", 1.0);
      args.finish("analytic");
      lam = fmtg(lambda), mu_s = fmtg(mu);
      value = fmtg(forkjoin_delay(lambda, mu));
    } else if (model == "cost_grps") {
      DistanceLaw ul = args.law("user_law", true);
      double mu = args.require("mu", 1.0);
      double t0 = args.field_or("t0", 1.0);
      double beta = args.require("beta", 1.0);
      args.finish("analytic");
      user_tok = law_token(ul), lam = fmtg(1.0 / ul.mean()), mu_s = fmtg(mu);
      beta_s = fmtg(beta), t0_s = fmtg(t0);
      value = fmtg(cost_gm1(ul, mu, t0, beta));
    } else if (model == "cost_prgs") {
      DistanceLaw sl = args.law("server_law", true);
      double lambda = args.require("lambda", 1.0);
      double t0 = args.field_or("t0", 1.0);
      int beta = args.require("beta", 1);
      bool exc = args.field_or("exceptional_first", true);
      args.finish("analytic");
      server_tok = law_token(sl), lam = fmtg(lambda);
      mu_s = fmtg(1.0 / sl.mean()), beta_s = std::to_string(beta);
      t0_s = fmtg(t0);
      value = fmtg(cost_mg1(sl, lambda, t0, beta, exc));
    } else {
      throw std::invalid_argument("unknown model: " + model);
    }
  } catch (const std::invalid_argument& e) {
    if (std::string(e.what()).rfind("invalid analytic config", 0) == 0 ||
        std::string(e.what()).rfind("unknown model", 0) == 0)
      throw;  // config errors abort; numeric trouble lands in the row
    error = csv_safe(e.what());
  } catch (const std::exception& e) {
    error = csv_safe(e.what());
  }

  out.rows.push_back({"analytic", model, user_tok, server_tok, lam, mu_s, c_s,
                      beta_s, t0_s, value, root, omega, norm_c, mean_count,
                      error, kToolVersion});
  return out;
}

// ---------------------------------------------------------------------------
// hetcap: variable-capacity chain, one row.
// ---------------------------------------------------------------------------
inline ScenarioResult run_hetcap(const json& cfg) {
  config_detail::Checker ck{cfg, {}};
  DistanceLaw server_law = ck.law("server_law", true);
  double lambda = ck.require("lambda", 1.0);
  std::vector<double> pmf =
      ck.require("cap_pmf", std::vector<double>{1.0});
  ck.finish("hetcap");

  ScenarioResult out;
  out.header = {"scenario", "lambda", "server_law", "mu", "cap_pmf",
                "cap_mean", "rho",    "pi0",        "mean_queue_after_server",
                "mean_delay", "error", "version"};
  std::string pmf_tok;
  for (size_t i = 0; i < pmf.size(); ++i)
    pmf_tok += (i ? "|" : "") + fmtg(pmf[i]);

  std::string cap_mean, rho, pi0, hbar, delay, error;
  try {
    CapacityDist cap{pmf};
    auto sol = hetcap_solve(server_law, lambda, cap);
    cap_mean = fmtg(sol.cap_mean), rho = fmtg(sol.rho);
    pi0 = fmtg(sol.pi[0]);
    hbar = fmtg(sol.mean_queue_after_server);
    delay = fmtg(sol.mean_delay);
  } catch (const std::exception& e) {
    error = csv_safe(e.what());
  }
  out.rows.push_back({"hetcap", fmtg(lambda), law_token(server_law),
                      fmtg(1.0 / server_law.mean()), pmf_tok, cap_mean, rho,
                      pi0, hbar, delay, error, kToolVersion});
  return out;
}

// ---------------------------------------------------------------------------
// assign / embed: file-driven single instances.
// ---------------------------------------------------------------------------

// Lines of "role,location,capacity"; capacity applies to servers (default 1).
inline SpatialInstance read_instance_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  SpatialInstance inst;
  std::vector<std::pair<double, int>> servers;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string role, loc, cap;
    std::getline(ls, role, ',');
    std::getline(ls, loc, ',');
    std::getline(ls, cap, ',');
    if (first && role == "role") {
      first = false;
      continue;
    }
    first = false;
    double x;
    try {
      x = std::stod(loc);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad location in instance file: " + line);
    }
    if (role == "user") {
      inst.users.push_back(x);
    } else if (role == "server") {
      int c = 1;
      if (!cap.empty() && cap != "\r") c = std::stoi(cap);
      servers.emplace_back(x, c);
    } else {
      throw std::invalid_argument("bad role in instance file: " + role);
    }
  }
  std::sort(inst.users.begin(), inst.users.end());
  std::sort(servers.begin(), servers.end());
  for (auto& [x, c] : servers) {
    inst.servers.push_back(x);
    inst.capacities.push_back(c);
  }
  inst.validate();
  return inst;
}

inline ScenarioResult run_assign(const json& cfg) {
  config_detail::Checker ck{cfg, {}};
  std::string path = ck.require("instance_csv", std::string{});
  std::string policy = ck.field_or("policy", std::string{"opt"});
  ck.finish("assign");

  SpatialInstance inst = read_instance_csv(path);
  auto res = config_detail::run_policy(policy, inst);

  ScenarioResult out;
  out.header = {"user_idx", "server_idx", "distance"};
  double total = 0;
  for (size_t i = 0; i < inst.users.size(); ++i) {
    int s = res.server_of_user[i];
    if (s >= 0) {
      double d = std::abs(inst.servers[s] - inst.users[i]);
      total += d;
      out.rows.push_back({std::to_string(i), std::to_string(s), fmtg(d)});
    } else {
      out.rows.push_back({std::to_string(i), "-1", ""});
    }
  }
  double mean = res.matched ? total / res.matched : 0.0;
  out.rows.push_back({"-1", std::to_string(res.matched), fmtg(mean)});
  out.summary = std::string("{\"policy\": \"") + policy +
                "\", \"matched\": " + std::to_string(res.matched) +
                ", \"mean\": " + fmtg(mean) + "}";
  return out;
}

// Lines of "role,x,y".
inline PlanarInstance read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open points file: " + path);
  PlanarInstance inst;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string role, xs, ys;
    std::getline(ls, role, ',');
    std::getline(ls, xs, ',');
    std::getline(ls, ys, ',');
    if (first && role == "role") {
      first = false;
      continue;
    }
    first = false;
    Point2 p;
    try {
      p = {std::stod(xs), std::stod(ys)};
    } catch (const std::exception&) {
      throw std::invalid_argument("bad point in points file: " + line);
    }
    if (role == "user")
      inst.users.push_back(p);
    else if (role == "server")
      inst.servers.push_back(p);
    else
      throw std::invalid_argument("bad role in points file: " + role);
  }
  return inst;
}

inline NeighborCount parse_neighbor_count(const json& j) {
  if (j.is_number_integer()) return NeighborCount::of(j.get<int>());
  if (j.is_number()) return NeighborCount::share(j.get<double>());
  if (j.contains("count")) return NeighborCount::of(j.at("count").get<int>());
  return NeighborCount::share(j.at("fraction").get<double>());
}

inline ScenarioResult run_embed(const json& cfg) {
  config_detail::Checker ck{cfg, {}};
  std::string path = ck.require("points_csv", std::string{});
  ck.finish("embed");

  EmbeddingConfig ecfg;
  if (cfg.contains("embedding")) {
    const json& e = cfg.at("embedding");
    if (e.contains("k_users")) ecfg.k_users = parse_neighbor_count(e.at("k_users"));
    if (e.contains("k_servers"))
      ecfg.k_servers = parse_neighbor_count(e.at("k_servers"));
    if (e.contains("reg_scale")) ecfg.reg_scale = e.at("reg_scale").get<double>();
    if (e.contains("far_mult")) ecfg.far_mult = e.at("far_mult").get<double>();
    if (e.contains("close_frac")) ecfg.close_frac = e.at("close_frac").get<double>();
    if (e.contains("step_frac")) ecfg.step_frac = e.at("step_frac").get<double>();
    if (e.contains("auto_select")) ecfg.auto_select = e.at("auto_select").get<bool>();
  }

  PlanarInstance inst = read_points_csv(path);
  auto emb = match_via_embedding(inst, ecfg);
  auto opt = match_planar_optimal(inst);

  ScenarioResult out;
  out.header = {"user_idx", "server_idx", "distance"};
  for (size_t i = 0; i < inst.users.size(); ++i) {
    int s = emb.server_of_user[i];
    out.rows.push_back({std::to_string(i), std::to_string(s),
                        fmtg(dist2d(inst.users[i], inst.servers[s]))});
  }
  int n_u = int(inst.users.size());
  double ratio = opt.total > 0 ? emb.total / opt.total : 1.0;
  out.summary = std::string("{\"opt_mean\": ") + fmtg(opt.mean(n_u)) +
                ", \"embed_mean\": " + fmtg(emb.mean(n_u)) +
                ", \"ratio\": " + fmtg(ratio) + "}";
  return out;
}

// Dispatch on cfg["scenario"].
inline ScenarioResult run_scenario(const json& cfg) {
  if (!cfg.contains("scenario"))
    throw std::invalid_argument("invalid config: scenario: missing");
  std::string s = cfg.at("scenario").get<std::string>();
  if (s == "simulate") return run_simulate(cfg);
  if (s == "sweep") return run_sweep(cfg);
  if (s == "analytic") return run_analytic(cfg);
  if (s == "hetcap") return run_hetcap(cfg);
  if (s == "assign") return run_assign(cfg);
  if (s == "embed") return run_embed(cfg);
  throw std::invalid_argument("invalid config: scenario: unknown value " + s);
}

}  // namespace linealloc
