#include "experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "errors.hpp"
#include "operators.hpp"
#include "recover.hpp"

namespace hotvbl {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int resolve_jobs(int jobs, std::size_t tasks) {
  int n = jobs > 0 ? jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::max(1, std::min<int>(n, static_cast<int>(std::max<std::size_t>(tasks, 1))));
}

// Runs fn(i) for i in [0, count) on a small pool. Results are written by the
// callee into slot i, so completion order never matters. Returns false when
// cancelled before all tasks started.
bool run_pool(std::size_t count, int jobs, const std::atomic<bool>* cancel, std::vector<char>& done,
              const std::function<void(std::size_t)>& fn) {
  done.assign(count, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stopped{false};
  auto worker = [&] {
    for (;;) {
      if (cancel != nullptr && cancel->load()) {
        stopped = true;
        return;
      }
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
      done[i] = 1;
    }
  };
  const int n = resolve_jobs(jobs, count);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return !stopped.load();
}

std::uint64_t snr_key(double snr) { return std::bit_cast<std::uint64_t>(snr); }

double median(std::vector<double> v) {
  std::erase_if(v, [](double x) { return std::isnan(x); });
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<double> interval_widths(const SignalPosterior& post) {
  std::vector<double> w;
  w.reserve(post.intervals.size());
  for (const auto& iv : post.intervals) w.push_back(iv.upper - iv.lower);
  return w;
}

void fill_curve_bl(Curve& c, const SignalPosterior& post) {
  c.bl_mean = post.mean;
  c.bl_lower.resize(post.mean.size());
  c.bl_upper.resize(post.mean.size());
  for (std::size_t i = 0; i < post.intervals.size(); ++i) {
    c.bl_lower[static_cast<Eigen::Index>(i)] = post.intervals[i].lower;
    c.bl_upper[static_cast<Eigen::Index>(i)] = post.intervals[i].upper;
  }
}

struct TaskOutput {
  std::vector<TrialRecord> records;
  std::optional<Curve> curve;
};

ExperimentResult collect(const ExperimentConfig& config, std::vector<TaskOutput>& outputs,
                         const std::vector<char>& done, bool complete) {
  ExperimentResult result;
  result.config = config;
  result.interrupted = !complete;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (!done[i]) {
      result.interrupted = true;
      continue;
    }
    for (auto& r : outputs[i].records) result.records.push_back(std::move(r));
    if (outputs[i].curve) result.curves.push_back(std::move(*outputs[i].curve));
  }
  return result;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string_view to_string(TestId id) {
  switch (id) {
    case TestId::test1:
      return "test1";
    case TestId::test2:
      return "test2";
    case TestId::test3:
      return "test3";
  }
  return "unknown";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::hotvbl:
      return "hotvbl";
    case Method::l1_oracle:
      return "l1_oracle";
    case Method::l1_fixed:
      return "l1_fixed";
  }
  return "unknown";
}

TestId test_id_from_string(std::string_view name) {
  if (name == "test1") return TestId::test1;
  if (name == "test2") return TestId::test2;
  if (name == "test3") return TestId::test3;
  throw InvalidArgument("unknown test id '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");
  sbl.validate();
  l1.validate();
  switch (test) {
    case TestId::test1:
      if (m < 1 || m >= n) throw DimensionError("order must be less than size");
      if (j < 1) throw DimensionError("measurement count must be positive");
      if (k_min < 1 || k_max < k_min) throw InvalidArgument("k range must satisfy 1 <= k_min <= k_max");
      if (k_max > (jumps_only ? n - m : n)) throw InvalidArgument("k_max exceeds the number of coefficients");
      break;
    case TestId::test2:
      if (n < 8) throw InvalidArgument("test2 needs N >= 8");
      if (kinds.empty() || snr_db.empty()) throw InvalidArgument("test2 needs kinds and snr_db");
      break;
    case TestId::test3:
      if (n < 8) throw InvalidArgument("test3 needs N >= 8");
      if (orders.empty() || snr_db.empty()) throw InvalidArgument("test3 needs orders and snr_db");
      for (int o : orders) {
        if (o < 1 || o >= n) throw DimensionError("order must be less than size");
      }
      break;
  }
  if (test != TestId::test1 && l1.lambda_grid.empty()) throw InvalidArgument("empty lambda grid");
}

ExperimentConfig default_config(TestId test) {
  ExperimentConfig c;
  c.test = test;
  switch (test) {
    case TestId::test1:
      c.n = 250;
      c.j = 50;
      c.trials = 500;
      c.keep_curves = false;
      break;
    case TestId::test2:
      c.n = 128;
      c.j = 128;
      c.trials = 10;
      break;
    case TestId::test3:
      c.n = 128;
      c.j = 128;
      c.snr_db = {10.0};
      c.trials = 10;
      break;
  }
  return c;
}

EdgeWidths edge_interval_widths(const std::vector<double>& widths, int jump_index, int order,
                                int far_distance) {
  std::vector<double> edge;
  std::vector<double> smooth;
  const int n = static_cast<int>(widths.size());
  for (int i = 0; i < n; ++i) {
    // Distance in samples from the discontinuity between jump_index-1 and jump_index.
    const int dist = i < jump_index ? jump_index - 1 - i : i - jump_index;
    if (dist < order) edge.push_back(widths[static_cast<std::size_t>(i)]);
    if (dist > far_distance) smooth.push_back(widths[static_cast<std::size_t>(i)]);
  }
  return {median(edge), median(smooth)};
}

ExperimentResult run_test1(const ExperimentConfig& config, const std::atomic<bool>* cancel) {
  config.validate();
  if (config.test != TestId::test1) throw InvalidArgument("run_test1 needs a test1 config");
  const int groups = config.k_max - config.k_min + 1;
  const std::size_t count = static_cast<std::size_t>(groups) * static_cast<std::size_t>(config.trials);
  std::vector<TaskOutput> outputs(count);

  auto task = [&](std::size_t idx) {
    const int k = config.k_min + static_cast<int>(idx / static_cast<std::size_t>(config.trials));
    const int trial = static_cast<int>(idx % static_cast<std::size_t>(config.trials));
    const std::uint64_t seed = derive_seed(config.base_seed, static_cast<std::uint64_t>(k),
                                           static_cast<std::uint64_t>(trial));
    Rng rng(seed);
    const PiecewisePoly sig = make_piecewise_poly(config.n, config.m, k, rng, config.jumps_only);
    const Matrix a = gaussian_forward(config.j, config.n, rng);
    const Vector b = a * sig.x;

    TrialRecord base;
    base.test = TestId::test1;
    base.seed = seed;
    base.trial = trial;
    base.k = k;
    base.m = config.m;

    TrialRecord bl = base;
    bl.method = Method::hotvbl;
    auto start = Clock::now();
    try {
      const SignalPosterior post = recover({a, b, config.m, config.sbl}, config.confidence);
      bl.rel_err = rel_err(post.mean, sig.x);
      bl.max_err = max_err(post.mean, sig.x);
      bl.success = bl.max_err <= config.success_threshold;
      bl.iterations = post.edge_posterior.iterations;
      bl.converged = post.edge_posterior.converged;
    } catch (const std::exception& e) {
      bl.error = e.what();
    }
    bl.wall_time = seconds_since(start);
    outputs[idx].records.push_back(std::move(bl));

    if (config.l1_comparator) {
      TrialRecord l1 = base;
      l1.method = Method::l1_fixed;
      l1.lambda = config.l1_fixed_lambda;
      start = Clock::now();
      try {
        const L1Result r = solve_analysis_l1(a, b, config.m, config.l1_fixed_lambda, config.l1);
        l1.rel_err = rel_err(r.x, sig.x);
        l1.max_err = max_err(r.x, sig.x);
        l1.success = l1.max_err <= config.success_threshold;
        l1.iterations = r.iterations;
        l1.converged = r.converged;
      } catch (const std::exception& e) {
        l1.error = e.what();
      }
      l1.wall_time = seconds_since(start);
      outputs[idx].records.push_back(std::move(l1));
    }
  };

  std::vector<char> done;
  const bool complete = run_pool(count, config.jobs, cancel, done, task);
  return collect(config, outputs, done, complete);
}

ExperimentResult run_test2(const ExperimentConfig& config, const std::atomic<bool>* cancel) {
  config.validate();
  if (config.test != TestId::test2) throw InvalidArgument("run_test2 needs a test2 config");
  const std::size_t per_group = static_cast<std::size_t>(config.trials);
  const std::size_t count = config.kinds.size() * config.snr_db.size() * per_group;
  std::vector<TaskOutput> outputs(count);
  const Matrix identity = Matrix::Identity(config.n, config.n);

  auto task = [&](std::size_t idx) {
    const std::size_t group = idx / per_group;
    const int trial = static_cast<int>(idx % per_group);
    const SignalKind kind = config.kinds[group / config.snr_db.size()];
    const double snr = config.snr_db[group % config.snr_db.size()];
    const int order = degree(kind) + 1;
    const std::uint64_t key = splitmix64(static_cast<std::uint64_t>(kind) + 1) ^ snr_key(snr);
    const std::uint64_t seed = derive_seed(config.base_seed, key, static_cast<std::uint64_t>(trial));
    Rng rng(seed);

    const Vector x = make_ideal_signal(kind, config.n);
    Vector b = x;
    TrialRecord base;
    base.test = TestId::test2;
    base.seed = seed;
    base.trial = trial;
    base.kind = kind;
    base.snr_db = snr;
    base.m = order;
    if (std::isfinite(snr)) {
      const NoisyReal noisy = add_noise_at_snr(x, snr, rng);
      b = noisy.noisy;
      base.realized_snr_db = snr_db(x, noisy.noise);
    } else {
      base.realized_snr_db = kNoiseless;
    }

    std::optional<Curve> curve;
    if (config.keep_curves && trial == 0) {
      curve.emplace();
      curve->label = std::string(to_string(kind)) + "_snr" + fmt_double(snr);
      curve->truth = x;
      curve->observed = b;
    }

    TrialRecord bl = base;
    bl.method = Method::hotvbl;
    auto start = Clock::now();
    try {
      const SignalPosterior post = recover({identity, b, order, config.sbl}, config.confidence);
      bl.rel_err = rel_err(post.mean, x);
      bl.max_err = max_err(post.mean, x);
      bl.iterations = post.edge_posterior.iterations;
      bl.converged = post.edge_posterior.converged;
      const EdgeWidths w = edge_interval_widths(interval_widths(post), ideal_jump_index(config.n), order);
      bl.edge_width = w.edge;
      bl.smooth_width = w.smooth;
      if (curve) fill_curve_bl(*curve, post);
    } catch (const std::exception& e) {
      bl.error = e.what();
    }
    bl.wall_time = seconds_since(start);

    TrialRecord l1 = base;
    l1.method = Method::l1_oracle;
    start = Clock::now();
    try {
      const LambdaSweep sweep = oracle_lambda_sweep(identity, b, order, x, config.l1);
      l1.rel_err = sweep.rel_err_best;
      l1.max_err = max_err(sweep.x_best, x);
      l1.lambda = sweep.lambda_best;
      l1.converged = sweep.unconverged == 0;
      if (curve) curve->l1 = sweep.x_best;
    } catch (const std::exception& e) {
      l1.error = e.what();
    }
    l1.wall_time = seconds_since(start);
    bl.success = std::isfinite(bl.rel_err) && (!std::isfinite(l1.rel_err) || bl.rel_err < l1.rel_err);
    l1.success = std::isfinite(l1.rel_err) && !bl.success;

    outputs[idx].records.push_back(std::move(bl));
    outputs[idx].records.push_back(std::move(l1));
    outputs[idx].curve = std::move(curve);
  };

  std::vector<char> done;
  const bool complete = run_pool(count, config.jobs, cancel, done, task);
  return collect(config, outputs, done, complete);
}

ExperimentResult run_test3(const ExperimentConfig& config, const std::atomic<bool>* cancel) {
  config.validate();
  if (config.test != TestId::test3) throw InvalidArgument("run_test3 needs a test3 config");
  const std::size_t per_snr = static_cast<std::size_t>(config.trials) * config.orders.size();
  const std::size_t count = config.snr_db.size() * per_snr;
  std::vector<TaskOutput> outputs(count);
  const Vector x = make_fourier_test_signal(config.n);
  const ComplexMatrix dft = dft_forward(config.n);
  const ComplexVector clean = dft * x.cast<std::complex<double>>();

  auto task = [&](std::size_t idx) {
    const double snr = config.snr_db[idx / per_snr];
    const std::size_t rem = idx % per_snr;
    const int trial = static_cast<int>(rem / config.orders.size());
    const int order = config.orders[rem % config.orders.size()];
    // Same data for every order within a trial.
    const std::uint64_t seed = derive_seed(config.base_seed, snr_key(snr), static_cast<std::uint64_t>(trial));
    Rng rng(seed);

    ComplexVector data = clean;
    TrialRecord base;
    base.test = TestId::test3;
    base.seed = seed;
    base.trial = trial;
    base.snr_db = snr;
    base.m = order;
    base.sparsity_count = sparsity_count(x, order);
    if (std::isfinite(snr)) {
      const NoisyComplex noisy = add_noise_at_snr(clean, snr, rng);
      data = noisy.noisy;
      base.realized_snr_db = snr_db(clean, noisy.noise);
    } else {
      base.realized_snr_db = kNoiseless;
    }
    const auto [a, b] = stack_complex(dft, data);

    std::optional<Curve> curve;
    if (config.keep_curves && trial == 0) {
      curve.emplace();
      curve->label = "m" + std::to_string(order) + "_snr" + fmt_double(snr);
      curve->truth = x;
      curve->observed = (dft.adjoint() * data).real();
    }

    TrialRecord bl = base;
    bl.method = Method::hotvbl;
    auto start = Clock::now();
    try {
      const SignalPosterior post = recover({a, b, order, config.sbl}, config.confidence);
      bl.rel_err = rel_err(post.mean, x);
      bl.max_err = max_err(post.mean, x);
      bl.iterations = post.edge_posterior.iterations;
      bl.converged = post.edge_posterior.converged;
      if (curve) fill_curve_bl(*curve, post);
    } catch (const std::exception& e) {
      bl.error = e.what();
    }
    bl.wall_time = seconds_since(start);

    TrialRecord l1 = base;
    l1.method = Method::l1_oracle;
    start = Clock::now();
    try {
      const LambdaSweep sweep = oracle_lambda_sweep(a, b, order, x, config.l1);
      l1.rel_err = sweep.rel_err_best;
      l1.max_err = max_err(sweep.x_best, x);
      l1.lambda = sweep.lambda_best;
      l1.converged = sweep.unconverged == 0;
      if (curve) curve->l1 = sweep.x_best;
    } catch (const std::exception& e) {
      l1.error = e.what();
    }
    l1.wall_time = seconds_since(start);
    bl.success = std::isfinite(bl.rel_err) && (!std::isfinite(l1.rel_err) || bl.rel_err < l1.rel_err);
    l1.success = std::isfinite(l1.rel_err) && !bl.success;

    outputs[idx].records.push_back(std::move(bl));
    outputs[idx].records.push_back(std::move(l1));
    outputs[idx].curve = std::move(curve);
  };

  std::vector<char> done;
  const bool complete = run_pool(count, config.jobs, cancel, done, task);
  return collect(config, outputs, done, complete);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::atomic<bool>* cancel) {
  switch (config.test) {
    case TestId::test1:
      return run_test1(config, cancel);
    case TestId::test2:
      return run_test2(config, cancel);
    case TestId::test3:
      return run_test3(config, cancel);
  }
  throw InvalidArgument("unknown test id");
}

nlohmann::json summarize(const ExperimentResult& result) {
  using nlohmann::json;
  // Group key -> method -> records, keeping first-seen group order.
  std::vector<std::string> order;
  std::map<std::string, std::map<Method, std::vector<const TrialRecord*>>> groups;
  std::map<std::string, json> group_keys;
  for (const auto& r : result.records) {
    json key;
    std::string id;
    switch (r.test) {
      case TestId::test1:
        key = {{"k", r.k}, {"m", r.m}};
        id = "k" + std::to_string(r.k);
        break;
      case TestId::test2:
        key = {{"kind", to_string(r.kind)}, {"snr_db", json_number(r.snr_db)}, {"m", r.m}};
        id = std::string(to_string(r.kind)) + "/" + fmt_double(r.snr_db);
        break;
      case TestId::test3:
        key = {{"snr_db", json_number(r.snr_db)}, {"m", r.m}, {"sparsity_count", r.sparsity_count}};
        id = fmt_double(r.snr_db) + "/m" + std::to_string(r.m);
        break;
    }
    if (!groups.contains(id)) {
      order.push_back(id);
      group_keys[id] = key;
    }
    groups[id][r.method].push_back(&r);
  }

  json rows = json::array();
  for (const auto& id : order) {
    json row = group_keys[id];
    json methods = json::object();
    for (const auto& [method, recs] : groups[id]) {
      std::vector<double> rel;
      std::vector<double> mx;
      int successes = 0;
      int failures = 0;
      std::vector<double> edge;
      std::vector<double> smooth;
      int edge_wider = 0;
      for (const auto* r : recs) {
        rel.push_back(r->rel_err);
        mx.push_back(r->max_err);
        successes += r->success ? 1 : 0;
        failures += r->error.empty() ? 0 : 1;
        if (!std::isnan(r->edge_width)) {
          edge.push_back(r->edge_width);
          smooth.push_back(r->smooth_width);
          edge_wider += r->edge_width > r->smooth_width ? 1 : 0;
        }
      }
      json m = {{"trials", recs.size()},
                {"median_rel_err", json_number(median(rel))},
                {"median_max_err", json_number(median(mx))},
                {"solver_errors", failures}};
      if (result.config.test == TestId::test1) {
        m["successes"] = successes;
        m["success_probability"] = static_cast<double>(successes) / static_cast<double>(recs.size());
      } else {
        m["wins"] = successes;
      }
      if (!edge.empty()) {
        m["median_edge_width"] = json_number(median(edge));
        m["median_smooth_width"] = json_number(median(smooth));
        m["edge_wider_trials"] = edge_wider;
      }
      methods[std::string(to_string(method))] = m;
    }
    row["methods"] = methods;
    rows.push_back(row);
  }
  return {{"test", to_string(result.config.test)},
          {"base_seed", result.config.base_seed},
          {"records", result.records.size()},
          {"interrupted", result.interrupted},
          {"groups", rows}};
}

std::string trials_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "test,seed,trial,k,kind,snr_db,m,method,rel_err,max_err,success,realized_snr_db,lambda,"
        "iterations,converged,sparsity_count,edge_width,smooth_width,error\n";
  for (const auto& r : result.records) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    os << to_string(r.test) << ',' << r.seed << ',' << r.trial << ',' << r.k << ','
       << (r.test == TestId::test2 ? std::string(to_string(r.kind)) : std::string()) << ','
       << fmt_double(r.snr_db) << ',' << r.m << ',' << to_string(r.method) << ',' << fmt_double(r.rel_err)
       << ',' << fmt_double(r.max_err) << ',' << (r.success ? 1 : 0) << ',' << fmt_double(r.realized_snr_db)
       << ',' << fmt_double(r.lambda) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
       << r.sparsity_count << ',' << fmt_double(r.edge_width) << ',' << fmt_double(r.smooth_width) << ','
       << err << '\n';
  }
  return os.str();
}

std::string timings_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "seed,method,m,wall_time\n";
  for (const auto& r : result.records) {
    os << r.seed << ',' << to_string(r.method) << ',' << r.m << ',' << fmt_double(r.wall_time) << '\n';
  }
  return os.str();
}

std::string curves_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "label,index,truth,observed,bl_mean,bl_lower,bl_upper,l1\n";
  auto at = [](const Vector& v, Eigen::Index i) {
    return i < v.size() ? fmt_double(v[i]) : std::string("nan");
  };
  for (const auto& c : result.curves) {
    for (Eigen::Index i = 0; i < c.truth.size(); ++i) {
      os << c.label << ',' << i << ',' << at(c.truth, i) << ',' << at(c.observed, i) << ','
         << at(c.bl_mean, i) << ',' << at(c.bl_lower, i) << ',' << at(c.bl_upper, i) << ',' << at(c.l1, i)
         << '\n';
    }
  }
  return os.str();
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  using nlohmann::json;
  json kinds = json::array();
  for (auto k : c.kinds) kinds.push_back(to_string(k));
  json snrs = json::array();
  for (double s : c.snr_db) snrs.push_back(json_number(s));
  json sbl = {{"max_iterations", c.sbl.max_iterations},
              {"convergence_tol", c.sbl.convergence_tol},
              {"prune_threshold", c.sbl.prune_threshold},
              {"a_init", c.sbl.a_init},
              {"jitter", c.sbl.jitter}};
  sbl["beta_init"] = c.sbl.beta_init ? json(*c.sbl.beta_init) : json("auto");
  json l1 = {{"rho", c.l1.rho},
             {"max_iterations", c.l1.max_iterations},
             {"primal_tol", c.l1.primal_tol},
             {"dual_tol", c.l1.dual_tol},
             {"adaptive_rho", c.l1.adaptive_rho},
             {"lambda_grid", c.l1.lambda_grid}};
  return {{"test", to_string(c.test)},
          {"n", c.n},
          {"j", c.j},
          {"m", c.m},
          {"k_min", c.k_min},
          {"k_max", c.k_max},
          {"support", c.jumps_only ? "jumps" : "all"},
          {"l1_comparator", c.l1_comparator},
          {"l1_fixed_lambda", c.l1_fixed_lambda},
          {"success_threshold", c.success_threshold},
          {"kinds", kinds},
          {"snr_db", snrs},
          {"orders", c.orders},
          {"trials", c.trials},
          {"seed", c.base_seed},
          {"confidence", c.confidence},
          {"jobs", c.jobs},
          {"keep_curves", c.keep_curves},
          {"sbl", sbl},
          {"l1", l1}};
}

ExperimentConfig config_from_json(const nlohmann::json& input, TestId fallback) {
  using nlohmann::json;
  const json& doc = input.contains("config") && input["config"].is_object() ? input["config"] : input;
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
  const TestId test = doc.contains("test") ? test_id_from_string(doc["test"].get<std::string>()) : fallback;
  ExperimentConfig c = default_config(test);

  static const std::vector<std::string> known = {
      "test", "n", "j", "m", "k_min", "k_max", "support", "l1_comparator", "l1_fixed_lambda",
      "success_threshold", "kinds", "snr_db", "orders", "trials", "seed", "confidence", "jobs",
      "keep_curves", "sbl", "l1"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InvalidArgument("unknown config key '" + key + "'");
    }
  }

  try {
    c.n = doc.value("n", c.n);
    c.j = doc.value("j", test == TestId::test1 ? c.j : c.n);
    c.m = doc.value("m", c.m);
    c.k_min = doc.value("k_min", c.k_min);
    c.k_max = doc.value("k_max", c.k_max);
    if (doc.contains("support")) {
      const auto s = doc["support"].get<std::string>();
      if (s != "all" && s != "jumps") throw InvalidArgument("support must be 'all' or 'jumps'");
      c.jumps_only = s == "jumps";
    }
    c.l1_comparator = doc.value("l1_comparator", c.l1_comparator);
    c.l1_fixed_lambda = doc.value("l1_fixed_lambda", c.l1_fixed_lambda);
    c.success_threshold = doc.value("success_threshold", c.success_threshold);
    if (doc.contains("kinds")) {
      c.kinds.clear();
      for (const auto& k : doc["kinds"]) c.kinds.push_back(signal_kind_from_string(k.get<std::string>()));
    }
    if (doc.contains("snr_db")) {
      c.snr_db.clear();
      for (const auto& s : doc["snr_db"]) {
        if (s.is_null() || (s.is_string() && s.get<std::string>() == "inf")) {
          c.snr_db.push_back(kNoiseless);
        } else {
          c.snr_db.push_back(s.get<double>());
        }
      }
    }
    if (doc.contains("orders")) c.orders = doc["orders"].get<std::vector<int>>();
    c.trials = doc.value("trials", c.trials);
    c.base_seed = doc.value("seed", c.base_seed);
    c.confidence = doc.value("confidence", c.confidence);
    c.jobs = doc.value("jobs", c.jobs);
    c.keep_curves = doc.value("keep_curves", c.keep_curves);
    if (doc.contains("sbl")) {
      const json& s = doc["sbl"];
      c.sbl.max_iterations = s.value("max_iterations", c.sbl.max_iterations);
      c.sbl.convergence_tol = s.value("convergence_tol", c.sbl.convergence_tol);
      c.sbl.prune_threshold = s.value("prune_threshold", c.sbl.prune_threshold);
      c.sbl.a_init = s.value("a_init", c.sbl.a_init);
      c.sbl.jitter = s.value("jitter", c.sbl.jitter);
      if (s.contains("beta_init")) {
        if (s["beta_init"].is_string()) {
          if (s["beta_init"].get<std::string>() != "auto") throw InvalidArgument("beta_init must be a number or 'auto'");
          c.sbl.beta_init.reset();
        } else {
          c.sbl.beta_init = s["beta_init"].get<double>();
        }
      }
    }
    if (doc.contains("l1")) {
      const json& s = doc["l1"];
      c.l1.rho = s.value("rho", c.l1.rho);
      c.l1.max_iterations = s.value("max_iterations", c.l1.max_iterations);
      c.l1.primal_tol = s.value("primal_tol", c.l1.primal_tol);
      c.l1.dual_tol = s.value("dual_tol", c.l1.dual_tol);
      c.l1.adaptive_rho = s.value("adaptive_rho", c.l1.adaptive_rho);
      if (s.contains("lambda_grid")) {
        const json& g = s["lambda_grid"];
        if (g.is_array()) {
          c.l1.lambda_grid = g.get<std::vector<double>>();
        } else {
          c.l1.lambda_grid = log_spaced(g.at("min").get<double>(), g.at("max").get<double>(), g.at("count").get<int>());
        }
      }
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace hotvbl
