#include "hotvbl/hotvbl.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "experiments.hpp"
#include "l1.hpp"
#include "operators.hpp"
#include "recover.hpp"
#include "signals.hpp"

struct hotvbl_int_matrix {
  hotvbl::IntMatrix m;
};

struct hotvbl_posterior {
  hotvbl::SignalPosterior p;
};

struct hotvbl_experiment {
  hotvbl::ExperimentResult result;
};

namespace {

thread_local std::string g_last_error;
std::atomic<bool> g_cancel{false};

hotvbl_status fail(hotvbl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps library exceptions onto status codes.
template <class F>
hotvbl_status guarded(F&& f) {
  try {
    f();
    return HOTVBL_OK;
  } catch (const hotvbl::DimensionError& e) {
    return fail(HOTVBL_ERR_DIMENSION, e.what());
  } catch (const hotvbl::InvalidArgument& e) {
    return fail(HOTVBL_ERR_INVALID_ARGUMENT, e.what());
  } catch (const hotvbl::NumericalError& e) {
    return fail(HOTVBL_ERR_NUMERICAL, e.what());
  } catch (const hotvbl::InternalError& e) {
    return fail(HOTVBL_ERR_INTERNAL, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(HOTVBL_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HOTVBL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HOTVBL_ERR_INTERNAL, e.what());
  }
}

hotvbl_status null_arg(const char* what) {
  return fail(HOTVBL_ERR_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

hotvbl_status copy_out(const Eigen::VectorXd& v, double* out, size_t capacity) {
  if (out == nullptr) return null_arg("output buffer");
  if (capacity < static_cast<size_t>(v.size())) {
    return fail(HOTVBL_ERR_OUT_OF_RANGE, "output buffer holds " + std::to_string(capacity) + " values, need " +
                                             std::to_string(v.size()));
  }
  std::memcpy(out, v.data(), sizeof(double) * static_cast<size_t>(v.size()));
  return HOTVBL_OK;
}

hotvbl::Matrix row_major(const double* data, size_t rows, size_t cols) {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(data, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

hotvbl::SblOptions to_options(const hotvbl_sbl_options* o) {
  hotvbl::SblOptions out;
  if (o == nullptr) return out;
  out.max_iterations = o->max_iterations;
  out.convergence_tol = o->convergence_tol;
  out.prune_threshold = o->prune_threshold;
  if (o->beta_init > 0.0) out.beta_init = o->beta_init;
  out.a_init = o->a_init;
  out.jitter = o->jitter;
  return out;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hotvbl::TestId default_test(const char* name) {
  return name == nullptr ? hotvbl::TestId::test1 : hotvbl::test_id_from_string(name);
}

}  // namespace

extern "C" {

const char* hotvbl_version(void) { return HOTVBL_VERSION_STRING; }

const char* hotvbl_last_error(void) { return g_last_error.c_str(); }

const char* hotvbl_status_name(hotvbl_status status) {
  switch (status) {
    case HOTVBL_OK:
      return "ok";
    case HOTVBL_ERR_DIMENSION:
      return "dimension error";
    case HOTVBL_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case HOTVBL_ERR_NUMERICAL:
      return "numerical failure";
    case HOTVBL_ERR_INTERNAL:
      return "internal error";
    case HOTVBL_ERR_OUT_OF_RANGE:
      return "buffer too small";
  }
  return "unknown status";
}

void hotvbl_string_free(char* str) { std::free(str); }

hotvbl_status hotvbl_operator_build(hotvbl_operator_kind kind, int order, int size, hotvbl_int_matrix** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    hotvbl::OperatorKind k;
    switch (kind) {
      case HOTVBL_OPERATOR_ANALYSIS:
        k = hotvbl::OperatorKind::analysis;
        break;
      case HOTVBL_OPERATOR_COMPLETED:
        k = hotvbl::OperatorKind::completed;
        break;
      case HOTVBL_OPERATOR_SYNTHESIS:
        k = hotvbl::OperatorKind::synthesis;
        break;
      default:
        throw hotvbl::InvalidArgument("unknown operator kind");
    }
    *out = new hotvbl_int_matrix{hotvbl::build_operator(k, order, size)};
  });
}

size_t hotvbl_int_matrix_rows(const hotvbl_int_matrix* m) { return m ? static_cast<size_t>(m->m.rows()) : 0; }
size_t hotvbl_int_matrix_cols(const hotvbl_int_matrix* m) { return m ? static_cast<size_t>(m->m.cols()) : 0; }

hotvbl_status hotvbl_int_matrix_copy(const hotvbl_int_matrix* m, int64_t* out, size_t capacity) {
  if (m == nullptr) return null_arg("matrix");
  if (out == nullptr) return null_arg("output buffer");
  const size_t n = static_cast<size_t>(m->m.size());
  if (capacity < n) return fail(HOTVBL_ERR_OUT_OF_RANGE, "output buffer too small for matrix");
  std::memcpy(out, m->m.data(), n * sizeof(int64_t));  // storage is row-major
  return HOTVBL_OK;
}

void hotvbl_int_matrix_free(hotvbl_int_matrix* m) { delete m; }

void hotvbl_sbl_options_default(hotvbl_sbl_options* opts) {
  if (opts == nullptr) return;
  const hotvbl::SblOptions d;
  opts->max_iterations = d.max_iterations;
  opts->convergence_tol = d.convergence_tol;
  opts->prune_threshold = d.prune_threshold;
  opts->beta_init = 0.0;
  opts->a_init = d.a_init;
  opts->jitter = d.jitter;
}

hotvbl_status hotvbl_recover(const double* forward, size_t rows, size_t cols, const double* data, int order,
                             const hotvbl_sbl_options* opts, double confidence, hotvbl_posterior** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (forward == nullptr) return null_arg("forward");
  if (data == nullptr) return null_arg("data");
  return guarded([&] {
    hotvbl::RecoveryProblem problem;
    problem.forward = row_major(forward, rows, cols);
    problem.data = Eigen::Map<const Eigen::VectorXd>(data, static_cast<Eigen::Index>(rows));
    problem.order = order;
    problem.options = to_options(opts);
    *out = new hotvbl_posterior{hotvbl::recover(problem, confidence)};
  });
}

hotvbl_status hotvbl_recover_complex(const double* forward_re, const double* forward_im, size_t rows, size_t cols,
                                     const double* data_re, const double* data_im, int order,
                                     const hotvbl_sbl_options* opts, double confidence, hotvbl_posterior** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (forward_re == nullptr || forward_im == nullptr) return null_arg("forward");
  if (data_re == nullptr || data_im == nullptr) return null_arg("data");
  return guarded([&] {
    hotvbl::ComplexMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    a.real() = row_major(forward_re, rows, cols);
    a.imag() = row_major(forward_im, rows, cols);
    hotvbl::ComplexVector b(static_cast<Eigen::Index>(rows));
    b.real() = Eigen::Map<const Eigen::VectorXd>(data_re, static_cast<Eigen::Index>(rows));
    b.imag() = Eigen::Map<const Eigen::VectorXd>(data_im, static_cast<Eigen::Index>(rows));
    *out = new hotvbl_posterior{hotvbl::recover_complex(a, b, order, to_options(opts), confidence)};
  });
}

size_t hotvbl_posterior_size(const hotvbl_posterior* p) { return p ? static_cast<size_t>(p->p.mean.size()) : 0; }
double hotvbl_posterior_confidence(const hotvbl_posterior* p) { return p ? p->p.confidence : std::nan(""); }
double hotvbl_posterior_noise_precision(const hotvbl_posterior* p) {
  return p ? p->p.edge_posterior.noise_precision : std::nan("");
}
int hotvbl_posterior_iterations(const hotvbl_posterior* p) { return p ? p->p.edge_posterior.iterations : 0; }
int hotvbl_posterior_converged(const hotvbl_posterior* p) { return p && p->p.edge_posterior.converged ? 1 : 0; }

hotvbl_status hotvbl_posterior_mean(const hotvbl_posterior* p, double* out, size_t capacity) {
  if (p == nullptr) return null_arg("posterior");
  return copy_out(p->p.mean, out, capacity);
}

hotvbl_status hotvbl_posterior_variance(const hotvbl_posterior* p, double* out, size_t capacity) {
  if (p == nullptr) return null_arg("posterior");
  return copy_out(p->p.variance(), out, capacity);
}

hotvbl_status hotvbl_posterior_lower(const hotvbl_posterior* p, double* out, size_t capacity) {
  if (p == nullptr) return null_arg("posterior");
  Eigen::VectorXd v(p->p.mean.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = p->p.intervals[static_cast<size_t>(i)].lower;
  return copy_out(v, out, capacity);
}

hotvbl_status hotvbl_posterior_upper(const hotvbl_posterior* p, double* out, size_t capacity) {
  if (p == nullptr) return null_arg("posterior");
  Eigen::VectorXd v(p->p.mean.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = p->p.intervals[static_cast<size_t>(i)].upper;
  return copy_out(v, out, capacity);
}

hotvbl_status hotvbl_posterior_covariance(const hotvbl_posterior* p, double* out, size_t capacity) {
  if (p == nullptr) return null_arg("posterior");
  // Symmetric, so column-major storage reads the same as row-major.
  const Eigen::Map<const Eigen::VectorXd> flat(p->p.covariance.data(), p->p.covariance.size());
  return copy_out(flat, out, capacity);
}

hotvbl_status hotvbl_posterior_intervals(const hotvbl_posterior* p, double level, double* lower, double* upper,
                                         size_t capacity) {
  if (p == nullptr) return null_arg("posterior");
  if (lower == nullptr || upper == nullptr) return null_arg("output buffer");
  if (capacity < static_cast<size_t>(p->p.mean.size())) return fail(HOTVBL_ERR_OUT_OF_RANGE, "output buffer too small");
  return guarded([&] {
    const auto iv = hotvbl::confidence_intervals(p->p, level);
    for (size_t i = 0; i < iv.size(); ++i) {
      lower[i] = iv[i].lower;
      upper[i] = iv[i].upper;
    }
  });
}

hotvbl_status hotvbl_posterior_edge_mean(const hotvbl_posterior* p, double* out, size_t capacity) {
  if (p == nullptr) return null_arg("posterior");
  return copy_out(p->p.edge_posterior.mean, out, capacity);
}

hotvbl_status hotvbl_posterior_edge_precisions(const hotvbl_posterior* p, double* out, size_t capacity) {
  if (p == nullptr) return null_arg("posterior");
  return copy_out(p->p.edge_posterior.precisions, out, capacity);
}

size_t hotvbl_posterior_history_length(const hotvbl_posterior* p) {
  return p ? p->p.edge_posterior.log_likelihood_history.size() : 0;
}

hotvbl_status hotvbl_posterior_history(const hotvbl_posterior* p, double* out, size_t capacity) {
  if (p == nullptr) return null_arg("posterior");
  const auto& h = p->p.edge_posterior.log_likelihood_history;
  return copy_out(Eigen::Map<const Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size())), out, capacity);
}

void hotvbl_posterior_free(hotvbl_posterior* p) { delete p; }

void hotvbl_l1_options_default(hotvbl_l1_options* opts) {
  if (opts == nullptr) return;
  const hotvbl::L1Options d;
  opts->rho = d.rho;
  opts->max_iterations = d.max_iterations;
  opts->primal_tol = d.primal_tol;
  opts->dual_tol = d.dual_tol;
  opts->adaptive_rho = d.adaptive_rho ? 1 : 0;
}

hotvbl_status hotvbl_l1_solve(hotvbl_l1_form form, const double* forward, size_t rows, size_t cols,
                              const double* data, int order, double lambda, const hotvbl_l1_options* opts,
                              double* x_out, hotvbl_l1_info* info) {
  if (forward == nullptr) return null_arg("forward");
  if (data == nullptr) return null_arg("data");
  if (x_out == nullptr) return null_arg("x_out");
  return guarded([&] {
    hotvbl::L1Options o;
    if (opts != nullptr) {
      o.rho = opts->rho;
      o.max_iterations = opts->max_iterations;
      o.primal_tol = opts->primal_tol;
      o.dual_tol = opts->dual_tol;
      o.adaptive_rho = opts->adaptive_rho != 0;
    }
    const hotvbl::Matrix a = row_major(forward, rows, cols);
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(data, static_cast<Eigen::Index>(rows));
    hotvbl::L1Result r;
    if (form == HOTVBL_L1_ANALYSIS) {
      r = hotvbl::solve_analysis_l1(a, b, order, lambda, o);
    } else if (form == HOTVBL_L1_SYNTHESIS) {
      r = hotvbl::solve_synthesis_l1(a, b, order, lambda, o);
    } else {
      throw hotvbl::InvalidArgument("unknown l1 form");
    }
    std::memcpy(x_out, r.x.data(), sizeof(double) * static_cast<size_t>(r.x.size()));
    if (info != nullptr) {
      info->converged = r.converged ? 1 : 0;
      info->iterations = r.iterations;
      info->objective = r.objective;
      info->primal_residual = r.primal_residual;
      info->dual_residual = r.dual_residual;
      info->stationarity = r.stationarity;
    }
  });
}

hotvbl_status hotvbl_gaussian_forward(size_t rows, size_t cols, uint64_t seed, double* out, size_t capacity) {
  if (out == nullptr) return null_arg("output buffer");
  if (capacity < rows * cols) return fail(HOTVBL_ERR_OUT_OF_RANGE, "output buffer too small");
  return guarded([&] {
    hotvbl::Rng rng(seed);
    const hotvbl::Matrix a = hotvbl::gaussian_forward(static_cast<int>(rows), static_cast<int>(cols), rng);
    for (size_t i = 0; i < rows; ++i) {
      for (size_t j = 0; j < cols; ++j) out[i * cols + j] = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  });
}

hotvbl_status hotvbl_dft_forward(size_t n, double* out_re, double* out_im, size_t capacity) {
  if (out_re == nullptr || out_im == nullptr) return null_arg("output buffer");
  if (capacity < n * n) return fail(HOTVBL_ERR_OUT_OF_RANGE, "output buffer too small");
  return guarded([&] {
    const hotvbl::ComplexMatrix f = hotvbl::dft_forward(static_cast<int>(n));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        const auto v = f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        out_re[i * n + j] = v.real();
        out_im[i * n + j] = v.imag();
      }
    }
  });
}

hotvbl_status hotvbl_experiment_config_resolve(const char* config_json, const char* default_test_name,
                                               char** resolved_json) {
  if (resolved_json == nullptr) return null_arg("resolved_json");
  *resolved_json = nullptr;
  return guarded([&] {
    const auto doc = nlohmann::json::parse(config_json != nullptr ? config_json : "{}");
    const auto cfg = hotvbl::config_from_json(doc, default_test(default_test_name));
    *resolved_json = dup_string(hotvbl::config_to_json(cfg).dump(2));
  });
}

hotvbl_status hotvbl_experiment_run(const char* config_json, const char* default_test_name, hotvbl_experiment** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const auto doc = nlohmann::json::parse(config_json != nullptr ? config_json : "{}");
    const auto cfg = hotvbl::config_from_json(doc, default_test(default_test_name));
    g_cancel.store(false);
    *out = new hotvbl_experiment{hotvbl::run_experiment(cfg, &g_cancel)};
  });
}

void hotvbl_experiment_cancel(void) { g_cancel.store(true); }

int hotvbl_experiment_interrupted(const hotvbl_experiment* e) { return e && e->result.interrupted ? 1 : 0; }

size_t hotvbl_experiment_record_count(const hotvbl_experiment* e) { return e ? e->result.records.size() : 0; }

hotvbl_status hotvbl_experiment_record(const hotvbl_experiment* e, size_t index, hotvbl_trial_record* out) {
  if (e == nullptr) return null_arg("experiment");
  if (out == nullptr) return null_arg("out");
  if (index >= e->result.records.size()) return fail(HOTVBL_ERR_OUT_OF_RANGE, "record index out of range");
  const hotvbl::TrialRecord& r = e->result.records[index];
  out->test = static_cast<int>(r.test) + 1;
  out->seed = r.seed;
  out->trial = r.trial;
  out->k = r.k;
  out->kind = r.test == hotvbl::TestId::test2 ? hotvbl::to_string(r.kind).data() : "";
  out->snr_db = r.snr_db;
  out->m = r.m;
  out->method = static_cast<hotvbl_method>(r.method);
  out->rel_err = r.rel_err;
  out->max_err = r.max_err;
  out->success = r.success ? 1 : 0;
  out->realized_snr_db = r.realized_snr_db;
  out->lambda = r.lambda;
  out->iterations = r.iterations;
  out->converged = r.converged ? 1 : 0;
  out->sparsity_count = r.sparsity_count;
  out->edge_width = r.edge_width;
  out->smooth_width = r.smooth_width;
  out->wall_time = r.wall_time;
  out->error = r.error.c_str();
  return HOTVBL_OK;
}

hotvbl_status hotvbl_experiment_export(const hotvbl_experiment* e, hotvbl_export what, char** out) {
  if (e == nullptr) return null_arg("experiment");
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    std::string text;
    switch (what) {
      case HOTVBL_EXPORT_TRIALS_CSV:
        text = hotvbl::trials_csv(e->result);
        break;
      case HOTVBL_EXPORT_TIMINGS_CSV:
        text = hotvbl::timings_csv(e->result);
        break;
      case HOTVBL_EXPORT_CURVES_CSV:
        text = hotvbl::curves_csv(e->result);
        break;
      case HOTVBL_EXPORT_SUMMARY_JSON:
        text = hotvbl::summarize(e->result).dump(2);
        break;
      case HOTVBL_EXPORT_CONFIG_JSON:
        text = hotvbl::config_to_json(e->result.config).dump(2);
        break;
      default:
        throw hotvbl::InvalidArgument("unknown export kind");
    }
    *out = dup_string(text);
  });
}

void hotvbl_experiment_free(hotvbl_experiment* e) { delete e; }

}  // extern "C"
