// Exercises the shared library through its C header only.
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "hotvbl/hotvbl.h"

namespace {

std::vector<double> identity(size_t n) {
  std::vector<double> a(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) a[i * n + i] = 1.0;
  return a;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(hotvbl_version()) > 0);
  CHECK(std::string(hotvbl_status_name(HOTVBL_OK)) == "ok");
  CHECK(std::string(hotvbl_status_name(HOTVBL_ERR_DIMENSION)) != "ok");
}

TEST_CASE("operator build and copy") {
  hotvbl_int_matrix* m = nullptr;
  REQUIRE(hotvbl_operator_build(HOTVBL_OPERATOR_ANALYSIS, 2, 5, &m) == HOTVBL_OK);
  CHECK(hotvbl_int_matrix_rows(m) == 3);
  CHECK(hotvbl_int_matrix_cols(m) == 5);
  std::vector<int64_t> buf(15);
  REQUIRE(hotvbl_int_matrix_copy(m, buf.data(), buf.size()) == HOTVBL_OK);
  const std::vector<int64_t> first_row = {1, -2, 1, 0, 0};
  CHECK(std::vector<int64_t>(buf.begin(), buf.begin() + 5) == first_row);
  CHECK(hotvbl_int_matrix_copy(m, buf.data(), 14) == HOTVBL_ERR_OUT_OF_RANGE);
  CHECK(std::string(hotvbl_last_error()).find("buffer") != std::string::npos);
  hotvbl_int_matrix_free(m);

  REQUIRE(hotvbl_operator_build(HOTVBL_OPERATOR_SYNTHESIS, 1, 4, &m) == HOTVBL_OK);
  std::vector<int64_t> v(16);
  REQUIRE(hotvbl_int_matrix_copy(m, v.data(), v.size()) == HOTVBL_OK);
  CHECK(v[0] == 1);
  CHECK(v[1] == 0);
  CHECK(v[15] == 1);
  CHECK(v[12] == 1);
  hotvbl_int_matrix_free(m);

  m = reinterpret_cast<hotvbl_int_matrix*>(0x1);
  CHECK(hotvbl_operator_build(HOTVBL_OPERATOR_ANALYSIS, 5, 5, &m) == HOTVBL_ERR_DIMENSION);
  CHECK(m == nullptr);
  CHECK(std::string(hotvbl_last_error()).find("order must be less than size") != std::string::npos);
  CHECK(hotvbl_operator_build(static_cast<hotvbl_operator_kind>(9), 1, 5, &m) == HOTVBL_ERR_INVALID_ARGUMENT);
  CHECK(hotvbl_operator_build(HOTVBL_OPERATOR_ANALYSIS, 1, 5, nullptr) == HOTVBL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("recover a noiseless step") {
  const size_t n = 12;
  const std::vector<double> a = identity(n);
  std::vector<double> b(n, 0.0);
  for (size_t i = 6; i < n; ++i) b[i] = 2.0;
  hotvbl_sbl_options opts;
  hotvbl_sbl_options_default(&opts);
  CHECK(opts.max_iterations == 2000);
  CHECK(opts.beta_init <= 0.0);
  opts.beta_init = 1e6;

  hotvbl_posterior* p = nullptr;
  REQUIRE(hotvbl_recover(a.data(), n, n, b.data(), 1, &opts, 0.99, &p) == HOTVBL_OK);
  REQUIRE(hotvbl_posterior_size(p) == n);
  CHECK(hotvbl_posterior_confidence(p) == 0.99);
  CHECK(hotvbl_posterior_noise_precision(p) > 0.0);
  CHECK(hotvbl_posterior_iterations(p) > 0);

  std::vector<double> mean(n), var(n), lo(n), hi(n), cov(n * n), edge(n), prec(n);
  REQUIRE(hotvbl_posterior_mean(p, mean.data(), n) == HOTVBL_OK);
  REQUIRE(hotvbl_posterior_variance(p, var.data(), n) == HOTVBL_OK);
  REQUIRE(hotvbl_posterior_lower(p, lo.data(), n) == HOTVBL_OK);
  REQUIRE(hotvbl_posterior_upper(p, hi.data(), n) == HOTVBL_OK);
  REQUIRE(hotvbl_posterior_covariance(p, cov.data(), n * n) == HOTVBL_OK);
  REQUIRE(hotvbl_posterior_edge_mean(p, edge.data(), n) == HOTVBL_OK);
  REQUIRE(hotvbl_posterior_edge_precisions(p, prec.data(), n) == HOTVBL_OK);
  for (size_t i = 0; i < n; ++i) {
    CHECK(std::abs(mean[i] - b[i]) < 1e-3);
    CHECK(lo[i] <= mean[i]);
    CHECK(hi[i] >= mean[i]);
    CHECK(cov[i * n + i] == doctest::Approx(var[i]).epsilon(1e-12));
  }
  CHECK(std::isinf(prec[0]));
  CHECK(std::isfinite(prec[6]));
  CHECK(std::abs(edge[6] - 2.0) < 1e-3);

  const size_t h = hotvbl_posterior_history_length(p);
  REQUIRE(h >= 2);
  std::vector<double> hist(h);
  REQUIRE(hotvbl_posterior_history(p, hist.data(), h) == HOTVBL_OK);
  for (size_t i = 1; i < h; ++i) CHECK(hist[i] >= hist[i - 1] - 1e-8 * std::max(1.0, std::abs(hist[i - 1])));

  std::vector<double> lo50(n), hi50(n);
  REQUIRE(hotvbl_posterior_intervals(p, 0.5, lo50.data(), hi50.data(), n) == HOTVBL_OK);
  for (size_t i = 0; i < n; ++i) CHECK(hi50[i] - lo50[i] <= hi[i] - lo[i]);
  CHECK(hotvbl_posterior_intervals(p, 1.5, lo50.data(), hi50.data(), n) == HOTVBL_ERR_INVALID_ARGUMENT);
  CHECK(hotvbl_posterior_mean(p, mean.data(), n - 1) == HOTVBL_ERR_OUT_OF_RANGE);
  hotvbl_posterior_free(p);
}

TEST_CASE("recover argument errors") {
  const std::vector<double> a = identity(4);
  const std::vector<double> b(4, 1.0);
  hotvbl_posterior* p = nullptr;
  CHECK(hotvbl_recover(a.data(), 4, 4, b.data(), 4, nullptr, 0.99, &p) == HOTVBL_ERR_DIMENSION);
  CHECK(p == nullptr);
  CHECK(hotvbl_recover(a.data(), 4, 4, b.data(), 1, nullptr, 1.0, &p) == HOTVBL_ERR_INVALID_ARGUMENT);
  CHECK(hotvbl_recover(nullptr, 4, 4, b.data(), 1, nullptr, 0.99, &p) == HOTVBL_ERR_INVALID_ARGUMENT);
  hotvbl_sbl_options opts;
  hotvbl_sbl_options_default(&opts);
  opts.max_iterations = 0;
  CHECK(hotvbl_recover(a.data(), 4, 4, b.data(), 1, &opts, 0.99, &p) == HOTVBL_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(hotvbl_last_error()) > 0);
}

TEST_CASE("complex recovery matches the stacked real problem") {
  const size_t n = 16;
  std::vector<double> fre(n * n), fim(n * n);
  REQUIRE(hotvbl_dft_forward(n, fre.data(), fim.data(), n * n) == HOTVBL_OK);
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = i < 8 ? 0.0 : 1.0;
  std::vector<double> yre(n, 0.0), yim(n, 0.0);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < n; ++c) {
      yre[r] += fre[r * n + c] * x[c];
      yim[r] += fim[r * n + c] * x[c];
    }
  }
  std::vector<double> stacked(2 * n * n), data(2 * n);
  std::copy(fre.begin(), fre.end(), stacked.begin());
  std::copy(fim.begin(), fim.end(), stacked.begin() + static_cast<std::ptrdiff_t>(n * n));
  std::copy(yre.begin(), yre.end(), data.begin());
  std::copy(yim.begin(), yim.end(), data.begin() + static_cast<std::ptrdiff_t>(n));

  hotvbl_posterior* pc = nullptr;
  hotvbl_posterior* pr = nullptr;
  REQUIRE(hotvbl_recover_complex(fre.data(), fim.data(), n, n, yre.data(), yim.data(), 1, nullptr, 0.99, &pc) ==
          HOTVBL_OK);
  REQUIRE(hotvbl_recover(stacked.data(), 2 * n, n, data.data(), 1, nullptr, 0.99, &pr) == HOTVBL_OK);
  std::vector<double> mc(n), mr(n);
  REQUIRE(hotvbl_posterior_mean(pc, mc.data(), n) == HOTVBL_OK);
  REQUIRE(hotvbl_posterior_mean(pr, mr.data(), n) == HOTVBL_OK);
  CHECK(mc == mr);
  for (size_t i = 0; i < n; ++i) CHECK(std::abs(mc[i] - x[i]) < 1e-3);
  hotvbl_posterior_free(pc);
  hotvbl_posterior_free(pr);
}

TEST_CASE("l1 solve through the C interface") {
  const size_t n = 10;
  const std::vector<double> a = identity(n);
  std::vector<double> b(n);
  for (size_t i = 0; i < n; ++i) b[i] = i < 5 ? 0.0 : 1.0;
  hotvbl_l1_options opts;
  hotvbl_l1_options_default(&opts);
  CHECK(opts.adaptive_rho == 1);
  std::vector<double> xa(n), xs(n);
  hotvbl_l1_info ia{}, is{};
  REQUIRE(hotvbl_l1_solve(HOTVBL_L1_ANALYSIS, a.data(), n, n, b.data(), 1, 0.1, &opts, xa.data(), &ia) ==
          HOTVBL_OK);
  REQUIRE(hotvbl_l1_solve(HOTVBL_L1_SYNTHESIS, a.data(), n, n, b.data(), 1, 0.1, &opts, xs.data(), &is) ==
          HOTVBL_OK);
  CHECK(ia.converged == 1);
  CHECK(ia.objective > 0.0);
  for (size_t i = 0; i < n; ++i) CHECK(std::abs(xa[i] - xs[i]) < 1e-3);
  CHECK(hotvbl_l1_solve(HOTVBL_L1_ANALYSIS, a.data(), n, n, b.data(), 1, -1.0, nullptr, xa.data(), nullptr) ==
        HOTVBL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("forward model helpers") {
  std::vector<double> g1(12), g2(12);
  REQUIRE(hotvbl_gaussian_forward(3, 4, 42, g1.data(), g1.size()) == HOTVBL_OK);
  REQUIRE(hotvbl_gaussian_forward(3, 4, 42, g2.data(), g2.size()) == HOTVBL_OK);
  CHECK(g1 == g2);
  CHECK(hotvbl_gaussian_forward(3, 4, 42, g1.data(), 11) == HOTVBL_ERR_OUT_OF_RANGE);
  std::vector<double> re(4), im(4);
  CHECK(hotvbl_dft_forward(2, re.data(), im.data(), 3) == HOTVBL_ERR_OUT_OF_RANGE);
}

TEST_CASE("experiment run, records and exports") {
  const char* cfg =
      R"({"n": 24, "j": 12, "k_min": 1, "k_max": 2, "trials": 2, "seed": 9, "jobs": 1,
          "l1_comparator": false})";
  char* resolved = nullptr;
  REQUIRE(hotvbl_experiment_config_resolve(cfg, "test1", &resolved) == HOTVBL_OK);
  CHECK(std::string(resolved).find("\"trials\": 2") != std::string::npos);
  hotvbl_string_free(resolved);

  hotvbl_experiment* e = nullptr;
  REQUIRE(hotvbl_experiment_run(cfg, "test1", &e) == HOTVBL_OK);
  CHECK(hotvbl_experiment_interrupted(e) == 0);
  REQUIRE(hotvbl_experiment_record_count(e) == 4);
  hotvbl_trial_record rec;
  REQUIRE(hotvbl_experiment_record(e, 3, &rec) == HOTVBL_OK);
  CHECK(rec.test == 1);
  CHECK(rec.k == 2);
  CHECK(rec.trial == 1);
  CHECK(rec.method == HOTVBL_METHOD_HOTVBL);
  CHECK(std::string(rec.kind).empty());
  CHECK(std::string(rec.error).empty());
  CHECK(hotvbl_experiment_record(e, 4, &rec) == HOTVBL_ERR_OUT_OF_RANGE);

  char* csv = nullptr;
  REQUIRE(hotvbl_experiment_export(e, HOTVBL_EXPORT_TRIALS_CSV, &csv) == HOTVBL_OK);
  CHECK(std::string(csv).rfind("test,seed,trial,", 0) == 0);
  hotvbl_string_free(csv);
  char* summary = nullptr;
  REQUIRE(hotvbl_experiment_export(e, HOTVBL_EXPORT_SUMMARY_JSON, &summary) == HOTVBL_OK);
  CHECK(std::string(summary).find("success_probability") != std::string::npos);
  hotvbl_string_free(summary);
  hotvbl_experiment_free(e);

  CHECK(hotvbl_experiment_run(R"({"bogus": 1})", "test1", &e) == HOTVBL_ERR_INVALID_ARGUMENT);
  CHECK(e == nullptr);
  CHECK(hotvbl_experiment_run("{not json", "test1", &e) == HOTVBL_ERR_INVALID_ARGUMENT);
  CHECK(hotvbl_experiment_run("{}", "test9", &e) == HOTVBL_ERR_INVALID_ARGUMENT);
}
