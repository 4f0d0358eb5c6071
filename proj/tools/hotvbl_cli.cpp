// hotvbl command-line front end. Talks to the library through the C interface only.
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hotvbl/hotvbl.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInterrupted = 130;

// Carries an exit code up to main.
struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

int exit_code(hotvbl_status s) {
  switch (s) {
    case HOTVBL_OK:
      return kExitOk;
    case HOTVBL_ERR_NUMERICAL:
      return kExitNumerical;
    case HOTVBL_ERR_INTERNAL:
      return kExitInternal;
    default:
      return kExitUsage;
  }
}

void check(hotvbl_status s, const std::string& context) {
  if (s != HOTVBL_OK) throw CliError(exit_code(s), context + ": " + hotvbl_last_error());
}

struct StringDeleter {
  void operator()(char* p) const { hotvbl_string_free(p); }
};
struct ExperimentDeleter {
  void operator()(hotvbl_experiment* e) const { hotvbl_experiment_free(e); }
};
struct PosteriorDeleter {
  void operator()(hotvbl_posterior* p) const { hotvbl_posterior_free(p); }
};
struct IntMatrixDeleter {
  void operator()(hotvbl_int_matrix* m) const { hotvbl_int_matrix_free(m); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kExitUsage, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw CliError(kExitInternal, "cannot write '" + path.string() + "'");
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw CliError(kExitUsage, origin + ": " + e.what());
  }
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---- operators ------------------------------------------------------------

struct OperatorArgs {
  int m = 1;
  int n = 6;
  std::string which = "analysis";
};

int cmd_operators(const OperatorArgs& args) {
  hotvbl_operator_kind kind = HOTVBL_OPERATOR_ANALYSIS;
  if (args.which == "completed") kind = HOTVBL_OPERATOR_COMPLETED;
  if (args.which == "synthesis") kind = HOTVBL_OPERATOR_SYNTHESIS;
  hotvbl_int_matrix* raw = nullptr;
  check(hotvbl_operator_build(kind, args.m, args.n, &raw), "operators");
  std::unique_ptr<hotvbl_int_matrix, IntMatrixDeleter> mat(raw);
  const size_t rows = hotvbl_int_matrix_rows(mat.get());
  const size_t cols = hotvbl_int_matrix_cols(mat.get());
  std::vector<int64_t> values(rows * cols);
  check(hotvbl_int_matrix_copy(mat.get(), values.data(), values.size()), "operators");
  std::string out;
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) {
      if (j > 0) out += ',';
      out += std::to_string(values[i * cols + j]);
    }
    out += '\n';
  }
  std::cout << out;
  return kExitOk;
}

// ---- recover --------------------------------------------------------------

struct RecoverArgs {
  std::string problem;
  std::optional<double> confidence;
  std::string out;
  std::string covariance;
};

std::vector<double> read_vector(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_array()) throw CliError(kExitUsage, std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw CliError(kExitUsage, std::string("'") + key + "' entry " + std::to_string(i) + " is not a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

// Row-major copy of a nested array; every row must have the same length.
std::vector<double> read_matrix(const json& doc, const char* key, size_t& rows, size_t& cols) {
  const json& m = doc.at(key);
  if (!m.is_array() || m.empty()) throw CliError(kExitUsage, std::string("'") + key + "' must be a non-empty array of rows");
  rows = m.size();
  cols = 0;
  std::vector<double> out;
  for (size_t i = 0; i < rows; ++i) {
    if (!m[i].is_array()) throw CliError(kExitUsage, std::string("'") + key + "' row " + std::to_string(i) + " is not an array");
    if (i == 0) {
      cols = m[i].size();
      if (cols == 0) throw CliError(kExitUsage, std::string("'") + key + "' row 0 is empty");
      out.reserve(rows * cols);
    } else if (m[i].size() != cols) {
      throw CliError(kExitUsage, std::string("'") + key + "' is ragged: row " + std::to_string(i) + " has " +
                                     std::to_string(m[i].size()) + " columns, row 0 has " + std::to_string(cols));
    }
    for (size_t j = 0; j < cols; ++j) {
      if (!m[i][j].is_number()) {
        throw CliError(kExitUsage, std::string("'") + key + "' entry at row " + std::to_string(i) + ", column " +
                                       std::to_string(j) + " is not a number");
      }
      out.push_back(m[i][j].get<double>());
    }
  }
  return out;
}

hotvbl_sbl_options read_sbl(const json& doc) {
  hotvbl_sbl_options o;
  hotvbl_sbl_options_default(&o);
  if (!doc.contains("sbl")) return o;
  const json& s = doc["sbl"];
  if (!s.is_object()) throw CliError(kExitUsage, "'sbl' must be an object");
  for (const auto& [key, value] : s.items()) {
    if (key == "max_iterations") {
      o.max_iterations = value.get<int>();
    } else if (key == "convergence_tol") {
      o.convergence_tol = value.get<double>();
    } else if (key == "prune_threshold") {
      o.prune_threshold = value.get<double>();
    } else if (key == "beta_init") {
      o.beta_init = value.is_string() && value.get<std::string>() == "auto" ? 0.0 : value.get<double>();
    } else if (key == "a_init") {
      o.a_init = value.get<double>();
    } else if (key == "jitter") {
      o.jitter = value.get<double>();
    } else {
      throw CliError(kExitUsage, "unknown sbl option '" + key + "'");
    }
  }
  return o;
}

std::vector<double> fetch(const hotvbl_posterior* p, hotvbl_status (*fn)(const hotvbl_posterior*, double*, size_t),
                          size_t count) {
  std::vector<double> v(count);
  check(fn(p, v.data(), count), "recover");
  return v;
}

int cmd_recover(const RecoverArgs& args) {
  const json doc = parse_json(read_file(args.problem), args.problem);
  if (!doc.is_object()) throw CliError(kExitUsage, "problem file must hold a JSON object");
  static const std::vector<std::string> known = {"forward", "forward_imag", "model", "rows", "cols", "seed",
                                                 "data", "data_imag", "order", "confidence", "sbl"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw CliError(kExitUsage, "unknown problem key '" + key + "'");
    }
  }
  if (!doc.contains("data")) throw CliError(kExitUsage, "problem needs a 'data' array");
  if (!doc.contains("order")) throw CliError(kExitUsage, "problem needs an 'order'");

  const std::vector<double> data = read_vector(doc, "data");
  std::vector<double> data_imag;
  bool complex = doc.contains("data_imag") || doc.contains("forward_imag");
  std::vector<double> fre, fim;
  size_t rows = 0, cols = 0;

  if (doc.contains("forward") == doc.contains("model")) {
    throw CliError(kExitUsage, "problem needs exactly one of 'forward' or 'model'");
  }
  if (doc.contains("forward")) {
    fre = read_matrix(doc, "forward", rows, cols);
    if (doc.contains("forward_imag")) {
      size_t r2 = 0, c2 = 0;
      fim = read_matrix(doc, "forward_imag", r2, c2);
      if (r2 != rows || c2 != cols) throw CliError(kExitUsage, "'forward_imag' shape differs from 'forward'");
    } else if (complex) {
      fim.assign(rows * cols, 0.0);
    }
  } else {
    const std::string model = doc["model"].get<std::string>();
    if (model == "identity") {
      rows = cols = data.size();
      fre.assign(rows * cols, 0.0);
      for (size_t i = 0; i < rows; ++i) fre[i * cols + i] = 1.0;
    } else if (model == "dft") {
      rows = cols = data.size();
      fre.resize(rows * cols);
      fim.resize(rows * cols);
      check(hotvbl_dft_forward(rows, fre.data(), fim.data(), rows * cols), "dft model");
      complex = true;
    } else if (model == "gaussian") {
      rows = data.size();
      if (!doc.contains("cols")) throw CliError(kExitUsage, "gaussian model needs 'cols'");
      cols = doc["cols"].get<size_t>();
      const uint64_t seed = doc.value("seed", uint64_t{0});
      fre.resize(rows * cols);
      check(hotvbl_gaussian_forward(rows, cols, seed, fre.data(), fre.size()), "gaussian model");
    } else {
      throw CliError(kExitUsage, "unknown model '" + model + "' (identity, dft, gaussian)");
    }
  }
  if (complex) {
    data_imag = doc.contains("data_imag") ? read_vector(doc, "data_imag") : std::vector<double>(data.size(), 0.0);
    if (data_imag.size() != data.size()) throw CliError(kExitUsage, "'data_imag' length differs from 'data'");
  }
  if (data.size() != rows) {
    throw CliError(kExitUsage, "'data' has " + std::to_string(data.size()) + " entries, forward model has " +
                                   std::to_string(rows) + " rows");
  }

  const int order = doc["order"].get<int>();
  const double confidence = args.confidence.value_or(doc.value("confidence", 0.99));
  const hotvbl_sbl_options opts = read_sbl(doc);

  hotvbl_posterior* raw = nullptr;
  if (complex) {
    check(hotvbl_recover_complex(fre.data(), fim.data(), rows, cols, data.data(), data_imag.data(), order, &opts,
                                 confidence, &raw),
          "recover");
  } else {
    check(hotvbl_recover(fre.data(), rows, cols, data.data(), order, &opts, confidence, &raw), "recover");
  }
  std::unique_ptr<hotvbl_posterior, PosteriorDeleter> post(raw);
  const hotvbl_posterior* p = post.get();
  const size_t n = hotvbl_posterior_size(p);

  const std::vector<double> edge_mean = fetch(p, hotvbl_posterior_edge_mean, n);
  const std::vector<double> edge_prec = fetch(p, hotvbl_posterior_edge_precisions, n);
  json support = json::array();
  json support_mean = json::array();
  json support_prec = json::array();
  for (size_t i = 0; i < n; ++i) {
    if (std::isfinite(edge_prec[i])) {
      support.push_back(i);
      support_mean.push_back(edge_mean[i]);
      support_prec.push_back(edge_prec[i]);
    }
  }
  const std::vector<double> history = fetch(p, hotvbl_posterior_history, hotvbl_posterior_history_length(p));

  json out = {
      {"version", hotvbl_version()},
      {"problem", args.problem},
      {"order", order},
      {"size", n},
      {"complex", complex},
      {"confidence", hotvbl_posterior_confidence(p)},
      {"noise_precision", hotvbl_posterior_noise_precision(p)},
      {"iterations", hotvbl_posterior_iterations(p)},
      {"converged", hotvbl_posterior_converged(p) != 0},
      {"log_likelihood", history.empty() ? json(nullptr) : number_or_null(history.back())},
      {"mean", fetch(p, hotvbl_posterior_mean, n)},
      {"variance", fetch(p, hotvbl_posterior_variance, n)},
      {"lower", fetch(p, hotvbl_posterior_lower, n)},
      {"upper", fetch(p, hotvbl_posterior_upper, n)},
      {"edge_support", support},
      {"edge_mean", support_mean},
      {"edge_precision", support_prec},
  };
  const std::string text = out.dump(2) + "\n";
  if (args.out.empty()) {
    std::cout << text;
  } else {
    write_file(args.out, text);
  }
  if (!args.covariance.empty()) {
    const std::vector<double> cov = fetch(p, hotvbl_posterior_covariance, n * n);
    std::string csv;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        if (j > 0) csv += ',';
        csv += fmt(cov[i * n + j]);
      }
      csv += '\n';
    }
    write_file(args.covariance, csv);
  }
  return kExitOk;
}

// ---- experiments ----------------------------------------------------------

struct ExperimentArgs {
  std::string test;
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> jobs;
  std::optional<int> m;
  std::optional<int> kmin;
  std::optional<int> kmax;
  std::optional<int> n;
  std::vector<std::string> kinds;
  std::vector<std::string> snr;
  std::optional<bool> l1_comparator;
  bool no_curves = false;
  std::string out;
};

std::optional<uint64_t> env_seed() {
  const char* s = std::getenv("HOTVBL_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    size_t used = 0;
    const unsigned long long v = std::stoull(s, &used, 10);
    if (used != std::strlen(s)) throw std::invalid_argument("trailing characters");
    return static_cast<uint64_t>(v);
  } catch (const std::exception&) {
    throw CliError(kExitUsage, std::string("HOTVBL_SEED is not an unsigned integer: '") + s + "'");
  }
}

json snr_value(const std::string& text) {
  if (text == "inf" || text == "noiseless") return nullptr;
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw CliError(kExitUsage, "--snr expects a number or 'inf', got '" + text + "'");
  }
}

void on_sigint(int) { hotvbl_experiment_cancel(); }

std::string exported(const hotvbl_experiment* e, hotvbl_export what) {
  char* raw = nullptr;
  check(hotvbl_experiment_export(e, what, &raw), "export");
  std::unique_ptr<char, StringDeleter> s(raw);
  return std::string(s.get());
}

void print_table(const json& summary) {
  std::ostringstream os;
  for (const json& g : summary["groups"]) {
    std::string head;
    for (const char* key : {"k", "kind", "snr_db", "m", "sparsity_count"}) {
      if (!g.contains(key)) continue;
      const json& v = g[key];
      head += std::string(key) + "=" + (v.is_string() ? v.get<std::string>() : v.is_null() ? "inf" : v.dump()) + " ";
    }
    for (const auto& [method, stats] : g["methods"].items()) {
      os << head << "method=" << method << " trials=" << stats["trials"].dump()
         << " median_rel_err=" << stats["median_rel_err"].dump();
      if (stats.contains("success_probability")) os << " success_probability=" << stats["success_probability"].dump();
      if (stats.contains("median_edge_width")) {
        os << " median_edge_width=" << stats["median_edge_width"].dump()
           << " median_smooth_width=" << stats["median_smooth_width"].dump();
      }
      os << '\n';
    }
  }
  std::cout << os.str();
}

int cmd_experiment(const ExperimentArgs& args, const std::vector<std::string>& argv) {
  json config = json::object();
  std::string config_text;
  if (!args.config.empty()) {
    config_text = read_file(args.config);
    config = parse_json(config_text, args.config);
    // A manifest from an earlier run carries the resolved configuration.
    if (config.is_object() && config.contains("config")) config = config["config"];
    if (!config.is_object()) throw CliError(kExitUsage, args.config + ": configuration must be a JSON object");
  }
  if (config.contains("test") && config["test"] != args.test) {
    throw CliError(kExitUsage, "configuration is for " + config["test"].dump() + ", not " + args.test);
  }
  config["test"] = args.test;

  if (args.seed) {
    config["seed"] = *args.seed;
  } else if (!config.contains("seed")) {
    if (const auto s = env_seed()) config["seed"] = *s;
  }
  if (args.trials) config["trials"] = *args.trials;
  if (args.jobs) config["jobs"] = *args.jobs;
  if (args.n) {
    config["n"] = *args.n;
    if (args.test != "test1") config["j"] = *args.n;
  }
  if (args.m) {
    if (args.test == "test2") throw CliError(kExitUsage, "test2 takes its order from --kind");
    if (args.test == "test1") config["m"] = *args.m;
    if (args.test == "test3") config["orders"] = json::array({*args.m});
  }
  if (args.kmin) config["k_min"] = *args.kmin;
  if (args.kmax) config["k_max"] = *args.kmax;
  if (!args.kinds.empty()) config["kinds"] = args.kinds;
  if (!args.snr.empty()) {
    json list = json::array();
    for (const std::string& s : args.snr) list.push_back(snr_value(s));
    config["snr_db"] = list;
  }
  if (args.l1_comparator) config["l1_comparator"] = *args.l1_comparator;
  if (args.no_curves) config["keep_curves"] = false;

  char* raw_resolved = nullptr;
  check(hotvbl_experiment_config_resolve(config.dump().c_str(), args.test.c_str(), &raw_resolved), "config");
  std::unique_ptr<char, StringDeleter> resolved_text(raw_resolved);
  const json resolved = json::parse(resolved_text.get());

  const fs::path out_dir = args.out.empty() ? fs::path("results") / args.test : fs::path(args.out);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw CliError(kExitUsage, "cannot create '" + out_dir.string() + "': " + ec.message());

  const std::string started = utc_now();
  std::cerr << "hotvbl " << args.test << ": running " << resolved["trials"] << " trials per group, seed "
            << resolved["seed"] << ", output " << out_dir.string() << "\n";
  std::signal(SIGINT, on_sigint);
  hotvbl_experiment* raw = nullptr;
  const hotvbl_status st = hotvbl_experiment_run(resolved_text.get(), args.test.c_str(), &raw);
  std::signal(SIGINT, SIG_DFL);
  check(st, args.test);
  std::unique_ptr<hotvbl_experiment, ExperimentDeleter> exp(raw);
  const bool interrupted = hotvbl_experiment_interrupted(exp.get()) != 0;

  const std::vector<std::pair<std::string, hotvbl_export>> files = {
      {"trials.csv", HOTVBL_EXPORT_TRIALS_CSV},
      {"timings.csv", HOTVBL_EXPORT_TIMINGS_CSV},
      {"curves.csv", HOTVBL_EXPORT_CURVES_CSV},
      {"summary.json", HOTVBL_EXPORT_SUMMARY_JSON},
  };
  json outputs = json::array();
  for (const auto& [name, what] : files) {
    std::string text = exported(exp.get(), what);
    if (name.ends_with(".json") && !text.ends_with("\n")) text += "\n";
    write_file(out_dir / name, text);
    outputs.push_back(name);
  }
  outputs.push_back("manifest.json");

  json manifest = {
      {"command_line", argv},
      {"version", hotvbl_version()},
      {"base_seed", resolved["seed"]},
      {"config_file", args.config.empty() ? json(nullptr) : json(args.config)},
      {"config_file_contents", args.config.empty() ? json(nullptr) : json(config_text)},
      {"config", resolved},
      {"started", started},
      {"finished", utc_now()},
      {"records", hotvbl_experiment_record_count(exp.get())},
      {"interrupted", interrupted},
      {"outputs", outputs},
  };
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

  print_table(json::parse(exported(exp.get(), HOTVBL_EXPORT_SUMMARY_JSON)));
  if (interrupted) {
    std::cerr << "hotvbl " << args.test << ": interrupted, partial results written to " << out_dir.string() << "\n";
    return kExitInterrupted;
  }
  std::cerr << "hotvbl " << args.test << ": " << hotvbl_experiment_record_count(exp.get()) << " records written to "
            << out_dir.string() << "\n";
  return kExitOk;
}

void add_experiment(CLI::App& app, const std::string& name, const std::string& description, ExperimentArgs& args) {
  CLI::App* sub = app.add_subcommand(name, description);
  args.test = name;
  sub->add_option("--config", args.config, "JSON configuration or manifest of an earlier run")->check(CLI::ExistingFile);
  sub->add_option("--seed", args.seed, "base seed (default: config, then HOTVBL_SEED, then 0)");
  sub->add_option("--trials", args.trials, "trials per group")->check(CLI::PositiveNumber);
  sub->add_option("--jobs", args.jobs, "parallel trials (0: all cores)")->check(CLI::NonNegativeNumber);
  sub->add_option("--n", args.n, "signal length")->check(CLI::PositiveNumber);
  sub->add_option("--out", args.out, "output directory (default results/" + name + ")");
  sub->add_flag("--no-curves", args.no_curves, "skip curves.csv series");
  if (name == "test1") {
    sub->add_option("--m", args.m, "HOTV order")->check(CLI::PositiveNumber);
    sub->add_option("--kmin", args.kmin, "smallest sparsity level")->check(CLI::PositiveNumber);
    sub->add_option("--kmax", args.kmax, "largest sparsity level")->check(CLI::PositiveNumber);
    sub->add_flag("--l1,!--no-l1", args.l1_comparator, "run the fixed lambda l1 comparator");
  }
  if (name == "test2") {
    sub->add_option("--kind", args.kinds, "signal kind (repeatable)")
        ->check(CLI::IsMember({"constant", "linear", "quadratic"}));
  }
  if (name == "test3") sub->add_option("--m", args.m, "HOTV order")->check(CLI::PositiveNumber);
  if (name != "test1") sub->add_option("--snr", args.snr, "SNR in dB or 'inf' (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hotvbl: piecewise smooth signal recovery by sparse Bayesian learning"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", std::string(hotvbl_version()));

  OperatorArgs op;
  CLI::App* ops = app.add_subcommand("operators", "analysis, completed and synthesis operators");
  CLI::App* dump = ops->add_subcommand("dump", "write an operator as CSV to stdout");
  ops->require_subcommand(1);
  dump->add_option("--m", op.m, "order")->required();
  dump->add_option("--n", op.n, "size")->required();
  dump->add_option("--which", op.which, "analysis, completed or synthesis")
      ->check(CLI::IsMember({"analysis", "completed", "synthesis"}));

  RecoverArgs rec;
  CLI::App* recover = app.add_subcommand("recover", "posterior for one problem file");
  recover->add_option("--problem", rec.problem, "problem JSON")->required()->check(CLI::ExistingFile);
  recover->add_option("--confidence", rec.confidence, "interval level in (0, 1)");
  recover->add_option("--out", rec.out, "summary JSON path (default stdout)");
  recover->add_option("--covariance", rec.covariance, "write the full covariance as CSV");

  ExperimentArgs t1, t2, t3;
  add_experiment(app, "test1", "phase transition with Gaussian measurements", t1);
  add_experiment(app, "test2", "denoising of one-jump signals against oracle l1", t2);
  add_experiment(app, "test3", "real signal from noisy Fourier data", t3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::vector<std::string> args(argv, argv + argc);
  try {
    if (dump->parsed()) return cmd_operators(op);
    if (recover->parsed()) return cmd_recover(rec);
    for (ExperimentArgs* e : {&t1, &t2, &t3}) {
      if (app.got_subcommand(e->test)) return cmd_experiment(*e, args);
    }
  } catch (const CliError& e) {
    std::cerr << "hotvbl: " << e.what() << "\n";
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "hotvbl: malformed input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "hotvbl: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
