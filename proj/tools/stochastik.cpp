// Command-line front end: file ingestion, chain/jump analysis, samplers,
// queueing formulas and simulation, and the bundled model collection.
//
// Exit codes: 0 success, 1 domain errors, 2 usage errors. With
// --format json, errors are emitted as a JSON object on stdout.

#include <cstdlib>
#include <fstream>
#include <thread>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <stochastik/stochastik.hpp>

namespace {

using namespace stochastik;
using ordered_json = nlohmann::ordered_json;

enum class Format { Text, Json, Csv };

struct GlobalOptions {
  Format format = Format::Text;
  bool exact_backend = true;
};

GlobalOptions g_options;

Format parse_format(const std::string& name) {
  if (name == "text") return Format::Text;
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw CLI::ValidationError("--format must be text, json, or csv");
}

// Ordered key/value report with optional named tables; rendered as text or JSON.
struct Report {
  ordered_json body = ordered_json::object();

  Report() { body["schema"] = "stochastik.report/1"; }

  template <typename T>
  void field(const std::string& key, const T& value) {
    body[key] = value;
  }
  void scalar_field(const std::string& key, const Rational& value) {
    body[key] = format_rational(value) + " (= " + io::format_double(to_double(value)) + ")";
  }
  void scalar_field(const std::string& key, double value) { body[key] = io::format_double(value); }

  void print() const {
    if (g_options.format == Format::Json) {
      std::cout << body.dump(2) << "\n";
      return;
    }
    if (g_options.format == Format::Csv) {
      // scalar fields only; structured tables go to --csv files or JSON
      std::cout << "key,value\n";
      for (const auto& [key, value] : body.items()) {
        if (value.is_object() || value.is_array()) continue;
        std::cout << key << ","
                  << (value.is_string() ? "\"" + value.get<std::string>() + "\"" : value.dump())
                  << "\n";
      }
      return;
    }
    print_node(body, 0);
  }

 private:
  static void print_node(const ordered_json& node, int indent) {
    const std::string pad(indent, ' ');
    for (const auto& [key, value] : node.items()) {
      if (value.is_object()) {
        std::cout << pad << key << ":\n";
        print_node(value, indent + 2);
      } else if (value.is_array()) {
        std::cout << pad << key << ":";
        for (const auto& item : value)
          std::cout << " " << (item.is_string() ? item.get<std::string>() : item.dump());
        std::cout << "\n";
      } else if (value.is_string()) {
        std::cout << pad << key << ": " << value.get<std::string>() << "\n";
      } else {
        std::cout << pad << key << ": " << value.dump() << "\n";
      }
    }
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::BadInput, "cannot write '" + path + "'");
  return out;
}

template <typename T>
std::string matrix_to_text(const Matrix<T>& m) {
  std::ostringstream oss;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    oss << (i == 0 ? "[" : " ") << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) oss << ", ";
      if constexpr (scalar_traits<T>::exact)
        oss << format_rational(m(i, j));
      else
        oss << io::format_double(m(i, j));
    }
    oss << "]" << (i + 1 == m.rows() ? "]" : "\n");
  }
  return oss.str();
}

template <typename T>
ordered_json matrix_to_json(const Matrix<T>& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (scalar_traits<T>::exact)
        row.push_back(format_rational(m(i, j)));
      else
        row.push_back(m(i, j));
    }
    rows.push_back(row);
  }
  return rows;
}

template <typename T>
ordered_json vector_to_json(const std::vector<T>& v) {
  ordered_json arr = ordered_json::array();
  for (const auto& x : v) {
    if constexpr (scalar_traits<T>::exact)
      arr.push_back(format_rational(x) + " (= " + io::format_double(to_double(x)) + ")");
    else
      arr.push_back(x);
  }
  return arr;
}

std::string state_name(const std::vector<std::string>& labels, int i) {
  return labels.empty() ? std::to_string(i) : labels[i];
}

// ---------------------------------------------------------------------------
// chain commands

template <typename T>
void run_chain_classify(const std::string& path) {
  auto file = io::parse_chain_file<T>(io::load_json(path));
  auto cls = classify(file.chain);
  Report report;
  report.field("states", file.chain.size());
  ordered_json classes = ordered_json::array();
  for (std::size_t c = 0; c < cls.classes.size(); ++c) {
    ordered_json entry;
    ordered_json members = ordered_json::array();
    for (int s : cls.classes[c]) members.push_back(state_name(file.chain.labels(), s));
    entry["members"] = members;
    entry["closed"] = cls.class_kind[c] == ClassKind::RecurrentCandidate;
    classes.push_back(entry);
  }
  report.field("communication_classes", classes);
  report.field("irreducible", cls.irreducible);
  report.field("absorbing_chain", cls.absorbing_chain);
  ordered_json absorbing = ordered_json::array();
  for (int s : cls.absorbing_states) absorbing.push_back(state_name(file.chain.labels(), s));
  report.field("absorbing_states", absorbing);
  report.field("regular", cls.regular);
  if (cls.regular_witness) report.field("regular_witness_exponent", *cls.regular_witness);
  report.field("periods", cls.period);
  report.print();
}

template <typename T>
void run_chain_power(const std::string& path, long steps) {
  auto file = io::parse_chain_file<T>(io::load_json(path));
  Distribution<T> initial =
      file.initial ? *file.initial : Distribution<T>::point_mass(file.chain.size(), 0);
  auto result = power_step(initial, file.chain, steps);
  Report report;
  report.field("steps", steps);
  report.field("distribution", vector_to_json(result.probs()));
  report.print();
}

template <typename T>
void run_absorb(const std::string& path, const std::string& initial_spec) {
  auto file = io::parse_chain_file<T>(io::load_json(path));
  auto dec = canonical_form(file.chain);
  const auto& f = fundamental_matrix(dec);
  const auto& b = absorption_probabilities(dec);
  auto times = expected_absorption_times(dec);

  Report report;
  ordered_json transient = ordered_json::array();
  for (int s : dec.transient_states) transient.push_back(state_name(file.chain.labels(), s));
  ordered_json absorbing = ordered_json::array();
  for (int s : dec.absorbing_states) absorbing.push_back(state_name(file.chain.labels(), s));
  report.field("transient_states", transient);
  report.field("absorbing_states", absorbing);
  if (g_options.format == Format::Json) {
    report.field("fundamental_matrix", matrix_to_json(f));
    report.field("absorption_matrix", matrix_to_json(b));
  } else {
    report.field("fundamental_matrix", "\n" + matrix_to_text(f));
    report.field("absorption_matrix", "\n" + matrix_to_text(b));
  }
  report.field("expected_absorption_times", vector_to_json(times));

  std::optional<Distribution<T>> initial = file.initial;
  if (!initial_spec.empty()) {
    std::vector<T> probs;
    std::stringstream ss(initial_spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if constexpr (scalar_traits<T>::exact)
        probs.push_back(parse_rational(token));
      else
        probs.push_back(std::stod(token));
    }
    initial = Distribution<T>(std::move(probs));
  }
  if (initial) {
    T averaged = initial_averaged_absorption_time(dec, *initial);
    if constexpr (scalar_traits<T>::exact)
      report.scalar_field("initial_averaged_absorption_time", averaged);
    else
      report.scalar_field("initial_averaged_absorption_time", averaged);
  }
  report.print();
}

template <typename T>
void run_stationary(const std::string& path, bool with_gap) {
  auto file = io::parse_chain_file<T>(io::load_json(path));
  auto result = stationary_analysis(file.chain);
  Report report;
  report.field("stationary", vector_to_json(result.pi.probs()));
  report.field("mean_recurrence_times", vector_to_json(result.recurrence_times));
  report.field("regular", result.limit_matrix.has_value());
  if (with_gap) {
    // gap is a float quantity; rebuild the chain in doubles
    Matrix<double> m(file.chain.size(), file.chain.size());
    std::vector<double> pi_f(file.chain.size());
    for (std::size_t i = 0; i < file.chain.size(); ++i) {
      pi_f[i] = to_double(result.pi[i]);
      for (std::size_t j = 0; j < file.chain.size(); ++j) m(i, j) = to_double(file.chain(i, j));
    }
    // renormalize the float copy of an exact law
    double total = 0;
    for (double x : pi_f) total += x;
    for (double& x : pi_f) x /= total;
    auto gap = spectral_gap(StochasticMatrix<double>(std::move(m)), Distribution<double>(pi_f));
    report.scalar_field("subdominant_modulus", gap.subdominant_modulus);
    report.scalar_field("spectral_gap", gap.gap);
  }
  report.print();
}

// ---------------------------------------------------------------------------
// walk commands

void run_walk_law(long n) {
  Report report;
  ordered_json table = ordered_json::array();
  Rational cumulative(0);
  for (long k = 2; k <= n; k += 2) {
    Rational p = walk::return_time_law(k);
    cumulative += p;
    ordered_json row;
    row["n"] = k;
    row["first_return_probability"] = format_rational(p);
    row["decimal"] = io::format_double(to_double(p), 6);
    row["cumulative"] = io::format_double(to_double(cumulative), 6);
    table.push_back(row);
  }
  report.field("first_return_law", table);
  report.print();
}

void run_walk_recurrence(int dim, long m, const std::string& csv_path) {
  auto diag = walk::recurrence_diagnostic(dim, m);
  if (!csv_path.empty()) {
    auto out = open_output(csv_path);
    out << "# schema=stochastik.series/1\n";
    out << "m,return_probability,partial_sum\n";
    for (long i = 0; i < m; ++i)
      out << (i + 1) << "," << io::format_double(diag.return_probs[i]) << ","
          << io::format_double(diag.partial_sums[i]) << "\n";
  }
  Report report;
  report.field("dimension", dim);
  report.field("horizon", m);
  report.scalar_field("partial_sum", diag.partial_sums.back());
  report.scalar_field("fitted_exponent", diag.fitted_exponent);
  report.field("verdict", diag.recurrent_verdict ? "recurrent" : "transient");
  report.field("note", "verdict is a heuristic tail fit over m in [M/2, M]");
  if (!csv_path.empty()) report.field("csv", csv_path);
  report.print();
}

// ---------------------------------------------------------------------------
// distribution / poisson / mcmc commands

void run_dist_l1(long n, const std::string& q_text) {
  auto result = dist::l1_binomial_poisson(n, parse_rational(q_text));
  Report report;
  report.field("n", n);
  report.field("q", q_text);
  report.scalar_field("l1_distance", result.distance);
  report.scalar_field("bound", result.bound);
  report.print();
}

void run_poisson_sample(double rate, double horizon, std::uint64_t seed,
                        const std::string& csv_path) {
  RngStream rng(seed);
  auto sample = poisson::sample_poisson_process(rate, horizon, rng);
  if (!csv_path.empty()) {
    auto out = open_output(csv_path);
    out << "# schema=stochastik.series/1 algorithm=" << RngStream::algorithm_id()
        << " seed=" << seed << "\n";
    out << "event_time\n";
    out.precision(17);
    for (double t : sample.times) out << t << "\n";
  }
  Report report;
  report.field("algorithm", RngStream::algorithm_id());
  report.field("seed", seed);
  report.field("rate", rate);
  report.field("horizon", horizon);
  report.field("events", sample.times.size());
  report.scalar_field("events_per_unit_time", double(sample.times.size()) / horizon);
  if (!csv_path.empty()) report.field("csv", csv_path);
  report.print();
}

void run_ising(const std::string& size_spec, double beta, double field, double steps_f,
               std::uint64_t seed, const std::string& csv_path, long record_every,
               const std::string& start) {
  std::vector<long> extents;
  std::stringstream ss(size_spec);
  std::string token;
  while (std::getline(ss, token, 'x')) extents.push_back(std::stol(token));
  const long steps = static_cast<long>(steps_f);
  auto cfg = mcmc::make_ising(extents, start == "down" ? -1 : 1, field, beta);
  RngStream rng(seed);
  if (record_every <= 0) record_every = std::max<long>(1, steps / 10000);
  auto series = mcmc::glauber_chain(cfg, steps, rng, record_every);
  if (!csv_path.empty()) {
    auto out = open_output(csv_path);
    out << "# schema=stochastik.series/1 algorithm=" << RngStream::algorithm_id()
        << " seed=" << seed << "\n";
    out << "step,magnetization\n";
    out.precision(17);
    for (std::size_t i = 0; i < series.values.size(); ++i)
      out << (i + 1) * series.record_every << "," << series.values[i] << "\n";
  }
  Report report;
  report.field("algorithm", RngStream::algorithm_id());
  report.field("seed", seed);
  report.field("lattice", size_spec);
  report.field("sites", cfg.sites());
  report.scalar_field("beta", beta);
  report.scalar_field("field", field);
  report.field("steps", steps);
  report.field("accepted_flips", series.accepted);
  report.scalar_field("final_magnetization", series.final_magnetization);
  if (!csv_path.empty()) report.field("csv", csv_path);
  report.print();
}

void run_tsp_anneal(const std::string& input, double beta0, double growth, double steps_f,
                    std::uint64_t seed, const std::string& move_name) {
  auto tsp = io::parse_tsp_file(io::load_json(input));
  mcmc::AnnealSchedule schedule(beta0, growth, static_cast<long>(steps_f));
  const auto move =
      move_name == "2opt" ? mcmc::TourMove::TwoOpt : mcmc::TourMove::Transposition;
  RngStream rng(seed);
  auto result = mcmc::simulated_annealing_tsp(tsp.distances, schedule, move, rng);
  Report report;
  report.field("algorithm", RngStream::algorithm_id());
  report.field("seed", seed);
  report.field("cities", result.tour.size());
  report.field("moves", move_name);
  report.field("steps", schedule.steps);
  report.scalar_field("best_length", result.length);
  report.field("best_tour", result.tour);
  report.print();
}

// ---------------------------------------------------------------------------
// jump commands

template <typename T>
void run_jump_stationary(const std::string& path) {
  auto gen = io::parse_generator_file<T>(io::load_json(path));
  auto pi = jump::stationary_jump(gen);
  Report report;
  report.field("stationary", vector_to_json(pi.probs()));
  auto cert = jump::detailed_balance_jump(gen);
  report.field("reversible", cert.reversible);
  report.print();
}

void run_jump_kernel(const std::string& path, double t, double tol) {
  auto gen = io::parse_generator_file<double>(io::load_json(path));
  auto kernel = jump::transition_kernel(gen, t, tol);
  Report report;
  report.scalar_field("t", t);
  if (g_options.format == Format::Json)
    report.field("kernel", matrix_to_json(kernel.matrix()));
  else
    report.field("kernel", "\n" + matrix_to_text(kernel.matrix()));
  report.print();
}

// ---------------------------------------------------------------------------
// queue commands

template <typename T>
void queue_metrics_report(const queueing::QueueMetrics<T>& m, long pi_terms) {
  Report report;
  ordered_json pi = ordered_json::array();
  for (long n = 0; n < pi_terms; ++n) {
    if constexpr (scalar_traits<T>::exact)
      pi.push_back(format_rational(m.stationary(n)));
    else
      pi.push_back(m.stationary(n));
  }
  report.field("stationary_head", pi);
  report.scalar_field("utilization", m.utilization);
  report.scalar_field("mean_in_system", m.mean_in_system);
  report.scalar_field("mean_wait", m.mean_wait);
  report.scalar_field("mean_sojourn", m.mean_sojourn);
  report.scalar_field("wait_probability", m.wait_probability);
  report.scalar_field("throughput", m.throughput);
  if (m.loss_probability) report.scalar_field("loss_probability", *m.loss_probability);
  if (m.mean_busy_servers) report.scalar_field("mean_busy_servers", *m.mean_busy_servers);
  report.print();
}

template <typename T>
T parse_rate(const std::string& text) {
  if constexpr (scalar_traits<T>::exact)
    return parse_rational(text);
  else
    return std::stod(text);
}

void run_queue_simulate(const std::string& arrivals, const std::string& service, double horizon,
                        std::uint64_t seed, const std::string& csv_path, bool burke,
                        double burke_lambda, long replicas) {
  auto arrival_law = queueing::make_sampler(arrivals);
  auto service_law = queueing::make_sampler(service);
  if (replicas > 1) {
    // replicas run concurrently on independent substreams of the master seed
    std::vector<queueing::Gg1Result> results(replicas);
    std::vector<std::thread> workers;
    RngStream master(seed);
    for (long r = 0; r < replicas; ++r)
      workers.emplace_back([&, r] {
        RngStream rng = master.substream(r);
        auto a = queueing::make_sampler(arrivals);
        auto s = queueing::make_sampler(service);
        results[r] = queueing::simulate_gg1(a.sample, s.sample, horizon, rng);
      });
    for (auto& w : workers) w.join();

    Report report;
    report.field("algorithm", RngStream::algorithm_id());
    report.field("seed", seed);
    report.field("replicas", replicas);
    report.field("horizon", horizon);
    RunningMoments length, wait, busy;
    ordered_json per_replica = ordered_json::array();
    for (const auto& r : results) {
      length.add(r.time_avg_queue_length);
      wait.add(r.mean_wait);
      busy.add(r.busy_fraction);
      ordered_json entry;
      entry["time_avg_queue_length"] = r.time_avg_queue_length;
      entry["mean_wait"] = r.mean_wait;
      entry["busy_fraction"] = r.busy_fraction;
      per_replica.push_back(entry);
    }
    report.scalar_field("mean_time_avg_queue_length", length.mean);
    report.scalar_field("mean_wait", wait.mean);
    report.scalar_field("mean_busy_fraction", busy.mean);
    report.scalar_field("queue_length_std_error", length.std_error());
    report.field("per_replica", per_replica);
    report.print();
    return;
  }
  RngStream rng(seed);
  auto result = queueing::simulate_gg1(arrival_law.sample, service_law.sample, horizon, rng);
  if (!csv_path.empty()) {
    auto out = open_output(csv_path);
    out << "# schema=stochastik.series/1 algorithm=" << RngStream::algorithm_id()
        << " seed=" << seed << "\n";
    out << "departure_time\n";
    out.precision(17);
    for (double t : result.departures) out << t << "\n";
  }
  Report report;
  report.field("algorithm", RngStream::algorithm_id());
  report.field("seed", seed);
  report.field("arrivals", arrivals);
  report.field("service", service);
  report.field("horizon", horizon);
  report.field("customers_served", result.customers_served);
  report.scalar_field("time_avg_queue_length", result.time_avg_queue_length);
  report.scalar_field("mean_wait", result.mean_wait);
  report.scalar_field("mean_sojourn", result.mean_sojourn);
  report.scalar_field("busy_fraction", result.busy_fraction);
  report.scalar_field("arrival_rate", result.arrival_rate);
  const double little = result.arrival_rate * result.mean_sojourn;
  report.scalar_field("little_residual",
                      std::fabs(result.time_avg_queue_length - little) /
                          std::max(result.time_avg_queue_length, 1e-12));
  report.scalar_field("mean_busy_period", result.mean_busy_period);
  if (burke) {
    auto burke_report = queueing::burke_departure_test(result.departures, burke_lambda);
    report.scalar_field("burke_ks_statistic", burke_report.ks_statistic);
    report.scalar_field("burke_ks_p_value", burke_report.ks_p_value);
    report.field("burke_pass", burke_report.pass);
  }
  if (!csv_path.empty()) report.field("csv", csv_path);
  report.print();
}

// ---------------------------------------------------------------------------
// zoo commands

void run_zoo_list() {
  Report report;
  ordered_json models = ordered_json::array();
  for (const auto& name : zoo::list_models()) {
    ordered_json entry;
    entry["name"] = name;
    entry["summary"] = zoo::build(name).summary;
    models.push_back(entry);
  }
  report.field("models", models);
  report.print();
}

int run_zoo_verify(const std::string& name) {
  auto report = zoo::verify(name);
  if (g_options.format == Format::Json) {
    ordered_json body;
    body["model"] = report.model;
    body["all_pass"] = report.all_pass;
    ordered_json checks = ordered_json::array();
    for (const auto& e : report.entries) {
      ordered_json entry;
      entry["quantity"] = e.quantity;
      entry["expected"] = e.expected;
      entry["actual"] = e.actual;
      entry["source"] = e.source;
      entry["pass"] = e.pass;
      checks.push_back(entry);
    }
    body["checks"] = checks;
    std::cout << body.dump(2) << "\n";
  } else {
    std::cout << "model: " << report.model << "\n";
    for (const auto& e : report.entries)
      std::cout << "  [" << (e.pass ? "pass" : "FAIL") << "] " << e.quantity << " = " << e.actual
                << " (expected " << e.expected << ")\n";
    std::cout << (report.all_pass ? "all checks passed" : "SOME CHECKS FAILED") << "\n";
  }
  return report.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastik: finite Markov chains, random walks, MCMC, Poisson processes, "
               "jump processes, and queueing"};
  app.set_help_flag("--help", "print help");  // frees -h for the field option
  app.require_subcommand(1);
  std::string format_name = "text";
  app.add_option("--format", format_name, "output format: text, json, or csv")
      ->default_val("text");

  const char* backend_env = std::getenv("STOCHASTIK_BACKEND");
  g_options.exact_backend = !(backend_env && std::string(backend_env) == "float");

  // chain
  auto* chain_cmd = app.add_subcommand("chain", "finite-chain analysis");
  chain_cmd->require_subcommand(1);
  std::string chain_file;
  auto* classify_cmd = chain_cmd->add_subcommand("classify", "structural classification");
  classify_cmd->add_option("file", chain_file, "chain spec JSON")->required();
  long power_steps = 1;
  auto* power_cmd = chain_cmd->add_subcommand("power", "distribution after m steps");
  power_cmd->add_option("file", chain_file, "chain spec JSON")->required();
  power_cmd->add_option("--steps", power_steps, "number of steps")
      ->required()
      ->check(CLI::NonNegativeNumber);

  // absorb
  auto* absorb_cmd = app.add_subcommand("absorb", "absorbing-chain analysis");
  std::string absorb_file, absorb_initial;
  absorb_cmd->add_option("file", absorb_file, "chain spec JSON")->required();
  absorb_cmd->add_option("--initial", absorb_initial, "comma-separated initial distribution");

  // stationary
  auto* stationary_cmd = app.add_subcommand("stationary", "stationary distribution");
  std::string stationary_file;
  bool with_gap = false;
  stationary_cmd->add_option("file", stationary_file, "chain spec JSON")->required();
  stationary_cmd->add_flag("--gap", with_gap, "also report the spectral gap (reversible chains)");

  // walk
  auto* walk_cmd = app.add_subcommand("walk", "symmetric random walks");
  walk_cmd->require_subcommand(1);
  long walk_n = 14;
  auto* walk_law_cmd = walk_cmd->add_subcommand("law", "first-return law table");
  walk_law_cmd->add_option("--n", walk_n, "largest time")->default_val(14);
  int walk_dim = 1;
  long walk_m = 2000;
  std::string walk_csv;
  auto* walk_rec_cmd = walk_cmd->add_subcommand("recurrence", "return-probability diagnostic");
  walk_rec_cmd->add_option("--dim", walk_dim, "dimension (1, 2, or 3)")->required();
  walk_rec_cmd->add_option("--m", walk_m, "number of return times")
      ->required()
      ->check(CLI::PositiveNumber);
  walk_rec_cmd->add_option("--csv", walk_csv, "write the series to this CSV file");

  // dist
  auto* dist_cmd = app.add_subcommand("dist", "law computations");
  dist_cmd->require_subcommand(1);
  long l1_n = 2000;
  std::string l1_q = "1/1000";
  auto* l1_cmd = dist_cmd->add_subcommand("l1", "binomial-to-Poisson L1 distance and bound");
  l1_cmd->add_option("--n", l1_n, "trial count")->required();
  l1_cmd->add_option("--q", l1_q, "success probability (rational or decimal string)")->required();

  // ising
  auto* ising_cmd = app.add_subcommand("ising", "spin-flip dynamics on a finite box");
  std::string ising_size = "16x16", ising_csv, ising_start = "up";
  double ising_beta = 0.6, ising_field = 0.0, ising_steps = 1e5;
  long ising_record = 0;
  std::uint64_t ising_seed = 0;
  ising_cmd->add_option("--size", ising_size, "lattice, e.g. 32x32 or 64")->required();
  ising_cmd->add_option("--beta", ising_beta, "inverse temperature")->required();
  ising_cmd->add_option("--h", ising_field, "magnetic field")->default_val(0.0);
  ising_cmd->add_option("--steps", ising_steps, "number of spin-flip attempts")
      ->required()
      ->check(CLI::NonNegativeNumber);
  ising_cmd->add_option("--seed", ising_seed, "RNG seed")->required();
  ising_cmd->add_option("--csv", ising_csv, "write the magnetization series to this CSV file");
  ising_cmd->add_option("--record-every", ising_record, "series thinning (default steps/10000)");
  ising_cmd->add_option("--start", ising_start, "initial spins: up or down")->default_val("up");

  // tsp
  auto* tsp_cmd = app.add_subcommand("tsp", "tour optimization");
  tsp_cmd->require_subcommand(1);
  std::string tsp_input, tsp_moves = "transposition";
  double tsp_beta0 = 0.1, tsp_growth = 1.001, tsp_steps = 1e5;
  std::uint64_t tsp_seed = 0;
  auto* anneal_cmd = tsp_cmd->add_subcommand("anneal", "annealed tour search");
  anneal_cmd->add_option("--input", tsp_input, "JSON with \"coords\" or \"matrix\"")->required();
  anneal_cmd->add_option("--beta0", tsp_beta0, "initial inverse temperature")->required();
  anneal_cmd->add_option("--k", tsp_growth, "inverse-temperature growth per step")->required();
  anneal_cmd->add_option("--steps", tsp_steps, "number of proposals")
      ->required()
      ->check(CLI::NonNegativeNumber);
  anneal_cmd->add_option("--seed", tsp_seed, "RNG seed")->required();
  anneal_cmd->add_option("--moves", tsp_moves, "transposition or 2opt")
      ->default_val("transposition");

  // poisson
  auto* poisson_cmd = app.add_subcommand("poisson", "Poisson point process");
  poisson_cmd->require_subcommand(1);
  double pp_rate = 1.0, pp_horizon = 100.0;
  std::uint64_t pp_seed = 0;
  std::string pp_csv;
  auto* pp_sample_cmd = poisson_cmd->add_subcommand("sample", "sample one realization");
  pp_sample_cmd->add_option("--rate", pp_rate, "intensity")->required();
  pp_sample_cmd->add_option("--horizon", pp_horizon, "time horizon")->required();
  pp_sample_cmd->add_option("--seed", pp_seed, "RNG seed")->required();
  pp_sample_cmd->add_option("--csv", pp_csv, "write event times to this CSV file");

  // jump
  auto* jump_cmd = app.add_subcommand("jump", "Markov jump processes");
  jump_cmd->require_subcommand(1);
  std::string jump_file;
  double jump_t = 1.0, jump_tol = 1e-12;
  auto* jump_stat_cmd = jump_cmd->add_subcommand("stationary", "stationary law of a generator");
  jump_stat_cmd->add_option("file", jump_file, "generator spec JSON")->required();
  auto* jump_kernel_cmd = jump_cmd->add_subcommand("kernel", "transition kernel at time t");
  jump_kernel_cmd->add_option("file", jump_file, "generator spec JSON")->required();
  jump_kernel_cmd->add_option("--t", jump_t, "time")->required();
  jump_kernel_cmd->add_option("--tol", jump_tol, "truncation tolerance")->default_val(1e-12);

  // queue
  auto* queue_cmd = app.add_subcommand("queue", "queueing formulas and simulation");
  queue_cmd->require_subcommand(1);
  std::string q_lambda = "1", q_mu = "2";
  long q_buffer = 1, q_servers = 1, q_pi_terms = 8;
  auto add_rates = [&](CLI::App* cmd) {
    cmd->add_option("--lambda", q_lambda, "arrival rate")->required();
    cmd->add_option("--mu", q_mu, "service rate")->required();
    cmd->add_option("--pi-terms", q_pi_terms, "stationary probabilities to print")
        ->default_val(8);
  };
  add_rates(queue_cmd->add_subcommand("mm1", "single server, unbounded queue"));
  auto* mm1n_cmd = queue_cmd->add_subcommand("mm1n", "single server, finite buffer");
  add_rates(mm1n_cmd);
  mm1n_cmd->add_option("--buffer", q_buffer, "system capacity")->required();
  auto* mms_cmd = queue_cmd->add_subcommand("mms", "s parallel servers");
  add_rates(mms_cmd);
  mms_cmd->add_option("--servers", q_servers, "server count")->required();
  add_rates(queue_cmd->add_subcommand("mminf", "infinitely many servers"));

  std::string sim_arrivals = "exp:1", sim_service = "exp:2", sim_csv;
  double sim_horizon = 1e6, sim_burke_lambda = 0.0;
  std::uint64_t sim_seed = 0;
  bool sim_burke = false;
  auto* sim_cmd = queue_cmd->add_subcommand("simulate", "event-driven single-server run");
  sim_cmd->add_option("--arrivals", sim_arrivals, "interarrival law, e.g. exp:1")->required();
  sim_cmd->add_option("--service", sim_service, "service law, e.g. exp:2 or det:0.5")->required();
  sim_cmd->add_option("--horizon", sim_horizon, "simulated time")->required();
  sim_cmd->add_option("--seed", sim_seed, "RNG seed")->required();
  sim_cmd->add_option("--csv", sim_csv, "write departure times to this CSV file");
  sim_cmd->add_flag("--burke", sim_burke, "test departures against a Poisson stream");
  sim_cmd->add_option("--burke-lambda", sim_burke_lambda, "arrival rate for the departure test");
  long sim_replicas = 1;
  sim_cmd->add_option("--replicas", sim_replicas, "concurrent replicas on independent substreams")
      ->default_val(1);

  // zoo
  auto* zoo_cmd = app.add_subcommand("zoo", "bundled models with exact reference values");
  zoo_cmd->require_subcommand(1);
  zoo_cmd->add_subcommand("list", "list the models");
  std::string zoo_name;
  auto* zoo_verify_cmd = zoo_cmd->add_subcommand("verify", "recompute a model's reference values");
  zoo_verify_cmd->add_option("name", zoo_name, "model name")->required();

  try {
    app.parse(argc, argv);
    g_options.format = parse_format(format_name);

    auto dispatch_exact = [&](auto exact_fn, auto float_fn) {
      if (g_options.exact_backend)
        exact_fn();
      else
        float_fn();
    };

    if (classify_cmd->parsed())
      dispatch_exact([&] { run_chain_classify<Rational>(chain_file); },
                     [&] { run_chain_classify<double>(chain_file); });
    else if (power_cmd->parsed())
      dispatch_exact([&] { run_chain_power<Rational>(chain_file, power_steps); },
                     [&] { run_chain_power<double>(chain_file, power_steps); });
    else if (absorb_cmd->parsed())
      dispatch_exact([&] { run_absorb<Rational>(absorb_file, absorb_initial); },
                     [&] { run_absorb<double>(absorb_file, absorb_initial); });
    else if (stationary_cmd->parsed())
      dispatch_exact([&] { run_stationary<Rational>(stationary_file, with_gap); },
                     [&] { run_stationary<double>(stationary_file, with_gap); });
    else if (walk_law_cmd->parsed())
      run_walk_law(walk_n);
    else if (walk_rec_cmd->parsed())
      run_walk_recurrence(walk_dim, walk_m, walk_csv);
    else if (l1_cmd->parsed())
      run_dist_l1(l1_n, l1_q);
    else if (ising_cmd->parsed())
      run_ising(ising_size, ising_beta, ising_field, ising_steps, ising_seed, ising_csv,
                ising_record, ising_start);
    else if (anneal_cmd->parsed())
      run_tsp_anneal(tsp_input, tsp_beta0, tsp_growth, tsp_steps, tsp_seed, tsp_moves);
    else if (pp_sample_cmd->parsed())
      run_poisson_sample(pp_rate, pp_horizon, pp_seed, pp_csv);
    else if (jump_stat_cmd->parsed())
      dispatch_exact([&] { run_jump_stationary<Rational>(jump_file); },
                     [&] { run_jump_stationary<double>(jump_file); });
    else if (jump_kernel_cmd->parsed())
      run_jump_kernel(jump_file, jump_t, jump_tol);
    else if (queue_cmd->get_subcommand("mm1")->parsed()) {
      if (g_options.exact_backend)
        queue_metrics_report(
            queueing::mm1<Rational>(parse_rate<Rational>(q_lambda), parse_rate<Rational>(q_mu)),
            q_pi_terms);
      else
        queue_metrics_report(
            queueing::mm1<double>(parse_rate<double>(q_lambda), parse_rate<double>(q_mu)),
            q_pi_terms);
    } else if (mm1n_cmd->parsed()) {
      if (g_options.exact_backend)
        queue_metrics_report(queueing::mm1n<Rational>(parse_rate<Rational>(q_lambda),
                                                      parse_rate<Rational>(q_mu), q_buffer),
                             q_pi_terms);
      else
        queue_metrics_report(queueing::mm1n<double>(parse_rate<double>(q_lambda),
                                                    parse_rate<double>(q_mu), q_buffer),
                             q_pi_terms);
    } else if (mms_cmd->parsed()) {
      if (g_options.exact_backend)
        queue_metrics_report(queueing::mms<Rational>(parse_rate<Rational>(q_lambda),
                                                     parse_rate<Rational>(q_mu), q_servers),
                             q_pi_terms);
      else
        queue_metrics_report(queueing::mms<double>(parse_rate<double>(q_lambda),
                                                   parse_rate<double>(q_mu), q_servers),
                             q_pi_terms);
    } else if (queue_cmd->get_subcommand("mminf")->parsed()) {
      queue_metrics_report(
          queueing::mm_infinity(parse_rate<double>(q_lambda), parse_rate<double>(q_mu)),
          q_pi_terms);
    } else if (sim_cmd->parsed()) {
      if (sim_burke && sim_burke_lambda <= 0)
        throw Error(ErrorCode::BadInput, "--burke needs --burke-lambda");
      run_queue_simulate(sim_arrivals, sim_service, sim_horizon, sim_seed, sim_csv, sim_burke,
                         sim_burke_lambda, sim_replicas);
    } else if (zoo_cmd->get_subcommand("list")->parsed()) {
      run_zoo_list();
    } else if (zoo_verify_cmd->parsed()) {
      return run_zoo_verify(zoo_name);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    const bool usage = e.code() == ErrorCode::BadInput || e.code() == ErrorCode::BadLawSpec ||
                       e.code() == ErrorCode::UnknownModel;
    if (g_options.format == Format::Json) {
      ordered_json err;
      err["error"]["code"] = error_code_name(e.code());
      err["error"]["message"] = e.what();
      std::cout << err.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
