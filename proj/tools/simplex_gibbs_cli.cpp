// Command-line driver for the simplex Gibbs sampler experiments.
//
// Exit codes: 0 success, 1 argument error, 2 a claim failed under --assert,
// 3 perfect sampling ran out of epochs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "simplex_gibbs/errors.hpp"
#include "simplex_gibbs/experiments.hpp"

namespace sg = simplex_gibbs;

namespace {

struct Common {
  std::uint64_t seed = 1;
  bool json = false;
  bool assert_claims = false;
  std::string out;
  std::string traces;
  std::string records;
  std::string law = "uniform";
};

void add_common(CLI::App* cmd, Common& c, bool traces, bool records) {
  cmd->add_option("--seed", c.seed, "master seed")->capture_default_str();
  cmd->add_flag("--json", c.json, "print only the JSON summary");
  cmd->add_flag("--assert", c.assert_claims, "exit with status 2 when a claim fails");
  cmd->add_option("--out", c.out, "write the JSON summary to this file");
  if (traces) cmd->add_option("--traces", c.traces, "write CSV traces (replica,t,value)");
  if (records) cmd->add_option("--records", c.records, "write JSON-lines records");
}

class CsvSink {
 public:
  explicit CsvSink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw sg::ArgumentError("cannot open " + path);
    *file_ << "replica,t,value\n";
    file_->precision(17);
  }
  sg::TraceSink sink() {
    if (!file_) return {};
    return [this](std::size_t r, std::size_t t, double v) {
      *file_ << r << ',' << t << ',' << v << '\n';
    };
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

class JsonLinesSink {
 public:
  explicit JsonLinesSink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw sg::ArgumentError("cannot open " + path);
  }
  sg::RecordSink sink() {
    if (!file_) return {};
    return [this](const sg::Json& j) { *file_ << j.dump() << '\n'; };
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void print_human(const sg::SummaryReport& rep) {
  std::cout << rep.command << " (seed " << rep.seed << ")\n";
  std::cout << "  parameters: " << rep.parameters.dump() << "\n";
  for (const auto& [key, value] : rep.statistics.items()) {
    std::string text = value.dump();
    if (text.size() > 160) text = text.substr(0, 157) + "...";
    std::cout << "  " << key << ": " << text << "\n";
  }
  for (const auto& c : rep.claims) {
    std::cout << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << " = " << c.value
              << ' ' << c.comparison << ' ' << c.threshold;
    if (c.comparison == "in") std::cout << ".." << c.upper;
    std::cout << " (n=" << c.sample_size << ")\n";
  }
  std::cout << "  wall " << rep.wall_seconds << " s, " << rep.steps << " steps\n";
}

int emit(const sg::SummaryReport& rep, const Common& c) {
  const sg::Json j = rep.to_json();
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw sg::ArgumentError("cannot open " + c.out);
    f << j.dump(2) << '\n';
  }
  if (c.json) {
    std::cout << j.dump(2) << '\n';
  } else {
    print_human(rep);
  }
  return (c.assert_claims && !rep.all_pass()) ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs sampler on the simplex: coupling, perfect sampling and lower-bound "
               "experiments"};
  app.require_subcommand(1);
  Common common;

  std::size_t n = 16;
  std::size_t replicas = 1000;
  std::size_t trials = 10000;
  std::size_t samples = 2000;
  std::optional<std::size_t> steps;
  double C = 1.0;
  double d = 14.0;
  double e = 6.5;
  double b = 4.5;
  double epsilon = 0.5;
  std::uint64_t balls = 1000000;
  std::string schedule = "operational";
  bool stationary_start = false;
  bool control = false;
  std::size_t scan = 0;

  auto* simulate = app.add_subcommand("simulate", "run single chains from a vertex");
  simulate->add_option("--n", n, "dimension")->capture_default_str();
  simulate->add_option("--T", steps, "steps per chain (default ceil(6 n ln n))");
  simulate->add_option("--replicas", replicas, "independent chains")->capture_default_str();
  simulate->add_option("--law", common.law, "uniform or beta:<a>")->capture_default_str();
  add_common(simulate, common, true, false);

  auto* couple = app.add_subcommand("couple", "two-stage coupling over replicas");
  couple->add_option("--n", n, "dimension")->capture_default_str();
  couple->add_option("--C", C, "target exponent")->capture_default_str();
  couple->add_option("--d", d, "burn-in exponent")->capture_default_str();
  couple->add_option("--e", e, "closeness exponent")->capture_default_str();
  couple->add_option("--b", b, "largeness exponent")->capture_default_str();
  couple->add_option("--epsilon", epsilon, "connectedness slack")->capture_default_str();
  couple->add_option("--T", steps, "second-stage length (overrides the schedule)");
  couple->add_option("--replicas", replicas, "replicas")->capture_default_str();
  couple->add_option("--law", common.law, "uniform or beta:<a>")->capture_default_str();
  couple->add_option("--schedule", schedule, "operational, theorem or exponents")
      ->capture_default_str();
  couple->add_flag("--stationary-start", stationary_start, "start x from the stationary law");
  couple->add_flag("--control", control, "also run the stationary-start control");
  couple->add_option("--scan", scan, "replicas for the coupling-time scan")
      ->capture_default_str();
  add_common(couple, common, true, true);

  auto* cftp = app.add_subcommand("cftp", "perfect samples by coupling from the past");
  cftp->add_option("--n", n, "dimension")->capture_default_str();
  cftp->add_option("--samples", samples, "number of samples")->capture_default_str();
  cftp->add_option("--law", common.law, "uniform or beta:<a>")->capture_default_str();
  add_common(cftp, common, false, true);

  auto* lower = app.add_subcommand("lowerbound", "modified coupon collector");
  lower->add_option("--n", n, "dimension")->capture_default_str();
  lower->add_option("--trials", trials, "trials")->capture_default_str();
  add_common(lower, common, false, false);

  auto* conn = app.add_subcommand("connectivity", "connectedness of the schedule graph");
  conn->add_option("--n", n, "dimension")->capture_default_str();
  conn->add_option("--epsilon", epsilon, "slack")->capture_default_str();
  conn->add_option("--T", steps, "schedule length (default ceil((0.5+epsilon) n ln n))");
  conn->add_option("--trials", trials, "trials")->capture_default_str();
  add_common(conn, common, false, false);

  auto* discrete = app.add_subcommand("discrete", "balls-in-boxes analogue");
  discrete->add_option("--n", n, "boxes")->capture_default_str();
  discrete->add_option("--M", balls, "balls")->capture_default_str();
  discrete->add_option("--T", steps, "steps (default 20)");
  discrete->add_option("--replicas", replicas, "replicas")->capture_default_str();
  add_common(discrete, common, true, false);

  auto* contraction = app.add_subcommand("contraction", "one-step contraction of Z_t");
  contraction->add_option("--n", n, "dimension")->capture_default_str();
  contraction->add_option("--replicas", replicas, "replicas")->capture_default_str();
  contraction->add_option("--law", common.law, "uniform or beta:<a>")->capture_default_str();
  add_common(contraction, common, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return 1;
  }

  try {
    const sg::LambdaLaw law = sg::LambdaLaw::parse(common.law);
    if (*simulate) {
      CsvSink csv(common.traces);
      const std::size_t t = steps.value_or(static_cast<std::size_t>(
          std::ceil(6.0 * n * std::log(static_cast<double>(std::max<std::size_t>(n, 2))))));
      return emit(sg::run_simulate(n, t, replicas, common.seed, law, csv.sink()), common);
    }
    if (*couple) {
      sg::ExperimentConfig cfg;
      cfg.n = n;
      cfg.C = C;
      cfg.d = d;
      cfg.e = e;
      cfg.b = b;
      cfg.epsilon = epsilon;
      cfg.law = law;
      cfg.seed = common.seed;
      cfg.replicas = replicas;
      cfg.schedule = sg::parse_stage_schedule(schedule);
      cfg.start = stationary_start ? sg::StartKind::kUniform : sg::StartKind::kVertex;
      cfg.stage_override = steps;
      CsvSink csv(common.traces);
      JsonLinesSink lines(common.records);
      return emit(sg::run_couple(cfg, sg::CoupleOptions{control, scan}, lines.sink(), csv.sink()),
                  common);
    }
    if (*cftp) {
      JsonLinesSink lines(common.records);
      return emit(sg::run_cftp(n, samples, common.seed, law, lines.sink()), common);
    }
    if (*lower) return emit(sg::run_lower_bound(n, trials, common.seed), common);
    if (*conn) return emit(sg::run_connectivity(n, epsilon, trials, common.seed, steps), common);
    if (*discrete) {
      CsvSink csv(common.traces);
      return emit(sg::run_discrete(n, balls, steps.value_or(20), replicas, common.seed,
                                   csv.sink()),
                  common);
    }
    if (*contraction) return emit(sg::run_contraction(n, replicas, common.seed, law), common);
  } catch (const sg::TerminationError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}
