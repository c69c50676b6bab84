#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace timp {

enum class TMode { absolute, tau, x };
enum class SolverChoice { exact, greedy, both };
enum class RunMode { campaign, step };

struct ExperimentConfig {
    std::vector<int> ns;           // one or more sizes
    double p = 0.5;
    TMode t_mode = TMode::absolute;
    double t_value = 0;            // t, tau, or x depending on t_mode
    int trials = 1;
    std::uint64_t master_seed = 0;
    SolverChoice solver = SolverChoice::greedy;
    double eps = 0.01;
    std::string output;            // base path; extensions appended per format
    std::vector<std::string> formats{"csv", "json"};
    RunMode mode = RunMode::campaign;
    // Off by default so outputs stay byte-identical across runs and worker
    // counts; switching it on records real timings and forfeits that.
    bool record_timings = false;

    int alpha_cap = 100;
};

// Realized integer t for a config at size n (round half up for tau/x modes).
int realized_t(const ExperimentConfig& c, int n);

struct TrialRecord {
    long long trial_index = 0;
    std::uint64_t derived_seed = 0;
    int n = 0;
    double p = 0;
    int t = 0;
    int alpha_hat = 0;
    bool alpha_exact = false;
    int chi_upper_greedy = 0;
    int chi_upper_lovasz = 0;
    int chi_lower_ratio = 0;
    double wall_time_ms = 0;
};

struct TheoryPrediction {
    int n = 0;
    double p = 0;
    int t = 0;
    double chi_predicted = 0;  // n / (kappa_p(t/ln n) ln n)
    double alpha_predicted = 0; // kappa_p(t/ln n) ln n
    std::optional<long long> k_star;
    std::optional<int> step_value;
};

TheoryPrediction theory_curve(int n, double p, int t, double eps = 1.0);

struct FieldStats {
    double mean = 0;
    double stddev = 0;
};

struct GroupSummary {
    int n = 0;
    int t = 0;
    int trials = 0;
    FieldStats alpha_hat, chi_upper_greedy, chi_upper_lovasz, chi_lower_ratio, wall_time_ms;
};

struct ExperimentResult {
    std::vector<TrialRecord> records;
    std::vector<GroupSummary> summaries;        // one per n
    std::vector<TheoryPrediction> theory;       // empty when p is 0 or 1
    bool scalar_n = true;
};

// workers > 1 runs trials on a pool; records land in pre-indexed slots so
// the output is identical for every worker count.
ExperimentResult run_experiment(const ExperimentConfig& config, int workers = 1);

struct StepTrial {
    long long trial_index = 0;
    std::uint64_t derived_seed = 0;
    int delta = 0;
    int lovasz_classes = 0;
    bool upper_ok = false; // lovasz classes <= ceil(x)
    bool cert_ok = false;  // (k*-1)(ceil(x)-1) < n
};

struct StepReport {
    int n = 0;
    double p = 0;
    double x = 0;
    int t = 0;
    int step_value = 0;    // ceil(x)
    std::optional<long long> k_star;
    std::vector<StepTrial> trials;
    double success_fraction = 0; // both certificates hold
};

StepReport step_experiment(int n, double p, double x, int trials,
                           std::uint64_t seed, double eps);

std::string emit_csv(const ExperimentResult& r);
nlohmann::ordered_json emit_json(const ExperimentResult& r);

// Schema-checked config parsing; error messages name the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);

std::string format_double(double v); // %.12g, shared by both emitters

} // namespace timp
