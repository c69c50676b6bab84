#include "timp/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "timp/colouring.hpp"
#include "timp/errors.hpp"
#include "timp/graph.hpp"
#include "timp/ld_theory.hpp"
#include "timp/rng.hpp"

namespace timp {

namespace {

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

bool theory_defined(double p) { return p > 0.0 && p < 1.0; }

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

// The JSON emitter stores doubles rounded through the same %.12g channel as
// the CSV, so both formats carry identical 12-significant-digit values.
double round12(double v) { return std::strtod(format_double(v).c_str(), nullptr); }

} // namespace

int realized_t(const ExperimentConfig& c, int n) {
    switch (c.t_mode) {
        case TMode::absolute: return static_cast<int>(c.t_value);
        case TMode::tau: return round_half_up(c.t_value * std::log(static_cast<double>(n)));
        case TMode::x: return round_half_up(static_cast<double>(n) * c.p / c.t_value);
    }
    return 0;
}

TheoryPrediction theory_curve(int n, double p, int t, double eps) {
    if (n < 3) throw ValidationError("theory prediction needs n >= 3");
    if (!theory_defined(p)) throw ValidationError("theory prediction needs 0 < p < 1");
    if (t < 0) throw ValidationError("t must be non-negative");
    TheoryParams params(p);
    double ln_n = std::log(static_cast<double>(n));
    double kappa = kappa_p(static_cast<double>(t) / ln_n, params);
    TheoryPrediction pred;
    pred.n = n;
    pred.p = p;
    pred.t = t;
    pred.alpha_predicted = kappa * ln_n;
    pred.chi_predicted = static_cast<double>(n) / (kappa * ln_n);
    pred.k_star = first_moment_threshold_k(n, p, t, eps);
    return pred;
}

namespace {

struct TrialTask {
    int n;
    int t;
    long long trial_index;
};

TrialRecord run_one_trial(const ExperimentConfig& cfg, const TrialTask& task,
                          const std::optional<long long>& k_star) {
    TrialRecord rec;
    rec.trial_index = task.trial_index;
    rec.derived_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(task.trial_index));
    rec.n = task.n;
    rec.p = cfg.p;
    rec.t = task.t;

    auto start = std::chrono::steady_clock::now();
    Graph g = sample_gnp(task.n, cfg.p, rec.derived_seed);

    bool exact = cfg.solver == SolverChoice::exact || cfg.solver == SolverChoice::both;
    if (exact) {
        rec.alpha_hat = alpha_t_exact(g, task.t).size;
        rec.alpha_exact = true;
    } else {
        rec.alpha_hat =
            static_cast<int>(greedy_dependent_set(g, full_set(task.n), task.t).count());
        rec.alpha_exact = false;
    }
    rec.chi_upper_greedy = greedy_peel_colouring(g, task.t).class_count;
    rec.chi_upper_lovasz = lovasz_decomposition(g, task.t).class_count;

    if (k_star && *k_star >= 2) {
        rec.chi_lower_ratio = static_cast<int>((task.n + *k_star - 2) / (*k_star - 1));
    } else if (rec.alpha_exact && rec.alpha_hat > 0) {
        rec.chi_lower_ratio = (task.n + rec.alpha_hat - 1) / rec.alpha_hat;
    } else {
        rec.chi_lower_ratio = 1;
    }

    if (cfg.record_timings) {
        auto end = std::chrono::steady_clock::now();
        rec.wall_time_ms =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(end - start)
                .count();
    }
    return rec;
}

FieldStats stats_of(const std::vector<double>& xs) {
    FieldStats s;
    if (xs.empty()) return s;
    double sum = 0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    double sq = 0;
    for (double x : xs) sq += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(xs.size()));
    return s;
}

void validate_config(const ExperimentConfig& c) {
    if (c.ns.empty()) throw ValidationError("config.n: at least one size required");
    for (int n : c.ns)
        if (n < 1) throw ValidationError("config.n: sizes must be >= 1");
    if (!(c.p >= 0.0 && c.p <= 1.0)) throw ValidationError("config.p: must lie in [0,1]");
    if (c.trials < 1) throw ValidationError("config.trials: must be >= 1");
    if (c.t_mode == TMode::x && !(c.t_value > 0))
        throw ValidationError("config.x: must be positive");
    if (c.t_mode == TMode::tau && c.t_value < 0)
        throw ValidationError("config.tau: must be non-negative");
    if (c.t_mode == TMode::absolute && c.t_value < 0)
        throw ValidationError("config.t: must be non-negative");
    for (int n : c.ns) {
        int t = realized_t(c, n);
        if (t < 0) throw ValidationError("config: realized t is negative");
    }
    if (c.solver == SolverChoice::exact || c.solver == SolverChoice::both) {
        for (int n : c.ns)
            if (n > c.alpha_cap)
                throw CapExceededError("exact solver capped at n <= " +
                                       std::to_string(c.alpha_cap) + ", config has n = " +
                                       std::to_string(n) + " (use the greedy solver)");
    }
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int workers) {
    validate_config(config);
    ExperimentResult result;
    result.scalar_n = config.ns.size() == 1;

    std::vector<TrialTask> tasks;
    std::vector<std::optional<long long>> group_kstar(config.ns.size());
    for (std::size_t gi = 0; gi < config.ns.size(); ++gi) {
        int n = config.ns[gi];
        int t = realized_t(config, n);
        if (theory_defined(config.p)) {
            if (n >= 3) {
                TheoryPrediction pred = theory_curve(n, config.p, t, config.eps);
                if (config.t_mode == TMode::x)
                    pred.step_value = static_cast<int>(std::ceil(config.t_value));
                group_kstar[gi] = pred.k_star;
                result.theory.push_back(pred);
            }
        }
        for (int j = 0; j < config.trials; ++j)
            tasks.push_back({n, t, static_cast<long long>(gi) * config.trials + j});
    }

    result.records.resize(tasks.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            std::size_t gi = static_cast<std::size_t>(tasks[i].trial_index) /
                             static_cast<std::size_t>(config.trials);
            result.records[i] = run_one_trial(config, tasks[i], group_kstar[gi]);
        }
    } else {
        // Slot-addressed records: completion order cannot affect the output.
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                std::size_t gi = static_cast<std::size_t>(tasks[i].trial_index) /
                                 static_cast<std::size_t>(config.trials);
                result.records[i] = run_one_trial(config, tasks[i], group_kstar[gi]);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::size_t gi = 0; gi < config.ns.size(); ++gi) {
        GroupSummary s;
        s.n = config.ns[gi];
        s.t = realized_t(config, s.n);
        s.trials = config.trials;
        std::vector<double> a, cg, cl, cr, wt;
        for (int j = 0; j < config.trials; ++j) {
            const TrialRecord& r = result.records[gi * config.trials + j];
            a.push_back(r.alpha_hat);
            cg.push_back(r.chi_upper_greedy);
            cl.push_back(r.chi_upper_lovasz);
            cr.push_back(r.chi_lower_ratio);
            wt.push_back(r.wall_time_ms);
        }
        s.alpha_hat = stats_of(a);
        s.chi_upper_greedy = stats_of(cg);
        s.chi_upper_lovasz = stats_of(cl);
        s.chi_lower_ratio = stats_of(cr);
        s.wall_time_ms = stats_of(wt);
        result.summaries.push_back(s);
    }
    return result;
}

StepReport step_experiment(int n, double p, double x, int trials, std::uint64_t seed,
                           double eps) {
    if (!theory_defined(p))
        throw ValidationError("step experiment needs 0 < p < 1");
    if (!(x > 0) || std::floor(x) == x)
        throw ValidationError("step experiment needs non-integral x > 0");
    if (trials < 1) throw ValidationError("trials must be >= 1");
    StepReport report;
    report.n = n;
    report.p = p;
    report.x = x;
    report.t = round_half_up(static_cast<double>(n) * p / x);
    report.step_value = static_cast<int>(std::ceil(x));
    report.k_star = first_moment_threshold_k(n, p, report.t, eps);

    // Markov certificate: Pr(alpha^t >= k*) <= eps, so alpha^t <= k*-1 with
    // probability >= 1-eps and then chi^t >= n/(k*-1) > ceil(x)-1.
    bool cert = report.k_star.has_value() && *report.k_star >= 2 &&
                (*report.k_star - 1) * (report.step_value - 1) < n;

    int successes = 0;
    for (int i = 0; i < trials; ++i) {
        StepTrial tr;
        tr.trial_index = i;
        tr.derived_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
        Graph g = sample_gnp(n, p, tr.derived_seed);
        tr.delta = max_degree(g);
        tr.lovasz_classes = lovasz_decomposition(g, report.t).class_count;
        tr.upper_ok = tr.lovasz_classes <= report.step_value;
        tr.cert_ok = cert;
        if (tr.upper_ok && tr.cert_ok) ++successes;
        report.trials.push_back(tr);
    }
    report.success_fraction = static_cast<double>(successes) / trials;
    return report;
}

std::string emit_csv(const ExperimentResult& r) {
    std::ostringstream out;
    out << "trial_index,derived_seed,n,p,t,alpha_hat,alpha_exact_flag,chi_upper_greedy,"
           "chi_upper_lovasz,chi_lower_ratio,wall_time_ms\n";
    for (const TrialRecord& rec : r.records) {
        out << rec.trial_index << ',' << rec.derived_seed << ',' << rec.n << ','
            << format_double(rec.p) << ',' << rec.t << ',' << rec.alpha_hat << ','
            << (rec.alpha_exact ? 1 : 0) << ',' << rec.chi_upper_greedy << ','
            << rec.chi_upper_lovasz << ',' << rec.chi_lower_ratio << ','
            << format_double(rec.wall_time_ms) << '\n';
    }
    for (const GroupSummary& s : r.summaries) {
        out << "summary_mean,," << s.n << ',' << format_double(r.records.empty() ? 0.0 : r.records[0].p)
            << ',' << s.t << ',' << format_double(s.alpha_hat.mean) << ",,"
            << format_double(s.chi_upper_greedy.mean) << ',' << format_double(s.chi_upper_lovasz.mean)
            << ',' << format_double(s.chi_lower_ratio.mean) << ','
            << format_double(s.wall_time_ms.mean) << '\n';
        out << "summary_stddev,," << s.n << ','
            << format_double(r.records.empty() ? 0.0 : r.records[0].p) << ',' << s.t << ','
            << format_double(s.alpha_hat.stddev) << ",,"
            << format_double(s.chi_upper_greedy.stddev) << ','
            << format_double(s.chi_upper_lovasz.stddev) << ','
            << format_double(s.chi_lower_ratio.stddev) << ','
            << format_double(s.wall_time_ms.stddev) << '\n';
    }
    return out.str();
}

namespace {

nlohmann::ordered_json theory_json(const TheoryPrediction& t) {
    nlohmann::ordered_json j;
    j["n"] = t.n;
    j["p"] = round12(t.p);
    j["t"] = t.t;
    j["chi_predicted"] = round12(t.chi_predicted);
    j["alpha_predicted"] = round12(t.alpha_predicted);
    if (t.k_star)
        j["k_star"] = *t.k_star;
    else
        j["k_star"] = nullptr;
    if (t.step_value) j["step_value"] = *t.step_value;
    return j;
}

} // namespace

nlohmann::ordered_json emit_json(const ExperimentResult& r) {
    nlohmann::ordered_json root;
    root["records"] = nlohmann::ordered_json::array();
    for (const TrialRecord& rec : r.records) {
        nlohmann::ordered_json j;
        j["trial_index"] = rec.trial_index;
        j["derived_seed"] = rec.derived_seed;
        j["n"] = rec.n;
        j["p"] = round12(rec.p);
        j["t"] = rec.t;
        j["alpha_hat"] = rec.alpha_hat;
        j["alpha_exact_flag"] = rec.alpha_exact ? 1 : 0;
        j["chi_upper_greedy"] = rec.chi_upper_greedy;
        j["chi_upper_lovasz"] = rec.chi_upper_lovasz;
        j["chi_lower_ratio"] = rec.chi_lower_ratio;
        j["wall_time_ms"] = round12(rec.wall_time_ms);
        root["records"].push_back(std::move(j));
    }
    root["summary"] = nlohmann::ordered_json::array();
    for (const GroupSummary& s : r.summaries) {
        nlohmann::ordered_json j;
        j["n"] = s.n;
        j["t"] = s.t;
        j["trials"] = s.trials;
        auto put = [&](const char* name, const FieldStats& f) {
            j[name] = {{"mean", round12(f.mean)}, {"stddev", round12(f.stddev)}};
        };
        put("alpha_hat", s.alpha_hat);
        put("chi_upper_greedy", s.chi_upper_greedy);
        put("chi_upper_lovasz", s.chi_upper_lovasz);
        put("chi_lower_ratio", s.chi_lower_ratio);
        put("wall_time_ms", s.wall_time_ms);
        root["summary"].push_back(std::move(j));
    }
    if (r.theory.empty()) {
        root["theory"] = nullptr;
    } else if (r.scalar_n) {
        root["theory"] = theory_json(r.theory.front());
    } else {
        root["theory"] = nlohmann::ordered_json::array();
        for (const TheoryPrediction& t : r.theory) root["theory"].push_back(theory_json(t));
    }
    return root;
}

ExperimentConfig parse_config(const nlohmann::json& j) {
    std::vector<std::string> errs;
    ExperimentConfig c;
    if (!j.is_object()) throw ValidationError("config: top level must be a JSON object");

    auto fail = [&](const std::string& path, const std::string& why) {
        errs.push_back("config." + path + ": " + why);
    };

    if (!j.contains("n")) {
        fail("n", "required");
    } else if (j["n"].is_number_integer()) {
        c.ns = {j["n"].get<int>()};
    } else if (j["n"].is_array() && !j["n"].empty()) {
        for (const auto& e : j["n"]) {
            if (!e.is_number_integer()) { fail("n", "sizes must be integers"); break; }
            c.ns.push_back(e.get<int>());
        }
    } else {
        fail("n", "must be an integer or a non-empty integer array");
    }

    if (!j.contains("p") || !j["p"].is_number()) fail("p", "required number");
    else c.p = j["p"].get<double>();

    int modes = 0;
    if (j.contains("t")) { ++modes; c.t_mode = TMode::absolute; }
    if (j.contains("tau")) { ++modes; c.t_mode = TMode::tau; }
    if (j.contains("x")) { ++modes; c.t_mode = TMode::x; }
    if (modes != 1) {
        fail("t", "exactly one of t, tau, x is required");
    } else {
        const char* key = j.contains("t") ? "t" : j.contains("tau") ? "tau" : "x";
        if (!j[key].is_number()) fail(key, "must be a number");
        else c.t_value = j[key].get<double>();
        if (std::string(key) == "x" && j[key].is_number() && !(c.t_value > 0))
            fail("x", "must be positive");
    }

    if (!j.contains("trials") || !j["trials"].is_number_integer()) fail("trials", "required integer");
    else c.trials = j["trials"].get<int>();

    if (!j.contains("master_seed") ||
        !(j["master_seed"].is_number_unsigned() ||
          (j["master_seed"].is_number_integer() && j["master_seed"].get<long long>() >= 0)))
        fail("master_seed", "required non-negative integer");
    else c.master_seed = j["master_seed"].get<std::uint64_t>();

    if (j.contains("solver")) {
        std::string s = j["solver"].is_string() ? j["solver"].get<std::string>() : "";
        if (s == "exact") c.solver = SolverChoice::exact;
        else if (s == "greedy") c.solver = SolverChoice::greedy;
        else if (s == "both") c.solver = SolverChoice::both;
        else fail("solver", "must be one of exact, greedy, both");
    }
    if (j.contains("eps")) {
        if (!j["eps"].is_number()) fail("eps", "must be a number");
        else c.eps = j["eps"].get<double>();
        if (j["eps"].is_number() && !(c.eps > 0 && c.eps <= 1)) fail("eps", "must lie in (0, 1]");
    }
    if (j.contains("output")) {
        if (!j["output"].is_string()) fail("output", "must be a string");
        else c.output = j["output"].get<std::string>();
    }
    if (j.contains("format")) {
        c.formats.clear();
        if (j["format"].is_string()) c.formats.push_back(j["format"].get<std::string>());
        else if (j["format"].is_array())
            for (const auto& e : j["format"])
                if (e.is_string()) c.formats.push_back(e.get<std::string>());
                else fail("format", "entries must be strings");
        else fail("format", "must be a string or string array");
        for (const std::string& f : c.formats)
            if (f != "csv" && f != "json") fail("format", "unknown format '" + f + "'");
    }
    if (j.contains("mode")) {
        std::string mstr = j["mode"].is_string() ? j["mode"].get<std::string>() : "";
        if (mstr == "campaign") c.mode = RunMode::campaign;
        else if (mstr == "step") c.mode = RunMode::step;
        else fail("mode", "must be campaign or step");
    }
    if (c.mode == RunMode::step && modes == 1 && c.t_mode != TMode::x)
        fail("mode", "step mode requires x rather than t or tau");
    if (c.mode == RunMode::step && c.t_mode == TMode::x && c.t_value > 0 &&
        std::floor(c.t_value) == c.t_value)
        fail("x", "must be non-integral in step mode");
    if (j.contains("record_timings")) {
        if (!j["record_timings"].is_boolean()) fail("record_timings", "must be a boolean");
        else c.record_timings = j["record_timings"].get<bool>();
    }
    if (j.contains("alpha_cap")) {
        if (!j["alpha_cap"].is_number_integer()) fail("alpha_cap", "must be an integer");
        else c.alpha_cap = j["alpha_cap"].get<int>();
    }

    if (!errs.empty()) {
        std::string msg = "invalid experiment config:";
        for (const std::string& e : errs) msg += "\n  " + e;
        throw ValidationError(msg);
    }
    return c;
}

} // namespace timp
