#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "timp/errors.hpp"
#include "timp/experiments.hpp"
#include "timp/ld_theory.hpp"
#include "timp/rng.hpp"

using namespace timp;

namespace {

ExperimentConfig base_config() {
    ExperimentConfig c;
    c.ns = {20};
    c.p = 0.5;
    c.t_mode = TMode::absolute;
    c.t_value = 1;
    c.trials = 4;
    c.master_seed = 101;
    c.solver = SolverChoice::exact;
    c.eps = 0.05;
    return c;
}

} // namespace

TEST_CASE("realized_t across the three modes") {
    ExperimentConfig c = base_config();
    c.t_mode = TMode::absolute;
    c.t_value = 7;
    CHECK(realized_t(c, 50) == 7);

    c.t_mode = TMode::tau;
    c.t_value = 1.0;
    CHECK(realized_t(c, 20) == 3);  // ln 20 = 2.9957
    CHECK(realized_t(c, 148) == 5); // ln 148 = 4.997
    c.t_value = 0;
    CHECK(realized_t(c, 1000) == 0);

    c.t_mode = TMode::x;
    c.p = 0.5;
    c.t_value = 2.5;
    CHECK(realized_t(c, 100) == 20);
    CHECK(realized_t(c, 300) == 60);
    c.t_value = 3.0;
    c.p = 1.0;
    CHECK(realized_t(c, 5) == 2); // round(5/3) rounds half up from 1.67
}

TEST_CASE("theory curve reference values") {
    TheoryPrediction t0 = theory_curve(1000, 0.5, 0);
    CHECK(t0.alpha_predicted ==
          doctest::Approx(2.0 / std::log(2.0) * std::log(1000.0)).epsilon(1e-12));
    CHECK(t0.chi_predicted == doctest::Approx(1000.0 / t0.alpha_predicted).epsilon(1e-12));

    // Frozen from independent evaluation of n / (kappa_p(t/ln n) ln n).
    CHECK(theory_curve(500, 0.5, 0).chi_predicted == doctest::Approx(27.883785).epsilon(1e-6));
    CHECK(theory_curve(500, 0.5, 4).chi_predicted == doctest::Approx(13.866217).epsilon(1e-6));
    CHECK(theory_curve(500, 0.5, 8).chi_predicted == doctest::Approx(10.095381).epsilon(1e-6));
    CHECK(theory_curve(2000, 0.5, 8).chi_predicted == doctest::Approx(36.500461).epsilon(1e-6));

    CHECK(theory_curve(60, 0.5, 0, 1.0).k_star == 9);
    CHECK(theory_curve(300, 0.5, 60, 0.01).k_star == 150);

    CHECK_THROWS_AS(theory_curve(2, 0.5, 0), ValidationError);
    CHECK_THROWS_AS(theory_curve(100, 0.0, 0), ValidationError);
    CHECK_THROWS_AS(theory_curve(100, 1.0, 0), ValidationError);
    CHECK_THROWS_AS(theory_curve(100, 0.5, -1), ValidationError);
}

TEST_CASE("run_experiment records are deterministic and well formed") {
    ExperimentConfig c = base_config();
    ExperimentResult r1 = run_experiment(c);
    ExperimentResult r2 = run_experiment(c);
    REQUIRE(r1.records.size() == 4);
    CHECK(emit_csv(r1) == emit_csv(r2));
    CHECK(emit_json(r1).dump() == emit_json(r2).dump());

    for (std::size_t i = 0; i < r1.records.size(); ++i) {
        const TrialRecord& rec = r1.records[i];
        CHECK(rec.trial_index == static_cast<long long>(i));
        CHECK(rec.derived_seed == derive_seed(101, i));
        CHECK(rec.n == 20);
        CHECK(rec.t == 1);
        CHECK(rec.alpha_exact);
        CHECK(rec.alpha_hat >= 1);
        CHECK(rec.chi_upper_greedy >= rec.chi_lower_ratio);
        CHECK(rec.wall_time_ms == 0.0);
    }
    REQUIRE(r1.summaries.size() == 1);
    CHECK(r1.summaries[0].trials == 4);
    REQUIRE(r1.theory.size() == 1);
    CHECK(r1.theory[0].n == 20);
    CHECK(r1.scalar_n);
}

TEST_CASE("worker counts do not change the output") {
    ExperimentConfig c = base_config();
    c.ns = {18, 24};
    c.trials = 6;
    std::string lone = emit_csv(run_experiment(c, 1));
    CHECK(emit_csv(run_experiment(c, 2)) == lone);
    CHECK(emit_csv(run_experiment(c, 4)) == lone);
    CHECK(emit_json(run_experiment(c, 3)).dump() == emit_json(run_experiment(c, 1)).dump());
}

TEST_CASE("the K5 pin: p = 1, t = 1 forces three classes") {
    ExperimentConfig c;
    c.ns = {5};
    c.p = 1.0;
    c.t_mode = TMode::absolute;
    c.t_value = 1;
    c.trials = 1;
    c.master_seed = 1;
    c.solver = SolverChoice::exact;
    ExperimentResult r = run_experiment(c);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].alpha_hat == 2);
    CHECK(r.records[0].chi_upper_greedy == 3);
    CHECK(r.records[0].chi_upper_lovasz == 3);
    CHECK(r.records[0].chi_lower_ratio == 3);
    // p = 1 has no large-deviations theory attached.
    CHECK(r.theory.empty());
}

TEST_CASE("mean alpha tracks the first-moment threshold at t = 0") {
    ExperimentConfig c;
    c.ns = {60};
    c.p = 0.5;
    c.t_mode = TMode::absolute;
    c.t_value = 0;
    c.trials = 50;
    c.master_seed = 424242;
    c.solver = SolverChoice::exact;
    c.eps = 1.0;
    ExperimentResult r = run_experiment(c);
    REQUIRE(r.theory.size() == 1);
    REQUIRE(r.theory[0].k_star.has_value());
    CHECK(*r.theory[0].k_star == 9);
    CHECK(std::fabs(r.summaries[0].alpha_hat.mean - 9.0) <= 2.0);
}

TEST_CASE("certificate coherence: alpha rarely reaches k_star") {
    ExperimentConfig c;
    c.ns = {40};
    c.p = 0.5;
    c.t_mode = TMode::absolute;
    c.t_value = 1;
    c.trials = 40;
    c.master_seed = 515151;
    c.solver = SolverChoice::exact;
    c.eps = 0.05;
    ExperimentResult r = run_experiment(c);
    REQUIRE(r.theory.size() == 1);
    REQUIRE(r.theory[0].k_star.has_value());
    long long ks = *r.theory[0].k_star;
    int hits = 0;
    for (const TrialRecord& rec : r.records)
        if (rec.alpha_hat >= ks) ++hits;
    double freq = static_cast<double>(hits) / c.trials;
    CHECK(freq <= c.eps + 3 * std::sqrt(c.eps / c.trials));
}

TEST_CASE("summary statistics are the plain mean and population stddev") {
    ExperimentConfig c = base_config();
    c.trials = 5;
    ExperimentResult r = run_experiment(c);
    double mean = 0;
    for (const TrialRecord& rec : r.records) mean += rec.alpha_hat;
    mean /= 5;
    double var = 0;
    for (const TrialRecord& rec : r.records)
        var += (rec.alpha_hat - mean) * (rec.alpha_hat - mean);
    var /= 5;
    CHECK(r.summaries[0].alpha_hat.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(r.summaries[0].alpha_hat.stddev == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
}

TEST_CASE("greedy solver fills the record without the exact flag") {
    ExperimentConfig c = base_config();
    c.ns = {200};
    c.solver = SolverChoice::greedy;
    c.trials = 2;
    ExperimentResult r = run_experiment(c);
    for (const TrialRecord& rec : r.records) {
        CHECK_FALSE(rec.alpha_exact);
        CHECK(rec.alpha_hat >= 1);
        CHECK(rec.chi_upper_greedy >= 1);
        CHECK(rec.chi_upper_lovasz >= 1);
    }
}

TEST_CASE("exact solver respects the size cap") {
    ExperimentConfig c = base_config();
    c.ns = {150};
    CHECK_THROWS_AS(run_experiment(c), CapExceededError);
    c.solver = SolverChoice::greedy;
    CHECK_NOTHROW(run_experiment(c));
}

TEST_CASE("config validation names the broken field") {
    ExperimentConfig c = base_config();
    c.trials = 0;
    CHECK_THROWS_WITH_AS(run_experiment(c), doctest::Contains("config.trials"),
                         ValidationError);
    c = base_config();
    c.ns = {};
    CHECK_THROWS_WITH_AS(run_experiment(c), doctest::Contains("config.n"), ValidationError);
    c = base_config();
    c.p = 1.5;
    CHECK_THROWS_WITH_AS(run_experiment(c), doctest::Contains("config.p"), ValidationError);
    c = base_config();
    c.t_mode = TMode::x;
    c.t_value = -2.5;
    CHECK_THROWS_WITH_AS(run_experiment(c), doctest::Contains("config.x"), ValidationError);
}

TEST_CASE("emit_csv schema") {
    ExperimentResult empty;
    CHECK(emit_csv(empty) ==
          "trial_index,derived_seed,n,p,t,alpha_hat,alpha_exact_flag,chi_upper_greedy,"
          "chi_upper_lovasz,chi_lower_ratio,wall_time_ms\n");

    ExperimentConfig c = base_config();
    c.trials = 3;
    std::string csv = emit_csv(run_experiment(c));
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t nl = csv.find('\n', pos);
        lines.push_back(csv.substr(pos, nl - pos));
        pos = nl + 1;
    }
    REQUIRE(lines.size() == 1 + 3 + 2); // header, trials, mean, stddev
    CHECK(lines[0].substr(0, 11) == "trial_index");
    CHECK(lines[4].substr(0, 12) == "summary_mean");
    CHECK(lines[5].substr(0, 14) == "summary_stddev");
    for (const std::string& line : lines) {
        std::size_t commas = 0;
        for (char ch : line) commas += ch == ',';
        CHECK(commas == 10);
    }
}

TEST_CASE("emit_json round trips the records") {
    ExperimentConfig c = base_config();
    c.ns = {15, 20};
    c.trials = 3;
    ExperimentResult r = run_experiment(c);
    nlohmann::json parsed = nlohmann::json::parse(emit_json(r).dump());

    REQUIRE(parsed["records"].size() == r.records.size());
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        const auto& j = parsed["records"][i];
        const TrialRecord& rec = r.records[i];
        CHECK(j["trial_index"].get<long long>() == rec.trial_index);
        CHECK(j["derived_seed"].get<std::uint64_t>() == rec.derived_seed);
        CHECK(j["n"].get<int>() == rec.n);
        CHECK(j["p"].get<double>() == rec.p);
        CHECK(j["t"].get<int>() == rec.t);
        CHECK(j["alpha_hat"].get<int>() == rec.alpha_hat);
        CHECK(j["alpha_exact_flag"].get<int>() == (rec.alpha_exact ? 1 : 0));
        CHECK(j["chi_upper_greedy"].get<int>() == rec.chi_upper_greedy);
        CHECK(j["chi_upper_lovasz"].get<int>() == rec.chi_upper_lovasz);
        CHECK(j["chi_lower_ratio"].get<int>() == rec.chi_lower_ratio);
        CHECK(j["wall_time_ms"].get<double>() == rec.wall_time_ms);
    }
    // List-n configs carry a theory array, scalar ones an object.
    CHECK(parsed["theory"].is_array());
    CHECK(parsed["theory"].size() == 2);
    CHECK(parsed["summary"].size() == 2);

    c.ns = {15};
    nlohmann::json scalar = nlohmann::json::parse(emit_json(run_experiment(c)).dump());
    CHECK(scalar["theory"].is_object());
    CHECK(scalar["theory"]["k_star"].is_number());
    CHECK(scalar["theory"]["chi_predicted"].is_number());
}

TEST_CASE("parse_config applies defaults and reports paths") {
    nlohmann::json good = {{"n", 20},         {"p", 0.5},          {"t", 1},
                           {"trials", 4},     {"master_seed", 11}};
    ExperimentConfig c = parse_config(good);
    CHECK(c.ns == std::vector<int>{20});
    CHECK(c.p == 0.5);
    CHECK(c.t_mode == TMode::absolute);
    CHECK(c.t_value == 1);
    CHECK(c.trials == 4);
    CHECK(c.master_seed == 11);
    CHECK(c.solver == SolverChoice::greedy);
    CHECK(c.eps == 0.01);
    CHECK(c.formats == std::vector<std::string>{"csv", "json"});
    CHECK(c.mode == RunMode::campaign);
    CHECK_FALSE(c.record_timings);

    nlohmann::json listjson = good;
    listjson["n"] = {30, 40};
    listjson["tau"] = 0.5;
    listjson.erase("t");
    listjson["solver"] = "both";
    listjson["format"] = "csv";
    listjson["record_timings"] = true;
    ExperimentConfig c2 = parse_config(listjson);
    CHECK(c2.ns == std::vector<int>{30, 40});
    CHECK(c2.t_mode == TMode::tau);
    CHECK(c2.solver == SolverChoice::both);
    CHECK(c2.formats == std::vector<std::string>{"csv"});
    CHECK(c2.record_timings);

    auto expect_mention = [](nlohmann::json j, const char* what) {
        CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains(what), ValidationError);
    };
    nlohmann::json bad = good;
    bad.erase("n");
    expect_mention(bad, "config.n");
    bad = good;
    bad.erase("p");
    expect_mention(bad, "config.p");
    bad = good;
    bad["tau"] = 1.0; // both t and tau
    expect_mention(bad, "config.t");
    bad = good;
    bad.erase("trials");
    expect_mention(bad, "config.trials");
    bad = good;
    bad["solver"] = "quantum";
    expect_mention(bad, "config.solver");
    bad = good;
    bad["mode"] = "sideways";
    expect_mention(bad, "config.mode");
    bad = good;
    bad["eps"] = 2.0;
    expect_mention(bad, "config.eps");
    bad = good;
    bad["format"] = "xml";
    expect_mention(bad, "config.format");
    bad = good;
    bad["mode"] = "step"; // step without x
    expect_mention(bad, "config.mode");
    bad = good;
    bad.erase("t");
    bad["x"] = 3.0;
    bad["mode"] = "step";
    expect_mention(bad, "config.x");
}

TEST_CASE("step experiment certifies the chi step") {
    StepReport r = step_experiment(100, 0.5, 2.5, 5, 2718, 0.01);
    CHECK(r.t == 20);
    CHECK(r.step_value == 3);
    REQUIRE(r.k_star.has_value());
    CHECK(*r.k_star == *first_moment_threshold_k(100, 0.5, 20, 0.01));
    REQUIRE(r.trials.size() == 5);
    int both = 0;
    for (const StepTrial& tr : r.trials) {
        CHECK(tr.derived_seed == derive_seed(2718, tr.trial_index));
        CHECK(tr.upper_ok == (tr.lovasz_classes <= 3));
        // n = 100 is too small for this certificate: (k*-1)*2 >= 100.
        CHECK_FALSE(tr.cert_ok);
        both += tr.upper_ok && tr.cert_ok;
    }
    CHECK(r.success_fraction == doctest::Approx(both / 5.0));

    CHECK_THROWS_AS(step_experiment(100, 0.5, 3.0, 5, 1, 0.01), ValidationError);
    CHECK_THROWS_AS(step_experiment(100, 0.5, -2.5, 5, 1, 0.01), ValidationError);
    CHECK_THROWS_AS(step_experiment(100, 1.0, 2.5, 5, 1, 0.01), ValidationError);
    CHECK_THROWS_AS(step_experiment(100, 0.5, 2.5, 0, 1, 0.01), ValidationError);
}

TEST_CASE("timings stay zero unless requested") {
    ExperimentConfig c = base_config();
    ExperimentResult quiet = run_experiment(c);
    for (const TrialRecord& rec : quiet.records) CHECK(rec.wall_time_ms == 0.0);

    c.record_timings = true;
    ExperimentResult timed = run_experiment(c);
    for (const TrialRecord& rec : timed.records) CHECK(rec.wall_time_ms >= 0.0);
}

TEST_CASE("format_double uses 12 significant digits") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(2.0 / std::log(2.0)) == "2.88539008178");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1e-30) == "1e-30");
    CHECK(format_double(123456789012345.0) == "1.23456789012e+14");
}
