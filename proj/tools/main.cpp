#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "timp/colouring.hpp"
#include "timp/errors.hpp"
#include "timp/experiments.hpp"
#include "timp/graph.hpp"
#include "timp/graph_io.hpp"
#include "timp/ld_theory.hpp"

namespace {

using namespace timp;

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitCap = 4;

GraphFormat parse_format(const std::string& s) {
    if (s == "edge_list") return GraphFormat::edge_list;
    if (s == "dimacs") return GraphFormat::dimacs;
    throw ValidationError("unknown graph format '" + s + "' (use edge_list or dimacs)");
}

// All file output goes through here: content is fully materialized before the
// stream opens, so a failed run never leaves a partial file behind.
void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

struct TheoryArgs {
    double p = 0.5;
    bool has_p = false;
    std::optional<double> tau;
    std::optional<double> t;
    std::optional<int> n;
    bool sparse = false;
    bool json = false;
};

int cmd_theory(const TheoryArgs& a) {
    double tau;
    if (a.tau && a.t) throw ValidationError("give either --tau or --t, not both");
    if (a.tau) {
        tau = *a.tau;
    } else if (a.t) {
        if (!a.n) throw ValidationError("--t needs --n to form tau = t / ln n");
        if (*a.n < 3) throw ValidationError("--n must be at least 3");
        tau = *a.t / std::log(static_cast<double>(*a.n));
    } else {
        throw ValidationError("provide --tau, or --t together with --n");
    }
    if (tau < 0) throw ValidationError("tau must be non-negative");

    nlohmann::ordered_json out;
    std::ostringstream text;
    if (a.sparse) {
        double kappa = kappa_sparse(tau);
        text << "tau = " << format_double(tau) << "\n";
        text << "kappa = " << format_double(kappa) << "\n";
        out["sparse"] = true;
        out["tau"] = tau;
        out["kappa"] = kappa;
    } else {
        TheoryParams params(a.p); // validates 0 < p < 1
        double kappa = kappa_p(tau, params);
        text << "p = " << format_double(a.p) << "\n";
        text << "tau = " << format_double(tau) << "\n";
        out["sparse"] = false;
        out["p"] = a.p;
        out["tau"] = tau;
        out["lambda_star"] = nlohmann::ordered_json::array();
        for (double x : {0.0, a.p / 2, a.p, (1 + a.p) / 2, 1.0}) {
            double v = lambda_star(x, params);
            text << "lambda_star(" << format_double(x) << ") = " << format_double(v) << "\n";
            out["lambda_star"].push_back({{"x", x}, {"value", v}});
        }
        text << "kappa_p = " << format_double(kappa) << "\n";
        out["kappa_p"] = kappa;
        if (a.n) {
            double ln_n = std::log(static_cast<double>(*a.n));
            double alpha_pred = kappa * ln_n;
            text << "n = " << *a.n << "\n";
            text << "alpha_predicted = " << format_double(alpha_pred) << "\n";
            text << "chi_predicted = " << format_double(*a.n / alpha_pred) << "\n";
            out["n"] = *a.n;
            out["alpha_predicted"] = alpha_pred;
            out["chi_predicted"] = *a.n / alpha_pred;
        }
    }
    if (a.json)
        std::cout << out.dump(2) << "\n";
    else
        std::cout << text.str();
    return 0;
}

struct SampleArgs {
    int n = 0;
    std::optional<double> p;
    std::optional<long long> m;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "edge_list";
};

int cmd_sample(const SampleArgs& a) {
    if (a.p && a.m) throw ValidationError("give either --p or --m, not both");
    if (!a.p && !a.m) throw ValidationError("one of --p or --m is required");
    GraphFormat fmt = parse_format(a.format);
    Graph g = a.p ? sample_gnp(a.n, *a.p, a.seed) : sample_gnm(a.n, *a.m, a.seed);
    if (a.out_path.empty()) {
        write_graph(std::cout, g, fmt);
    } else {
        std::ostringstream buf;
        write_graph(buf, g, fmt);
        write_text_file(a.out_path, buf.str());
    }
    return 0;
}

struct SolveArgs {
    std::string path;
    int t = 0;
    bool exact = false;
    bool greedy = false;
    bool bounds = false;
    bool json = false;
    int alpha_cap = 100;
    int chi_cap = kChiExactDefaultCap;
};

int cmd_solve(const SolveArgs& a) {
    if (a.t < 0) throw ValidationError("--t must be non-negative");
    int modes = (a.exact ? 1 : 0) + (a.greedy ? 1 : 0) + (a.bounds ? 1 : 0);
    if (modes > 1) throw ValidationError("pick one of --exact, --greedy, --bounds");
    Graph g = read_graph_file(a.path);
    nlohmann::ordered_json out;
    out["n"] = g.n();
    out["m"] = g.edge_count();
    out["t"] = a.t;
    std::ostringstream text;
    text << "n = " << g.n() << "\n";

    if (a.exact) {
        if (g.n() > a.alpha_cap)
            throw CapExceededError("exact solver capped at n <= " + std::to_string(a.alpha_cap) +
                                   ", got n = " + std::to_string(g.n()) + " (try --greedy)");
        AlphaResult alpha = alpha_t_exact(g, a.t);
        ChiResult chi;
        try {
            chi = chi_t_exact(g, a.t, a.chi_cap);
        } catch (const CapExceededError& e) {
            throw CapExceededError(std::string(e.what()) + " (try --greedy)");
        }
        text << "alpha_t = " << alpha.size << "\n";
        text << "chi_t = " << chi.count << "\n";
        out["alpha_t"] = alpha.size;
        out["chi_t"] = chi.count;
        nlohmann::ordered_json witness = nlohmann::ordered_json::array();
        for (int v = 0; v < g.n(); ++v)
            if (alpha.witness.size() > 0 && alpha.witness.test(v)) witness.push_back(v);
        out["alpha_witness"] = witness;
        out["chi_assignment"] = chi.colouring.assignment;
    } else if (a.greedy) {
        int alpha_greedy = static_cast<int>(greedy_dependent_set(g, full_set(g.n()), a.t).count());
        Colouring peel = greedy_peel_colouring(g, a.t);
        Colouring lov = lovasz_decomposition(g, a.t);
        text << "alpha_greedy = " << alpha_greedy << "\n";
        text << "chi_greedy = " << peel.class_count << "\n";
        text << "chi_lovasz = " << lov.class_count << "\n";
        out["alpha_greedy"] = alpha_greedy;
        out["chi_greedy"] = peel.class_count;
        out["chi_lovasz"] = lov.class_count;
    } else {
        BoundsReport r = bounds_report(g, a.t, a.alpha_cap, a.chi_cap);
        if (r.alpha_exact) {
            text << "alpha_t = " << *r.alpha_exact << "\n";
            out["alpha_t"] = *r.alpha_exact;
        } else {
            text << "alpha_greedy = " << r.alpha_greedy << "\n";
            out["alpha_greedy"] = r.alpha_greedy;
        }
        int lower = r.chi_lower_ratio;
        if (r.chi_lower_proper) lower = std::max(lower, *r.chi_lower_proper);
        int upper = std::min(r.chi_upper_lovasz, r.chi_upper_greedy);
        if (r.chi_upper_proper) upper = std::min(upper, *r.chi_upper_proper);
        text << "chi_lower_ratio = " << r.chi_lower_ratio << "\n";
        if (r.chi_lower_proper) text << "chi_lower_proper = " << *r.chi_lower_proper << "\n";
        text << "chi_upper_lovasz = " << r.chi_upper_lovasz << "\n";
        text << "chi_upper_greedy = " << r.chi_upper_greedy << "\n";
        if (r.chi_upper_proper) text << "chi_upper_proper = " << *r.chi_upper_proper << "\n";
        text << "chi_t in [" << lower << ", " << upper << "]\n";
        out["chi_lower_ratio"] = r.chi_lower_ratio;
        if (r.chi_lower_proper) out["chi_lower_proper"] = *r.chi_lower_proper;
        out["chi_upper_lovasz"] = r.chi_upper_lovasz;
        out["chi_upper_greedy"] = r.chi_upper_greedy;
        if (r.chi_upper_proper) out["chi_upper_proper"] = *r.chi_upper_proper;
        out["chi_lower"] = lower;
        out["chi_upper"] = upper;
    }
    if (a.json)
        std::cout << out.dump(2) << "\n";
    else
        std::cout << text.str();
    return 0;
}

struct ExperimentArgs {
    std::string config_path;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;
    std::optional<std::string> format;
    std::optional<double> eps;
    int workers = 1;
};

std::string step_csv(const StepReport& r) {
    std::ostringstream out;
    out << "trial_index,derived_seed,delta,lovasz_classes,upper_ok,cert_ok\n";
    for (const StepTrial& tr : r.trials)
        out << tr.trial_index << ',' << tr.derived_seed << ',' << tr.delta << ','
            << tr.lovasz_classes << ',' << (tr.upper_ok ? 1 : 0) << ',' << (tr.cert_ok ? 1 : 0)
            << '\n';
    return out.str();
}

nlohmann::ordered_json step_json(const StepReport& r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["p"] = r.p;
    j["x"] = r.x;
    j["t"] = r.t;
    j["step_value"] = r.step_value;
    if (r.k_star)
        j["k_star"] = *r.k_star;
    else
        j["k_star"] = nullptr;
    j["trials"] = nlohmann::ordered_json::array();
    for (const StepTrial& tr : r.trials)
        j["trials"].push_back({{"trial_index", tr.trial_index},
                               {"derived_seed", tr.derived_seed},
                               {"delta", tr.delta},
                               {"lovasz_classes", tr.lovasz_classes},
                               {"upper_ok", tr.upper_ok},
                               {"cert_ok", tr.cert_ok}});
    j["success_fraction"] = r.success_fraction;
    return j;
}

int cmd_experiment(const ExperimentArgs& a) {
    std::ifstream in(a.config_path);
    if (!in) throw IoError("cannot read config '" + a.config_path + "'");
    nlohmann::json raw;
    try {
        in >> raw;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig cfg = parse_config(raw);
    if (a.trials) cfg.trials = *a.trials;
    if (a.seed) cfg.master_seed = *a.seed;
    if (a.output) cfg.output = *a.output;
    if (a.format) cfg.formats = {*a.format};
    if (a.eps) cfg.eps = *a.eps;
    for (const std::string& f : cfg.formats)
        if (f != "csv" && f != "json")
            throw ValidationError("config.format: unknown format '" + f + "'");

    bool want_csv = false, want_json = false;
    for (const std::string& f : cfg.formats) {
        want_csv |= f == "csv";
        want_json |= f == "json";
    }

    std::string csv_text;
    std::string json_text;
    std::ostringstream human;
    if (cfg.mode == RunMode::step) {
        if (cfg.ns.size() != 1)
            throw ValidationError("config.n: step mode needs a single size");
        StepReport rep = step_experiment(cfg.ns[0], cfg.p, cfg.t_value, cfg.trials,
                                         cfg.master_seed, cfg.eps);
        csv_text = step_csv(rep);
        json_text = step_json(rep).dump(2) + "\n";
        human << "step experiment: n = " << rep.n << ", p = " << format_double(rep.p)
              << ", x = " << format_double(rep.x) << ", t = " << rep.t << "\n";
        human << "step_value = " << rep.step_value << "\n";
        if (rep.k_star)
            human << "k_star = " << *rep.k_star << "\n";
        else
            human << "k_star = none (no certificate at this eps)\n";
        human << "success_fraction = " << format_double(rep.success_fraction) << "\n";
    } else {
        ExperimentResult res = run_experiment(cfg, a.workers);
        csv_text = emit_csv(res);
        json_text = emit_json(res).dump(2) + "\n";
        for (std::size_t i = 0; i < res.summaries.size(); ++i) {
            const GroupSummary& s = res.summaries[i];
            human << "n = " << s.n << ", t = " << s.t << ", trials = " << s.trials
                  << ": alpha_hat mean " << format_double(s.alpha_hat.mean)
                  << ", chi_greedy mean " << format_double(s.chi_upper_greedy.mean)
                  << ", chi_lovasz mean " << format_double(s.chi_upper_lovasz.mean);
            if (i < res.theory.size())
                human << ", chi_predicted " << format_double(res.theory[i].chi_predicted);
            human << "\n";
        }
    }

    if (cfg.output.empty()) {
        // No output path: machine output goes to stdout (CSV wins if both).
        std::cout << (want_csv ? csv_text : json_text);
    } else {
        if (want_csv) write_text_file(cfg.output + ".csv", csv_text);
        if (want_json) write_text_file(cfg.output + ".json", json_text);
        std::cout << human.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"t-improper colouring toolkit for Erdos-Renyi random graphs"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 2 validation error, 3 I/O error, 4 cap exceeded.\n"
               "Experiment flags override the matching config fields.");

    TheoryArgs th;
    CLI::App* theory = app.add_subcommand(
        "theory", "Evaluate Lambda*, the kappa thresholds, and predicted alpha/chi scales");
    theory->add_option("--p", th.p, "edge probability (dense mode)");
    double tau_val = 0, t_val = 0;
    int n_val = 0;
    CLI::Option* tau_opt = theory->add_option("--tau", tau_val, "threshold argument tau = t / ln n");
    CLI::Option* t_opt = theory->add_option("--t", t_val, "impropriety t (requires --n)");
    CLI::Option* n_opt = theory->add_option("--n", n_val, "graph size for predictions");
    theory->add_flag("--sparse", th.sparse, "use the sparse-regime threshold kappa(tau)");
    theory->add_flag("--json", th.json, "machine-readable output");

    SampleArgs sa;
    CLI::App* sample = app.add_subcommand("sample", "Sample G(n,p) or G(n,m) and write it out");
    sample->add_option("--n", sa.n, "number of vertices")->required();
    double p_val = 0;
    long long m_val = 0;
    CLI::Option* p_opt = sample->add_option("--p", p_val, "edge probability");
    CLI::Option* m_opt = sample->add_option("--m", m_val, "exact edge count");
    sample->add_option("--seed", sa.seed, "RNG seed (default 0)");
    sample->add_option("--out", sa.out_path, "output path (default stdout)");
    sample->add_option("--format", sa.format, "edge_list (default) or dimacs");

    SolveArgs so;
    CLI::App* solve = app.add_subcommand("solve", "Solve or bound alpha^t and chi^t for a graph file");
    solve->add_option("graph", so.path, "input graph file")->required();
    solve->add_option("--t", so.t, "impropriety t")->required();
    solve->add_flag("--exact", so.exact, "exact alpha^t and chi^t (small n)");
    solve->add_flag("--greedy", so.greedy, "greedy heuristics only");
    solve->add_flag("--bounds", so.bounds, "bounds report (default)");
    solve->add_flag("--json", so.json, "machine-readable output");
    solve->add_option("--alpha-cap", so.alpha_cap, "size cap for the exact alpha solver");
    solve->add_option("--chi-cap", so.chi_cap, "size cap for the exact chi solver");

    ExperimentArgs ex;
    CLI::App* experiment =
        app.add_subcommand("experiment", "Run a Monte Carlo campaign from a JSON config");
    experiment->add_option("config", ex.config_path, "JSON config file")->required();
    int trials_val = 0;
    std::uint64_t seed_val = 0;
    std::string output_val, format_val;
    double eps_val = 0;
    CLI::Option* trials_opt =
        experiment->add_option("--trials", trials_val, "override config.trials");
    CLI::Option* seed_opt =
        experiment->add_option("--seed", seed_val, "override config.master_seed");
    CLI::Option* output_opt =
        experiment->add_option("--output", output_val, "override config.output (base path)");
    CLI::Option* format_opt =
        experiment->add_option("--format", format_val, "override config.format (csv or json)");
    CLI::Option* eps_opt = experiment->add_option("--eps", eps_val, "override config.eps");
    experiment->add_option("--workers", ex.workers, "parallel trial workers (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (theory->parsed()) {
            th.has_p = theory->count("--p") > 0;
            if (tau_opt->count()) th.tau = tau_val;
            if (t_opt->count()) th.t = t_val;
            if (n_opt->count()) th.n = n_val;
            return cmd_theory(th);
        }
        if (sample->parsed()) {
            if (p_opt->count()) sa.p = p_val;
            if (m_opt->count()) sa.m = m_val;
            return cmd_sample(sa);
        }
        if (solve->parsed()) return cmd_solve(so);
        if (experiment->parsed()) {
            if (trials_opt->count()) ex.trials = trials_val;
            if (seed_opt->count()) ex.seed = seed_val;
            if (output_opt->count()) ex.output = output_val;
            if (format_opt->count()) ex.format = format_val;
            if (eps_opt->count()) ex.eps = eps_val;
            return cmd_experiment(ex);
        }
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
