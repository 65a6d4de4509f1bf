// asrf: credit-portfolio capital engine CLI.
//
// Data commands read grades.csv / accounts.csv / losses.csv (see io/csv.hpp
// for the schemas), write CSV reports to stdout and diagnostics to stderr.
// Exit codes: 0 success, 1 validation/infeasibility failure, 2 usage error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asrf/adequacy/solvency.hpp"
#include "asrf/basel/params.hpp"
#include "asrf/engine/asrf.hpp"
#include "asrf/errors.hpp"
#include "asrf/factor/systemic.hpp"
#include "asrf/io/csv.hpp"
#include "asrf/io/synth.hpp"
#include "asrf/kernels/kernels.hpp"
#include "asrf/mc/simulate.hpp"
#include "asrf/validate.hpp"

namespace {

using asrf::Quarter;
using asrf::io::format_double;

constexpr std::uint64_t kDefaultSeed = 12345;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("ASRF_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw asrf::ParameterError("ASRF_SEED is not an unsigned integer");
        }
    }
    return kDefaultSeed;
}

struct DataOptions {
    std::string data_dir = ".";
    std::string grades, accounts, losses;

    asrf::io::CsvPaths paths() const {
        return {grades.empty() ? data_dir + "/grades.csv" : grades,
                accounts.empty() ? data_dir + "/accounts.csv" : accounts,
                losses.empty() ? data_dir + "/losses.csv" : losses};
    }
};

void add_data_options(CLI::App* cmd, DataOptions& opts) {
    cmd->add_option("--data", opts.data_dir,
                    "Directory holding grades.csv, accounts.csv, losses.csv");
    cmd->add_option("--grades", opts.grades, "Override path to grades.csv");
    cmd->add_option("--accounts", opts.accounts, "Override path to accounts.csv");
    cmd->add_option("--losses", opts.losses, "Override path to losses.csv");
}

asrf::QuarterSeries load_series(const DataOptions& opts) {
    auto result = asrf::io::ingest(opts.paths());
    for (const auto& w : result.warnings)
        std::cerr << asrf::format_violation(w) << "\n";
    return std::move(result.series);
}

// Rows of pre-formatted cells, emitted as CSV or an aligned text table.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void print(bool text) const {
        if (!text) {
            print_csv();
            return;
        }
        std::vector<std::size_t> width(header.size());
        for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
        for (const auto& r : rows)
            for (std::size_t c = 0; c < r.size(); ++c)
                width[c] = std::max(width[c], r[c].size());
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t c = 0; c < r.size(); ++c)
                std::cout << (c ? "  " : "") << r[c]
                          << std::string(width[c] - r[c].size(), ' ');
            std::cout << "\n";
        };
        line(header);
        for (const auto& r : rows) line(r);
    }

    void print_csv() const {
        auto join = [](const std::vector<std::string>& r) {
            std::string s;
            for (std::size_t c = 0; c < r.size(); ++c) {
                if (c) s += ',';
                s += r[c];
            }
            return s;
        };
        std::cout << join(header) << "\n";
        for (const auto& r : rows) std::cout << join(r) << "\n";
    }
};

int run_capital(const DataOptions& data, double alpha, const std::string& mode_name,
                bool text) {
    auto series = load_series(data);
    auto mode = mode_name == "raw" ? asrf::engine::Mode::Raw
                                   : asrf::engine::Mode::Regulatory;
    Table t;
    t.header = {"quarter", "mode", "alpha", "factor_point", "total_ead",
                "expected_loss", "conditional_loss", "capital",
                "el_plus_capital_pct_ead"};
    for (const auto& [q, snap] : series.snapshots) {
        auto prepared = asrf::engine::PreparedPortfolio::build(snap, mode);
        auto d = asrf::engine::capital(snap, alpha, mode);
        double pct = prepared.total_ead() > 0.0
                         ? 100.0 * (d.expected_loss + d.capital) / prepared.total_ead()
                         : 0.0;
        t.rows.push_back({q.iso_date(), mode_name, format_double(alpha),
                          format_double(d.factor_point), format_double(prepared.total_ead()),
                          format_double(d.expected_loss), format_double(d.conditional_loss),
                          format_double(d.capital), format_double(pct)});
    }
    t.print(text);
    return 0;
}

int run_invert_factor(const DataOptions& data, int lag, const std::string& allocation,
                      int input_lead, bool text) {
    auto series = load_series(data);
    asrf::factor::FactorOptions opts;
    opts.input_lead = input_lead;
    auto result = asrf::factor::factor_series(
        series, lag, asrf::factor::allocation_from_string(allocation), opts);
    for (const auto& g : result.gaps)
        std::cerr << "gap " << g.quarter.iso_date() << ": " << g.reason << "\n";
    Table t;
    t.header = {"quarter", "y", "alpha", "lag", "allocation", "window_losses"};
    for (const auto& r : result.readings)
        t.rows.push_back({r.quarter.iso_date(), format_double(r.y), format_double(r.alpha),
                          std::to_string(r.lag_quarters), to_string(r.allocation),
                          format_double(r.window_losses)});
    t.print(text);
    if (t.rows.empty() && !series.snapshots.empty()) {
        std::cerr << "no quarter satisfied the coverage rule\n";
        return 1;
    }
    return 0;
}

int run_dtd(const DataOptions& data, bool text) {
    auto series = load_series(data);
    Table t;
    t.header = {"quarter", "capital_ratio", "provisions_irb", "capital_irb",
                "dtd", "dtd_alpha", "provisions_shortfall"};
    for (const auto& [q, snap] : series.snapshots) {
        (void)snap;
        try {
            auto r = asrf::adequacy::distance_to_default(series, q);
            t.rows.push_back({q.iso_date(), format_double(r.capital_ratio),
                              format_double(r.provisions_irb), format_double(r.capital_irb),
                              format_double(r.dtd), format_double(r.dtd_alpha),
                              r.provisions_shortfall ? "1" : "0"});
        } catch (const asrf::InfeasibleError& e) {
            std::cerr << q.iso_date() << ": " << e.what() << "\n";
        }
    }
    t.print(text);
    if (t.rows.empty() && !series.snapshots.empty()) return 1;
    return 0;
}

int run_reverse_stress(const DataOptions& data, std::vector<double> floors, bool text) {
    auto series = load_series(data);
    if (floors.empty()) floors = {0.04, 0.08};
    Table t;
    t.header = {"quarter", "floor", "loss_threshold", "y_hat", "alpha_hat"};
    bool any_infeasible = false;
    for (const auto& [q, snap] : series.snapshots) {
        (void)snap;
        for (double floor : floors) {
            try {
                auto r = asrf::adequacy::reverse_stress(series, q, floor);
                t.rows.push_back({q.iso_date(), format_double(floor),
                                  format_double(r.loss_threshold), format_double(r.y_hat),
                                  format_double(r.alpha_hat)});
            } catch (const asrf::InfeasibleError& e) {
                any_infeasible = true;
                std::cerr << q.iso_date() << " floor " << format_double(floor) << ": "
                          << e.what() << "\n";
            }
        }
    }
    t.print(text);
    if (t.rows.empty() && !series.snapshots.empty()) return 1;
    return any_infeasible ? 1 : 0;
}

int run_report(const DataOptions& data, std::vector<double> floors, int lag,
               const std::string& allocation, bool text) {
    auto series = load_series(data);
    if (floors.empty()) floors = {0.04, 0.08};
    auto factors = asrf::factor::factor_series(
        series, lag, asrf::factor::allocation_from_string(allocation));
    Table t;
    t.header = {"quarter", "kappa", "dtd", "dtd_alpha"};
    for (double f : floors) {
        t.header.push_back("y_hat@" + format_double(f));
        t.header.push_back("alpha_hat@" + format_double(f));
    }
    t.header.push_back("y");
    t.header.push_back("alpha");
    for (const auto& [q, snap] : series.snapshots) {
        (void)snap;
        std::vector<std::string> row{q.iso_date()};
        try {
            auto r = asrf::adequacy::distance_to_default(series, q);
            row.push_back(format_double(r.capital_ratio));
            row.push_back(format_double(r.dtd));
            row.push_back(format_double(r.dtd_alpha));
        } catch (const asrf::InfeasibleError&) {
            row.insert(row.end(), {"", "", ""});
        }
        for (double f : floors) {
            try {
                auto r = asrf::adequacy::reverse_stress(series, q, f);
                row.push_back(format_double(r.y_hat));
                row.push_back(format_double(r.alpha_hat));
            } catch (const asrf::InfeasibleError&) {
                row.insert(row.end(), {"", ""});
            }
        }
        auto it = std::find_if(factors.readings.begin(), factors.readings.end(),
                               [&](const auto& r) { return r.quarter == q; });
        if (it != factors.readings.end()) {
            row.push_back(format_double(it->y));
            row.push_back(format_double(it->alpha));
        } else {
            row.insert(row.end(), {"", ""});
        }
        t.rows.push_back(std::move(row));
    }
    t.print(text);
    return 0;
}

asrf::mc::DefaultMechanism mechanism_from(const std::string& s) {
    if (s == "asset-value") return asrf::mc::DefaultMechanism::AssetValue;
    if (s == "bernoulli") return asrf::mc::DefaultMechanism::Bernoulli;
    throw asrf::ParameterError("unknown mechanism '" + s + "'");
}

int run_simulate(const DataOptions& data, const std::string& quarter,
                 asrf::mc::SimConfig config, const std::string& mechanism,
                 std::vector<double> alphas, const std::string& losses_out) {
    auto series = load_series(data);
    config.mechanism = mechanism_from(mechanism);
    if (alphas.empty()) alphas = {0.95, 0.99, 0.999};
    Quarter q = quarter.empty() ? series.snapshots.rbegin()->first
                                : Quarter::parse(quarter);
    auto it = series.snapshots.find(q);
    if (it == series.snapshots.end())
        throw asrf::CoverageError("no snapshot at " + q.iso_date());
    auto dist = asrf::mc::simulate(it->second, config);

    Table t;
    t.header = {"metric", "value"};
    t.rows.push_back({"quarter", q.iso_date()});
    t.rows.push_back({"scenarios", std::to_string(config.scenarios)});
    t.rows.push_back({"seed", std::to_string(config.seed)});
    t.rows.push_back({"obligors_per_grade", std::to_string(config.obligors_per_grade)});
    t.rows.push_back({"mechanism", mechanism});
    if (config.conditional_y)
        t.rows.push_back({"conditional_y", format_double(*config.conditional_y)});
    t.rows.push_back({"mean", format_double(dist.mean())});
    t.rows.push_back({"mean_se", format_double(dist.mean_std_error())});
    for (double a : alphas) {
        t.rows.push_back({"var@" + format_double(a),
                          format_double(asrf::mc::empirical_var(dist, a))});
        t.rows.push_back({"var_se@" + format_double(a),
                          format_double(asrf::mc::batched_quantile_se(dist, a))});
    }
    t.print_csv();

    if (!losses_out.empty()) {
        std::ofstream f(losses_out);
        if (!f) throw asrf::ParseError("cannot write '" + losses_out + "'");
        f << "scenario,loss\n";
        const auto& seq = dist.by_scenario();
        for (std::size_t i = 0; i < seq.size(); ++i)
            f << i << ',' << format_double(seq[i]) << "\n";
    }
    return 0;
}

int run_convergence(double pd, double rho, double lgd, double ead, double alpha,
                    const std::vector<std::uint64_t>& clones, asrf::mc::SimConfig config,
                    const std::string& mechanism) {
    config.mechanism = mechanism_from(mechanism);
    asrf::ObligorGrade g;
    g.id = "template";
    g.asset_class = asrf::AssetClass::OtherRetail;  // no maturity dimension
    g.ead = ead;
    g.lgd = lgd;
    g.pd = pd;
    g.rho_override = rho;
    auto rows = asrf::mc::convergence_study(g, clones, config, alpha);
    Table t;
    t.header = {"n", "mc_var", "mc_se", "asrf_value", "relative_gap"};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.clones), format_double(r.mc_var),
                          format_double(r.mc_se), format_double(r.asrf_value),
                          format_double(r.relative_gap)});
    t.print_csv();
    return 0;
}

int run_synth(const asrf::io::SynthSpec& spec, const std::string& out_dir) {
    auto series = asrf::io::synthesize(spec);
    auto paths = asrf::io::emit_directory(series, out_dir);
    std::cerr << "wrote " << paths.grades << ", " << paths.accounts << ", "
              << paths.losses << "\n";
    return 0;
}

int run_params_dump() {
    Table t;
    t.header = {"asset_class", "formula", "constants"};
    for (const auto& row : asrf::basel::constants_table())
        t.rows.push_back({row.asset_class, row.formula, row.constants});
    t.print_csv();
    return 0;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        out.push_back(std::stod(cell));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ASRF credit-portfolio capital engine"};
    app.require_subcommand(1);

    std::string kernel = "auto";
    app.add_option("--kernel", kernel, "Arithmetic kernel: auto, scalar, avx2")
        ->envname("ASRF_KERNEL");

    bool text = false;
    app.add_flag("--text", text, "Aligned text tables instead of CSV");

    // capital
    DataOptions cap_data;
    double cap_alpha = 0.999;
    std::string cap_mode = "regulatory";
    auto* cap = app.add_subcommand("capital", "Regulatory capital report per snapshot");
    add_data_options(cap, cap_data);
    cap->add_option("--alpha", cap_alpha, "Confidence level (default 0.999)");
    cap->add_option("--mode", cap_mode, "raw or regulatory")
        ->check(CLI::IsMember({"raw", "regulatory"}));

    // invert-factor
    DataOptions inv_data;
    int inv_lag = 0;
    int inv_lead = 2;
    std::string inv_alloc = "proportional-rwa";
    auto* inv = app.add_subcommand("invert-factor",
                                   "Recover systematic-factor realisations from losses");
    add_data_options(inv, inv_data);
    inv->add_option("--lag", inv_lag, "Bad-debt recognition lag in quarters (0..2)")
        ->check(CLI::Range(0, 2));
    inv->add_option("--allocation", inv_alloc, "proportional-rwa or all-to-irb")
        ->check(CLI::IsMember({"proportional-rwa", "all-to-irb"}));
    inv->add_option("--input-lead", inv_lead,
                    "Quarters between reading and input snapshot (default 2)");

    // dtd
    DataOptions dtd_data;
    auto* dtd = app.add_subcommand("dtd", "Distance to default per quarter");
    add_data_options(dtd, dtd_data);

    // reverse-stress
    DataOptions rs_data;
    std::vector<double> rs_floors;
    auto* rs = app.add_subcommand("reverse-stress",
                                  "Weakest shock breaching a capital ratio floor");
    add_data_options(rs, rs_data);
    rs->add_option("--floor", rs_floors,
                   "Capital ratio floor, repeatable (default 0.04 and 0.08)");

    // report
    DataOptions rep_data;
    std::vector<double> rep_floors;
    int rep_lag = 0;
    std::string rep_alloc = "proportional-rwa";
    auto* rep = app.add_subcommand(
        "report", "Combined solvency table: kappa, dtd, stress floors, factor");
    add_data_options(rep, rep_data);
    rep->add_option("--floor", rep_floors, "Capital ratio floor, repeatable");
    rep->add_option("--lag", rep_lag, "Recognition lag for the factor columns")
        ->check(CLI::Range(0, 2));
    rep->add_option("--allocation", rep_alloc, "Loss allocation for the factor columns")
        ->check(CLI::IsMember({"proportional-rwa", "all-to-irb"}));

    // simulate
    DataOptions sim_data;
    asrf::mc::SimConfig sim_config;
    sim_config.scenarios = 100000;
    std::string sim_quarter, sim_mechanism = "asset-value", sim_losses_out;
    std::vector<double> sim_alphas;
    double sim_cond_y = 0.0;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo loss distribution");
    add_data_options(sim, sim_data);
    sim->add_option("--quarter", sim_quarter, "Snapshot quarter (default: last)");
    sim->add_option("--scenarios", sim_config.scenarios, "Scenario count");
    auto* sim_seed = sim->add_option("--seed", sim_config.seed, "RNG seed");
    sim->add_option("--obligors-per-grade", sim_config.obligors_per_grade,
                    "Clones per pooled grade");
    auto* sim_y = sim->add_option("--conditional-y", sim_cond_y,
                                  "Fix the systematic factor at this value");
    sim->add_option("--mechanism", sim_mechanism, "asset-value or bernoulli")
        ->check(CLI::IsMember({"asset-value", "bernoulli"}));
    sim->add_option("--threads", sim_config.threads, "Worker threads (0 = hardware)");
    sim->add_option("--alpha", sim_alphas, "VaR confidence level, repeatable");
    sim->add_option("--emit-losses", sim_losses_out,
                    "Write per-scenario losses to this CSV file");

    // convergence-study
    double cs_pd = 0.01, cs_rho = 0.2, cs_lgd = 1.0, cs_ead = 1.0, cs_alpha = 0.999;
    std::string cs_clones = "10,100,1000,10000";
    std::string cs_mechanism = "asset-value";
    asrf::mc::SimConfig cs_config;
    cs_config.scenarios = 2000000;
    auto* cs = app.add_subcommand("convergence-study",
                                  "Granularity convergence of MC VaR to the ASRF value");
    cs->add_option("--pd", cs_pd, "Unconditional PD");
    cs->add_option("--rho", cs_rho, "Asset correlation");
    cs->add_option("--lgd", cs_lgd, "Loss given default");
    cs->add_option("--ead", cs_ead, "Total exposure of the homogeneous book");
    cs->add_option("--alpha", cs_alpha, "VaR confidence level");
    cs->add_option("--clones", cs_clones, "Comma-separated clone counts, increasing");
    cs->add_option("--scenarios", cs_config.scenarios, "Scenario count");
    auto* cs_seed = cs->add_option("--seed", cs_config.seed, "RNG seed");
    cs->add_option("--threads", cs_config.threads, "Worker threads (0 = hardware)");
    cs->add_option("--mechanism", cs_mechanism, "asset-value or bernoulli")
        ->check(CLI::IsMember({"asset-value", "bernoulli"}));

    // synth
    asrf::io::SynthSpec synth_spec;
    std::string synth_out, synth_y_path, synth_bands, synth_start;
    auto* syn = app.add_subcommand("synth", "Generate a synthetic reporting-form series");
    syn->add_option("--out", synth_out, "Output directory")->required();
    syn->add_option("--quarters", synth_spec.quarters, "Number of snapshot quarters");
    syn->add_option("--grades-per-class", synth_spec.grades_per_class,
                    "Obligor grades per asset class");
    auto* syn_seed = syn->add_option("--seed", synth_spec.seed, "RNG seed (noisy mode)");
    syn->add_option("--ead-scale", synth_spec.ead_scale, "Total book EAD, millions");
    syn->add_flag("--noisy", synth_spec.noisy, "Binomially sampled losses");
    syn->add_option("--obligors-per-grade", synth_spec.obligors_per_grade,
                    "Noisy-mode clones per grade");
    syn->add_option("--y-path", synth_y_path,
                    "Comma-separated systematic path, one value per quarter");
    syn->add_option("--pd-bands", synth_bands, "Comma-separated PD band edges");
    syn->add_option("--start", synth_start, "First quarter end (default 2008-03-31)");

    // params
    bool params_dump = false;
    auto* par = app.add_subcommand("params", "Supervisory parameter functions");
    par->add_flag("--dump", params_dump, "Dump the constants table as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        asrf::kernels::select(kernel);
        if (*cap) return run_capital(cap_data, cap_alpha, cap_mode, text);
        if (*inv) return run_invert_factor(inv_data, inv_lag, inv_alloc, inv_lead, text);
        if (*dtd) return run_dtd(dtd_data, text);
        if (*rs) return run_reverse_stress(rs_data, rs_floors, text);
        if (*rep) return run_report(rep_data, rep_floors, rep_lag, rep_alloc, text);
        if (*sim) {
            if (!*sim_seed) sim_config.seed = default_seed();
            if (*sim_y) sim_config.conditional_y = sim_cond_y;
            return run_simulate(sim_data, sim_quarter, sim_config, sim_mechanism,
                                sim_alphas, sim_losses_out);
        }
        if (*cs) {
            if (!*cs_seed) cs_config.seed = default_seed();
            std::vector<std::uint64_t> clones;
            for (double v : parse_double_list(cs_clones))
                clones.push_back(static_cast<std::uint64_t>(v));
            return run_convergence(cs_pd, cs_rho, cs_lgd, cs_ead, cs_alpha, clones,
                                   cs_config, cs_mechanism);
        }
        if (*syn) {
            if (!*syn_seed) synth_spec.seed = default_seed();
            if (!synth_y_path.empty()) synth_spec.base_y_path = parse_double_list(synth_y_path);
            if (!synth_bands.empty()) synth_spec.pd_band_edges = parse_double_list(synth_bands);
            if (!synth_start.empty()) synth_spec.start = Quarter::parse(synth_start);
            return run_synth(synth_spec, synth_out);
        }
        if (*par) {
            if (!params_dump) {
                std::cerr << "params: nothing to do (use --dump)\n";
                return 2;
            }
            return run_params_dump();
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
