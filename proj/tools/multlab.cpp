// multlab: batch front end for the library.
//
// Exit codes: 0 when no verdict is inconsistent, 1 when one is, 2 for bad
// configuration or arguments.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "multlab/multlab.hpp"

using namespace multlab;

namespace {

constexpr int kExitInconsistent = 1;
constexpr int kExitConfig = 2;

u64 parse_count(const std::string& s, const char* what)
{
    double v = 0;
    try {
        std::size_t used = 0;
        v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw ConfigError(std::string(what) + ": not a number: '" + s + "'");
    }
    if (!(v >= 1) || v > 4e9 || v != std::floor(v))
        throw ConfigError(std::string(what) + ": expected a positive integer, got '" + s + "'");
    return static_cast<u64>(v);
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write " + path);
    out << text;
}

int verdict_exit(const ExperimentReport& r)
{
    std::cerr << r.experiment << ": " << to_string(r.overall()) << "\n";
    for (const auto& c : r.checks)
        std::cerr << "  " << c.name << ": " << to_string(c.verdict) << " (" << c.value << " vs " << c.tolerance << ")\n";
    return r.overall() == Verdict::Inconsistent ? kExitInconsistent : 0;
}

json report_frame(const std::string& command, const json& config, json results)
{
    return {{"schema", kReportSchema},
            {"library", {{"version", kVersion}, {"source_hash", MULTLAB_SOURCE_HASH}}},
            {"command", command},
            {"config", config},
            {"config_hash", hex64(fnv1a(config.dump()))},
            {"results", std::move(results)}};
}

json density_json(const DensityReport& r)
{
    return {{"constraint", r.constraint}, {"x", r.x}, {"members", r.members}, {"log_sum", r.log_sum},
            {"empirical", r.empirical}, {"predicted", r.predicted}, {"local_density", r.local_density},
            {"slack", r.slack}, {"ratio", r.ratio}, {"local_ratio", r.local_ratio}, {"sample", r.sample}};
}

LinearForms parse_forms(const std::string& s)
{
    std::vector<i64> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            v.push_back(std::stoll(tok));
        } catch (const std::exception&) {
            throw ConfigError("forms: bad entry '" + tok + "'");
        }
    }
    if (v.size() != 4)
        throw ConfigError("forms: expected a1,b1,a2,b2");
    return {v[0], v[1], v[2], v[3]};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multiplicative-function experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // pretend
    auto* pretend = app.add_subcommand("pretend", "Rank characters chi n^{it} by distance to f");
    std::string p_f, p_x = "1e6", p_Q = "20", p_step = "auto", p_out;
    double p_T = 5;
    pretend->add_option("--f", p_f, "Function spec (JSON file)")->required();
    pretend->add_option("--x", p_x, "Prime range");
    pretend->add_option("--Q", p_Q, "Largest modulus");
    pretend->add_option("--T", p_T, "Largest |t|");
    pretend->add_option("--step", p_step, "t step, or auto for 1/log x");
    pretend->add_option("--out", p_out, "CSV output (default stdout)");

    // correlate
    auto* correlate = app.add_subcommand("correlate", "Correlation sums of two functions along linear forms");
    std::string c_f, c_g, c_forms = "1,0,1,1", c_x = "1e6", c_cps = "geometric:10", c_out;
    bool c_log = false, c_conj = false;
    correlate->add_option("--f", c_f, "First function spec")->required();
    correlate->add_option("--g", c_g, "Second function spec (default: f)");
    correlate->add_option("--forms", c_forms, "a1,b1,a2,b2");
    correlate->add_flag("--log", c_log, "Weight by 1/n and normalize by log x");
    correlate->add_flag("--conj", c_conj, "Conjugate the second factor");
    correlate->add_option("--x", c_x, "Range");
    correlate->add_option("--checkpoints", c_cps, "geometric:K, linear:K or a list");
    correlate->add_option("--out", c_out, "JSON output (default stdout)");

    // chudakov
    auto* chud = app.add_subcommand("chudakov", "Correlation formula, positivity checks and partial sums for a setup");
    std::string h_setup, h_x = "1e7", h_dmax = "12", h_out;
    chud->add_option("--setup", h_setup, "Setup JSON")->required();
    chud->add_option("--dmax", h_dmax, "Largest shift");
    chud->add_option("--x", h_x, "Range");
    chud->add_option("--out", h_out, "JSON output (default stdout)");

    // density
    auto* dens = app.add_subcommand("density", "Logarithmic densities of sieved sets");
    std::string d_mode, d_params, d_x = "1e7", d_out;
    dens->add_option("--mode", d_mode, "rough-ap, structured or thin")
        ->required()
        ->check(CLI::IsMember({"rough-ap", "structured", "thin"}));
    dens->add_option("--params", d_params, "Parameter JSON")->required();
    dens->add_option("--x", d_x, "Range");
    dens->add_option("--out", d_out, "JSON output (default stdout)");

    // run
    auto* run = app.add_subcommand("run", "Run an experiment from a config file");
    std::string r_id, r_cfg, r_out, r_csv;
    run->add_option("experiment", r_id, "gap, ks, arith, chudakov or cohn")->required();
    run->add_option("--config", r_cfg, "Config JSON")->required();
    run->add_option("--out", r_out, "JSON report (default stdout)");
    run->add_option("--csv", r_csv, "CSV series output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*pretend) {
            const u64 x = parse_count(p_x, "--x"), Q = parse_count(p_Q, "--Q");
            const double step = p_step == "auto" ? default_t_step(x) : std::stod(p_step);
            const auto f = io::function_from_json(io::read_json_file(p_f));
            const Sieve sieve(x);
            const auto scan = pretender_scan(f, sieve, x, Q, p_T, step);
            std::ostringstream o;
            o.precision(17);
            o << "rank,q,index,t,distance,squared\n";
            for (std::size_t i = 0; i < scan.table.size(); ++i) {
                const auto& e = scan.table[i];
                o << i + 1 << ',' << e.q << ',' << e.index << ',' << e.t << ',' << e.distance << ',' << e.squared << '\n';
            }
            write_text(p_out, o.str());
            return 0;
        }
        if (*correlate) {
            const u64 x = parse_count(c_x, "--x");
            const auto f = io::function_from_json(io::read_json_file(c_f));
            const auto g = c_g.empty() ? f : io::function_from_json(io::read_json_file(c_g));
            const auto forms = parse_forms(c_forms);
            const u64 top = static_cast<u64>(std::max(forms.a1, forms.a2)) * x +
                            static_cast<u64>(std::max<i64>({forms.b1, forms.b2, 0}));
            const Sieve sieve(std::max<u64>(2, top));
            const auto kind = c_log ? Weighting::Logarithmic : Weighting::Natural;
            const auto r = form_correlation(f, g, forms, kind, c_conj, sieve, parse_checkpoints(c_cps, x));
            json rows = json::array();
            const auto norm = r.normalized();
            for (std::size_t i = 0; i < r.checkpoints.size(); ++i)
                rows.push_back({{"x", r.checkpoints[i]}, {"sum", cplx_json(r.sums[i])}, {"normalized", cplx_json(norm[i])}});
            const json cfg = {{"f", f.name()}, {"g", g.name()}, {"forms", c_forms}, {"weighting", to_string(kind)},
                              {"conjugate_second", c_conj}, {"x", x}, {"checkpoints", c_cps}};
            write_text(c_out, report_frame("correlate", cfg, {{"rows", rows}}).dump(2) + "\n");
            return 0;
        }
        if (*chud) {
            const u64 x = parse_count(h_x, "--x");
            const json cfg = {{"setup", io::read_json_file(h_setup)},
                              {"x", x},
                              {"correlation_x", x},
                              {"dmax", parse_count(h_dmax, "--dmax")}};
            const auto rep = run_experiment("chudakov", cfg);
            write_text(h_out, rep.dump());
            return verdict_exit(rep);
        }
        if (*dens) {
            const u64 x = parse_count(d_x, "--x");
            const json p = io::read_json_file(d_params);
            json results;
            if (d_mode == "rough-ap") {
                const auto r = rough_ap_density(io::get_count(p, "q"), io::get_count_or(p, "a", 1),
                                                static_cast<unsigned>(io::get_count(p, "T")), io::get_count(p, "N"), x);
                results = density_json(r);
            } else if (d_mode == "structured") {
                const auto g = io::load_function(p.at("g"));
                const u64 q = io::get_count(p, "q");
                const auto T = static_cast<unsigned>(io::get_count(p, "T"));
                const double top = std::pow(2.0 * static_cast<double>(q), T) * static_cast<double>(x) + 1;
                const Sieve sieve(std::max<u64>(100, static_cast<u64>(std::sqrt(top)) + 2));
                std::vector<u64> members;
                const auto r = structured_set_density(g, io::get_count(p, "l"), q, T, io::get_count(p, "N"), x, sieve,
                                                      &members);
                results = density_json(r);
                if (io::get_or<bool>(p, "longest_ap", false)) {
                    const u64 cap = io::get_count_or(p, "ap_range", 10'000);
                    std::vector<u64> head;
                    for (u64 m : members)
                        if (m <= cap)
                            head.push_back(m);
                    const auto ap = longest_ap(head);
                    results["longest_ap"] = {{"range", cap}, {"start", ap.start}, {"step", ap.step}, {"length", ap.length}};
                }
            } else {
                std::vector<u64> S;
                if (p.at("S").is_array()) {
                    S = p.at("S").get<std::vector<u64>>();
                } else {
                    const auto pred = prime_predicate(p.at("S"));
                    const u64 bound = io::get_count(p, "bound");
                    const Sieve sieve(std::max<u64>(2, bound));
                    for (u32 q : sieve.primes_upto(bound))
                        if (pred(q) && q > io::get_count_or(p, "above", 0))
                            S.push_back(q);
                }
                const auto r = thin_set_sums(S, parse_checkpoints(io::get_or<std::string>(p, "checkpoints", "geometric:7"), x));
                results = {{"primes", S.size()}, {"checkpoints", r.checkpoints}, {"sum_tau", r.sum_tau},
                           {"sum_tau_log_ratio", r.sum_tau_log_ratio}, {"elements", r.elements}};
            }
            json cfg = p;
            cfg["mode"] = d_mode;
            cfg["x"] = x;
            write_text(d_out, report_frame("density", cfg, results).dump(2) + "\n");
            return 0;
        }
        if (*run) {
            const auto rep = run_experiment(r_id, io::read_json_file(r_cfg));
            write_text(r_out, rep.dump());
            if (!r_csv.empty())
                write_text(r_csv, rep.csv());
            return verdict_exit(rep);
        }
    } catch (const json::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        // Every library error here traces back to the arguments or config.
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
