// Command-line front end: scenario in, CSV + summary out.
//
// Exit status: 0 ok, 1 verify-assertion failures, 2 budget truncation,
// 3 config or runtime error.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thermocount/scenario.hpp"

namespace {

struct SubSpec {
    const char* command;
    const char* task;
    const char* help;
};

constexpr SubSpec kSubs[] = {
    {"pressure", "pressure-grid",
     "pressure, gradient and covariance over a coefficient grid (pressure.csv)"},
    {"manhattan", "manhattan",
     "trace the pressure-balance curve q(s) (curve.csv)"},
    {"correlation", "correlation",
     "correlation numbers H(m) for requested slopes (corr.csv)"},
    {"bishop-steger", "bishop-steger",
     "combined-length exponents and the ratio inequality scan (bs.csv)"},
    {"count", "count",
     "windowed periodic-orbit scan over t (report.csv)"},
    {"verify", "verify",
     "cross-module invariant suite on the scenario's data (verify.csv)"},
    {"saddle", "saddle",
     "leading-term vs quadrature convergence study (saddle.csv)"},
    {"truncation-study", "truncation-study",
     "Bowen roots along a truncation family (truncation.csv)"},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermocount: periodic-orbit correlation counting on Markov shifts"};
    app.require_subcommand(0, 1);

    std::string config_path;
    tc::ScenarioOverrides ov;
    bool print_config = false;

    app.add_option("--config", config_path, "scenario file (JSON)");
    app.add_option("--out-dir", ov.out_dir, "output directory")
        ->capture_default_str();
    app.add_option("--threads", ov.threads, "worker threads for counting scans")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    long long budget = -1;
    app.add_option("--budget", budget,
                   "search-node budget per scan (overrides the scenario)");
    app.add_option("--seed", ov.seed,
                   "seed for randomized property checks (never affects counts)")
        ->capture_default_str();
    app.add_flag("--print-config", print_config,
                 "print the fully resolved scenario (all defaults explicit) and exit");

    // per-subcommand parameter overrides
    std::string m_arg, p_arg;
    double xi = -1, t_min = std::nan(""), t_max = std::nan(""), t_step = -1;
    std::vector<std::string> cases;
    std::vector<double> n_list;
    std::vector<double> slopes;

    for (const auto& sub : kSubs) {
        CLI::App* s = app.add_subcommand(sub.command, sub.help);
        s->fallthrough(); // global flags may follow the subcommand
        if (std::string(sub.command) == "count") {
            s->add_option("--m", m_arg, "window slope (number, or 'star' for delta_f/delta_g)");
            s->add_option("--xi", xi, "window width");
            s->add_option("--t-min", t_min, "first window position");
            s->add_option("--t-max", t_max, "last window position");
            s->add_option("--t-step", t_step, "window position step");
            s->add_option("--p", p_arg, "tracked cylinder, e.g. 0 or 02");
        } else if (std::string(sub.command) == "saddle") {
            s->add_option("--case", cases, "integrand family: gaussian|quartic|pressure");
            s->add_option("--n", n_list, "large-parameter values");
        } else if (std::string(sub.command) == "correlation") {
            s->add_option("--m", slopes, "slopes to evaluate");
        }
    }

    CLI11_PARSE(app, argc, argv);
    ov.budget = budget;

    try {
        tc::Scenario sc;
        if (!config_path.empty()) {
            sc = tc::load_scenario(config_path);
        } else if (!print_config) {
            std::fprintf(stderr, "error: --config is required\n");
            return 3;
        }

        for (const auto& sub : kSubs)
            if (app.got_subcommand(sub.command)) sc.task = sub.task;

        if (app.got_subcommand("count")) {
            if (!m_arg.empty()) {
                if (m_arg == "star") {
                    sc.m_star = true;
                } else {
                    sc.m_star = false;
                    sc.m = std::stod(m_arg);
                }
            }
            if (xi > 0) sc.xi = xi;
            if (!std::isnan(t_min)) sc.t_min = t_min;
            if (!std::isnan(t_max)) sc.t_max = t_max;
            if (t_step > 0) sc.t_step = t_step;
            if (!p_arg.empty()) {
                tc::Cylinder c;
                for (char ch : p_arg) {
                    if (ch < '0' || ch > '9')
                        throw tc::ConfigError("--p: cylinder letters must be digits");
                    c.prefix.push_back(ch - '0');
                }
                sc.tracked = c;
            }
        }
        if (app.got_subcommand("saddle")) {
            if (!cases.empty()) sc.saddle_cases = cases;
            if (!n_list.empty()) sc.saddle_n = n_list;
        }
        if (app.got_subcommand("correlation") && !slopes.empty()) sc.slopes = slopes;

        if (print_config) {
            std::printf("%s\n", tc::resolved_config_json(sc).c_str());
            return 0;
        }
        if (sc.task == "correlation" && sc.slopes.empty())
            throw tc::ConfigError("correlation: no slopes given (params.slopes or --m)");

        return tc::run_scenario(sc, ov);
    } catch (const tc::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 3;
    } catch (const tc::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
