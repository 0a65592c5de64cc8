#include "thermocount/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "thermocount/errors.hpp"

namespace tc {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// formatting helpers
// ---------------------------------------------------------------------------

static std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

static std::string cyl_string(const Cylinder& c) {
    std::string s;
    for (int a : c.prefix) s += static_cast<char>('0' + a);
    return s;
}

static Cylinder parse_cylinder(const std::string& s, const Shift& shift,
                               const std::string& field) {
    if (s.empty()) throw ConfigError(field + ": empty cylinder string");
    Cylinder c;
    for (char ch : s) {
        if (ch < '0' || ch > '9')
            throw ConfigError(field + ": cylinder letters must be digits, got '" +
                              std::string(1, ch) + "'");
        int a = ch - '0';
        if (a >= shift.A)
            throw ConfigError(field + ": letter " + std::to_string(a) +
                              " outside alphabet of size " + std::to_string(shift.A));
        c.prefix.push_back(a);
    }
    for (size_t i = 0; i + 1 < c.prefix.size(); ++i)
        if (!shift.edge(c.prefix[i], c.prefix[i + 1]))
            throw ConfigError(field + ": inadmissible word \"" + s + "\"");
    return c;
}

// ---------------------------------------------------------------------------
// config parsing
// ---------------------------------------------------------------------------

static json expect_object(const json& j, const std::string& field) {
    if (!j.is_object()) throw ConfigError(field + ": expected an object");
    return j;
}

static Shift parse_shift(const json& j, const fs::path& base) {
    if (!j.is_object()) throw ConfigError("shift: expected an object");
    if (j.contains("file")) {
        fs::path p = base / j.at("file").get<std::string>();
        if (!fs::exists(p))
            throw ConfigError("shift.file: no such file: " + p.string());
        std::ifstream in(p);
        json inner = json::parse(in);
        return parse_shift(inner, p.parent_path());
    }
    std::string type = j.value("type", "matrix");
    if (type == "full") {
        int A = j.value("alphabet", 0);
        if (A < 1) throw ConfigError("shift.alphabet: need a positive integer");
        return full_shift(A);
    }
    if (type == "golden-mean") return golden_mean_shift();
    if (type != "matrix")
        throw ConfigError("shift.type: unknown type \"" + type + "\"");
    if (!j.contains("transitions"))
        throw ConfigError("shift.transitions: required for matrix shifts");
    const json& rows = j.at("transitions");
    if (!rows.is_array() || rows.empty())
        throw ConfigError("shift.transitions: expected a non-empty array of rows");
    int A = static_cast<int>(rows.size());
    std::vector<std::uint8_t> T(static_cast<size_t>(A) * A, 0);
    for (int i = 0; i < A; ++i) {
        const json& row = rows.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != A)
            throw ConfigError("shift.transitions[" + std::to_string(i) +
                              "]: expected " + std::to_string(A) + " entries");
        for (int jx = 0; jx < A; ++jx) {
            int v = row.at(jx).get<int>();
            if (v != 0 && v != 1)
                throw ConfigError("shift.transitions: entries must be 0 or 1");
            T[static_cast<size_t>(i) * A + jx] = static_cast<std::uint8_t>(v);
        }
    }
    try {
        return build_shift(A, T);
    } catch (const Error& e) {
        throw ConfigError("shift.transitions: " + std::string(e.what()));
    }
}

static Potential parse_potential(const json& j, const Shift& s,
                                 const std::string& field) {
    if (j.is_number()) return constant_potential(s, j.get<double>());
    if (!j.is_object()) throw ConfigError(field + ": expected object or number");
    if (j.contains("constant"))
        return constant_potential(s, j.at("constant").get<double>());
    if (j.contains("rule")) {
        std::string rule = j.at("rule").get<std::string>();
        int N = j.value("N", 0);
        if (N < 2) throw ConfigError(field + ".N: need an integer >= 2");
        return truncation_potential(named_truncation_family(rule), N);
    }
    int depth = j.value("depth", 0);
    if (depth < 1) throw ConfigError(field + ".depth: need a positive integer");
    if (!j.contains("values"))
        throw ConfigError(field + ".values: required (cylinder -> value map)");
    const json& vals = j.at("values");
    if (!vals.is_object())
        throw ConfigError(field + ".values: expected an object keyed by cylinder");
    auto cyls = cylinders(s, depth);
    std::vector<double> v(cyls.size());
    std::vector<bool> seen(cyls.size(), false);
    CylinderIndex idx = make_cylinder_index(s, depth);
    for (auto it = vals.begin(); it != vals.end(); ++it) {
        Cylinder c = parse_cylinder(it.key(), s, field + ".values");
        if (c.depth() != depth)
            throw ConfigError(field + ".values: key \"" + it.key() +
                              "\" has depth " + std::to_string(c.depth()) +
                              ", expected " + std::to_string(depth));
        int r = idx.rank_of(c.prefix.data());
        if (r < 0)
            throw ConfigError(field + ".values: inadmissible key \"" + it.key() + "\"");
        if (seen[r])
            throw ConfigError(field + ".values: duplicate key \"" + it.key() + "\"");
        seen[r] = true;
        v[static_cast<size_t>(r)] = it.value().get<double>();
    }
    for (size_t i = 0; i < cyls.size(); ++i)
        if (!seen[i])
            throw ConfigError(field + ".values: missing cylinder \"" +
                              cyl_string(cyls[i]) + "\"");
    return make_potential(s, depth, v);
}

Scenario load_scenario(const std::string& path) {
    if (!fs::exists(path)) throw ConfigError("config: no such file: " + path);
    std::ifstream in(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    expect_object(j, "config");

    Scenario sc;
    sc.name = j.value("name", fs::path(path).stem().string());
    if (!j.contains("task")) throw ConfigError("task: required");
    sc.task = j.at("task").get<std::string>();
    static const char* kTasks[] = {"pressure-grid", "manhattan",   "correlation",
                                   "bishop-steger", "count",       "verify",
                                   "saddle",        "truncation-study"};
    if (std::find_if(std::begin(kTasks), std::end(kTasks),
                     [&](const char* t) { return sc.task == t; }) == std::end(kTasks))
        throw ConfigError("task: unknown task \"" + sc.task + "\"");

    fs::path base = fs::path(path).parent_path();

    if (j.contains("family")) {
        const json& f = j.at("family");
        std::string rule = expect_object(f, "family").value("rule", "");
        if (rule.empty()) throw ConfigError("family.rule: required");
        sc.family = named_truncation_family(rule);
        sc.has_family = true;
    }

    if (j.contains("shift")) {
        sc.shift = parse_shift(j.at("shift"), base);
        if (!j.contains("f") || !j.contains("g"))
            throw ConfigError("f, g: both potentials are required with a shift");
        Potential f = parse_potential(j.at("f"), sc.shift, "f");
        Potential g = parse_potential(j.at("g"), sc.shift, "g");
        std::string ind = j.value("independence", "assumed");
        Independence flag;
        if (ind == "assumed") flag = Independence::assumed;
        else if (ind == "verified") flag = Independence::verified;
        else if (ind == "violated") flag = Independence::violated;
        else if (ind == "auto") flag = arithmetic_witness({f, g, Independence::assumed}, 6);
        else throw ConfigError("independence: expected assumed|verified|violated|auto");
        sc.pair = make_pair_potentials(f, g, flag);
        sc.has_pair = true;
    } else if (sc.has_family && sc.task != "truncation-study") {
        // family-only scenarios: materialize the depth-1 pair at the largest N
        int N = sc.N_list.empty() ? 64 : sc.N_list.back();
        if (j.contains("params") && j.at("params").contains("N_list")) {
            auto nl = j.at("params").at("N_list").get<std::vector<int>>();
            if (!nl.empty()) N = nl.back();
        }
        Potential f = truncation_potential(sc.family, N);
        sc.shift = f.shift;
        sc.pair = make_pair_potentials(f, constant_potential(sc.shift, 1.0),
                                       Independence::assumed);
        sc.has_pair = true;
    }

    if (!sc.has_pair && !sc.has_family)
        throw ConfigError("shift/family: scenario needs a shift with potentials "
                          "or a truncation family");
    if (sc.task == "truncation-study" && !sc.has_family)
        throw ConfigError("family: required for the truncation-study task");

    if (j.contains("params")) {
        const json& p = expect_object(j.at("params"), "params");
        if (p.contains("m")) {
            const json& m = p.at("m");
            if (m.is_string()) {
                if (m.get<std::string>() != "star")
                    throw ConfigError("params.m: expected a number or \"star\"");
                sc.m_star = true;
            } else {
                sc.m_star = false;
                sc.m = m.get<double>();
            }
        }
        sc.xi = p.value("xi", sc.xi);
        sc.t_min = p.value("t_min", sc.t_min);
        sc.t_max = p.value("t_max", sc.t_max);
        sc.t_step = p.value("t_step", sc.t_step);
        sc.epsilon = p.value("epsilon", sc.epsilon);
        sc.n_samples = p.value("n_samples", sc.n_samples);
        sc.budget = p.value("budget", sc.budget);
        if (p.contains("p"))
            sc.tracked = parse_cylinder(p.at("p").get<std::string>(), sc.shift,
                                        "params.p");
        if (p.contains("slopes"))
            sc.slopes = p.at("slopes").get<std::vector<double>>();
        if (p.contains("ab_list")) {
            sc.ab_list.clear();
            for (const auto& row : p.at("ab_list")) {
                auto v = row.get<std::vector<double>>();
                if (v.size() != 2)
                    throw ConfigError("params.ab_list: entries must be [alpha, beta]");
                sc.ab_list.push_back({v[0], v[1]});
            }
        }
        if (p.contains("n_list"))
            sc.saddle_n = p.at("n_list").get<std::vector<double>>();
        if (p.contains("cases"))
            sc.saddle_cases = p.at("cases").get<std::vector<std::string>>();
        if (p.contains("N_list")) {
            sc.N_list = p.at("N_list").get<std::vector<int>>();
            if (sc.N_list.size() < 2)
                throw ConfigError("params.N_list: need at least two sizes");
        }
        if (p.contains("z_grid")) {
            sc.z_grid.clear();
            for (const auto& row : p.at("z_grid")) {
                auto v = row.get<std::vector<double>>();
                if (v.size() != 2)
                    throw ConfigError("params.z_grid: entries must be [z1, z2]");
                sc.z_grid.push_back({v[0], v[1]});
            }
        }
        if (sc.xi <= 0) throw ConfigError("params.xi: must be positive");
        if (sc.t_step <= 0) throw ConfigError("params.t_step: must be positive");
        if (sc.t_max < sc.t_min) throw ConfigError("params.t_max: smaller than t_min");
        if (sc.n_samples < 2) throw ConfigError("params.n_samples: need >= 2");
        if (sc.budget <= 0) throw ConfigError("params.budget: must be positive");
        if (sc.epsilon <= 0) throw ConfigError("params.epsilon: must be positive");
    }
    if (sc.task == "correlation" && sc.slopes.empty())
        throw ConfigError("params.slopes: required for the correlation task");
    return sc;
}

std::string resolved_config_json(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["task"] = sc.task;
    if (sc.has_pair) {
        json T = json::array();
        for (int a = 0; a < sc.shift.A; ++a) {
            json row = json::array();
            for (int b = 0; b < sc.shift.A; ++b) row.push_back(sc.shift.edge(a, b) ? 1 : 0);
            T.push_back(row);
        }
        j["shift"] = {{"type", "matrix"}, {"alphabet", sc.shift.A}, {"transitions", T}};
        auto dump_pot = [&](const Potential& u) {
            json vals = json::object();
            auto cyls = cylinders(sc.shift, u.depth);
            for (size_t i = 0; i < cyls.size(); ++i)
                vals[cyl_string(cyls[i])] = u.values[i];
            return json{{"depth", u.depth}, {"values", vals}};
        };
        j["f"] = dump_pot(sc.pair.f);
        j["g"] = dump_pot(sc.pair.g);
        j["independence"] = to_string(sc.pair.flag);
    }
    if (sc.has_family) j["family"] = {{"rule", sc.family.name}};
    json p;
    if (sc.m_star) p["m"] = "star";
    else p["m"] = sc.m;
    p["xi"] = sc.xi;
    p["t_min"] = sc.t_min;
    p["t_max"] = sc.t_max;
    p["t_step"] = sc.t_step;
    p["epsilon"] = sc.epsilon;
    p["n_samples"] = sc.n_samples;
    p["budget"] = sc.budget;
    p["p"] = cyl_string(sc.tracked);
    p["slopes"] = sc.slopes;
    json ab = json::array();
    for (auto& e : sc.ab_list) ab.push_back({e[0], e[1]});
    p["ab_list"] = ab;
    p["n_list"] = sc.saddle_n;
    p["cases"] = sc.saddle_cases;
    p["N_list"] = sc.N_list;
    json zg = json::array();
    for (auto& z : sc.z_grid) zg.push_back({z[0], z[1]});
    p["z_grid"] = zg;
    j["params"] = p;
    return j.dump();
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

namespace {

struct CsvDoc {
    std::ofstream out;
    explicit CsvDoc(const fs::path& p) : out(p) {
        if (!out) throw IoError("cannot open for writing: " + p.string());
        out.exceptions(std::ios::failbit | std::ios::badbit);
    }
    void comment(const std::string& line) { out << "# " << line << "\n"; }
    void header(const Scenario& sc, const ScenarioOverrides& ov,
                std::initializer_list<std::pair<const char*, const char*>> cols) {
        comment("thermocount v0.1.0");
        comment("scenario: " + sc.name + "   task: " + sc.task);
        comment("threads: " + std::to_string(ov.threads) +
                "   seed: " + std::to_string(ov.seed));
        comment("config: " + resolved_config_json(sc));
        comment("columns:");
        std::string names;
        for (auto& [n, doc] : cols) {
            comment("  " + std::string(n) + ": " + doc);
            if (!names.empty()) names += ',';
            names += n;
        }
        out << names << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i)
            out << (i ? "," : "") << cells[i];
        out << "\n";
    }
};

json summary_base(const Scenario& sc, const ScenarioOverrides& ov) {
    json s;
    s["name"] = sc.name;
    s["task"] = sc.task;
    s["threads"] = ov.threads;
    s["seed"] = ov.seed;
    return s;
}

void write_summary(const fs::path& dir, const json& s) {
    std::ofstream out(dir / "summary.json");
    if (!out) throw IoError("cannot open for writing: " + (dir / "summary.json").string());
    out << s.dump(2) << "\n";
}

double resolve_slope(const Scenario& sc) {
    if (!sc.m_star) return sc.m;
    double df = bowen_root(sc.shift, sc.pair.f);
    double dg = bowen_root(sc.shift, sc.pair.g);
    return df / dg;
}

// ---------------------------------------------------------------------------
// task runners
// ---------------------------------------------------------------------------

int run_pressure_grid(const Scenario& sc, const ScenarioOverrides& ov,
                      const fs::path& dir) {
    PressureSurface S = make_surface(sc.pair);
    std::vector<std::array<double, 2>> grid = sc.z_grid;
    if (grid.empty()) {
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                grid.push_back({-1.0 + 0.5 * i, -1.0 + 0.5 * j});
    }
    CsvDoc csv(dir / "pressure.csv");
    csv.header(sc, ov,
               {{"z1", "coefficient of the first potential"},
                {"z2", "coefficient of the second potential"},
                {"P", "pressure P(z1*f + z2*g)"},
                {"df", "dP/dz1 = equilibrium average of f"},
                {"dg", "dP/dz2 = equilibrium average of g"},
                {"var_f", "d2P/dz1^2 (asymptotic variance of f)"},
                {"cov", "d2P/dz1 dz2 (asymptotic covariance)"},
                {"var_g", "d2P/dz2^2 (asymptotic variance of g)"}});
    for (const auto& z : grid) {
        Vec2 zz(z[0], z[1]);
        double P = surface_pressure(S, zz);
        Vec2 gr = grad_pressure(S, zz);
        Mat2 H = hess_pressure(S, zz);
        csv.row({fmt(z[0]), fmt(z[1]), fmt(P), fmt(gr(0)), fmt(gr(1)),
                 fmt(H(0, 0)), fmt(H(0, 1)), fmt(H(1, 1))});
    }
    json s = summary_base(sc, ov);
    s["grid_points"] = grid.size();
    write_summary(dir, s);
    return 0;
}

int run_manhattan(const Scenario& sc, const ScenarioOverrides& ov,
                  const fs::path& dir) {
    PressureSurface S = make_surface(sc.pair);
    ManhattanCurve curve = trace_curve(S, sc.n_samples);
    RigidityReport rig = rigidity_gap(S, curve);
    CsvDoc csv(dir / "curve.csv");
    csv.header(sc, ov,
               {{"s", "curve parameter (coefficient of f); ranges over [0, delta_f]"},
                {"q", "q(s): unique root of P(-s f - q g) = 0"},
                {"m", "local slope dg-average / df-average = -1/q'(s)"},
                {"H", "correlation number at this slope: s + m q"},
                {"t_m", "time scale 1 / (df-average) at this point"},
                {"a", "curve abscissa (equals s; kept so (a, b) plots the curve)"},
                {"b", "curve ordinate (equals q)"}});
    for (const auto& pt : curve.samples)
        csv.row({fmt(pt.s), fmt(pt.q), fmt(pt.m), fmt(pt.H), fmt(pt.t_m),
                 fmt(pt.s), fmt(pt.q)});
    json s = summary_base(sc, ov);
    s["delta_f"] = curve.delta_f;
    s["delta_g"] = curve.delta_g;
    s["m_star"] = rig.m_star;
    s["gap"] = rig.gap;
    s["rigid"] = rig.rigid;
    s["max_secant_dev"] = curve.max_secant_dev;
    s["m_min"] = curve.m_min;
    s["m_max"] = curve.m_max;
    write_summary(dir, s);
    return 0;
}

int run_correlation(const Scenario& sc, const ScenarioOverrides& ov,
                    const fs::path& dir) {
    PressureSurface S = make_surface(sc.pair);
    ManhattanCurve curve = trace_curve(S, sc.n_samples);
    CsvDoc csv(dir / "corr.csv");
    csv.header(sc, ov,
               {{"m", "requested slope"},
                {"H", "correlation number H(m) = a + m b"},
                {"a", "f-coefficient of the supporting point"},
                {"b", "g-coefficient of the supporting point"},
                {"s", "curve parameter where the slope is attained"}});
    for (double m : sc.slopes) {
        CorrPoint c = correlation_number(S, curve, m);
        csv.row({fmt(m), fmt(c.H), fmt(c.a), fmt(c.b), fmt(c.s)});
    }
    json s = summary_base(sc, ov);
    s["delta_f"] = curve.delta_f;
    s["delta_g"] = curve.delta_g;
    write_summary(dir, s);
    return 0;
}

int run_bishop_steger(const Scenario& sc, const ScenarioOverrides& ov,
                      const fs::path& dir) {
    PressureSurface S = make_surface(sc.pair);
    ManhattanCurve curve = trace_curve(S, sc.n_samples);
    CsvDoc csv(dir / "bs.csv");
    csv.header(sc, ov,
               {{"alpha", "weight of f in the combined length"},
                {"beta", "weight of g in the combined length"},
                {"h_bs", "Bowen root of alpha f + beta g"},
                {"max_ratio", "max over the curve of H(m) / (alpha + m beta)"},
                {"argmax_m", "slope attaining the maximum"},
                {"argmax_ab", "slope alpha/beta where equality is predicted"},
                {"degenerate", "1 when the ratio is constant along the curve"}});
    json runs = json::array();
    for (const auto& ab : sc.ab_list) {
        double h = bishop_steger(S, ab[0], ab[1]);
        BsScanReport rep = bs_inequality_scan(S, curve, ab[0], ab[1]);
        csv.row({fmt(ab[0]), fmt(ab[1]), fmt(h), fmt(rep.max_ratio),
                 fmt(rep.argmax_m), fmt(rep.argmax_ab),
                 rep.degenerate ? "1" : "0"});
        runs.push_back({{"alpha", ab[0]},
                        {"beta", ab[1]},
                        {"h_bs", h},
                        {"max_ratio", rep.max_ratio}});
    }
    json s = summary_base(sc, ov);
    s["runs"] = runs;
    write_summary(dir, s);
    return 0;
}

int run_count(const Scenario& sc, const ScenarioOverrides& ov, const fs::path& dir) {
    double m = resolve_slope(sc);
    CountBudget budget{ov.budget > 0 ? ov.budget : sc.budget};
    CountScan scan = scan_counts(sc.shift, sc.pair, m, sc.xi, sc.t_min, sc.t_max,
                                 sc.t_step, {sc.tracked}, budget,
                                 std::max(1, ov.threads));
    CsvDoc csv(dir / "report.csv");
    csv.header(sc, ov,
               {{"t", "window left endpoint: counting Sf in (t, t+xi)"},
                {"n", "orbit period contributing to this row"},
                {"M_n", "periodic points of period n with (Sf, Sg) in the window"},
                {"W_n_p", "weighted preimage count for the tracked cylinder p"},
                {"M_t", "window total: sum over n of M_n / n"},
                {"alpha_hat_running",
                 "least-squares slope of ln M_t over the top half of rows so far"},
                {"nodes_visited", "search-tree nodes expended on this (t, n) cell"}});
    std::vector<double> ts, Ms;
    for (const auto& row : scan.rows) {
        ts.push_back(row.t);
        Ms.push_back(row.M.M);
        double alpha = std::nan("");
        if (ts.size() >= 5) {
            try {
                alpha = fit_growth_rate(ts, Ms).alpha_hat;
            } catch (const InsufficientData&) { /* keep nan */ }
        }
        for (size_t i = 0; i < row.M.per_n.size(); ++i) {
            const NCell& cell = row.M.per_n[i];
            long long w = i < row.W_n[0].size() ? row.W_n[0][i] : 0;
            csv.row({fmt(row.t), std::to_string(cell.n), std::to_string(cell.count),
                     std::to_string(w), fmt(row.M.M), fmt(alpha),
                     std::to_string(cell.nodes)});
        }
    }
    if (scan.budget_hit)
        csv.comment("budget truncated: rows beyond t=" +
                    (scan.rows.empty() ? std::string("start")
                                       : fmt(scan.rows.back().t)) +
                    " were dropped");
    json s = summary_base(sc, ov);
    s["m"] = m;
    s["xi"] = sc.xi;
    s["rows"] = scan.rows.size();
    s["total_nodes"] = scan.total_nodes;
    s["budget"] = budget.max_nodes;
    s["budget_hit"] = scan.budget_hit;
    if (ts.size() >= 5) {
        try {
            GrowthFit fit = fit_growth_rate(ts, Ms);
            s["alpha_hat"] = fit.alpha_hat;
            s["alpha_stderr"] = fit.stderr_alpha;
            s["alpha_corrected"] = fit.alpha_corrected;
            s["alpha_corrected_stderr"] = fit.stderr_corrected;
        } catch (const InsufficientData&) { /* too few positive rows */ }
    }
    if (sc.has_pair) {
        PressureSurface S = make_surface(sc.pair);
        ManhattanCurve curve = trace_curve(S, std::min(sc.n_samples, 41));
        try {
            CorrPoint c = correlation_number(S, curve, m);
            s["H"] = c.H;
        } catch (const Error&) { /* slope may sit outside the open range */ }
        s["delta_f"] = curve.delta_f;
        s["delta_g"] = curve.delta_g;
    }
    write_summary(dir, s);
    return scan.budget_hit ? 2 : 0;
}

int run_saddle(const Scenario& sc, const ScenarioOverrides& ov, const fs::path& dir) {
    CsvDoc csv(dir / "saddle.csv");
    csv.header(sc, ov,
               {{"case", "test integrand family"},
                {"n", "large parameter in exp(n F)"},
                {"leading", "predicted leading term"},
                {"quadrature", "midpoint quadrature of the full integrand"},
                {"rel_error", "|quadrature - leading| / |quadrature|"}});
    json rows = json::array();
    for (const std::string& name : sc.saddle_cases) {
        for (double n : sc.saddle_n) {
            SaddleProblem prob;
            if (name == "gaussian") prob = gaussian_case(n);
            else if (name == "quartic") prob = quartic_case(n);
            else if (name == "pressure") {
                if (!sc.has_pair)
                    throw ConfigError("cases: \"pressure\" needs a shift with potentials");
                PressureSurface S = make_surface(sc.pair);
                prob = pressure_case(S, Vec2(0.0, 0.0), n);
                auto lead = saddle_leading_term(prob);
                auto quad = quadrature_oracle(prob, prob.epsilon / (4.1 * std::sqrt(n)));
                double rel = std::abs(quad - lead) / std::abs(quad);
                csv.row({name, fmt(n), fmt(lead.real()), fmt(quad.real()), fmt(rel)});
                rows.push_back({{"case", name}, {"n", n}, {"rel_error", rel}});
                continue;
            } else {
                throw ConfigError("cases: unknown saddle case \"" + name + "\"");
            }
            auto lead = saddle_leading_term(prob);
            auto quad = quadrature_oracle(prob, prob.epsilon / (4.1 * std::sqrt(n)));
            double rel = std::abs(quad - lead) / std::abs(quad);
            csv.row({name, fmt(n), fmt(lead.real()), fmt(quad.real()), fmt(rel)});
            rows.push_back({{"case", name}, {"n", n}, {"rel_error", rel}});
        }
    }
    json s = summary_base(sc, ov);
    s["rows"] = rows;
    write_summary(dir, s);
    return 0;
}

int run_truncation_study(const Scenario& sc, const ScenarioOverrides& ov,
                         const fs::path& dir) {
    CsvDoc csv(dir / "truncation.csv");
    csv.header(sc, ov,
               {{"N", "alphabet truncation size"},
                {"delta_f", "Bowen root of the truncated weight on the full N-shift"}});
    std::vector<double> roots;
    for (int N : sc.N_list) {
        Potential fN = truncation_potential(sc.family, N);
        double d = bowen_root(fN.shift, fN);
        roots.push_back(d);
        csv.row({std::to_string(N), fmt(d)});
    }
    std::vector<long long> Ns(sc.N_list.begin(), sc.N_list.end());
    CriticalExponent ce = estimate_critical_exponent(sc.family, Ns);
    json s = summary_base(sc, ov);
    s["rule"] = sc.family.name;
    s["d_hat"] = ce.d_hat;
    s["converges_all"] = ce.converges_all;
    s["delta_f"] = roots;
    json probes = json::array();
    for (auto& [sv, ratio] : ce.probes) probes.push_back({sv, ratio});
    s["probes"] = probes;
    write_summary(dir, s);
    return 0;
}

int run_verify(const Scenario& sc, const ScenarioOverrides& ov, const fs::path& dir) {
    std::vector<VerifyRow> rows = verify_suite(sc, ov.seed);
    CsvDoc csv(dir / "verify.csv");
    csv.header(sc, ov,
               {{"check", "invariant identifier"},
                {"status", "pass or fail"},
                {"measured", "observed residual or value"},
                {"tolerance", "acceptance threshold"}});
    int failures = 0;
    for (const auto& r : rows) {
        csv.row({r.check, r.pass ? "pass" : "fail", fmt(r.measured), fmt(r.tolerance)});
        if (!r.pass) ++failures;
    }
    json s = summary_base(sc, ov);
    s["checks"] = rows.size();
    s["failures"] = failures;
    write_summary(dir, s);
    return failures ? 1 : 0;
}

} // namespace

int run_scenario(const Scenario& sc, const ScenarioOverrides& ov) {
    fs::path dir = ov.out_dir.empty() ? fs::path(".") : fs::path(ov.out_dir);
    fs::create_directories(dir);
    if (sc.task == "pressure-grid") return run_pressure_grid(sc, ov, dir);
    if (sc.task == "manhattan") return run_manhattan(sc, ov, dir);
    if (sc.task == "correlation") return run_correlation(sc, ov, dir);
    if (sc.task == "bishop-steger") return run_bishop_steger(sc, ov, dir);
    if (sc.task == "count") return run_count(sc, ov, dir);
    if (sc.task == "verify") return run_verify(sc, ov, dir);
    if (sc.task == "saddle") return run_saddle(sc, ov, dir);
    if (sc.task == "truncation-study") return run_truncation_study(sc, ov, dir);
    throw ConfigError("task: unknown task \"" + sc.task + "\"");
}

// ---------------------------------------------------------------------------
// verify task: cross-module invariant suite on the scenario's own data
// ---------------------------------------------------------------------------

namespace {

void push(std::vector<VerifyRow>& rows, const std::string& name, double measured,
          double tol) {
    rows.push_back({name, measured <= tol, measured, tol});
}

void push_flag(std::vector<VerifyRow>& rows, const std::string& name, bool ok) {
    rows.push_back({name, ok, ok ? 1.0 : 0.0, 1.0});
}

} // namespace

std::vector<VerifyRow> verify_suite(const Scenario& sc, unsigned long long seed) {
    std::vector<VerifyRow> rows;
    std::mt19937_64 rng(seed);
    if (!sc.has_pair) throw ConfigError("verify: scenario needs a potential pair");
    const Shift& s = sc.shift;
    const Potential& f = sc.pair.f;
    const Potential& g = sc.pair.g;

    // enumeration depth scaled so A^n stays ~2e5 however big the alphabet is
    const int n_enum = std::clamp(
        static_cast<int>(std::log(2e5) / std::log(static_cast<double>(std::max(2, s.A)))),
        2, 10);

    // a short cyclically admissible word for exact-identity spot checks
    Word cyc;
    for (int n = 1; n <= 6 && cyc.empty(); ++n) {
        if (fix_count(s, n) <= 0) continue;
        for_each_fix(s, n, [&](const Word& wd) {
            if (cyc.empty()) cyc = wd;
        });
    }

    // --- shift layer ---------------------------------------------------
    {
        // boolean power T^N must be entrywise positive at the certified index
        std::vector<std::uint8_t> P(s.T), nx(s.T.size());
        for (int it = 1; it < s.primitivity_index; ++it) {
            std::fill(nx.begin(), nx.end(), 0);
            for (int i = 0; i < s.A; ++i)
                for (int kq = 0; kq < s.A; ++kq)
                    if (P[std::size_t(i) * s.A + kq])
                        for (int jx = 0; jx < s.A; ++jx)
                            nx[std::size_t(i) * s.A + jx] |= s.T[std::size_t(kq) * s.A + jx];
            P.swap(nx);
        }
        push_flag(rows, "shift.primitivity_certificate",
                  std::all_of(P.begin(), P.end(), [](std::uint8_t v) { return v != 0; }));
        push_flag(rows, "shift.cylinder_count_vs_enumeration",
                  cylinder_count(s, 3) == static_cast<long long>(cylinders(s, 3).size()));
        long long enumerated = 0;
        for_each_fix(s, n_enum, [&](const Word&) { ++enumerated; });
        push_flag(rows, "shift.fix_count_trace_identity",
                  enumerated == fix_count(s, n_enum));
    }

    // --- potential layer -------------------------------------------------
    {
        // ergodic sums over a periodic word are invariant under cyclic rotation
        double worst = 0;
        for (int trial = 0; trial < 8; ++trial) {
            Word w;
            bool ok = false;
            for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
                w.clear();
                int n = 3 + static_cast<int>(rng() % 6);
                w.push_back(static_cast<int>(rng() % s.A));
                ok = true;
                for (int i = 1; i < n; ++i) {
                    int prev = w.back();
                    std::vector<int> nexts;
                    for (int b = 0; b < s.A; ++b)
                        if (s.edge(prev, b)) nexts.push_back(b);
                    w.push_back(nexts[rng() % nexts.size()]);
                }
                if (!s.edge(w.back(), w.front())) ok = false;
            }
            if (!ok) continue;
            double base = ergodic_sum(f, w);
            Word r = w;
            std::rotate(r.begin(), r.begin() + 1, r.end());
            worst = std::max(worst, std::abs(ergodic_sum(f, r) - base));
        }
        push(rows, "potential.cyclic_sum_invariance", worst, 1e-9);
        Potential h = combine(f, 2.0, g, -0.5);
        double lhs = ergodic_sum(h, cyc);
        double rhs = 2.0 * ergodic_sum(f, cyc) - 0.5 * ergodic_sum(g, cyc);
        push(rows, "potential.combine_linearity", std::abs(lhs - rhs), 1e-12);
        long long cnt = 0;
        bool bounds_ok = true;
        int nb = std::min(n_enum, 5);
        for_each_fix(s, nb, [&](const Word& wd) {
            double v = ergodic_sum(f, wd);
            if (v < nb * f.vmin - 1e-9 || v > nb * f.vmax + 1e-9) bounds_ok = false;
            ++cnt;
        });
        push_flag(rows, "potential.sum_bounds_nvmin_nvmax", bounds_ok && cnt > 0);
        Potential f3 = refine_depth(f, f.depth + 2);
        push(rows, "potential.refine_preserves_sums",
             std::abs(ergodic_sum(f3, cyc) - ergodic_sum(f, cyc)), 1e-12);
    }

    // --- transfer operator / equilibrium layer ---------------------------
    {
        RpfData r = rpf_data(s, f, true);
        TransferMatrix L = transfer_matrix(s, f);
        double lam = std::exp(r.pressure);
        push(rows, "thermo.right_eigen_residual",
             (L.L * r.h - lam * r.h).cwiseAbs().maxCoeff() / lam, 1e-10);
        push(rows, "thermo.left_eigen_residual",
             (L.L.transpose() * r.nu - lam * r.nu).cwiseAbs().maxCoeff() / lam, 1e-10);
        push(rows, "thermo.mu_normalization", std::abs(r.mu.sum() - 1.0), 1e-12);
        Potential fc = combine(f, 1.0, constant_potential(s, 1.0), 1.0);
        push(rows, "thermo.pressure_shift_by_constant",
             std::abs(pressure(s, fc) - (r.pressure + 1.0)), 1e-10);
        double broot = bowen_root(s, f);
        push(rows, "thermo.bowen_root_residual",
             std::abs(pressure(s, scale(f, -broot))), 1e-9);
    }

    // --- pressure surface / Legendre layer --------------------------------
    {
        PressureSurface S = make_surface(sc.pair);
        Vec2 z(-0.3, -0.4);
        Vec2 x = grad_pressure(S, z);
        LegendrePoint lp = legendre(S, x);
        // gradient-space round-trip: well-posed even when the pair is affinely
        // dependent and grad P has a flat direction (any depth-1 pair on two
        // letters is like that)
        push(rows, "convex.legendre_gradient_roundtrip",
             (grad_pressure(S, lp.z) - x).cwiseAbs().maxCoeff(), 1e-7);
        double young = lp.pstar + surface_pressure(S, z) - x.dot(z);
        push(rows, "convex.young_equality", std::abs(young), 1e-9);
        Mat2 H = hess_pressure(S, z);
        push(rows, "convex.hessian_symmetry", std::abs(H(0, 1) - H(1, 0)), 1e-8);
        Eigen::SelfAdjointEigenSolver<Mat2> es(H);
        push_flag(rows, "convex.hessian_psd", es.eigenvalues().minCoeff() > -1e-8);
    }

    // --- Manhattan-curve layer ---------------------------------------------
    {
        PressureSurface S = make_surface(sc.pair);
        ManhattanCurve curve = trace_curve(S, 41);
        push(rows, "manhattan.endpoint_q_at_zero",
             std::abs(curve.samples.front().q - curve.delta_g), 1e-9);
        push(rows, "manhattan.endpoint_q_at_delta_f",
             std::abs(curve.samples.back().q), 1e-9);
        bool convex_ok = true, slope_ok = true;
        for (size_t i = 1; i + 1 < curve.samples.size(); ++i) {
            double d2 = curve.samples[i + 1].q - 2 * curve.samples[i].q +
                        curve.samples[i - 1].q;
            if (d2 < -1e-10) convex_ok = false;
            if (curve.samples[i + 1].m < curve.samples[i].m - 1e-10) slope_ok = false;
        }
        push_flag(rows, "manhattan.q_convex", convex_ok);
        push_flag(rows, "manhattan.slope_monotone", slope_ok || curve.rigid);
        // -1/q'(s) from finite differences must match the analytic slope
        double worst = 0;
        for (size_t i = 1; i + 1 < curve.samples.size(); i += 5) {
            double qp = (curve.samples[i + 1].q - curve.samples[i - 1].q) /
                        (curve.samples[i + 1].s - curve.samples[i - 1].s);
            worst = std::max(worst, std::abs(curve.samples[i].m + 1.0 / qp));
        }
        push(rows, "manhattan.slope_vs_fd_derivative", worst, 2e-3);
        double a = 1.0, b = 1.0;
        BsScanReport bs = bs_inequality_scan(S, curve, a, b);
        double hbs = bishop_steger(S, a, b);
        push(rows, "manhattan.bs_inequality", std::max(0.0, bs.max_ratio - hbs), 1e-8);
    }

    // --- counting layer ----------------------------------------------------
    {
        const double fmid = 0.5 * (f.vmin + f.vmax);
        const double gmid = 0.5 * (g.vmin + g.vmax);
        std::uniform_real_distribution<double> jitter(-1.0, 1.0);
        long long worst_diff = 0;
        for (int trial = 0; trial < 10; ++trial) {
            WindowSpec spec;
            spec.t = n_enum * fmid + jitter(rng);
            spec.xi = 1.0 + 0.75 * (jitter(rng) + 1.0);
            spec.m = (n_enum * gmid + jitter(rng)) / std::max(spec.t, 0.1);
            if (spec.t <= 0 || spec.m <= 0) continue;
            WindowCount pruned =
                count_fix_window(s, sc.pair, spec, n_enum, CountBudget{100'000'000LL});
            long long exact = count_fix_window_unpruned(s, sc.pair, spec, n_enum);
            worst_diff = std::max(worst_diff, std::llabs(pruned.count - exact));
        }
        push(rows, "counting.pruned_equals_unpruned",
             static_cast<double>(worst_diff), 0.0);
        // #Fix(n) = sum over d|n of d * (#primitive orbits of period d): the
        // inverted recursion must produce nonnegative orbit counts that
        // reassemble the trace exactly
        std::vector<long long> fixn(9, 0);
        for (int n = 1; n <= 8; ++n) fixn[n] = fix_count(s, n);
        std::vector<long long> prim(9, 0);
        bool prim_ok = true;
        for (int n = 1; n <= 8; ++n) {
            long long total = fixn[n];
            for (int d = 1; d < n; ++d)
                if (n % d == 0) total -= d * prim[d];
            if (total % n != 0 || total < 0) prim_ok = false;
            prim[n] = total / n;
        }
        long long recon = 0;
        for (int d = 1; d <= 8; ++d)
            if (8 % d == 0) recon += d * prim[d];
        push_flag(rows, "counting.orbit_decomposition_consistency",
                  prim_ok && recon == fixn[8]);
        // sandwich the exact count between deflated/inflated cylinder sums
        {
            int n = std::max(n_enum, std::max(f.depth, g.depth) + 1);
            WindowSpec spec;
            spec.xi = 1.5;
            spec.t = n * fmid - 0.5 * spec.xi;
            spec.m = (n * gmid - 0.5 * spec.xi) / std::max(spec.t, 0.1);
            SandwichReport sw = sandwich_check(s, sc.pair, spec,
                                               std::max(f.depth, g.depth) + 1, n,
                                               CountBudget{200'000'000LL});
            push_flag(rows, "counting.sandwich_brackets", sw.lower_ok && sw.upper_ok);
        }
        Cylinder p = sc.tracked;
        SampleWord zp = pick_sample_word(s, p);
        int n_lf = std::max(p.depth(), s.A <= 4 ? 6 : 2);
        LaplaceFourier lf = laplace_fourier_check(s, sc.pair, p, zp, n_lf,
                                                  Vec2(-0.2, 0.1));
        push(rows, "counting.laplace_fourier_residual", lf.rel_residual, 1e-9);
    }

    // --- saddle layer ------------------------------------------------------
    {
        SaddleProblem g1 = gaussian_case(96.0);
        auto lead = saddle_leading_term(g1);
        auto quad = quadrature_oracle(g1, g1.epsilon / (4.1 * std::sqrt(96.0)));
        push(rows, "saddle.gaussian_agreement",
             std::abs(quad - lead) / std::abs(lead), 2e-3);
        SaddleProblem g2 = gaussian_case(384.0);
        auto lead2 = saddle_leading_term(g2);
        push(rows, "saddle.leading_term_n_scaling",
             std::abs(lead2 * 384.0 - lead * 96.0) / std::abs(lead * 96.0), 1e-12);
    }

    // --- truncation layer ----------------------------------------------------
    {
        TruncationFamily fam = named_truncation_family("2log1p");
        double s1 = entropy_gap_series(fam, 1.2, 64);
        double s2 = entropy_gap_series(fam, 1.2, 128);
        push_flag(rows, "truncation.partial_sums_monotone_in_N", s2 >= s1);
        double t1 = entropy_gap_series(fam, 1.2, 128);
        double t2 = entropy_gap_series(fam, 2.4, 128);
        push_flag(rows, "truncation.partial_sums_antitone_in_s", t2 <= t1);
    }

    return rows;
}

} // namespace tc
