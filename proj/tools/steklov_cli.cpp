// Command-line front end: spectra, bound verification, curvature reports,
// Reilly checks, oracle comparison, and parameter sweeps over warp families.
//
// Exit codes: 0 success, 1 verification found a suspected violation,
// 2 invalid flags or warp spec, 3 solver failure.

#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steklov/steklov.hpp"

using json = nlohmann::ordered_json;
using namespace steklov;

namespace {

std::string fmt(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

const char* ricci_sign_name(RicciSign s) {
    switch (s) {
        case RicciSign::NonNegative: return "NonNegative";
        case RicciSign::NonPositive: return "NonPositive";
        case RicciSign::Indefinite: return "Indefinite";
        case RicciSign::Zero: return "Zero";
    }
    return "?";
}

struct CommonArgs {
    std::string warp = "euclidean";
    int n = 2;
    double R = 1.0;
    double rtol = 1e-10;
    double atol = 1e-12;
    double eps_origin = 0.0;
    std::string format = "table";

    ShootingConfig shooting() const {
        ShootingConfig cfg;
        cfg.rtol = rtol;
        cfg.atol = atol;
        cfg.eps_origin = eps_origin;
        return cfg;
    }

    // construction failures here are bad flag values, not solver failures
    Geometry geometry() const {
        try {
            return Geometry::make(n, R, WarpSpec::parse(warp));
        } catch (const Error& e) {
            throw CLI::ValidationError(e.what());
        }
    }
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_format = true) {
    cmd->add_option("--warp", args.warp, "warp spec: euclidean | sphere:<a> | sinh:<a> | series:<c1,c3,...>");
    cmd->add_option("--n", args.n, "ambient dimension (>= 2)");
    cmd->add_option("--R", args.R, "ball radius");
    cmd->add_option("--rtol", args.rtol, "ODE relative tolerance");
    cmd->add_option("--atol", args.atol, "ODE absolute tolerance");
    cmd->add_option("--eps-origin", args.eps_origin, "seeding radius (default 1e-6*R)");
    if (with_format)
        cmd->add_option("--format", args.format, "table | json | csv")
            ->check(CLI::IsMember({"table", "json", "csv"}));
}

Problem parse_problem(const std::string& s) {
    if (s == "sigma") return Problem::Sigma;
    if (s == "xi") return Problem::Xi;
    if (s == "eta") return Problem::Eta;
    throw CLI::ValidationError("--problem must be sigma, xi or eta");
}

int solver_failure(Problem p, int m, const std::exception& e) {
    std::cerr << "error: solver failure for (" << problem_name(p) << ", m=" << m << "): " << e.what()
              << "\n";
    return 3;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

json spectrum_to_json(const SpectrumTable& t, const CommonArgs& args) {
    json out;
    out["problem"] = problem_name(t.problem);
    out["n"] = t.n;
    out["R"] = t.R;
    out["warp"] = WarpSpec::parse(args.warp).to_config();
    json rows = json::array();
    for (const auto& r : t.rows) {
        json row;
        row["m"] = r.m;
        row["eigenvalue"] = r.eigenvalue;
        row["multiplicity"] = r.multiplicity;
        row["index_from"] = r.index_from;
        row["index_to"] = r.index_to;
        rows.push_back(row);
    }
    out["rows"] = rows;
    out["ordering_certified"] = t.ordering_certified;
    json diag;
    diag["rtol"] = args.rtol;
    diag["atol"] = args.atol;
    diag["eps_origin"] = args.eps_origin > 0 ? args.eps_origin : 1e-6 * args.R;
    out["diagnostics"] = diag;
    return out;
}

int run_spectrum(const CommonArgs& args, const std::string& problem, int m_max,
                 const std::string& dump_radial) {
    const Problem p = parse_problem(problem);
    const Geometry g = args.geometry();
    ShootingConfig cfg = args.shooting();
    cfg.certify_eps = false;

    SpectrumTable table;
    table.problem = p;
    table.n = g.n;
    table.R = g.R;
    for (int m = 0; m <= m_max; ++m) {
        try {
            const auto out = solve_with_solution(p, g, m, cfg);
            table.rows.push_back({m, out.result.value, out.result.multiplicity, 0, 0});
            if (!dump_radial.empty()) {
                std::ofstream f(dump_radial + ".m" + std::to_string(m) + ".csv");
                f << "r,psi\n";
                for (std::size_t i = 0; i < out.solution.r.size(); ++i)
                    f << fmt(out.solution.r[i]) << ',' << fmt(out.solution.psi[i]) << '\n';
            }
        } catch (const Error& e) {
            return solver_failure(p, m, e);
        }
    }
    sort_and_index(table);
    table.ordering_certified = ordering_certified_for(p, g);

    if (args.format == "json") {
        std::cout << spectrum_to_json(table, args).dump(2) << '\n';
    } else if (args.format == "csv") {
        std::cout << "# problem=" << problem_name(table.problem) << " n=" << table.n
                  << " R=" << fmt(table.R) << " warp=" << WarpSpec::parse(args.warp).to_config()
                  << " ordering_certified=" << (table.ordering_certified ? "true" : "false") << '\n';
        std::cout << "m,eigenvalue,multiplicity,index_from,index_to\n";
        for (const auto& r : table.rows)
            std::cout << r.m << ',' << fmt(r.eigenvalue) << ',' << r.multiplicity << ','
                      << r.index_from << ',' << r.index_to << '\n';
    } else {
        std::printf("%s spectrum, n=%d, R=%s, warp=%s%s\n", problem_name(table.problem), table.n,
                    fmt(table.R).c_str(), args.warp.c_str(),
                    table.ordering_certified ? "" : "  [per-degree values; global order uncertified]");
        std::printf("%4s %18s %6s %14s\n", "m", "eigenvalue", "mult", "indices");
        for (const auto& r : table.rows)
            std::printf("%4d %18.12g %6lld %7lld..%lld\n", r.m, r.eigenvalue, r.multiplicity,
                        r.index_from, r.index_to);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

json report_to_json(const BoundReport& r) {
    json row;
    row["m"] = r.m;
    row["theorem"] = r.theorem_tag;
    row["kind"] = bound_kind_name(r.bound_kind);
    row["bound"] = r.bound_value;
    row["eigenvalue"] = r.eigenvalue;
    row["margin"] = r.margin;
    row["verdict"] = verdict_name(r.verdict);
    row["applicability"] = r.applicability;
    return row;
}

int run_verify(const CommonArgs& args, const std::string& problem, int m_max) {
    const Problem p = parse_problem(problem);
    const Geometry g = args.geometry();
    const CurvatureReport curv = curvature_classify(g);

    std::vector<BoundReport> reports;
    for (int m = 0; m <= m_max; ++m) {
        try {
            reports.push_back(verify(p, g, m, args.shooting(), &curv));
        } catch (const Error& e) {
            return solver_failure(p, m, e);
        }
    }

    bool violation = false;
    for (const auto& r : reports) violation |= r.verdict == Verdict::ViolationSuspected;

    if (args.format == "json") {
        json out;
        out["problem"] = problem_name(p);
        out["n"] = g.n;
        out["R"] = g.R;
        out["warp"] = WarpSpec::parse(args.warp).to_config();
        out["ric_sign"] = ricci_sign_name(curv.ric_sign);
        json rows = json::array();
        for (const auto& r : reports) rows.push_back(report_to_json(r));
        out["rows"] = rows;
        out["violations"] = violation;
        std::cout << out.dump(2) << '\n';
    } else if (args.format == "csv") {
        std::cout << "m,theorem,kind,bound,eigenvalue,margin,verdict,applicability\n";
        for (const auto& r : reports)
            std::cout << r.m << ',' << r.theorem_tag << ',' << bound_kind_name(r.bound_kind) << ','
                      << fmt(r.bound_value) << ',' << fmt(r.eigenvalue) << ',' << fmt(r.margin)
                      << ',' << verdict_name(r.verdict) << ',' << r.applicability << '\n';
    } else {
        std::printf("verify %s, n=%d, R=%s, warp=%s, ric_sign=%s\n", problem_name(p), g.n,
                    fmt(g.R).c_str(), args.warp.c_str(), ricci_sign_name(curv.ric_sign));
        std::printf("%4s %-16s %-6s %16s %16s %12s %s\n", "m", "theorem", "kind", "bound",
                    "eigenvalue", "margin", "verdict");
        for (const auto& r : reports)
            std::printf("%4d %-16s %-6s %16.10g %16.10g %12.4g %s%s%s\n", r.m,
                        r.theorem_tag.empty() ? "-" : r.theorem_tag.c_str(),
                        bound_kind_name(r.bound_kind), r.bound_value, r.eigenvalue, r.margin,
                        verdict_name(r.verdict),
                        r.bound_kind == BoundKind::None ? "  # " : "",
                        r.bound_kind == BoundKind::None ? r.applicability.c_str() : "");
    }
    return violation ? 1 : 0;
}

// ---------------------------------------------------------------------------
// curvature
// ---------------------------------------------------------------------------

int run_curvature(const CommonArgs& args, int grid_points) {
    const Geometry g = args.geometry();
    const CurvatureReport rep = curvature_classify(g, grid_points);
    json out;
    out["warp"] = WarpSpec::parse(args.warp).to_config();
    out["n"] = g.n;
    out["R"] = g.R;
    out["ric_radial_range"] = {rep.ric_radial_min, rep.ric_radial_max};
    out["ric_tangential_range"] = {rep.ric_tangential_min, rep.ric_tangential_max};
    out["ric_sign"] = ricci_sign_name(rep.ric_sign);
    out["boundary_convex"] = rep.boundary_convex;
    out["lemma23_holds"] = rep.lemma23_holds;
    out["kappa"] = rep.kappa;
    out["grid_points"] = rep.grid_points;
    out["sign_tol"] = rep.sign_tol;
    std::cout << out.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// reilly-check
// ---------------------------------------------------------------------------

int run_reilly_check(const CommonArgs& args, const std::string& problem, int m_from, int m_to) {
    const Problem p = parse_problem(problem);
    const Geometry g = args.geometry();

    std::printf("%4s %14s %14s %14s %14s %12s %14s\n", "m", "lap_sq", "hess_sq", "ric_term",
                "boundary", "residual", "rayleigh");
    for (int m = m_from; m <= m_to; ++m) {
        try {
            const auto out = solve_with_solution(p, g, m, args.shooting());
            const auto b = reilly::reilly_residual(g, p, m, out.solution);
            const double ray = reilly::rayleigh_quotient(g, p, m, out.solution);
            std::printf("%4d %14.8g %14.8g %14.8g %14.8g %12.3e %14.8g\n", m, b.lap_sq, b.hess_sq,
                        b.ric_term, b.boundary_term, b.residual, ray);
        } catch (const Error& e) {
            return solver_failure(p, m, e);
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// oracle-compare
// ---------------------------------------------------------------------------

int run_oracle_compare(const CommonArgs& args, const std::string& problem, int m_from, int m_to,
                       int base_n) {
    const Problem p = parse_problem(problem);
    const Geometry g = args.geometry();

    std::printf("%4s %16s %16s %12s %8s %12s\n", "m", "shooting", "fd_richardson", "err_est",
                "order", "rel_diff");
    for (int m = m_from; m <= m_to; ++m) {
        if (m == 0) continue;  // FD quotients are defined for m >= 1
        try {
            const double shoot = solve_with_solution(p, g, m, args.shooting()).result.value;
            const auto rich = oracle::richardson(p, g, m, base_n);
            const double rel = std::abs(rich.value - shoot) / std::max(std::abs(shoot), 1e-300);
            std::printf("%4d %16.10g %16.10g %12.3e %8.3g %12.3e\n", m, shoot, rich.value,
                        rich.error_est, rich.order, rel);
        } catch (const Error& e) {
            return solver_failure(p, m, e);
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

std::string substitute_param(const std::string& warp, const std::string& param, double value) {
    // replace any token (between ':' and ',') equal to the parameter name
    std::string out;
    std::string token;
    auto flush = [&]() {
        out += (token == param) ? fmt(value) : token;
        token.clear();
    };
    for (char c : warp) {
        if (c == ':' || c == ',' || c == '=' || c == ' ') {
            flush();
            out += c;
        } else {
            token += c;
        }
    }
    flush();
    return out;
}

int run_sweep(const CommonArgs& args, const std::string& problem, int m_max,
              const std::string& param, const std::string& range) {
    const Problem p = parse_problem(problem);

    double lo = 0, hi = 0, step = 0;
    {
        const auto c1 = range.find(':');
        const auto c2 = range.find(':', c1 == std::string::npos ? 0 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw CLI::ValidationError("--range must be lo:hi:step");
        try {
            lo = std::stod(range.substr(0, c1));
            hi = std::stod(range.substr(c1 + 1, c2 - c1 - 1));
            step = std::stod(range.substr(c2 + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--range must be lo:hi:step with numeric fields");
        }
        if (!(step > 0.0)) throw CLI::ValidationError("--range step must be positive");
    }

    std::vector<double> values;
    for (double v = lo; v <= hi + 0.5 * step; v += step) values.push_back(v);

    // validate every geometry before spawning workers: construction failures
    // are flag errors, not solver failures
    for (double v : values) {
        try {
            (void)Geometry::make(args.n, args.R, WarpSpec::parse(substitute_param(args.warp, param, v)));
        } catch (const Error& e) {
            throw CLI::ValidationError(param + "=" + fmt(v) + ": " + e.what());
        }
    }

    unsigned threads = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("STEKLOV_THREADS")) {
        const long t = std::strtol(env, nullptr, 10);
        if (t >= 1) threads = static_cast<unsigned>(t);
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(values.size()));
    if (threads == 0) threads = 1;

    struct PointResult {
        std::vector<BoundReport> rows;
        std::string error;
        int error_m = 0;
    };
    std::vector<PointResult> results(values.size());
    std::atomic<std::size_t> cursor{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= values.size()) return;
            try {
                const Geometry g = Geometry::make(args.n, args.R,
                                                  WarpSpec::parse(substitute_param(args.warp, param, values[i])));
                const CurvatureReport curv = curvature_classify(g);
                for (int m = 0; m <= m_max; ++m) {
                    results[i].error_m = m;
                    results[i].rows.push_back(verify(p, g, m, args.shooting(), &curv));
                }
            } catch (const std::exception& e) {
                results[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::cout << param << ",m,theorem,kind,bound,eigenvalue,margin,verdict\n";
    bool violation = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!results[i].error.empty()) {
            std::cerr << "error: solver failure for (" << problem_name(p) << ", m="
                      << results[i].error_m << ") at " << param << "=" << fmt(values[i]) << ": "
                      << results[i].error << "\n";
            return 3;
        }
        for (const auto& r : results[i].rows) {
            violation |= r.verdict == Verdict::ViolationSuspected;
            std::cout << fmt(values[i]) << ',' << r.m << ',' << (r.theorem_tag.empty() ? "-" : r.theorem_tag)
                      << ',' << bound_kind_name(r.bound_kind) << ',' << fmt(r.bound_value) << ','
                      << fmt(r.eigenvalue) << ',' << fmt(r.margin) << ',' << verdict_name(r.verdict)
                      << '\n';
        }
    }
    return violation ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steklov spectra on warped product balls"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string problem = "sigma";
    int m_max = 3;
    int m_single = -1;
    int grid_points = 1000;
    int base_n = 200;
    std::string dump_radial;
    std::string param, range;

    auto* cmd_spectrum = app.add_subcommand("spectrum", "per-degree eigenvalues with multiplicities");
    add_common(cmd_spectrum, args);
    cmd_spectrum->add_option("--problem", problem)->required();
    cmd_spectrum->add_option("--m-max", m_max, "highest spherical-harmonic degree")->check(CLI::NonNegativeNumber);
    cmd_spectrum->add_option("--dump-radial", dump_radial, "write <path>.m<k>.csv radial profiles (r,psi)");

    auto* cmd_verify = app.add_subcommand("verify", "check theorem bounds against computed eigenvalues");
    add_common(cmd_verify, args);
    cmd_verify->add_option("--problem", problem)->required();
    cmd_verify->add_option("--m-max", m_max)->check(CLI::NonNegativeNumber);

    auto* cmd_curv = app.add_subcommand("curvature", "curvature classification report (JSON)");
    add_common(cmd_curv, args, false);
    cmd_curv->add_option("--grid-points", grid_points);

    auto* cmd_reilly = app.add_subcommand("reilly-check", "integrated Bochner identity per degree");
    add_common(cmd_reilly, args, false);
    cmd_reilly->add_option("--problem", problem)->required();
    cmd_reilly->add_option("--m", m_single, "single degree")->check(CLI::NonNegativeNumber);
    cmd_reilly->add_option("--m-max", m_max)->check(CLI::NonNegativeNumber);

    auto* cmd_oracle = app.add_subcommand("oracle-compare", "shooting vs finite-difference quotients");
    add_common(cmd_oracle, args, false);
    cmd_oracle->add_option("--problem", problem)->required();
    cmd_oracle->add_option("--m", m_single, "single degree")->check(CLI::NonNegativeNumber);
    cmd_oracle->add_option("--m-max", m_max)->check(CLI::NonNegativeNumber);
    cmd_oracle->add_option("--grid-n", base_n, "coarsest FD grid for Richardson");

    auto* cmd_sweep = app.add_subcommand("sweep", "verify across one warp parameter (CSV)");
    add_common(cmd_sweep, args, false);
    cmd_sweep->add_option("--problem", problem)->required();
    cmd_sweep->add_option("--m-max", m_max)->check(CLI::NonNegativeNumber);
    cmd_sweep->add_option("--param", param, "parameter name appearing in --warp")->required();
    cmd_sweep->add_option("--range", range, "lo:hi:step")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const int lo = m_single >= 0 ? m_single : 0;
        const int hi = m_single >= 0 ? m_single : m_max;
        if (cmd_spectrum->parsed()) return run_spectrum(args, problem, m_max, dump_radial);
        if (cmd_verify->parsed()) return run_verify(args, problem, m_max);
        if (cmd_curv->parsed()) return run_curvature(args, grid_points);
        if (cmd_reilly->parsed()) return run_reilly_check(args, problem, lo, hi);
        if (cmd_oracle->parsed()) return run_oracle_compare(args, problem, std::max(lo, 1), std::max(hi, 1), base_n);
        if (cmd_sweep->parsed()) return run_sweep(args, problem, m_max, param, range);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidWarp& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
