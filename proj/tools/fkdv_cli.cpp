// Command-line front end: solve | sweep | evolve | phase | fit.
//
// Configuration precedence: flags > FKDV_OUT (output directory only) >
// --config file > built-in defaults. The config file is either "key = value"
// text or the run.json echo written by a previous run.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fkdv/analysis.hpp"
#include "fkdv/evolution.hpp"
#include "fkdv/extrapolation.hpp"
#include "fkdv/petviashvili.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace fkdv;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RunConfig {
    double alpha = 2.0;
    std::optional<double> gamma; // set: extended Whitham symbol
    int p = 1;
    double c = 1.0;
    double l = 256.0;
    unsigned long long N = 4096;
    std::optional<double> eps; // default (p+1)/p
    double tol = 1e-10;
    int max_iter = 1000;
    int mw = 6; // 0 selects the plain iteration
    bool safeguard = true;
    double dt = 1e-2;
    double tfinal = 10.0;
    int snapshot_stride = 10;
    std::string out = ".";
    int jobs = 1;

    DispersionSymbol symbol() const {
        return gamma ? DispersionSymbol::whitham_extended(*gamma)
                     : DispersionSymbol::fractional(alpha);
    }

    double eps_value() const { return eps ? *eps : ProblemSpec::optimal_exponent(p); }

    void validate() const {
        if (!(l > 0.0)) throw std::invalid_argument("config: l must be positive");
        if (N == 0 || (N & (N - 1)) != 0)
            throw std::invalid_argument("config: N must be a positive power of two");
        if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
        if (!(c > 0.0)) throw std::invalid_argument("config: c must be positive (c > 0)");
        if (p < 1) throw std::invalid_argument("config: p must be a positive integer");
        if (mw < 0) throw std::invalid_argument("config: mw must be >= 0");
        if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
    }

    json to_json() const {
        json j;
        if (gamma)
            j["gamma"] = *gamma;
        else
            j["alpha"] = alpha;
        j["p"] = p;
        j["c"] = c;
        j["l"] = l;
        j["N"] = N;
        j["eps"] = eps_value();
        j["tol"] = tol;
        j["max_iter"] = max_iter;
        j["mw"] = mw;
        j["safeguard"] = safeguard;
        j["dt"] = dt;
        j["tfinal"] = tfinal;
        j["snapshot_stride"] = snapshot_stride;
        j["jobs"] = jobs;
        return j;
    }
};

// "key = value" text or a JSON object (the run.json echo).
std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();

    std::map<std::string, std::string> kv;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j = json::parse(text);
        for (auto& [key, val] : j.items())
            kv[key] = val.is_string() ? val.get<std::string>() : val.dump();
        return kv;
    }

    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

void apply_config_file(RunConfig& cfg, const std::map<std::string, std::string>& kv,
                       const std::map<std::string, bool>& overridden) {
    auto want = [&](const char* key) {
        auto it = overridden.find(key);
        return kv.count(key) && !(it != overridden.end() && it->second);
    };
    auto d = [&](const char* key) { return std::stod(kv.at(key)); };
    auto i = [&](const char* key) { return std::stoi(kv.at(key)); };
    if (want("alpha")) cfg.alpha = d("alpha");
    if (want("gamma")) cfg.gamma = d("gamma");
    if (want("p")) cfg.p = i("p");
    if (want("c")) cfg.c = d("c");
    if (want("l")) cfg.l = d("l");
    if (want("N")) cfg.N = std::stoull(kv.at("N"));
    if (want("eps")) cfg.eps = d("eps");
    if (want("tol")) cfg.tol = d("tol");
    if (want("max_iter")) cfg.max_iter = i("max_iter");
    if (want("mw")) cfg.mw = i("mw");
    if (want("safeguard")) {
        const std::string& v = kv.at("safeguard");
        cfg.safeguard = !(v == "false" || v == "0");
    }
    if (want("dt")) cfg.dt = d("dt");
    if (want("tfinal")) cfg.tfinal = d("tfinal");
    if (want("snapshot_stride")) cfg.snapshot_stride = i("snapshot_stride");
    if (want("jobs")) cfg.jobs = i("jobs");
    if (want("out")) cfg.out = kv.at("out");
}

fs::path ensure_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_profile_csv(const fs::path& path, const Field& profile) {
    std::ostringstream out;
    out << "# l=" << fmt17(profile.grid()->half_length())
        << " N=" << profile.grid()->size() << "\n";
    out << "x,phi\n";
    for (std::size_t j = 0; j < profile.size(); ++j)
        out << fmt17(profile.grid()->node(j)) << "," << fmt17(profile[j]) << "\n";
    write_text(path, out.str());
}

Field read_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file: " + path);
    std::string line;
    double l = 0.0;
    unsigned long long n = 0;
    std::vector<double> values;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string tok;
            while (meta >> tok) {
                if (tok.rfind("l=", 0) == 0) l = std::stod(tok.substr(2));
                if (tok.rfind("N=", 0) == 0) n = std::stoull(tok.substr(2));
            }
            continue;
        }
        if (line.rfind("x,", 0) == 0) continue; // header row
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ": malformed CSV at line " +
                                     std::to_string(line_no));
        try {
            values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw std::runtime_error(path + ": malformed CSV at line " +
                                     std::to_string(line_no));
        }
    }
    if (l <= 0.0 || n == 0)
        throw std::runtime_error(path + ": missing '# l=... N=...' metadata line");
    if (values.size() != n)
        throw std::runtime_error(path + ": expected " + std::to_string(n) +
                                 " rows, found " + std::to_string(values.size()));
    return Field(make_grid(l, n), std::move(values));
}

std::vector<std::pair<double, double>> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open points file: " + path);
    std::vector<std::pair<double, double>> points;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ": malformed CSV at line " +
                                     std::to_string(line_no));
        try {
            points.emplace_back(std::stod(line.substr(0, comma)),
                                std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            if (line_no == 1) continue; // header row
            throw std::runtime_error(path + ": malformed CSV at line " +
                                     std::to_string(line_no));
        }
    }
    return points;
}

json report_to_json(const ProfileSolution& sol, double refined_amplitude,
                    double wall_seconds) {
    json j;
    j["amplitude"] = refined_amplitude;
    j["min_value"] = sol.min_value;
    j["residual"] = sol.report.residual_history.empty()
                        ? 0.0
                        : sol.report.residual_history.back();
    j["iterations"] = sol.report.iterations;
    j["converged_by"] = to_string(sol.report.converged_by);
    j["m_history"] = sol.report.m_history;
    j["diff_history"] = sol.report.diff_history;
    j["residual_history"] = sol.report.residual_history;
    j["wall_time_seconds"] = wall_seconds;
    return j;
}

ProfileSolution run_solver(const RunConfig& cfg,
                           const std::optional<Field>& guess = std::nullopt) {
    ProblemSpec spec(cfg.p, cfg.c, cfg.symbol(), make_grid(cfg.l, cfg.N),
                     cfg.eps_value(), cfg.tol, cfg.max_iter);
    if (cfg.mw == 0) return solve(spec, guess);
    return accelerated_solve(spec, ExtrapolationConfig{cfg.mw, cfg.safeguard}, guess);
}

int cmd_solve(const RunConfig& cfg) {
    cfg.validate();
    const fs::path dir = ensure_out_dir(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    ProfileSolution sol = run_solver(cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double amp = peak_amplitude(sol.profile).amplitude;
    write_profile_csv(dir / "profile.csv", sol.profile);
    write_text(dir / "report.json", report_to_json(sol, amp, wall).dump(2) + "\n");
    write_text(dir / "run.json", cfg.to_json().dump(2) + "\n");
    std::cout << "amplitude " << fmt17(amp) << ", " << sol.report.iterations
              << " iterations, stopped by " << to_string(sol.report.converged_by)
              << "\n";
    return sol.report.converged() ? 0 : 2;
}

int cmd_sweep(const RunConfig& cfg, const std::vector<double>& c_list,
              const std::vector<double>& alpha_list, bool with_fit) {
    cfg.validate();
    if (c_list.empty() || alpha_list.empty())
        throw std::invalid_argument("sweep: --c-list and --alpha-list must be nonempty");
    const fs::path dir = ensure_out_dir(cfg);

    SweepSpec sweep;
    sweep.p = cfg.p;
    sweep.alphas = alpha_list;
    sweep.speeds = c_list;
    sweep.grid = make_grid(cfg.l, cfg.N);
    sweep.tol = cfg.tol;
    sweep.max_iter = cfg.max_iter;
    sweep.accel = ExtrapolationConfig{cfg.mw == 0 ? 1 : cfg.mw, cfg.safeguard};
    sweep.jobs = cfg.jobs;

    std::vector<SweepRow> rows = speed_amplitude_sweep(sweep);
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        if (a.p != b.p) return a.p < b.p;
        return a.c < b.c;
    });

    std::ostringstream out;
    out << "alpha,p,c,amplitude,iterations,converged\n";
    for (const auto& r : rows)
        out << fmt17(r.alpha) << "," << r.p << "," << fmt17(r.c) << ","
            << fmt17(r.amplitude) << "," << r.iterations << ","
            << (r.converged ? 1 : 0) << "\n";
    write_text(dir / "sweep.csv", out.str());
    write_text(dir / "run.json", cfg.to_json().dump(2) + "\n");

    if (with_fit) {
        json fits = json::array();
        for (double alpha : alpha_list) {
            std::vector<std::pair<double, double>> points;
            for (const auto& r : rows)
                if (r.alpha == alpha && r.converged) points.emplace_back(r.c, r.amplitude);
            if (points.size() < 3) continue;
            const FitResult fit = fit_power_law(points);
            json j;
            j["alpha"] = alpha;
            j["p"] = cfg.p;
            j["a"] = fit.a;
            j["b"] = fit.b;
            j["sse"] = fit.sse;
            j["r_squared"] = fit.r_squared;
            j["rmse"] = fit.rmse;
            j["n_points"] = fit.n_points;
            fits.push_back(j);
        }
        write_text(dir / "fit.json", fits.dump(2) + "\n");
    }

    const bool all_failed =
        std::none_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.converged; });
    return all_failed ? 1 : 0;
}

int cmd_evolve(const RunConfig& cfg, const std::string& profile_file) {
    cfg.validate();
    const fs::path dir = ensure_out_dir(cfg);

    Field profile = read_profile_csv(profile_file);
    if (profile.grid()->size() != cfg.N ||
        std::fabs(profile.grid()->half_length() - cfg.l) > 1e-12 * cfg.l) {
        std::cerr << "evolve: grid mismatch between " << profile_file << " (l="
                  << profile.grid()->half_length() << ", N=" << profile.grid()->size()
                  << ") and config (l=" << cfg.l << ", N=" << cfg.N << ")\n";
        return 1;
    }

    EvolutionSpec spec;
    spec.grid = profile.grid();
    spec.p = cfg.p;
    spec.symbol = cfg.symbol();
    spec.dt = cfg.dt;
    spec.t_final = cfg.tfinal;
    spec.snapshot_stride = cfg.snapshot_stride;
    Trajectory traj = evolve(profile, spec);

    std::ostringstream out;
    out << "t,amplitude,peak_position,C,M,E\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        out << fmt17(traj.times[i]) << "," << fmt17(traj.amplitude_series[i]) << ","
            << fmt17(traj.peak_position_series[i]) << ","
            << fmt17(traj.diagnostics[i].mass) << "," << fmt17(traj.diagnostics[i].momentum)
            << "," << fmt17(traj.diagnostics[i].energy) << "\n";
    write_text(dir / "evolve.csv", out.str());
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%06zu.csv", i);
        write_profile_csv(dir / name, traj.snapshots[i]);
    }
    write_text(dir / "run.json", cfg.to_json().dump(2) + "\n");

    const double a0 = traj.amplitude_series.front();
    double drift = 0.0;
    for (double a : traj.amplitude_series) drift = std::max(drift, std::fabs(a - a0));
    const double speed = measure_speed(traj);
    std::cout << "measured speed " << fmt17(speed) << ", max amplitude drift "
              << fmt17(drift) << "\n";
    return 0;
}

int cmd_phase(const RunConfig& cfg, const std::string& profile_file) {
    const fs::path dir = ensure_out_dir(cfg);
    const Field profile = read_profile_csv(profile_file);
    const auto portrait = phase_portrait(profile);
    std::ostringstream out;
    out << "phi,dphi\n";
    for (const auto& [phi, dphi] : portrait)
        out << fmt17(phi) << "," << fmt17(dphi) << "\n";
    write_text(dir / "phase.csv", out.str());
    return 0;
}

int cmd_fit(const RunConfig& cfg, const std::string& points_file) {
    const fs::path dir = ensure_out_dir(cfg);
    const auto points = read_points_csv(points_file);
    const FitResult fit = fit_power_law(points);
    json j;
    j["a"] = fit.a;
    j["b"] = fit.b;
    j["sse"] = fit.sse;
    j["r_squared"] = fit.r_squared;
    j["rmse"] = fit.rmse;
    j["n_points"] = fit.n_points;
    write_text(dir / "fit.json", j.dump(2) + "\n");
    std::cout << "a " << fmt17(fit.a) << ", b " << fmt17(fit.b) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solitary-wave profiles of fractional KdV and Whitham-class "
                 "equations by the accelerated Petviashvili iteration"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env_out = std::getenv("FKDV_OUT")) cfg.out = env_out;

    std::string config_file;
    double gamma_flag = 0.0;
    double eps_flag = 0.0;
    std::vector<double> c_list, alpha_list;
    bool with_fit = false;
    std::string input_file;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--alpha", cfg.alpha, "fractional dispersion exponent");
        sub->add_option("--gamma", gamma_flag,
                        "surface tension parameter; selects the extended Whitham symbol");
        sub->add_option("--p", cfg.p, "nonlinearity power");
        sub->add_option("--c", cfg.c, "wave speed");
        sub->add_option("--l", cfg.l, "domain half length");
        sub->add_option("--N", cfg.N, "number of collocation nodes (power of two)");
        sub->add_option("--eps", eps_flag, "stabilizing exponent (default (p+1)/p)");
        sub->add_option("--tol", cfg.tol, "stopping tolerance");
        sub->add_option("--max-iter", cfg.max_iter, "iteration cap");
        sub->add_option("--mw", cfg.mw, "extrapolation width (0 = plain iteration)");
        sub->add_flag("--no-safeguard",
                      [&](std::int64_t) { cfg.safeguard = false; },
                      "accept extrapolants even when they increase the residual");
        sub->add_option("--dt", cfg.dt, "time step");
        sub->add_option("--tfinal", cfg.tfinal, "final time");
        sub->add_option("--snapshot-stride", cfg.snapshot_stride,
                        "steps between recorded snapshots");
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--jobs", cfg.jobs, "parallel sweep rows");
        sub->add_option("--config", config_file, "config file (key = value or run.json)");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "compute one profile");
    add_common(solve_cmd);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "speed-amplitude sweep");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--c-list", c_list, "speeds to sweep")->delimiter(',');
    sweep_cmd->add_option("--alpha-list", alpha_list, "alpha values to sweep")
        ->delimiter(',');
    sweep_cmd->add_flag("--fit", with_fit, "fit a*c^b per alpha group");
    CLI::App* evolve_cmd = app.add_subcommand("evolve", "time-integrate a profile");
    add_common(evolve_cmd);
    evolve_cmd->add_option("profile", input_file, "profile CSV file")->required();
    CLI::App* phase_cmd = app.add_subcommand("phase", "phase portrait of a profile");
    add_common(phase_cmd);
    phase_cmd->add_option("profile", input_file, "profile CSV file")->required();
    CLI::App* fit_cmd = app.add_subcommand("fit", "power-law fit of (x, y) data");
    add_common(fit_cmd);
    fit_cmd->add_option("points", input_file, "CSV file with x,y rows")->required();

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();

    try {
        if (sub->count("--gamma")) cfg.gamma = gamma_flag;
        if (sub->count("--eps")) cfg.eps = eps_flag;

        if (!config_file.empty()) {
            std::map<std::string, bool> overridden;
            for (const char* key : {"alpha", "gamma", "p", "c", "l", "N", "eps", "tol",
                                    "mw", "dt", "tfinal", "out", "jobs"})
                overridden[key] = sub->count(std::string("--") + key) > 0;
            overridden["max_iter"] = sub->count("--max-iter") > 0;
            overridden["snapshot_stride"] = sub->count("--snapshot-stride") > 0;
            overridden["safeguard"] = sub->count("--no-safeguard") > 0;
            auto kv = load_config_file(config_file);
            apply_config_file(cfg, kv, overridden);
        }

        if (sub == solve_cmd) return cmd_solve(cfg);
        if (sub == sweep_cmd) return cmd_sweep(cfg, c_list, alpha_list, with_fit);
        if (sub == evolve_cmd) return cmd_evolve(cfg, input_file);
        if (sub == phase_cmd) return cmd_phase(cfg, input_file);
        if (sub == fit_cmd) return cmd_fit(cfg, input_file);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
