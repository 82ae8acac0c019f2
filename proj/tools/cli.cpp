#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>

#include "ruinlab/error.hpp"
#include "ruinlab/solver.hpp"
#include "ruinlab/verify.hpp"

namespace ruinlab::cli {

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = {
        {"fig1-I", {0.0, 0.0, 0.1, 0.09, 1.0}, "C0=0.1 D1=0.09"},
        {"fig1-II", {0.02, 0.1, 0.1, 0.09, 1.0}, "C0=0.295 D1=0.265"},
        {"fig2-I", {0.02, 0.1, 0.02, 0.09, 1.0}, "C0=0.00527 D1=0.0237"},
        {"fig2-II", {0.1, 0.1, 0.02, 0.09, 1.0}, "C0=0.194 D1=0.872"},
        {"fig3-I", {0.02, 0.0, 0.02, 0.09, 1.0}, "C0=0.00704 D1=0.0317"},
        {"fig3-II", {0.1, 0.0, 0.02, 0.09, 1.0}, "C0=0.2046 D1=0.9207"},
        {"fig4-I", {0.02, 0.0, 0.0, 0.09, 1.0}, "phi(0)=0 D1=0"},
        {"fig4-II", {0.1, 0.0, 0.0, 0.09, 1.0}, "phi(0)=0 D1=inf"},
        {"fig5-I", {0.02, 0.1, 0.0, 0.09, 1.0}, "phi(0)=0 D1=0 P1=0.059587"},
        {"fig5-II", {0.1, 0.1, 0.0, 0.09, 1.0}, "phi(0)=0 D1=inf P1=0.861816"},
        {"nonrobust", {0.004, 0.1, 0.1, 0.09, 1.0}, "ruin certain (2a/b^2=0.8)"},
    };
    return table;
}

const Preset* find_preset(std::string_view name) {
    const auto& table = presets();
    auto it = std::find_if(table.begin(), table.end(), [&](const Preset& p) { return p.name == name; });
    return it == table.end() ? nullptr : &*it;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view text) {
    if (text == "inf") return HUGE_VAL;
    if (text == "-inf") return -HUGE_VAL;
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return value;
}

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Settings = std::map<std::string, std::string>;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

Settings read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    Settings settings;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = trim(line.substr(0, line.find('#')));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(std::string_view(text).substr(0, eq));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        settings[key] = trim(std::string_view(text).substr(eq + 1));
    }
    return settings;
}

class Resolver {
   public:
    explicit Resolver(Settings settings) : settings_(std::move(settings)) {}

    bool has(const std::string& key) const { return settings_.count(key) > 0; }

    std::optional<std::string> text(const std::string& key) const {
        auto it = settings_.find(key);
        if (it == settings_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<double> number(const std::string& key) const {
        auto t = text(key);
        if (!t) return std::nullopt;
        auto v = parse_number(*t);
        if (!v) throw UsageError("--" + key + ": not a number: " + *t);
        return v;
    }

    template <class Int>
    std::optional<Int> integer(const std::string& key) const {
        auto t = text(key);
        if (!t) return std::nullopt;
        Int value{};
        auto res = std::from_chars(t->data(), t->data() + t->size(), value);
        if (res.ec != std::errc() || res.ptr != t->data() + t->size())
            throw UsageError("--" + key + ": not a nonnegative integer: " + *t);
        return value;
    }

   private:
    Settings settings_;
};

Scenario resolve_scenario(const Resolver& r, double default_umax_in_m) {
    std::string name = "custom";
    double a = 0, b = 0, c = 0, lambda = 0, m = 0;
    bool have[5] = {false, false, false, false, false};
    if (auto p = r.text("preset")) {
        const Preset* preset = find_preset(*p);
        if (!preset) throw UsageError("unknown preset: " + *p);
        name = preset->name;
        a = preset->params.a();
        b = preset->params.b();
        c = preset->params.c();
        lambda = preset->params.lambda();
        m = preset->params.m();
        std::fill(std::begin(have), std::end(have), true);
    }
    const char* keys[5] = {"a", "b", "c", "lambda", "m"};
    double* slots[5] = {&a, &b, &c, &lambda, &m};
    for (int i = 0; i < 5; ++i) {
        if (auto v = r.number(keys[i])) {
            *slots[i] = *v;
            have[i] = true;
        }
    }
    for (int i = 0; i < 5; ++i)
        if (!have[i]) throw UsageError(std::string("missing --") + keys[i] + " (or --preset)");

    ModelParams params(a, b, c, lambda, m);
    Scenario scenario{name, params, {}, {}, default_series_order};
    scenario.grid.u_max = r.number("umax").value_or(default_umax_in_m * m);
    scenario.grid.points = r.integer<std::size_t>("points").value_or(201);
    if (auto s = r.text("spacing")) {
        if (*s == "uniform")
            scenario.grid.spacing = Spacing::Uniform;
        else if (*s == "log")
            scenario.grid.spacing = Spacing::Log;
        else
            throw UsageError("--spacing must be uniform or log");
    }
    scenario.tol.rtol = r.number("rtol").value_or(scenario.tol.rtol);
    scenario.tol.atol = r.number("atol").value_or(scenario.tol.atol);
    scenario.order = r.integer<int>("order").value_or(default_series_order);
    if (!(scenario.grid.u_max > 0.0) || !std::isfinite(scenario.grid.u_max))
        throw UsageError("--umax must be positive");
    if (scenario.grid.points < 2) throw UsageError("--points must be at least 2");
    if (!(scenario.tol.rtol > 0.0) || !(scenario.tol.atol > 0.0)) throw UsageError("tolerances must be positive");
    if (scenario.order < 2) throw UsageError("--order must be at least 2");
    return scenario;
}

SolveOptions solve_options(const Scenario& s) {
    SolveOptions options;
    options.grid = s.grid;
    options.tol = s.tol;
    options.series_order = s.order;
    return options;
}

// Writes to --output when given, otherwise to the command's stdout.
class Sink {
   public:
    Sink(const std::optional<std::string>& path, std::ostream& fallback) : stream_(&fallback) {
        if (path) {
            file_.open(*path, std::ios::binary | std::ios::trunc);
            if (!file_) throw UsageError("cannot write " + *path);
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

   private:
    std::ofstream file_;
    std::ostream* stream_;
};

void write_gnuplot(const std::string& script, const std::string& csv, const std::string& ylabel) {
    std::ofstream out(script, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + script);
    out << "set datafile separator ','\n"
        << "set datafile commentschars '#'\n"
        << "set key autotitle columnhead\n"
        << "set xlabel 'u'\n"
        << "set ylabel '" << ylabel << "'\n"
        << "plot '" << csv << "' using 1:2 with lines\n";
}

void check_gnuplot(const Resolver& r) {
    if (r.has("gnuplot") && !r.has("output")) throw UsageError("--gnuplot needs --output for the data file");
}

void footer_line(std::ostream& os, std::string_view key, double value) {
    os << "# " << key << " = " << format_number(value) << '\n';
}

void write_footer(std::ostream& os, const Scenario& s, const SolutionGrid& sol) {
    os << "# scenario = " << s.name << '\n';
    os << "# regime = " << to_string(sol.regime) << '\n';
    if (sol.ruin_certain()) {
        os << "# reason = " << to_string(sol.reason) << '\n';
        os << "# ruin certain\n";
        return;
    }
    footer_line(os, "C0", sol.C0);
    footer_line(os, "D1", sol.evaluate(0.0).dphi);
    if (sol.P1) footer_line(os, "P1", *sol.P1);
    const auto& p = sol.params;
    if (sol.regime == Regime::ClassicalCL)
        footer_line(os, "lundberg", (p.c() - p.lambda() * p.m()) / (p.m() * p.c()));
    if (sol.tail) {
        footer_line(os, "K", sol.tail->K);
        footer_line(os, "exponent", sol.tail->exponent);
        footer_line(os, "U", sol.tail->U);
        footer_line(os, "tail_stability", sol.tail->stability);
    }
    const auto& d = sol.diagnostics;
    if (sol.regime == Regime::Main || sol.regime == Regime::CapitalStock) {
        footer_line(os, "u0", d.u0);
        os << "# order = " << d.order << '\n';
        os << "# u0_fallback = " << (d.u0_fallback ? "yes" : "no") << '\n';
        os << "# steps = " << d.steps << '\n';
        footer_line(os, "error_estimate", d.error_estimate);
        footer_line(os, "rtol", d.tolerances.rtol);
        footer_line(os, "atol", d.tolerances.atol);
    }
}

int cmd_solve(const Resolver& r, std::ostream& out) {
    check_gnuplot(r);
    const Scenario s = resolve_scenario(r, 100.0);
    const SolutionGrid sol = solve(s.params, solve_options(s));
    Sink sink(r.text("output"), out);
    auto& os = sink.get();
    os << "u,phi,dphi,ddphi\n";
    for (std::size_t i = 0; i < sol.u.size(); ++i)
        os << format_number(sol.u[i]) << ',' << format_number(sol.phi[i]) << ',' << format_number(sol.dphi[i])
           << ',' << format_number(sol.ddphi[i]) << '\n';
    write_footer(os, s, sol);
    if (auto g = r.text("gnuplot")) write_gnuplot(*g, *r.text("output"), "phi(u)");
    return ok;
}

int cmd_residual(const Resolver& r, std::ostream& out) {
    check_gnuplot(r);
    const Scenario s = resolve_scenario(r, 50.0);
    const SolutionGrid sol = solve(s.params, solve_options(s));
    const ResidualReport report = ide_residual(sol, sol.u);
    Sink sink(r.text("output"), out);
    auto& os = sink.get();
    os << "u,residual\n";
    for (std::size_t i = 0; i < report.u.size(); ++i)
        os << format_number(report.u[i]) << ',' << format_number(report.residual[i]) << '\n';
    os << "# scenario = " << s.name << '\n';
    os << "# regime = " << to_string(sol.regime) << '\n';
    footer_line(os, "sup_residual", report.sup_norm);
    footer_line(os, "sup_rel_residual", report.sup_rel);
    if (auto g = r.text("gnuplot")) write_gnuplot(*g, *r.text("output"), "residual");
    return ok;
}

std::vector<double> parse_u_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto v = parse_number(trim(item));
        if (!v || !(*v >= 0.0) || !std::isfinite(*v)) throw UsageError("--u: bad surplus value: " + item);
        values.push_back(*v);
    }
    if (values.empty()) throw UsageError("--u: no values");
    return values;
}

int cmd_mc(const Resolver& r, std::ostream& out) {
    const Scenario s = resolve_scenario(r, 100.0);
    const auto u_text = r.text("u");
    if (!u_text) throw UsageError("missing --u");
    const std::vector<double> us = parse_u_list(*u_text);

    McOptions options;
    options.n_paths = r.integer<std::size_t>("n").value_or(10'000);
    options.T = r.number("T").value_or(0.0);
    options.dt = r.number("dt").value_or(0.0);
    options.threads = r.integer<unsigned>("threads").value_or(0);
    if (auto seed = r.integer<std::uint64_t>("seed")) {
        options.seed = *seed;
    } else if (const char* env = std::getenv("RUINLAB_SEED")) {
        std::uint64_t value = 0;
        const std::string_view text(env);
        auto res = std::from_chars(text.data(), text.data() + text.size(), value);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size())
            throw UsageError("RUINLAB_SEED: not a nonnegative integer");
        options.seed = value;
    }
    if (options.n_paths < 1) throw UsageError("--n must be at least 1");
    if (r.has("T") && !(options.T > 0.0)) throw UsageError("--T must be positive");
    if (r.has("dt") && !(options.dt > 0.0)) throw UsageError("--dt must be positive");
    const bool check = r.has("horizon-check");

    Sink sink(r.text("output"), out);
    auto& os = sink.get();
    os << "u,p_hat,stderr,n,T,dt,seed\n";
    std::vector<HorizonCheck> checks;
    for (double u : us) {
        McEstimate e;
        if (check) {
            checks.push_back(mc_horizon_check(s.params, u, options));
            e = checks.back().at_T;
        } else {
            e = mc_survival(s.params, u, options);
        }
        os << format_number(e.u) << ',' << format_number(e.p_hat) << ',' << format_number(e.std_error) << ','
           << e.n_paths << ',' << format_number(e.T) << ',' << format_number(e.dt) << ',' << e.seed << '\n';
    }
    for (const auto& c : checks)
        os << "# horizon u = " << format_number(c.at_T.u) << ": p(T) = " << format_number(c.at_T.p_hat)
           << ", p(2T) = " << format_number(c.at_2T.p_hat) << ", " << (c.stable ? "stable" : "not stable") << '\n';
    return ok;
}

int cmd_presets(std::ostream& out) {
    out << "name,a,b,c,lambda,m,expected\n";
    for (const auto& p : presets())
        out << p.name << ',' << format_number(p.params.a()) << ',' << format_number(p.params.b()) << ','
            << format_number(p.params.c()) << ',' << format_number(p.params.lambda()) << ','
            << format_number(p.params.m()) << ',' << p.landmark << '\n';
    return ok;
}

struct Command {
    CLI::App* app = nullptr;
    std::map<std::string, CLI::Option*> options;
    std::map<std::string, std::string> values;
    bool horizon_check = false;
};

void add_model_options(Command& cmd) {
    auto add = [&](const std::string& key, const std::string& help) {
        cmd.options[key] = cmd.app->add_option("--" + key, cmd.values[key], help);
    };
    add("preset", "built-in scenario (see `presets`)");
    add("config", "key=value file; flags override its entries");
    add("a", "investment drift");
    add("b", "investment volatility");
    add("c", "premium rate");
    add("lambda", "claim intensity");
    add("m", "mean claim size");
    add("umax", "grid end");
    add("points", "grid nodes");
    add("spacing", "uniform or log");
    add("rtol", "relative tolerance");
    add("atol", "absolute tolerance");
    add("order", "series order at zero");
    add("output", "write CSV to this file");
}

Settings collect(const Command& cmd) {
    Settings settings;
    if (cmd.options.at("config")->count() > 0) settings = read_config(cmd.values.at("config"));
    for (const auto& [key, opt] : cmd.options)
        if (key != "config" && opt->count() > 0) settings[key] = cmd.values.at(key);
    if (cmd.horizon_check) settings["horizon-check"] = "1";
    return settings;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Survival probabilities for an insurer investing in a risky asset", "ruinlab");
    app.require_subcommand(1);

    Command solve_cmd, residual_cmd, mc_cmd;
    solve_cmd.app = app.add_subcommand("solve", "survival probability on a grid (CSV)");
    residual_cmd.app = app.add_subcommand("residual", "integro-differential residual of the solution (CSV)");
    mc_cmd.app = app.add_subcommand("mc", "Monte Carlo survival estimate");
    auto* presets_cmd = app.add_subcommand("presets", "list built-in scenarios");

    for (Command* cmd : {&solve_cmd, &residual_cmd, &mc_cmd}) add_model_options(*cmd);
    for (Command* cmd : {&solve_cmd, &residual_cmd})
        cmd->options["gnuplot"] =
            cmd->app->add_option("--gnuplot", cmd->values["gnuplot"], "also write a gnuplot script here");
    auto add_mc = [&](const std::string& key, const std::string& help) {
        mc_cmd.options[key] = mc_cmd.app->add_option("--" + key, mc_cmd.values[key], help);
    };
    add_mc("u", "initial surplus; comma-separated list allowed");
    add_mc("n", "number of paths (default 10000)");
    add_mc("T", "horizon (default from the parameters)");
    add_mc("dt", "Euler step (default from the parameters)");
    add_mc("seed", "RNG seed (default $RUINLAB_SEED or 42)");
    add_mc("threads", "worker threads (0: all cores)");
    mc_cmd.app->add_flag("--horizon-check", mc_cmd.horizon_check, "also run at 2T and compare");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return usage;
    }

    try {
        if (solve_cmd.app->parsed()) return cmd_solve(Resolver(collect(solve_cmd)), out);
        if (residual_cmd.app->parsed()) return cmd_residual(Resolver(collect(residual_cmd)), out);
        if (mc_cmd.app->parsed()) return cmd_mc(Resolver(collect(mc_cmd)), out);
        if (presets_cmd->parsed()) return cmd_presets(out);
    } catch (const UsageError& e) {
        err << e.what() << '\n';
        return usage;
    } catch (const InvalidParams& e) {
        err << e.what() << '\n';
        return usage;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
    return usage;
}

}  // namespace ruinlab::cli
