// opo: photon numbers, K factors and parameter sweeps for the
// non-orthogonal-mode parametric amplifier cavity.
//
// Exit codes: 0 ok, 1 internal error or failed check, 2 invalid
// configuration, 3 at/above oscillation threshold, 4 unwritable output.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opo/analysis.hpp"
#include "opo/checks.hpp"
#include "opo/sweep.hpp"
#include "opo/sweep_io.hpp"

namespace {

using namespace opo;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitThreshold = 3;
constexpr int kExitOutput = 4;

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamFlags {
    std::optional<double> G, R, t, phi, theta;
    bool degrees = false;

    void add_to(CLI::App& app) {
        app.add_option("--G", G, "crystal gain (>= 1)");
        app.add_option("--R", R, "output mirror reflectivity, 0 <= R < 1");
        app.add_option("--t", t, "absorber amplitude transmission, 0 <= t <= 1");
        app.add_option("--phi", phi, "rotator angle (radians unless --deg)");
        app.add_option("--theta", theta, "half round-trip phase omega L / c (radians unless --deg)");
        app.add_flag("--deg", degrees, "read angles in degrees");
    }

    bool any() const { return G || R || t || phi || theta; }

    double angle(double x) const { return degrees ? x * std::numbers::pi / 180.0 : x; }

    CavityParams resolve(CavityParams base = {}) const {
        if (G) base.G = *G;
        if (R) base.R = *R;
        if (t) base.t = *t;
        if (phi) base.phi = angle(*phi);
        if (theta) base.theta = angle(*theta);
        base.validate();
        return base;
    }
};

std::string echo(const CavityParams& p) {
    return to_json(p).dump();
}

int cmd_photons(const CavityParams& p) {
    std::cout << "config: " << echo(p) << '\n';
    const auto n = photon_numbers(p);
    std::cout << "n_a: " << format_number(n.n_a) << '\n'
              << "n_b: " << format_number(n.n_b) << '\n'
              << "N_total: " << format_number(n.total) << '\n';
    if (p.t == 1.0 && p.phi == 0.0) {
        const double oracle = orthogonal_mode_closed_form(p.G, p.R, p.theta);
        const double dev = oracle == 0.0 ? std::abs(n.n_a) : std::abs(n.n_a - oracle) / oracle;
        std::cout << "closed_form_n: " << format_number(oracle) << '\n'
                  << "closed_form_deviation: " << format_number(dev) << (oracle == 0.0 ? " (absolute)" : " (relative)")
                  << '\n';
    }
    return kExitOk;
}

int cmd_kfactor(const CavityParams& p) {
    std::cout << "config: " << echo(p) << '\n';
    const auto k = k_factor(p);
    const double closed = k_factor_closed_form(p.t, p.phi);
    std::cout << "K: " << (k.K ? format_number(*k.K) : std::string("inf (Divergent)")) << '\n'
              << "regime: " << to_string(k.regime) << '\n'
              << "t_c: " << format_number(k.t_c) << '\n'
              << "closed_form_K: " << format_number(closed) << '\n';
    if (k.K && std::isfinite(closed)) {
        std::cout << "closed_form_deviation: " << format_number(std::abs(*k.K - closed) / closed) << " (relative)\n";
    }
    return kExitOk;
}

AxisSpec parse_axis(const std::string& text, const ParamFlags& flags) {
    // name=lo:hi:count
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw InvalidParameter("axis '" + text + "' must look like name=lo:hi:count");
    AxisSpec axis;
    axis.name = param_from_string(text.substr(0, eq));
    std::stringstream ss(text.substr(eq + 1));
    std::string lo, hi, count;
    if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, count) || lo.empty() ||
        hi.empty() || count.empty()) {
        throw InvalidParameter("axis '" + text + "' must look like name=lo:hi:count");
    }
    try {
        axis.lo = std::stod(lo);
        axis.hi = std::stod(hi);
        const long long n = std::stoll(count);
        if (n < 0) throw InvalidParameter("axis '" + text + "' has a negative point count");
        axis.count = static_cast<std::size_t>(n);
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const InvalidParameter*>(&e)) throw;
        throw InvalidParameter("axis '" + text + "' has a malformed number");
    }
    if (axis.name == ParamName::phi || axis.name == ParamName::theta) {
        axis.lo = flags.angle(axis.lo);
        axis.hi = flags.angle(axis.hi);
    }
    return axis;
}

std::filesystem::path default_output_dir() {
    if (const char* dir = std::getenv("OPO_OUTPUT_DIR"); dir && *dir) return dir;
    return ".";
}

struct SweepArgs {
    int figure = 0;
    std::vector<std::string> axes;
    std::string out;
    std::string format = "csv";
    std::string from;
    unsigned threads = 0;
};

int cmd_sweep(const SweepArgs& args, const ParamFlags& flags) {
    SweepPlan plan;
    OutputFormat format = format_from_string(args.format);
    std::string stem = "sweep";

    if (!args.from.empty()) {
        std::ifstream in(args.from);
        if (!in) throw InvalidParameter("cannot read metadata from '" + args.from + "'");
        nlohmann::json config;
        try {
            config = read_config(in);
            plan = plan_from_config(config);
            format = format_from_config(config);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidParameter("no usable config metadata in '" + args.from + "': " + e.what());
        }
    } else if (args.figure != 0) {
        if (flags.any() || !args.axes.empty()) {
            throw InvalidParameter("--fig pins every parameter; drop the parameter and --axis flags");
        }
        if (args.figure == 2) {
            plan = SweepPlan::figure2();
        } else if (args.figure == 3) {
            plan = SweepPlan::figure3();
        } else {
            throw InvalidParameter("--fig must be 2 or 3");
        }
        stem = "fig" + std::to_string(args.figure);
    } else {
        plan.fixed = flags.resolve();
        for (const auto& a : args.axes) plan.axes.push_back(parse_axis(a, flags));
    }
    plan.validate();

    const auto config = sweep_config(plan, format);
    const auto result = run_sweep(plan, args.threads);

    std::filesystem::path path = args.out;
    if (path.empty()) path = default_output_dir() / (stem + (format == OutputFormat::Csv ? ".csv" : ".json"));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write '" + path.string() + "'");
    write_sweep(out, result, config, format);
    out.close();
    if (!out) throw OutputError("failed while writing '" + path.string() + "'");

    std::size_t divergent = 0;
    for (const auto& r : result.records) divergent += r.photons ? 0 : 1;
    std::cout << "wrote " << result.records.size() << " records to " << path.string() << '\n';
    if (divergent) std::cout << divergent << " points at or above threshold (written as inf)\n";
    return kExitOk;
}

int cmd_check(const CheckOptions& options) {
    const auto report = run_invariant_checks(options);
    for (const auto& c : report.outcomes) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  max deviation " << format_number(c.max_deviation)
                  << " (tolerance " << format_number(c.tolerance) << ")\n";
    }
    std::cout << "seed " << options.seed << ", " << options.samples << " samples, fingerprint " << std::hex
              << report.sample_fingerprint << std::dec << '\n';
    return report.all_passed() ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vacuum photon numbers and K factors of a two-mirror degenerate parametric cavity"};
    app.require_subcommand(1);

    ParamFlags photon_flags, k_flags, sweep_flags;

    auto* photons = app.add_subcommand("photons", "output photon numbers for vacuum input");
    photon_flags.add_to(*photons);

    auto* kfactor = app.add_subcommand("kfactor", "Petermann K factor of the cold cavity");
    k_flags.add_to(*kfactor);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "evaluate observables over a parameter grid");
    sweep_flags.add_to(*sweep);
    sweep->add_option("--fig", sweep_args.figure, "figure preset (2 or 3)");
    sweep->add_option("--axis", sweep_args.axes, "grid axis name=lo:hi:count (repeatable, first is outermost)");
    sweep->add_option("--out", sweep_args.out, "output file (default $OPO_OUTPUT_DIR/<name>.<format>)");
    sweep->add_option("--format", sweep_args.format, "csv or json");
    sweep->add_option("--from-metadata", sweep_args.from, "re-run the configuration echoed in an output file");
    sweep->add_option("--threads", sweep_args.threads, "worker threads (0 = all cores)");

    CheckOptions check_opts;
    std::string fault = "none";
    auto* check = app.add_subcommand("check", "run the invariant self-check suite");
    check->add_option("--seed", check_opts.seed, "random seed");
    check->add_option("--samples", check_opts.samples, "parameter tuples per invariant");
    check->add_option("--inject-fault", fault, "debug: none or left-mirror-sign");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*photons) return cmd_photons(photon_flags.resolve());
        if (*kfactor) return cmd_kfactor(k_flags.resolve());
        if (*sweep) return cmd_sweep(sweep_args, sweep_flags);
        if (*check) {
            check_opts.fault = fault_from_string(fault);
            return cmd_check(check_opts);
        }
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SingularAtThreshold& e) {
        std::cerr << "threshold: " << e.what() << '\n';
        return kExitThreshold;
    } catch (const DivergentAtThreshold& e) {
        std::cerr << "threshold: " << e.what() << '\n';
        return kExitThreshold;
    } catch (const OutputError& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return kExitOutput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    return kExitFailed;
}
