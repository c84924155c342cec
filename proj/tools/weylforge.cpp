// Command-line front end: build a named geometry family, run its residual
// check suite over a deterministic sample grid, and emit reports or plot
// data.  Exit codes: 0 all checks pass, 1 check failure, 2 usage error,
// 3 numerical breakdown.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "weylforge/verify.hpp"

namespace {

using namespace weylforge;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBreakdown = 3;

FamilySpec spec_from_flags(const std::string& family,
                           const std::vector<std::string>& params) {
    FamilySpec spec;
    spec.tag = family;
    for (const std::string& kv : params) {
        const size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--param expects key=value, got '" +
                                       kv + "'");
        spec.params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return spec;
}

StarConvention parse_convention(const std::string& name) {
    if (name == "tilde") return StarConvention::kTilde;
    if (name == "paper") return StarConvention::kGraded;
    throw CLI::ValidationError("--convention must be 'tilde' or 'paper'");
}

std::map<std::string, double> parse_tols(
    const std::vector<std::string>& tols) {
    std::map<std::string, double> out;
    for (const std::string& t : tols) {
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            out["*"] = std::stod(t);
        else
            out[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CLI::ValidationError("cannot write " + path);
    out << text;
}

int run_verify(const std::string& family,
               const std::vector<std::string>& params, int points,
               const std::vector<std::string>& tols,
               const std::string& convention, const std::string& report_path,
               unsigned seed) {
    FamilySpec spec = spec_from_flags(family, params);
    VerifyOptions options;
    options.points = points;
    options.seed = seed;
    options.convention = parse_convention(convention);
    options.tol_overrides = parse_tols(tols);

    FamilyInstance f;
    try {
        f = build_family(spec);
    } catch (const FamilyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    VerificationReport report;
    try {
        report = verify_family(f, options);
    } catch (const NumericalBreakdown& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return kExitBreakdown;
    }
    if (!report_path.empty()) write_text(report_path, report.json());
    for (const auto& c : report.checks)
        std::cout << (c.pass ? "PASS" : "FAIL") << " " << c.name
                  << " max_residual=" << c.max_residual
                  << " tolerance=" << c.tolerance << "\n";
    for (const auto& [k, v] : report.measurements)
        std::cout << k << "=" << v << "\n";
    std::cerr << "wall_time_ms=" << report.wall_time_ms << "\n";
    return report.pass() ? kExitPass : kExitFail;
}

struct GridAxis {
    std::string key;
    double start = 0.0, stop = 0.0;
    int steps = 1;
};

GridAxis parse_axis(const std::string& text) {
    const size_t eq = text.find('=');
    if (eq == std::string::npos)
        throw CLI::ValidationError("--grid expects key=start:stop:steps");
    GridAxis axis;
    axis.key = text.substr(0, eq);
    const std::string range = text.substr(eq + 1);
    std::istringstream in(range);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') ||
        !std::getline(in, c))
        throw CLI::ValidationError("--grid expects key=start:stop:steps");
    axis.start = std::stod(a);
    axis.stop = std::stod(b);
    axis.steps = std::stoi(c);
    if (axis.steps < 1)
        throw CLI::ValidationError("--grid needs at least one step");
    return axis;
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

int run_scan(const std::string& family,
             const std::vector<std::string>& params,
             const std::vector<std::string>& grid, int points,
             const std::vector<std::string>& tols,
             const std::string& convention, const std::string& out_path,
             unsigned seed) {
    if (grid.empty()) {
        std::cerr << "error: --grid gives an empty parameter grid\n";
        return kExitUsage;
    }
    std::vector<GridAxis> axes;
    for (const auto& g : grid) axes.push_back(parse_axis(g));

    VerifyOptions options;
    options.points = points;
    options.seed = seed;
    options.convention = parse_convention(convention);
    options.tol_overrides = parse_tols(tols);

    std::vector<int> idx(axes.size(), 0);
    std::ostringstream csv;
    bool header_done = false;
    bool all_pass = true;
    while (true) {
        FamilySpec spec = spec_from_flags(family, params);
        std::vector<double> values;
        for (size_t a = 0; a < axes.size(); ++a) {
            const GridAxis& ax = axes[a];
            const double v =
                ax.steps == 1
                    ? ax.start
                    : ax.start + (ax.stop - ax.start) * idx[a] /
                                     (ax.steps - 1);
            values.push_back(v);
            spec.params[ax.key] = format_double(v);
        }
        FamilyInstance f;
        try {
            f = build_family(spec);
        } catch (const FamilyError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitUsage;
        }
        VerificationReport report;
        try {
            report = verify_family(f, options);
        } catch (const NumericalBreakdown& e) {
            std::cerr << "numerical breakdown: " << e.what() << "\n";
            return kExitBreakdown;
        }
        if (!header_done) {
            for (const auto& ax : axes) csv << ax.key << ",";
            for (const auto& c : report.checks)
                csv << c.name << ",";
            for (const auto& [k, v] : report.measurements) csv << k << ",";
            csv << "pass\n";
            header_done = true;
        }
        for (double v : values) csv << format_double(v) << ",";
        for (const auto& c : report.checks)
            csv << format_double(c.max_residual) << ",";
        for (const auto& [k, v] : report.measurements)
            csv << format_double(v) << ",";
        csv << (report.pass() ? 1 : 0) << "\n";
        all_pass = all_pass && report.pass();

        size_t a = 0;
        for (; a < axes.size(); ++a) {
            if (++idx[a] < axes[a].steps) break;
            idx[a] = 0;
        }
        if (a == axes.size()) break;
    }
    write_text(out_path, csv.str());
    return all_pass ? kExitPass : kExitFail;
}

int run_emit(const std::string& family,
             const std::vector<std::string>& params, int samples,
             const std::string& out_path, unsigned seed) {
    FamilySpec spec = spec_from_flags(family, params);
    FamilyInstance f;
    try {
        f = build_family(spec);
    } catch (const FamilyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    std::vector<CongruenceRow> rows;
    try {
        rows = congruence_rows(f, samples, seed);
    } catch (const FamilyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical breakdown: " << e.what() << "\n";
        return kExitBreakdown;
    }
    std::ostringstream csv;
    const auto& names = f.weyl.chart.coord_names();
    for (const auto& n : names) csv << n << ",";
    for (const auto& n : names) csv << "chi_" << n << ",";
    csv << "tau,kappa\n";
    for (const auto& r : rows) {
        for (double v : r.p) csv << format_double(v) << ",";
        for (double v : r.chi) csv << format_double(v) << ",";
        csv << format_double(r.tau) << "," << format_double(r.kappa) << "\n";
    }
    write_text(out_path, csv.str());
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification of explicit Weyl geometries"};
    app.require_subcommand(1);

    std::string family, convention = "tilde", report_path, out_path;
    std::vector<std::string> params, tols, grid;
    int points = 100, samples = 100;
    unsigned seed = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--family", family, "family tag")->required();
        cmd->add_option("--param", params, "family parameter key=value");
        cmd->add_option("--seed", seed, "sample sequence seed");
    };

    CLI::App* verify = app.add_subcommand(
        "verify", "run the family's registered check suite");
    add_common(verify);
    verify->add_option("--points", points, "number of sample points");
    verify->add_option("--tol", tols,
                       "tolerance override: value or check=value");
    verify->add_option("--convention", convention,
                       "duality split convention: tilde or paper");
    verify->add_option("--report", report_path, "write the JSON report here");

    CLI::App* scan = app.add_subcommand(
        "scan", "verify across a parameter grid, emit CSV");
    add_common(scan);
    scan->add_option("--grid", grid, "axis spec key=start:stop:steps");
    scan->add_option("--points", points, "number of sample points");
    scan->add_option("--tol", tols,
                     "tolerance override: value or check=value");
    scan->add_option("--convention", convention,
                     "duality split convention: tilde or paper");
    scan->add_option("--out", out_path, "CSV output path (default stdout)");

    CLI::App* emit = app.add_subcommand(
        "emit-congruence", "emit congruence sample data as CSV");
    add_common(emit);
    emit->add_option("--samples", samples, "number of sample rows");
    emit->add_option("--out", out_path, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (verify->parsed())
            return run_verify(family, params, points, tols, convention,
                              report_path, seed);
        if (scan->parsed())
            return run_scan(family, params, grid, points, tols, convention,
                            out_path, seed);
        if (emit->parsed())
            return run_emit(family, params, samples, out_path, seed);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
