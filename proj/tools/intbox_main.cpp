#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <variant>

#include "intbox/scenario.hpp"
#include "intbox/synthesis.hpp"

using namespace intbox;

namespace {

void print_matrix(const char* name, const Mat& m) {
    std::printf("%s =\n", name);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::printf("  [");
        for (Eigen::Index j = 0; j < m.cols(); ++j) std::printf("%s%.17g", j ? ", " : "", m(i, j));
        std::printf("]\n");
    }
}

int cmd_run(const std::string& path, const std::optional<std::string>& out_dir) {
    const Scenario sc = load_scenario(path);
    const ScenarioOutcome out = run_scenario(sc);
    const std::string dir = out_dir.value_or(sc.output_dir);
    write_outputs(out, dir);
    for (const auto& r : out.runs) {
        std::printf("%-20s %-12s", r.id.c_str(), r.run.method.c_str());
        if (r.containment) {
            std::printf(" violations=%zu worst_margin=%.3g", r.containment->total_violations(),
                        r.containment->worst_margin);
        }
        std::printf("%s\n", r.run.bibo_certified ? "" : " (not BIBO-certified)");
    }
    std::printf("wrote %zu CSV files and report.json to %s\n", out.runs.size(), dir.c_str());
    if (!out.containment_passed) {
        std::fprintf(stderr, "containment check failed over %zu samples\n", out.samples);
        return kExitContainment;
    }
    return kExitOk;
}

int cmd_verify(const std::string& path, std::optional<std::size_t> samples, std::optional<std::uint64_t> seed) {
    const Scenario sc = load_scenario(path);
    RunOptions opts;
    opts.samples = samples;
    opts.seed = seed;
    const ScenarioOutcome out = run_scenario(sc, opts);
    std::fputs(out.report_json.c_str(), stdout);
    return out.containment_passed ? kExitOk : kExitContainment;
}

int cmd_synthesize(const std::string& path, std::optional<double> alpha_opt) {
    const Scenario sc = load_scenario(path);
    const double alpha = alpha_opt.value_or(sc.synthesis_alpha);
    if (!(alpha >= 0.0)) {
        std::fprintf(stderr, "error: --alpha must be >= 0\n");
        return kExitConfig;
    }
    if (!sc.sys.C()) {
        std::fprintf(stderr, "error: scenario '%s' has no system.C\n", sc.name.c_str());
        return kExitConfig;
    }
    const SynthesisResult res = synthesize_gain(sc.sys, alpha, sc.synthesis);
    if (const auto* cert = std::get_if<GainCertificate>(&res)) {
        std::printf("certificate (alpha = %.17g)\n", cert->alpha);
        print_matrix("P", cert->P);
        print_matrix("Y", cert->Y);
        print_matrix("X", cert->X);
        print_matrix("L", cert->L);
        std::printf("lambda_max = %.17g\n", cert->lambda_max);
        std::printf("verified = %s\n", verify_certificate(sc.sys, *cert) ? "yes" : "no");
        return kExitOk;
    }
    const auto& inf = std::get<Infeasible>(res);
    std::printf("infeasible: %s\n", inf.diagnostics.c_str());
    if (inf.analytic_obstruction) {
        std::printf("analytic obstruction: no gain L makes psi(A - LC) Hurwitz\n");
    }
    return kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval state estimation for uncertain LTI systems"};
    app.require_subcommand(1);

    std::string path;
    std::optional<std::string> out_dir;
    auto* run = app.add_subcommand("run", "Run the scenario's estimators, check containment, write CSV and JSON");
    run->add_option("scenario", path, "Scenario JSON file")->required();
    run->add_option("--out", out_dir, "Output directory (default: outputs.dir of the scenario)");

    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    auto* verify = app.add_subcommand("verify", "Check containment of sampled truths; print the JSON report");
    verify->add_option("scenario", path, "Scenario JSON file")->required();
    verify->add_option("--samples", samples, "Number of sampled truths");
    verify->add_option("--seed", seed, "Sampling seed");

    std::optional<double> alpha;
    auto* synth = app.add_subcommand("synthesize", "Search for an interval-observer gain L");
    synth->add_option("scenario", path, "Scenario JSON file")->required();
    synth->add_option("--alpha", alpha, "Decay rate alpha >= 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(path, out_dir);
        if (*verify) return cmd_verify(path, samples, seed);
        return cmd_synthesize(path, alpha);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const DimensionError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const InfeasibleError& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kExitInfeasible;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
}
