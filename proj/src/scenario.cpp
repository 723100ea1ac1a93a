#include "intbox/scenario.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

#include "intbox/closedloop.hpp"
#include "intbox/openloop.hpp"
#include "intbox/synthesis.hpp"
#include "parallel.hpp"

namespace intbox {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("scenario field '" + path + "': " + what);
}

const json& require(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, path + "." + key);
}

std::string string_of(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Vec vector_of(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
    }
    return v;
}

Mat matrix_of(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a row-major nested array");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) fail(path + "[0]", "expected a non-empty row");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != cols) fail(rp, "rows must all have " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                number(j[r][c], rp + "[" + std::to_string(c) + "]");
        }
    }
    if (!m.allFinite()) fail(path, "non-finite entry");
    return Mat(std::move(m));
}

std::vector<Vec> rows_of(const json& j, const std::string& path, Eigen::Index dim) {
    if (!j.is_array() || j.empty()) fail(path, "expected an array of samples");
    std::vector<Vec> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string kp = path + "[" + std::to_string(k) + "]";
        Vec v = j[k].is_array() ? vector_of(j[k], kp) : Vec::Constant(1, number(j[k], kp));
        if (v.size() != dim) fail(kp, "expected " + std::to_string(dim) + " components");
        out.push_back(std::move(v));
    }
    return out;
}

BoxSignal signal_of(const json& j, const std::string& path, Eigen::Index dim) {
    const std::string type = string_of(require(j, path, "type"), path + ".type");
    if (type == "sinusoid") {
        if (dim != 1) fail(path + ".type", "sinusoid signals are scalar; dimension here is " + std::to_string(dim));
        const double ac = number(require(j, path, "center_amplitude"), path + ".center_amplitude");
        const double fc = number(require(j, path, "center_frequency_hz"), path + ".center_frequency_hz");
        const double ap = number(require(j, path, "radius_amplitude"), path + ".radius_amplitude");
        const double fp = number(require(j, path, "radius_frequency_hz"), path + ".radius_frequency_hz");
        if (ap < 0.0) fail(path + ".radius_amplitude", "must be >= 0");
        return sinusoid_box_signal(ac, fc, ap, fp);
    }
    if (type == "constant") {
        const Vec c = vector_of(require(j, path, "center"), path + ".center");
        const Vec p = vector_of(require(j, path, "radius"), path + ".radius");
        if (c.size() != dim || p.size() != dim) fail(path, "center and radius need " + std::to_string(dim) + " components");
        if ((p.array() < 0.0).any()) fail(path + ".radius", "must be >= 0");
        return constant_box_signal(c, p);
    }
    if (type == "sampled") {
        const json& tj = require(j, path, "times");
        if (!tj.is_array() || tj.size() < 2) fail(path + ".times", "expected at least two sample times");
        std::vector<double> times;
        for (std::size_t k = 0; k < tj.size(); ++k) times.push_back(number(tj[k], path + ".times[" + std::to_string(k) + "]"));
        auto centers = rows_of(require(j, path, "center"), path + ".center", dim);
        auto radii = rows_of(require(j, path, "radius"), path + ".radius", dim);
        if (centers.size() != times.size() || radii.size() != times.size()) {
            fail(path, "times, center and radius must have the same length");
        }
        Interpolation interp = Interpolation::Linear;
        if (auto it = j.find("interpolation"); it != j.end()) {
            const std::string s = string_of(*it, path + ".interpolation");
            if (s == "zoh") interp = Interpolation::ZeroOrderHold;
            else if (s != "linear") fail(path + ".interpolation", "expected 'linear' or 'zoh'");
        }
        for (std::size_t k = 0; k < radii.size(); ++k) {
            if ((radii[k].array() < 0.0).any()) fail(path + ".radius[" + std::to_string(k) + "]", "must be >= 0");
        }
        try {
            return sampled_box_signal(SampledSignal(times, std::move(centers), interp),
                                      SampledSignal(times, std::move(radii), interp));
        } catch (const InvalidArgument& e) {
            fail(path + ".times", e.what());
        }
    }
    fail(path + ".type", "unknown signal type '" + type + "' (sinusoid|constant|sampled)");
}

IntervalBox box_of(const json& j, const std::string& path, Eigen::Index dim) {
    Vec a, b;
    bool bounds = false;
    if (j.is_object() && j.contains("lower")) {
        a = vector_of(require(j, path, "lower"), path + ".lower");
        b = vector_of(require(j, path, "upper"), path + ".upper");
        bounds = true;
    } else {
        a = vector_of(require(j, path, "center"), path + ".center");
        b = vector_of(require(j, path, "radius"), path + ".radius");
    }
    if (a.size() != dim || b.size() != dim) fail(path, "expected " + std::to_string(dim) + " components");
    try {
        return bounds ? IntervalBox::from_bounds(a, b) : IntervalBox(a, b);
    } catch (const InvalidArgument& e) {
        fail(path, e.what());
    }
}

EstimatorSpec estimator_of(const json& j, const std::string& path, const LtiSystem& sys, const TimeGrid& grid,
                           bool has_v) {
    EstimatorSpec e;
    e.method = string_of(require(j, path, "method"), path + ".method");
    if (auto it = j.find("id"); it != j.end()) {
        e.id = string_of(*it, path + ".id");
    } else {
        e.id = e.method;
    }
    if (e.id.empty() || e.id.find_first_of("/\\") != std::string::npos) fail(path + ".id", "must be a plain file stem");
    if (e.method == "tightest" || e.method == "metzler") {
        return e;
    }
    if (e.method == "truncated") {
        e.window = number(require(j, path, "T"), path + ".T");
        try {
            (void)grid.steps_in(e.window);
        } catch (const InvalidArgument& ex) {
            fail(path + ".T", ex.what());
        }
        return e;
    }
    if (e.method == "constant_pw") {
        if (auto it = j.find("hull"); it != j.end()) {
            if (!it->is_boolean()) fail(path + ".hull", "expected true or false");
            e.hull = it->get<bool>();
        }
        return e;
    }
    if (e.method == "closed_loop") {
        if (!sys.C()) fail(path, "closed_loop needs system.C");
        if (!has_v) fail(path, "closed_loop needs a noise signal v");
        const bool has_gain = j.contains("L");
        const bool has_synth = j.contains("synthesize");
        if (has_gain == has_synth) fail(path, "give exactly one of 'L' or 'synthesize'");
        if (has_gain) {
            Mat L = matrix_of(j["L"], path + ".L");
            if (L.rows() != sys.n() || L.cols() != sys.ny()) fail(path + ".L", "must be n x n_y");
            e.gain = std::move(L);
        } else {
            if (!j["synthesize"].is_boolean() || !j["synthesize"].get<bool>()) {
                fail(path + ".synthesize", "expected true (solver settings live in 'synthesis')");
            }
            e.synthesize = true;
        }
        return e;
    }
    fail(path + ".method", "unknown method '" + e.method + "' (tightest|truncated|constant_pw|metzler|closed_loop)");
}

Scenario scenario_of(const json& root) {
    if (!root.is_object()) fail("$", "expected a JSON object");
    const std::string name = root.contains("name") ? string_of(root["name"], "name") : std::string("scenario");

    const json& sj = require(root, "$", "system");
    Mat A = matrix_of(require(sj, "system", "A"), "system.A");
    Mat B = matrix_of(require(sj, "system", "B"), "system.B");
    std::optional<Mat> C;
    if (sj.contains("C")) C = matrix_of(sj["C"], "system.C");
    if (!A.is_square()) fail("system.A", "must be square");
    if (B.rows() != A.rows()) fail("system.B", "must have as many rows as A");
    if (C && C->cols() != A.rows()) fail("system.C", "must have as many columns as A has rows");
    LtiSystem sys(std::move(A), std::move(B), std::move(C));

    IntervalBox x0 = box_of(require(root, "$", "x0"), "x0", sys.n());
    BoxSignal w = signal_of(require(root, "$", "w"), "w", sys.nw());
    std::optional<BoxSignal> v;
    if (root.contains("v")) {
        if (!sys.C()) fail("v", "noise signal given but system.C is missing");
        v = signal_of(root["v"], "v", sys.ny());
    }

    const double horizon = number(require(root, "$", "horizon"), "horizon");
    const double step = number(require(root, "$", "grid_step"), "grid_step");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) fail("horizon", "must be > 0 (seconds)");
    if (!(step > 0.0) || !std::isfinite(step)) fail("grid_step", "must be > 0 (seconds)");
    std::optional<TimeGrid> grid;
    try {
        grid = TimeGrid::from_horizon(horizon, step);
    } catch (const InvalidArgument& e) {
        fail("grid_step", e.what());
    }

    QuadratureSpec quad = estimator_quadrature();
    if (root.contains("quadrature")) {
        const json& q = root["quadrature"];
        if (q.contains("rule")) {
            const std::string r = string_of(q["rule"], "quadrature.rule");
            if (r == "trapezoid") quad.rule = QuadratureRule::Trapezoid;
            else if (r == "simpson") quad.rule = QuadratureRule::Simpson;
            else fail("quadrature.rule", "expected 'trapezoid' or 'simpson'");
        }
        if (q.contains("substeps")) {
            if (!q["substeps"].is_number_integer()) fail("quadrature.substeps", "expected an integer");
            quad.substeps = q["substeps"].get<int>();
        }
        try {
            quad.validate();
        } catch (const InvalidArgument& e) {
            fail("quadrature", e.what());
        }
    }
    OdeSpec ode;
    if (root.contains("ode")) {
        const json& o = root["ode"];
        if (o.contains("substeps")) {
            if (!o["substeps"].is_number_integer()) fail("ode.substeps", "expected an integer");
            ode.substeps = o["substeps"].get<int>();
        }
        try {
            ode.validate();
        } catch (const InvalidArgument& e) {
            fail("ode", e.what());
        }
    }

    const json& ej = require(root, "$", "estimators");
    if (!ej.is_array() || ej.empty()) fail("estimators", "expected at least one estimator");
    std::vector<EstimatorSpec> estimators;
    for (std::size_t i = 0; i < ej.size(); ++i) {
        const std::string path = "estimators[" + std::to_string(i) + "]";
        estimators.push_back(estimator_of(ej[i], path, sys, *grid, v.has_value()));
        for (std::size_t k = 0; k + 1 < estimators.size(); ++k) {
            if (estimators[k].id == estimators.back().id) fail(path + ".id", "duplicate id '" + estimators.back().id + "'");
        }
    }

    VerificationSpec ver;
    if (root.contains("verification")) {
        const json& vj = root["verification"];
        if (vj.contains("n_samples")) {
            if (!vj["n_samples"].is_number_unsigned() || vj["n_samples"].get<std::size_t>() < 1) {
                fail("verification.n_samples", "expected an integer >= 1");
            }
            ver.n_samples = vj["n_samples"].get<std::size_t>();
        }
        if (vj.contains("seed")) {
            if (!vj["seed"].is_number_unsigned()) fail("verification.seed", "expected a non-negative integer");
            ver.seed = vj["seed"].get<std::uint64_t>();
        }
        ver.slack = number_or(vj, "verification", "slack", ver.slack);
        if (!(ver.slack >= 0.0)) fail("verification.slack", "must be >= 0");
    }

    std::string out_dir = "out/" + name;
    if (root.contains("outputs")) {
        out_dir = string_of(require(root["outputs"], "outputs", "dir"), "outputs.dir");
    }
    double synth_alpha = 0.0;
    SolverOptions solver;
    if (root.contains("synthesis")) {
        const json& s = root["synthesis"];
        if (!s.is_object()) fail("synthesis", "expected an object");
        synth_alpha = number_or(s, "synthesis", "alpha", 0.0);
        if (!(synth_alpha >= 0.0)) fail("synthesis.alpha", "must be >= 0");
        solver.eps = number_or(s, "synthesis", "eps", solver.eps);
        if (!(solver.eps > 0.0 && solver.eps < 1.0)) fail("synthesis.eps", "must lie in (0, 1)");
        solver.gain_bound = number_or(s, "synthesis", "gain_bound", solver.gain_bound);
        if (!(solver.gain_bound > 0.0)) fail("synthesis.gain_bound", "must be > 0");
        for (const char* key : {"starts", "max_iterations"}) {
            if (!s.contains(key)) continue;
            if (!s[key].is_number_unsigned() || s[key].get<int>() < 1) {
                fail(std::string("synthesis.") + key, "expected an integer >= 1");
            }
            (std::string(key) == "starts" ? solver.starts : solver.max_iterations) = s[key].get<int>();
        }
        if (s.contains("seed")) {
            if (!s["seed"].is_number_unsigned()) fail("synthesis.seed", "expected a non-negative integer");
            solver.seed = s["seed"].get<std::uint64_t>();
        }
    }

    return Scenario{name,    std::move(sys), std::move(x0),        std::move(w),
                    std::move(v), horizon,   step,                 quad,
                    ode,     std::move(estimators), ver,            std::move(out_dir),
                    synth_alpha,  solver};
}

void merge_into(ContainmentReport& acc, const ContainmentReport& r) {
    if (acc.violations.empty()) {
        acc = r;
        return;
    }
    acc.samples += r.samples;
    for (std::size_t i = 0; i < acc.violations.size(); ++i) acc.violations[i] += r.violations[i];
    if (r.worst_margin < acc.worst_margin) {
        acc.worst_margin = r.worst_margin;
        acc.worst_node = r.worst_node;
        acc.worst_coord = r.worst_coord;
    }
    for (std::size_t k = 0; k < acc.gap_upper.size(); ++k) {
        acc.gap_upper[k] = acc.gap_upper[k].cwiseMin(r.gap_upper[k]);
        acc.gap_lower[k] = acc.gap_lower[k].cwiseMin(r.gap_lower[k]);
    }
}

Mat resolve_gain(const Scenario& sc, const EstimatorSpec& e) {
    if (e.gain) return *e.gain;
    const SynthesisResult res = synthesize_gain(sc.sys, sc.synthesis_alpha, sc.synthesis);
    if (const auto* inf = std::get_if<Infeasible>(&res)) {
        throw InfeasibleError("estimator '" + e.id + "': " + inf->diagnostics);
    }
    return std::get<GainCertificate>(res).L;
}

json report_of(const Scenario& sc, const ScenarioOutcome& out, bool verified) {
    json r;
    r["scenario"] = sc.name;
    r["verified"] = verified;
    r["samples"] = out.samples;
    r["seed"] = out.seed;
    r["slack"] = sc.verification.slack;
    r["realization_seeds"] = out.realization_seeds;
    r["passed"] = out.containment_passed;
    json runs = json::array();
    for (const auto& sr : out.runs) {
        json j;
        j["id"] = sr.id;
        j["method"] = sr.run.method;
        j["params"] = sr.run.params;
        j["bibo_certified"] = sr.run.bibo_certified;
        j["notes"] = sr.run.notes;
        if (sr.containment) {
            const auto& c = *sr.containment;
            j["containment"] = {{"violations", c.violations},
                                {"total_violations", c.total_violations()},
                                {"worst_margin", c.worst_margin},
                                {"worst_time", sr.run.times[c.worst_node]},
                                {"worst_coord", c.worst_coord + 1},
                                {"passed", c.passed()}};
        }
        runs.push_back(std::move(j));
    }
    r["runs"] = std::move(runs);
    return r;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario parse error: ") + e.what());
    }
    try {
        return scenario_of(root);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string csv_string(const EstimatorRun& run) {
    const Eigen::Index n = run.dimension();
    std::string out = "t";
    for (const char* col : {"c", "p", "lo", "hi"}) {
        for (Eigen::Index i = 1; i <= n; ++i) out += "," + std::string(col) + "_" + std::to_string(i);
    }
    out += '\n';
    char buf[32];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out += buf;
    };
    for (std::size_t k = 0; k < run.size(); ++k) {
        put(run.times[k]);
        const Vec lo = run.lower(k), hi = run.upper(k);
        for (const Vec* v : {&run.centers[k], &run.radii[k], &lo, &hi}) {
            for (Eigen::Index i = 0; i < n; ++i) {
                out += ',';
                put((*v)(i));
            }
        }
        out += '\n';
    }
    return out;
}

void write_csv(const EstimatorRun& run, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot write '" + path.string() + "'");
    }
    f << csv_string(run);
}

ScenarioOutcome run_scenario(const Scenario& sc, const RunOptions& opts) {
    const TimeGrid grid = sc.grid();
    ScenarioOutcome out;
    out.samples = opts.samples.value_or(sc.verification.n_samples);
    out.seed = opts.seed.value_or(sc.verification.seed);
    if (out.samples < 1) {
        throw ConfigError("samples must be >= 1");
    }

    bool closed_loop = false;
    for (const auto& e : sc.estimators) closed_loop = closed_loop || e.method == "closed_loop";
    const bool need_truths = opts.verify || closed_loop;
    const std::size_t count = opts.verify ? out.samples : 1;

    std::vector<TruthRealization> reals;
    std::vector<std::optional<TruthTrajectory>> truths;
    if (need_truths) {
        reals = sample_admissible(sc.sys, sc.x0, sc.w, sc.v, count, out.seed, grid, sc.ode);
        truths.resize(reals.size());
        detail::parallel_for(reals.size(), [&](std::size_t i) { truths[i] = simulate_truth(sc.sys, reals[i], grid, sc.ode); });
        for (const auto& r : reals) out.realization_seeds.push_back(r.seed);
    }
    std::vector<std::vector<Vec>> states;
    if (opts.verify) {
        for (auto& t : truths) states.push_back(t->states);
    }

    out.runs.resize(sc.estimators.size());
    for (std::size_t i = 0; i < sc.estimators.size(); ++i) {
        const EstimatorSpec& e = sc.estimators[i];
        ScenarioRun& slot = out.runs[i];
        slot.id = e.id;
        if (e.method == "tightest") {
            slot.run = tightest_estimate(sc.sys, sc.x0, sc.w, grid, sc.quad);
        } else if (e.method == "truncated") {
            slot.run = truncated_horizon_estimate(sc.sys, sc.x0, sc.w, grid, e.window, sc.quad);
        } else if (e.method == "constant_pw") {
            const BoxSignal w = e.hull ? constant_radius_hull(sc.w, HullSearch{sc.horizon}) : sc.w;
            slot.run = constant_pw_realization(sc.sys, sc.x0, w, grid, sc.ode, false);
            if (e.hull) slot.run.params["hull"] = 1.0;
        } else if (e.method == "metzler") {
            slot.run = metzler_ode_estimate(sc.sys, sc.x0, sc.w, grid, sc.ode);
        } else {
            const ObserverConfig obs = build_observer(sc.sys, resolve_gain(sc, e));
            std::vector<std::optional<EstimatorRun>> per(truths.size());
            detail::parallel_for(truths.size(), [&](std::size_t k) {
                const BoxSignal s = stack_closed_loop_signal(sc.w, *sc.v, truths[k]->outputs);
                per[k] = closed_loop_estimate(obs, sc.x0, s, grid, sc.ode);
            });
            slot.run = std::move(*per[0]);
            if (opts.verify) {
                ContainmentReport acc;
                for (std::size_t k = 0; k < per.size(); ++k) {
                    const EstimatorRun& r = k == 0 ? slot.run : *per[k];
                    merge_into(acc, containment_report(r, {states[k]}, sc.verification.slack));
                }
                slot.containment = std::move(acc);
            }
            continue;
        }
        if (opts.verify) {
            slot.containment = containment_report(slot.run, states, sc.verification.slack);
        }
    }
    for (const auto& r : out.runs) {
        if (r.containment && !r.containment->passed()) out.containment_passed = false;
    }
    out.report_json = report_of(sc, out, opts.verify).dump(2) + "\n";
    return out;
}

void write_outputs(const ScenarioOutcome& outcome, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& r : outcome.runs) {
        write_csv(r.run, dir / (r.id + ".csv"));
    }
    std::ofstream f(dir / "report.json", std::ios::binary);
    if (!f) {
        throw Error("cannot write '" + (dir / "report.json").string() + "'");
    }
    f << outcome.report_json;
}

}  // namespace intbox
