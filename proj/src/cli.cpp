#include "vncrit/cli.hpp"

#include <CLI11.hpp>
#include <array>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <limits>
#include <nlohmann/json.hpp>

namespace vncrit::cli {

namespace {

using io::Json;

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

std::string num(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

Json envelope(const std::string& command, Json config, Json report) {
    Json j;
    j["schema"] = kSchema;
    j["tool"] = Json{{"name", kToolName}, {"version", kToolVersion}};
    j["command"] = command;
    j["config"] = std::move(config);
    j["timestamp"] = iso_timestamp();
    j["report"] = std::move(report);
    return j;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        io::write_text_file(out_path, text);
    }
}

void emit_json(const std::string& out_path, const Json& j) { emit(out_path, j.dump(2)); }

Eigen::Vector2cd parse_amplitudes(const std::string& text) {
    Json parsed;
    try {
        parsed = Json::parse("[" + text + "]");
    } catch (const nlohmann::json::parse_error&) {
        throw Error(Errc::BadFlag, "amplitudes must look like '[re,im],[re,im]'");
    }
    if (!parsed.is_array() || parsed.size() != 2)
        throw Error(Errc::BadFlag, "exactly two input amplitudes are required");
    Eigen::Vector2cd a;
    a << io::complex_from_json(parsed[0]), io::complex_from_json(parsed[1]);
    return a;
}

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::InternalError:
        case Errc::ConvergenceFailure:
        case Errc::SolverFailure:
            return 1;
        default:
            return 2;
    }
}

// Model vs quantum moments, all tags, powers 1 and 2.
Json moment_comparison_table(const hv::HiddenVariableModel& model, const HermitianOperator& a,
                             const HermitianOperator& b, const DensityMatrix& rho) {
    Json table = Json::array();
    const HermitianOperator c = op_sub(b, a);
    for (const auto& alphabet : model.alphabets) {
        const HermitianOperator* x = nullptr;
        switch (alphabet.label) {
            case ObservableTag::A: x = &a; break;
            case ObservableTag::B: x = &b; break;
            case ObservableTag::C: x = &c; break;
        }
        for (int power = 1; power <= 2; ++power) {
            const double model_value = hv::moment(model, alphabet.label, power);
            const double quantum_value =
                expectation(rho, power == 1 ? *x : op_square(*x));
            Json row;
            row["tag"] = tag_name(alphabet.label);
            row["power"] = power;
            row["model"] = model_value;
            row["quantum"] = quantum_value;
            row["abs_dev"] = std::abs(model_value - quantum_value);
            table.push_back(std::move(row));
        }
    }
    return table;
}

}  // namespace

PaperPipelineReport paper_pipeline(std::uint64_t seed, int workers) {
    const auto [a, b] = criterion::canonical_pair();
    const HermitianOperator c = op_sub(b, a);

    PaperPipelineReport out;
    out.validity = criterion::check_triple(a, b);

    const criterion::OptimalViolation optimal = criterion::optimal_violation_state(a, b);
    out.optimal_margin = optimal.margin;
    out.optimal_amplitudes = optimal.amplitudes;
    out.criterion_report = criterion::evaluate_criterion(a, b, optimal.rho);

    const hv::HiddenVariableModel pair_model = hv::build_pair_model(a, b, optimal.rho);
    out.hv_pair_moments = moment_comparison_table(pair_model, a, b, optimal.rho);
    double max_moment_dev = 0.0;
    for (const Json& row : out.hv_pair_moments)
        max_moment_dev = std::max(max_moment_dev, row.at("abs_dev").get<double>());

    const hv::HiddenVariableModel triple_model = hv::build_triple_model(a, b, optimal.rho);
    out.hv_audit = hv::audit_valuations(triple_model, 100000, seed, workers);

    const Eigen::Vector2cd reference(Complex(0.391, 0.0), Complex(0.920, 0.0));
    out.optics_comparisons = Json::array();
    const std::array<std::pair<ObservableTag, const HermitianOperator*>, 3> tunings = {
        std::make_pair(ObservableTag::A, &a), std::make_pair(ObservableTag::B, &b),
        std::make_pair(ObservableTag::C, &c)};
    for (const auto& [tag, x] : tunings) {
        const double deviation = optics::compare_with_quantum(*x, reference);
        Json row;
        row["tag"] = tag_name(tag);
        row["deviation"] = deviation;
        out.optics_comparisons.push_back(std::move(row));
        out.optics_deviation = std::max(out.optics_deviation, deviation);
    }

    const phasespace::PhaseSpaceGrid grid =
        phasespace::build_grid(phasespace::kDefaultGridRadius, phasespace::kDefaultGridResolution);
    out.lp = phasespace::classical_p_feasibility(a, b, optimal.rho, grid,
                                                 phasespace::kDefaultDelta);

    out.verdict_lines.push_back("triple validity: " + std::string(out.validity.all() ? "ok" : "FAILED") +
                                " (min eigenvalues " + num(out.validity.min_eig_a) + ", " +
                                num(out.validity.min_eig_b) + ", " + num(out.validity.min_eig_diff) +
                                ")");
    out.verdict_lines.push_back("criterion: " +
                                std::string(out.criterion_report.violated ? "violated" : "satisfied") +
                                " with margin " + num(out.criterion_report.violation_margin) +
                                " at the optimal state");
    out.verdict_lines.push_back("pair hidden-variable model reproduces every moment, max |dev| = " +
                                num(max_moment_dev));
    out.verdict_lines.push_back(
        "triple-model audit: min v(C) = " + num(out.hv_audit.min_vC) + ", frac v(B)<v(A) = " +
        num(out.hv_audit.frac_negative_diff) + ", sum-rule fraction = " +
        num(out.hv_audit.frac_sum_rule_holds));
    out.verdict_lines.push_back("classical interferometer max deviation from quantum: " +
                                num(out.optics_deviation));
    out.verdict_lines.push_back(
        "phase-space distribution: " +
        std::string(out.lp.status == phasespace::FeasibilityStatus::Infeasible ? "infeasible"
                                                                               : "feasible") +
        " (LP residual " + num(out.lp.residual) + ", delta " + num(out.lp.delta) + ")");
    return out;
}

namespace {

void run_paper(const std::string& out_path, std::uint64_t seed, int workers) {
    const PaperPipelineReport pipeline = paper_pipeline(seed, workers);

    Json report;
    report["validity"] = io::triple_validity_to_json(pipeline.validity);
    report["optimal"] = Json{{"margin", pipeline.optimal_margin},
                             {"amplitudes", io::vector_to_json(pipeline.optimal_amplitudes)}};
    report["criterion"] = io::criterion_report_to_json(pipeline.criterion_report);
    report["hv_pair_moments"] = pipeline.hv_pair_moments;
    report["hv_audit"] = io::valuation_audit_to_json(pipeline.hv_audit);
    report["optics"] = Json{{"comparisons", pipeline.optics_comparisons},
                            {"max_deviation", pipeline.optics_deviation}};
    report["lp"] = io::feasibility_to_json(pipeline.lp);
    report["verdict_lines"] = pipeline.verdict_lines;

    Json config;
    config["seed"] = seed;
    config["workers"] = workers;
    config["audit_samples"] = 100000;
    config["grid_radius"] = phasespace::kDefaultGridRadius;
    config["grid_resolution"] = phasespace::kDefaultGridResolution;
    config["delta"] = phasespace::kDefaultDelta;

    emit_json(out_path, envelope("paper", std::move(config), std::move(report)));
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"quantumness-criterion toolkit: criterion checks, hidden-variable counter-models, "
                 "classical interferometer simulation, and phase-space LP feasibility"};
    app.require_subcommand(1);

    // ---- criterion ----
    auto* crit = app.add_subcommand("criterion", "criterion evaluation and operator-pair sweeps");
    crit->require_subcommand(1);

    std::string pair_path, state_path, out_path;
    std::uint64_t seed = 0;
    int trials = 1000, dim = 2, workers = 1;

    auto* check = crit->add_subcommand("check", "validate a triple and evaluate the criterion");
    check->add_option("--pair", pair_path, "pair.json with operators a, b")->required();
    check->add_option("--state", state_path, "state.json with amplitudes or rho");
    check->add_option("-o,--output", out_path, "report path (stdout when omitted)");
    check->callback([&]() {
        const auto [a, b] = io::load_pair(pair_path);
        Json report;
        report["validity"] = io::triple_validity_to_json(criterion::check_triple(a, b));
        Json config{{"pair", pair_path}};
        if (!state_path.empty()) {
            PureStateInfo info;
            const DensityMatrix rho = io::load_state(state_path, &info);
            report["criterion"] =
                io::criterion_report_to_json(criterion::evaluate_criterion(a, b, rho));
            report["state_norm"] = info.norm;
            report["state_renormalized"] = info.renormalized;
            config["state"] = state_path;
        }
        emit_json(out_path, envelope("criterion check", std::move(config), std::move(report)));
    });

    auto* optimize = crit->add_subcommand("optimize", "find the maximally violating state");
    optimize->add_option("--pair", pair_path, "pair.json with operators a, b")->required();
    optimize->add_option("-o,--output", out_path, "report path (stdout when omitted)");
    optimize->callback([&]() {
        const auto [a, b] = io::load_pair(pair_path);
        const criterion::OptimalViolation optimal = criterion::optimal_violation_state(a, b);
        Json report;
        report["margin"] = optimal.margin;
        report["amplitudes"] = io::vector_to_json(optimal.amplitudes);
        report["criterion"] =
            io::criterion_report_to_json(criterion::evaluate_criterion(a, b, optimal.rho));
        emit_json(out_path, envelope("criterion optimize", Json{{"pair", pair_path}},
                                     std::move(report)));
    });

    bool commuting = false;
    auto* sweep = crit->add_subcommand("sweep", "margin sweep over generated operator pairs");
    sweep->add_flag("--commuting", commuting, "sweep commuting pairs (required)");
    sweep->add_option("--trials", trials, "number of pairs")->required();
    sweep->add_option("--dim", dim, "operator dimension")->required();
    sweep->add_option("--seed", seed, "base seed")->required();
    sweep->add_option("--workers", workers, "worker threads (does not change results)");
    sweep->add_option("-o,--output", out_path, "report path (stdout when omitted)");
    sweep->callback([&]() {
        if (!commuting)
            throw Error(Errc::BadFlag, "only --commuting sweeps are defined; pass --commuting");
        if (trials < 0) throw Error(Errc::BadFlag, "--trials must be >= 0");
        const criterion::SweepReport report = criterion::commuting_sweep(trials, dim, seed, workers);
        Json config{{"commuting", true}, {"trials", trials}, {"dim", dim}, {"seed", seed},
                    {"workers", workers}};
        emit_json(out_path, envelope("criterion sweep", std::move(config),
                                     io::sweep_report_to_json(report)));
    });

    // ---- hv ----
    auto* hv_cmd = app.add_subcommand("hv", "hidden-variable counter-models");
    hv_cmd->require_subcommand(1);

    std::string kind = "pair", model_path, format = "json";
    long long n = 100000;

    auto* build = hv_cmd->add_subcommand("build", "build a product model from a pair and a state");
    build->add_option("--kind", kind, "pair | triple")->check(CLI::IsMember({"pair", "triple"}));
    build->add_option("--pair", pair_path, "pair.json with operators a, b")->required();
    build->add_option("--state", state_path, "state.json with amplitudes or rho")->required();
    build->add_option("-o,--output", out_path, "model path (stdout when omitted)");
    build->callback([&]() {
        const auto [a, b] = io::load_pair(pair_path);
        const DensityMatrix rho = io::load_state(state_path);
        const hv::HiddenVariableModel model = kind == "triple"
                                                  ? hv::build_triple_model(a, b, rho)
                                                  : hv::build_pair_model(a, b, rho);
        Json config{{"kind", kind}, {"pair", pair_path}, {"state", state_path}};
        emit_json(out_path, envelope("hv build", std::move(config), io::model_to_json(model)));
    });

    auto* sample_cmd = hv_cmd->add_subcommand("sample", "draw from a model and report counts");
    sample_cmd->add_option("--model", model_path, "model.json from hv build")->required();
    sample_cmd->add_option("-n,--samples", n, "number of draws")->required();
    sample_cmd->add_option("--seed", seed, "base seed")->required();
    sample_cmd->add_option("--workers", workers, "worker threads (does not change results)");
    sample_cmd->add_option("--format", format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sample_cmd->add_option("-o,--output", out_path, "report path (stdout when omitted)");
    sample_cmd->callback([&]() {
        const Json model_file = io::read_json_file(model_path);
        const hv::HiddenVariableModel model = io::model_from_json(
            model_file.contains("report") ? model_file.at("report") : model_file);
        const hv::EmpiricalReport report = hv::sample(model, n, seed, workers);
        if (format == "csv") {
            emit(out_path, io::empirical_report_to_csv(model, report));
            return;
        }
        Json config{{"model", model_path}, {"n", n}, {"seed", seed}, {"workers", workers}};
        emit_json(out_path, envelope("hv sample", std::move(config),
                                     io::empirical_report_to_json(model, report)));
    });

    auto* audit = hv_cmd->add_subcommand("audit", "valuation audit of a triple model");
    audit->add_option("--model", model_path, "model.json from hv build --kind triple")->required();
    audit->add_option("-n,--samples", n, "number of draws")->required();
    audit->add_option("--seed", seed, "base seed")->required();
    audit->add_option("--workers", workers, "worker threads (does not change results)");
    audit->add_option("-o,--output", out_path, "report path (stdout when omitted)");
    audit->callback([&]() {
        const Json model_file = io::read_json_file(model_path);
        const hv::HiddenVariableModel model = io::model_from_json(
            model_file.contains("report") ? model_file.at("report") : model_file);
        const hv::ValuationAudit result = hv::audit_valuations(model, n, seed, workers);
        Json config{{"model", model_path}, {"n", n}, {"seed", seed}, {"workers", workers}};
        emit_json(out_path, envelope("hv audit", std::move(config),
                                     io::valuation_audit_to_json(result)));
    });

    // ---- optics ----
    auto* optics_cmd = app.add_subcommand("optics", "classical two-port interferometer simulation");
    optics_cmd->require_subcommand(1);

    std::string observable_path, amplitudes_text, signal_name = "constant", tag_text = "A";
    int signal_n = 4096;

    auto* simulate = optics_cmd->add_subcommand("simulate", "weighted detector averages");
    simulate->add_option("--observable", observable_path, "obs.json with a 2x2 matrix")->required();
    simulate->add_option("--amplitudes", amplitudes_text, "input amplitudes '[re,im],[re,im]'")
        ->required();
    simulate->add_option("--signal", signal_name, "constant | gaussian-noise | chirp");
    simulate->add_option("--n", signal_n, "signal sample count");
    simulate->add_option("--seed", seed, "signal seed");
    simulate->add_option("--tag", tag_text, "observable tag for the tuning (A | B | C)");
    simulate->add_option("-o,--output", out_path, "report path (stdout when omitted)");
    simulate->callback([&]() {
        const HermitianOperator x = io::load_observable(observable_path);
        const Eigen::Vector2cd amps = parse_amplitudes(amplitudes_text);
        const optics::InterferometerTuning tuning =
            optics::tuning_from_observable(x, tag_from_name(tag_text));
        const optics::ClassicalSignal signal =
            optics::generate_signal(optics::signal_kind_from_name(signal_name), signal_n, seed);
        const optics::OpticsResult result = optics::simulate(tuning, amps, signal);

        CVector amps_v(2);
        amps_v << amps(0), amps(1);
        const double quantum = expectation(make_pure_state(amps_v), x);

        Json report = io::optics_result_to_json(result);
        report["quantum_reference"] = quantum;
        report["deviation"] = std::abs(result.weighted_average - quantum);
        report["weights"] = Json::array({tuning.weights[0], tuning.weights[1]});

        Json config{{"observable", observable_path}, {"amplitudes", amplitudes_text},
                    {"signal", signal_name}, {"n", signal_n}, {"seed", seed}, {"tag", tag_text}};
        emit_json(out_path, envelope("optics simulate", std::move(config), std::move(report)));
    });

    auto* compare = optics_cmd->add_subcommand("compare", "deviation from the quantum prediction");
    compare->add_option("--observable", observable_path, "obs.json with a 2x2 matrix")->required();
    compare->add_option("--amplitudes", amplitudes_text, "input amplitudes '[re,im],[re,im]'")
        ->required();
    compare->add_option("-o,--output", out_path, "report path (stdout when omitted)");
    compare->callback([&]() {
        const HermitianOperator x = io::load_observable(observable_path);
        const Eigen::Vector2cd amps = parse_amplitudes(amplitudes_text);
        const double deviation = optics::compare_with_quantum(x, amps);

        CVector amps_v(2);
        amps_v << amps(0), amps(1);
        Json report;
        report["deviation"] = deviation;
        report["quantum_reference"] = expectation(make_pure_state(amps_v), x);
        Json config{{"observable", observable_path}, {"amplitudes", amplitudes_text}};
        emit_json(out_path, envelope("optics compare", std::move(config), std::move(report)));
    });

    // ---- phasespace ----
    auto* phase = app.add_subcommand("phasespace", "phase-space distribution feasibility");
    phase->require_subcommand(1);

    double radius = phasespace::kDefaultGridRadius, delta = phasespace::kDefaultDelta;
    int resolution = phasespace::kDefaultGridResolution;

    auto* feasibility = phase->add_subcommand("feasibility",
                                              "LP feasibility of a classical grid distribution");
    feasibility->add_option("--pair", pair_path, "pair.json with operators a, b")->required();
    feasibility->add_option("--state", state_path, "state.json with amplitudes or rho")->required();
    feasibility->add_option("--radius", radius, "grid radius");
    feasibility->add_option("--resolution", resolution, "grid points per axis (odd)");
    feasibility->add_option("--delta", delta, "moment slack");
    feasibility->add_option("-o,--output", out_path, "report path (stdout when omitted)");
    feasibility->callback([&]() {
        const auto [a, b] = io::load_pair(pair_path);
        const DensityMatrix rho = io::load_state(state_path);
        const phasespace::PhaseSpaceGrid grid = phasespace::build_grid(radius, resolution);

        std::vector<std::string> warnings;
        const criterion::CriterionReport crit_report = criterion::evaluate_criterion(a, b, rho);
        if (crit_report.violated && delta >= crit_report.violation_margin / 2.0) {
            warnings.push_back("delta " + num(delta) +
                               " is not below half the violation margin " +
                               num(crit_report.violation_margin) +
                               "; infeasibility is no longer guaranteed");
        }
        for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

        const phasespace::FeasibilityResult result =
            phasespace::classical_p_feasibility(a, b, rho, grid, delta);

        // Pointwise-order summary over the grid.
        double min_a_sym = std::numeric_limits<double>::infinity();
        double min_gap_sym = std::numeric_limits<double>::infinity();
        for (const Complex alpha : grid.points) {
            const double qa = phasespace::q_symbol(a, alpha);
            const double qb = phasespace::q_symbol(b, alpha);
            min_a_sym = std::min(min_a_sym, qa);
            min_gap_sym = std::min(min_gap_sym, qb - qa);
        }

        Json report = io::feasibility_to_json(result);
        report["criterion"] = io::criterion_report_to_json(crit_report);
        report["pointwise_order"] =
            Json{{"min_A_symbol", min_a_sym}, {"min_B_minus_A_symbol", min_gap_sym}};
        report["warnings"] = warnings;

        Json config{{"pair", pair_path}, {"state", state_path}, {"radius", radius},
                    {"resolution", resolution}, {"delta", delta}};
        emit_json(out_path, envelope("phasespace feasibility", std::move(config),
                                     std::move(report)));
    });

    // ---- paper ----
    auto* paper = app.add_subcommand("paper", "one-shot demonstration pipeline on the canonical pair");
    paper->add_option("--seed", seed, "sampling seed");
    paper->add_option("--workers", workers, "worker threads (does not change results)");
    paper->add_option("-o,--output", out_path, "report path (stdout when omitted)");
    paper->callback([&]() { run_paper(out_path, seed, workers); });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back(kToolName);
    for (const std::string& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        const std::string code =
            std::string(e.get_name()) == "ExtrasError" ? "UnknownCommand" : "BadFlag";
        Json err;
        err["schema"] = kSchema;
        err["error"] = Json{{"code", code}, {"message", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    } catch (const Error& e) {
        Json err;
        err["schema"] = kSchema;
        err["error"] = Json{{"code", errc_name(e.code())}, {"message", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        Json err;
        err["schema"] = kSchema;
        err["error"] = Json{{"code", "InternalError"}, {"message", e.what()}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace vncrit::cli
