// progind: generate traces, induce programs, evaluate and enumerate.
//
// Exit codes: 0 success, 1 usage error, 2 input or format error,
// 3 induction finished without an accepted solution.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "progind/ast.hpp"
#include "progind/error.hpp"
#include "progind/experiments.hpp"
#include "progind/interpreter.hpp"
#include "progind/report.hpp"
#include "progind/search.hpp"
#include "progind/trace.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kInput = 2;
constexpr int kNoSolution = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw progind::Error(progind::Errc::format_error, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw progind::Error(progind::Errc::format_error, "cannot write '" + path + "'");
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    using namespace progind;

    CLI::App app{"Induce short typed programs that reproduce state-action traces"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Write a synthetic trace");
    std::string system;
    std::string sim_out;
    SecondOrderConfig so;
    PaddleConfig pc;
    sim->add_option("system", system, "pendulum | oscillator | paddle")
        ->required()
        ->check(CLI::IsMember({"pendulum", "oscillator", "paddle"}));
    sim->add_option("--out", sim_out, "Trace file to write")->required();
    auto* k1 = sim->add_option("--k1", so.k1);
    auto* k2 = sim->add_option("--k2", so.k2);
    auto* x0 = sim->add_option("--x0", so.x0);
    auto* v0 = sim->add_option("--v0", so.v0);
    auto* dt = sim->add_option("--dt", so.dt);
    auto* steps = sim->add_option("--steps", so.steps);
    sim->add_option("--c-agent", pc.c_agent);
    sim->add_option("--c-ball", pc.c_ball);
    sim->add_option("--deadband", pc.deadband);
    sim->add_option("--seed", pc.seed);

    // induce
    auto* ind = app.add_subcommand("induce", "Search for a program reproducing a trace");
    std::string trace_path, config_path, report_path;
    RunConfig flags;
    std::vector<double> weights;
    ind->add_option("--trace", trace_path)->required();
    ind->add_option("--config", config_path, "JSON run configuration");
    ind->add_option("--out", report_path, "Report file");
    auto* o_seed = ind->add_option("--seed", flags.seed);
    auto* o_workers = ind->add_option("--workers", flags.workers);
    auto* o_emax = ind->add_option("--e-max", flags.e_max);
    auto* o_lr = ind->add_option("--learning-rate", flags.learning_rate);
    auto* o_opt = ind->add_option("--max-opt-iters", flags.max_opt_iters);
    auto* o_iter = ind->add_option("--max-iterations", flags.max_iterations);
    auto* o_topk = ind->add_option("--top-k", flags.top_k);
    auto* o_w = ind->add_option("--weights", weights, "depth params vars")->expected(3);

    // eval
    auto* ev = app.add_subcommand("eval", "Execute a program against a trace");
    std::string program_path, eval_trace;
    double eval_emax = RunConfig{}.e_max;
    std::string eval_config;
    ev->add_option("--program", program_path)->required();
    ev->add_option("--trace", eval_trace)->required();
    ev->add_option("--config", eval_config, "JSON run configuration (e_max)");
    auto* ev_emax = ev->add_option("--e-max", eval_emax);

    // enumerate
    auto* en = app.add_subcommand("enumerate", "Count program structures up to a depth");
    int enum_depth = 2;
    std::string enum_trace;
    en->add_option("--depth", enum_depth)->required()->check(CLI::NonNegativeNumber);
    en->add_option("--trace", enum_trace)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    try {
        if (sim->parsed()) {
            ObservationTrace trace;
            if (system == "paddle") {
                trace = simulate_paddle(pc);
            } else {
                SecondOrderConfig cfg = system == "pendulum" ? SecondOrderConfig::pendulum() : SecondOrderConfig::oscillator();
                if (k1->count()) cfg.k1 = so.k1;
                if (k2->count()) cfg.k2 = so.k2;
                if (x0->count()) cfg.x0 = so.x0;
                if (v0->count()) cfg.v0 = so.v0;
                if (dt->count()) cfg.dt = so.dt;
                if (steps->count()) cfg.steps = so.steps;
                trace = simulate_second_order(cfg);
            }
            save_trace_file(trace, sim_out);
            std::cout << "wrote " << trace.length() << " steps to " << sim_out << "\n";
            return 0;
        }

        if (ind->parsed()) {
            const ObservationTrace trace = load_trace_file(trace_path);
            RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config_file(config_path);
            if (o_seed->count()) cfg.seed = flags.seed;
            if (o_workers->count()) cfg.workers = flags.workers;
            if (o_emax->count()) cfg.e_max = flags.e_max;
            if (o_lr->count()) cfg.learning_rate = flags.learning_rate;
            if (o_opt->count()) cfg.max_opt_iters = flags.max_opt_iters;
            if (o_iter->count()) cfg.max_iterations = flags.max_iterations;
            if (o_topk->count()) cfg.top_k = flags.top_k;
            if (o_w->count()) cfg.weights = {weights[0], weights[1], weights[2]};
            try {
                cfg.validate();
            } catch (const Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kUsage;
            }
            const SolutionSet result = induce(trace, Registry::standard(trace.schema()), cfg.error_spec(), cfg.search());
            const std::string report = format_report(result, cfg, trace_path);
            if (!report_path.empty()) write_file(report_path, report);
            std::cout << program_section(report) << "\n";
            return result.solution ? 0 : kNoSolution;
        }

        if (ev->parsed()) {
            const ObservationTrace trace = load_trace_file(eval_trace);
            RunConfig cfg = eval_config.empty() ? RunConfig{} : load_run_config_file(eval_config);
            if (ev_emax->count()) cfg.e_max = eval_emax;
            const ErrorSpec spec = cfg.error_spec();
            const ParsedProgram parsed = parse_program(read_file(program_path), Registry::standard(trace.schema()),
                                                       trace.schema());
            const ExecutionResult r = execute(parsed.program, parsed.params, trace, spec);
            double max_err = 0.0, sum = 0.0;
            int above = 0;
            for (double e : r.step_errors) {
                max_err = std::max(max_err, e);
                sum += e;
                if (e > spec.e_max) ++above;
            }
            const bool ok = matches(r, spec);
            std::printf("program: %s\n", print_program(parsed.program, parsed.params).c_str());
            std::printf("L: %.10g\n", r.loss);
            std::printf("T: %d\nT': %d\n", r.observed_length, r.executed_length);
            std::printf("step_error_mean: %.6g\nstep_error_max: %.6g\nsteps_above_e_max: %d\n",
                        r.step_errors.empty() ? 0.0 : sum / static_cast<double>(r.step_errors.size()), max_err,
                        above);
            std::printf("matches: %s\n", ok ? "true" : "false");
            return 0;
        }

        if (en->parsed()) {
            const ObservationTrace trace = load_trace_file(enum_trace);
            const auto count = enumerate_programs(Registry::standard(trace.schema()), trace.schema(), enum_depth);
            std::printf("depth<=%d structures: %llu\n", enum_depth, static_cast<unsigned long long>(count));
            std::printf("grammar: actions at the root only; each leaf is a free parameter '?' or a variable of "
                        "matching dimension; functions add, sub, scale; depth counts edges from the action root\n");
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::invalid_config ? kUsage : kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
    return kUsage;
}
