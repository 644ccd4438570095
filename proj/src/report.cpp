#include "progind/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "progind/error.hpp"

namespace progind {

using nlohmann::json;

void RunConfig::validate() const {
    auto bad = [](const std::string& what) { throw Error(Errc::invalid_config, what); };
    if (!(e_max > 0.0)) bad("e_max must be positive");
    if (!(learning_rate > 0.0)) bad("learning_rate must be positive");
    if (!(epsilon > 0.0)) bad("epsilon must be positive");
    if (max_opt_iters < 1) bad("max_opt_iters must be at least 1");
    if (!(tol >= 0.0)) bad("tol must be nonnegative");
    if (max_iterations < 1) bad("max_iterations must be at least 1");
    if (top_k < 1) bad("top_k must be at least 1");
    if (workers < 1) bad("workers must be at least 1");
    if (!(init_variance > 0.0)) bad("init_variance must be positive");
    if (weights.depth < 0 || weights.params < 0 || weights.vars < 0) bad("weights must be nonnegative");
}

SearchConfig RunConfig::search() const {
    SearchConfig s;
    s.optimizer.learning_rate = learning_rate;
    s.optimizer.epsilon = epsilon;
    s.optimizer.max_iters = max_opt_iters;
    s.optimizer.tol = tol;
    s.weights = weights;
    s.max_iterations = max_iterations;
    s.top_k = top_k;
    s.seed = seed;
    s.workers = workers;
    s.init_variance = init_variance;
    return s;
}

ErrorSpec RunConfig::error_spec() const { return ErrorSpec::standard(e_max); }

void merge_run_config_json(RunConfig& cfg, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(Errc::format_error, std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) throw Error(Errc::format_error, "config must be an object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "e_max") cfg.e_max = v.get<double>();
            else if (key == "learning_rate") cfg.learning_rate = v.get<double>();
            else if (key == "epsilon") cfg.epsilon = v.get<double>();
            else if (key == "max_opt_iters") cfg.max_opt_iters = v.get<int>();
            else if (key == "tol") cfg.tol = v.get<double>();
            else if (key == "max_iterations") cfg.max_iterations = v.get<int>();
            else if (key == "top_k") cfg.top_k = v.get<int>();
            else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
            else if (key == "workers") cfg.workers = v.get<int>();
            else if (key == "init_variance") cfg.init_variance = v.get<double>();
            else if (key == "weights") {
                const auto w = v.get<std::vector<double>>();
                if (w.size() != 3) throw Error(Errc::format_error, "weights must have three entries");
                cfg.weights = {w[0], w[1], w[2]};
            } else {
                throw Error(Errc::format_error, "unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw Error(Errc::format_error, std::string("bad config value: ") + e.what());
    }
}

RunConfig load_run_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::format_error, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    merge_run_config_json(base, ss.str());
    return base;
}

namespace {

json config_object(const RunConfig& c) {
    return {{"e_max", c.e_max},
            {"learning_rate", c.learning_rate},
            {"epsilon", c.epsilon},
            {"max_opt_iters", c.max_opt_iters},
            {"tol", c.tol},
            {"max_iterations", c.max_iterations},
            {"weights", {c.weights.depth, c.weights.params, c.weights.vars}},
            {"top_k", c.top_k},
            {"seed", c.seed},
            {"workers", c.workers},
            {"init_variance", c.init_variance}};
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

json candidate_object(const Candidate& c) {
    return {{"program", print_program(c.program(), c.opt.params)},
            {"program_exact", print_program(c.program(), c.opt.params, 17)},
            {"structure", c.key},
            {"loss", c.loss},
            {"complexity", c.complexity},
            {"f_total", c.f_total},
            {"executed_length", c.opt.result.executed_length}};
}

std::string candidate_line(const Candidate& c) {
    return print_program(c.program(), c.opt.params) + "  L=" + num(c.loss) + " C=" + num(c.complexity) +
           " f_total=" + num(c.f_total) + " T'=" + std::to_string(c.opt.result.executed_length);
}

} // namespace

std::string run_config_json(const RunConfig& cfg) { return config_object(cfg).dump(); }

std::string format_report(const SolutionSet& s, const RunConfig& cfg, const std::string& trace_path) {
    std::ostringstream out;
    out << "program induction report\n";
    out << "trace: " << trace_path << "\n";
    char wall[64];
    std::snprintf(wall, sizeof(wall), "%.3f", s.wall_seconds);
    out << "wall_time_s: " << wall << "\n\n";

    out << "[programs]\n";
    out << "status: " << (s.solution ? "accepted" : "no accepted solution") << "\n";
    out << "iterations: " << s.iterations << "\n";
    out << "optimised: " << s.optimised << "\n";
    if (s.solution) out << "solution: " << candidate_line(*s.solution) << "\n";
    for (std::size_t i = 0; i < s.top.size(); ++i) out << "top " << (i + 1) << ": " << candidate_line(s.top[i]) << "\n";
    out << "[/programs]\n\n";

    out << "[config]\n";
    const json cj = config_object(cfg);
    for (const auto& [k, v] : cj.items()) out << k << " = " << v.dump() << "\n";
    out << "[/config]\n\n";

    json doc;
    doc["trace"] = trace_path;
    doc["accepted"] = s.solution.has_value();
    doc["iterations"] = s.iterations;
    doc["optimised"] = s.optimised;
    doc["wall_time_s"] = s.wall_seconds;
    doc["solution"] = s.solution ? candidate_object(*s.solution) : json(nullptr);
    doc["top"] = json::array();
    for (const auto& c : s.top) doc["top"].push_back(candidate_object(c));
    doc["config"] = cj;
    out << "[json]\n" << doc.dump(2) << "\n[/json]\n";
    return out.str();
}

std::string program_section(const std::string& report) {
    const auto begin = report.find("[programs]");
    const auto end = report.find("[/programs]");
    if (begin == std::string::npos || end == std::string::npos) return {};
    return report.substr(begin, end + std::string("[/programs]").size() - begin);
}

} // namespace progind
