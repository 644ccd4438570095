#include "progind/trace.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "progind/error.hpp"

namespace progind {

using nlohmann::json;

ObservationTrace::ObservationTrace(TraceSchema schema, std::vector<TraceStep> steps)
    : schema_(std::move(schema)), steps_(std::move(steps)) {
    if (steps_.empty()) throw Error(Errc::format_error, "trace must contain at least one step");
    if (schema_.actions.empty()) throw Error(Errc::format_error, "schema declares no actions");
    for (const auto& [name, dim] : schema_.variables) {
        if (dim < 1) throw Error(Errc::dimension_mismatch, "variable '" + name + "' has dimension < 1");
        var_names_.push_back(name);
        var_dims_.push_back(dim);
    }
    for (const auto& [name, dim] : schema_.actions)
        if (dim < 1) throw Error(Errc::dimension_mismatch, "action '" + name + "' has dimension < 1");

    const std::size_t T = steps_.size();
    columns_.resize(var_names_.size());
    for (std::size_t v = 0; v < var_names_.size(); ++v)
        columns_[v].reserve(T * static_cast<std::size_t>(var_dims_[v]));

    for (std::size_t i = 0; i < T; ++i) {
        const TraceStep& s = steps_[i];
        const std::string at = " at step " + std::to_string(s.t);
        if (s.t != static_cast<int>(i) + 1)
            throw Error(Errc::non_contiguous_timesteps, "expected t=" + std::to_string(i + 1) +
                                                            ", got t=" + std::to_string(s.t));
        for (std::size_t v = 0; v < var_names_.size(); ++v) {
            auto it = s.vars.find(var_names_[v]);
            if (it == s.vars.end()) throw Error(Errc::missing_variable, "missing variable '" + var_names_[v] + "'" + at);
            if (static_cast<int>(it->second.size()) != var_dims_[v])
                throw Error(Errc::dimension_mismatch, "variable '" + var_names_[v] + "' has wrong dimension" + at);
            columns_[v].insert(columns_[v].end(), it->second.begin(), it->second.end());
        }
        for (const auto& [name, value] : s.vars)
            if (!schema_.variables.contains(name))
                throw Error(Errc::format_error, "undeclared variable '" + name + "'" + at);
        auto act = schema_.actions.find(s.action);
        if (act == schema_.actions.end()) throw Error(Errc::format_error, "undeclared action '" + s.action + "'" + at);
        if (static_cast<int>(s.theta.size()) != act->second)
            throw Error(Errc::dimension_mismatch, "theta of length " + std::to_string(s.theta.size()) +
                                                      " for action '" + s.action + "'" + at);
    }
}

int ObservationTrace::variable_id(const std::string& name) const {
    for (std::size_t i = 0; i < var_names_.size(); ++i)
        if (var_names_[i] == name) return static_cast<int>(i);
    return -1;
}

const TraceStep& ObservationTrace::step(int t) const {
    if (t < 1 || t > length())
        throw Error(Errc::out_of_range, "timestep " + std::to_string(t) + " outside 1.." + std::to_string(length()));
    return steps_[static_cast<std::size_t>(t - 1)];
}

std::span<const double> ObservationTrace::value(int var_id, int t) const {
    const auto dim = static_cast<std::size_t>(var_dims_[static_cast<std::size_t>(var_id)]);
    return {columns_[static_cast<std::size_t>(var_id)].data() + static_cast<std::size_t>(t - 1) * dim, dim};
}

std::span<const double> ObservationTrace::theta(int t) const {
    const Vec& th = step(t).theta;
    return {th.data(), th.size()};
}

namespace {

Vec read_vector(const json& j, const std::string& what) {
    if (!j.is_array()) throw Error(Errc::format_error, what + " must be an array of numbers");
    Vec out;
    out.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw Error(Errc::format_error, what + " must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::map<std::string, int> read_dims(const json& j, const std::string& what) {
    if (!j.is_object()) throw Error(Errc::format_error, "schema." + what + " must be an object");
    std::map<std::string, int> out;
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number_integer()) throw Error(Errc::format_error, "dimension of '" + k + "' must be an integer");
        out[k] = v.get<int>();
    }
    return out;
}

const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw Error(Errc::format_error, std::string("missing field '") + name + "'");
    return *it;
}

} // namespace

ObservationTrace load_trace(std::istream& in) {
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(Errc::format_error, std::string("malformed trace document: ") + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::format_error, "trace document must be an object");
    const json& schema_j = field(doc, "schema");
    TraceSchema schema;
    schema.variables = read_dims(field(schema_j, "variables"), "variables");
    schema.actions = read_dims(field(schema_j, "actions"), "actions");

    const json& steps_j = field(doc, "steps");
    if (!steps_j.is_array()) throw Error(Errc::format_error, "'steps' must be an array");
    std::vector<TraceStep> steps;
    steps.reserve(steps_j.size());
    for (const auto& sj : steps_j) {
        if (!sj.is_object()) throw Error(Errc::format_error, "each step must be an object");
        TraceStep s;
        const json& tj = field(sj, "t");
        if (!tj.is_number_integer()) throw Error(Errc::format_error, "'t' must be an integer");
        s.t = tj.get<int>();
        const json& vars = field(sj, "vars");
        if (!vars.is_object()) throw Error(Errc::format_error, "'vars' must be an object");
        for (const auto& [name, value] : vars.items()) s.vars[name] = read_vector(value, "variable '" + name + "'");
        const json& act = field(sj, "action");
        const json& name = field(act, "name");
        if (!name.is_string()) throw Error(Errc::format_error, "action name must be a string");
        s.action = name.get<std::string>();
        s.theta = read_vector(field(act, "theta"), "theta");
        steps.push_back(std::move(s));
    }
    return ObservationTrace(std::move(schema), std::move(steps));
}

ObservationTrace load_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::format_error, "cannot open trace file '" + path + "'");
    return load_trace(in);
}

void save_trace(const ObservationTrace& trace, std::ostream& out) {
    json doc;
    doc["schema"]["variables"] = trace.schema().variables;
    doc["schema"]["actions"] = trace.schema().actions;
    json steps = json::array();
    for (const auto& s : trace.steps()) {
        json sj;
        sj["t"] = s.t;
        sj["vars"] = s.vars;
        sj["action"]["name"] = s.action;
        sj["action"]["theta"] = s.theta;
        steps.push_back(std::move(sj));
    }
    doc["steps"] = std::move(steps);
    // nlohmann prints doubles with round-trip precision.
    out << doc.dump(1) << '\n';
}

void save_trace_file(const ObservationTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::format_error, "cannot write trace file '" + path + "'");
    save_trace(trace, out);
}

MemoryState memory_at(const ObservationTrace& trace, int t, const ParamValues& params) {
    const TraceStep& s = trace.step(t);
    return MemoryState{t, s.vars, params};
}

} // namespace progind
