#include "progind/interpreter.hpp"

#include <cmath>

#include "progind/error.hpp"

namespace progind {

ActionError euclidean_action_error(double mismatch_penalty) {
    ActionError e;
    e.value = [mismatch_penalty](std::string_view pred, std::span<const double> th_hat, std::string_view obs,
                                 std::span<const double> th) {
        double s = 0.0;
        if (th_hat.size() == th.size()) {
            for (std::size_t i = 0; i < th.size(); ++i) {
                const double d = th_hat[i] - th[i];
                s += d * d;
            }
        }
        double err = std::sqrt(s);
        if (pred != obs || th_hat.size() != th.size()) err += mismatch_penalty;
        return err;
    };
    e.gradient = [](std::span<const double> th_hat, std::span<const double> th, std::span<double> g) {
        double s = 0.0;
        for (std::size_t i = 0; i < th.size(); ++i) {
            const double d = th_hat[i] - th[i];
            s += d * d;
        }
        const double norm = std::sqrt(s);
        // Subgradient 0 at the kink.
        for (std::size_t i = 0; i < th.size(); ++i) g[i] = norm > 0.0 ? (th_hat[i] - th[i]) / norm : 0.0;
    };
    return e;
}

ErrorSpec ErrorSpec::standard(double e_max) {
    ErrorSpec s;
    s.e_max = e_max;
    s.sigma_act = euclidean_action_error(e_max + 1.0);
    s.sigma_len = [](int, int) { return 0.0; };
    return s;
}

namespace {

void flatten(const Node& n, const std::vector<std::string>& names, CompiledProgram& out) {
    const int id = static_cast<int>(out.nodes.size());
    FlatNode f;
    f.kind = n.kind;
    f.fn = n.fn;
    f.name = n.name;
    f.dim = n.dim;
    f.param_id = n.param_id;
    f.offset = out.stride;
    out.stride += n.dim;
    if (n.kind == NodeKind::var) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n.name) f.var_id = static_cast<int>(i);
        if (f.var_id < 0) throw Error(Errc::unknown_symbol, "unknown variable '" + n.name + "'");
        f.slot = out.slot_count++;
    }
    if (n.is_leaf()) f.leaf = out.leaf_count++;
    out.nodes.push_back(std::move(f));
    for (const auto& ch : n.children) {
        out.nodes[static_cast<std::size_t>(id)].children.push_back(static_cast<int>(out.nodes.size()));
        flatten(ch, names, out);
    }
}

// Evaluates all nodes bottom-up into `vals`. `read` yields the value of a
// variable id at the current step.
template <class ReadVar>
void eval_nodes(const CompiledProgram& prog, const ParamValues& params, ReadVar&& read, std::span<double> vals) {
    for (auto i = prog.nodes.size(); i-- > 0;) {
        const FlatNode& n = prog.nodes[i];
        double* out = vals.data() + n.offset;
        const auto dim = static_cast<std::size_t>(n.dim);
        switch (n.kind) {
        case NodeKind::param: {
            auto it = params.find(n.param_id);
            if (it == params.end() || it->second.size() != dim)
                throw Error(Errc::missing_parameter, "unbound parameter " + std::to_string(n.param_id));
            for (std::size_t k = 0; k < dim; ++k) out[k] = it->second[k];
            break;
        }
        case NodeKind::var: {
            const std::span<const double> v = read(n);
            for (std::size_t k = 0; k < dim; ++k) out[k] = v[k];
            break;
        }
        case NodeKind::action: {
            const double* a = vals.data() + prog.nodes[static_cast<std::size_t>(n.children[0])].offset;
            for (std::size_t k = 0; k < dim; ++k) out[k] = a[k];
            break;
        }
        case NodeKind::function: {
            const FlatNode& lhs = prog.nodes[static_cast<std::size_t>(n.children[0])];
            const FlatNode& rhs = prog.nodes[static_cast<std::size_t>(n.children[1])];
            const double* a = vals.data() + lhs.offset;
            const double* b = vals.data() + rhs.offset;
            switch (n.fn) {
            case FunctionKind::add:
                for (std::size_t k = 0; k < dim; ++k) out[k] = a[k] + b[k];
                break;
            case FunctionKind::sub:
                for (std::size_t k = 0; k < dim; ++k) out[k] = a[k] - b[k];
                break;
            case FunctionKind::scale:
                for (std::size_t k = 0; k < dim; ++k) out[k] = a[0] * b[k];
                break;
            case FunctionKind::action:
                throw Error(Errc::unknown_function, "action '" + n.name + "' below the root");
            }
            break;
        }
        }
    }
}

} // namespace

CompiledProgram CompiledProgram::compile(const Program& program, const std::vector<std::string>& variable_names) {
    if (program.empty()) throw Error(Errc::empty_program, "cannot evaluate the empty program");
    CompiledProgram out;
    flatten(program.root(), variable_names, out);
    return out;
}

CallRecord CallTrace::record(int step, int node) const {
    const FlatNode& n = program_->nodes.at(static_cast<std::size_t>(node));
    CallRecord r;
    r.value = step_values(step).subspan(static_cast<std::size_t>(n.offset), static_cast<std::size_t>(n.dim));
    r.children = n.children;
    switch (n.kind) {
    case NodeKind::param:
        r.source = ArgSource::constant;
        r.param_id = n.param_id;
        break;
    case NodeKind::var:
        r.source = ArgSource::variable;
        r.variable = n.name;
        r.read_time = time(step);
        break;
    default:
        r.source = ArgSource::application;
        r.function = n.name;
        break;
    }
    return r;
}

std::span<const double> CallTrace::step_values(int step) const {
    const auto stride = static_cast<std::size_t>(program_->stride);
    return {values_.data() + static_cast<std::size_t>(step) * stride, stride};
}

std::span<double> CallTrace::append_step(int t) {
    const auto stride = static_cast<std::size_t>(program_->stride);
    times_.push_back(t);
    values_.resize(values_.size() + stride);
    return {values_.data() + values_.size() - stride, stride};
}

StepEvaluation evaluate_step(const Program& program, const MemoryState& memory) {
    std::vector<std::string> names;
    for (const auto& [name, v] : memory.vars) names.push_back(name);
    auto compiled = std::make_shared<const CompiledProgram>(CompiledProgram::compile(program, names));
    StepEvaluation out;
    out.record = CallTrace(compiled);
    auto vals = out.record.append_step(memory.t);
    eval_nodes(*compiled, memory.params,
               [&](const FlatNode& n) -> std::span<const double> {
                   const Vec& v = memory.vars.at(n.name);
                   if (static_cast<int>(v.size()) != n.dim)
                       throw Error(Errc::dimension_mismatch, "variable '" + n.name + "' has wrong dimension");
                   return v;
               },
               vals);
    const FlatNode& root = compiled->nodes.front();
    out.action = root.name;
    out.theta.assign(vals.begin() + root.offset, vals.begin() + root.offset + root.dim);
    return out;
}

ExecutionResult execute(const Program& program, const ParamValues& params, const ObservationTrace& trace,
                        const ErrorSpec& spec) {
    return execute(std::make_shared<const CompiledProgram>(CompiledProgram::compile(program, trace.variable_names())),
                   params, trace, spec);
}

ExecutionResult execute(std::shared_ptr<const CompiledProgram> compiled, const ParamValues& params,
                        const ObservationTrace& trace, const ErrorSpec& spec) {
    const CompiledProgram& prog = *compiled;
    ExecutionResult r;
    r.observed_length = trace.length();
    r.call_trace = CallTrace(compiled);
    const FlatNode& root = prog.nodes.front();
    const auto root_dim = static_cast<std::size_t>(root.dim);

    for (int t = 1; t <= trace.length(); ++t) {
        auto vals = r.call_trace.append_step(t);
        eval_nodes(prog, params, [&](const FlatNode& n) { return trace.value(n.var_id, t); }, vals);
        const std::span<const double> theta_hat = vals.subspan(static_cast<std::size_t>(root.offset), root_dim);
        const double err = spec.sigma_act.value(root.name, theta_hat, trace.action(t), trace.theta(t));
        r.actions.push_back(root.name);
        r.thetas.emplace_back(theta_hat.begin(), theta_hat.end());
        r.step_errors.push_back(err);
        ++r.executed_length;
        if (err > spec.e_max) {
            // Set even when t == T: the threshold fired although T' = T.
            r.terminated_early = true;
            break;
        }
    }
    r.length_error = spec.sigma_len ? spec.sigma_len(r.observed_length, r.executed_length) : 0.0;
    double sum = 0.0;
    for (double e : r.step_errors) sum += e;
    r.loss = sum + r.length_error;
    return r;
}

} // namespace progind

namespace progind {

bool matches(const ExecutionResult& result, const ErrorSpec& spec) {
    if (result.executed_length != result.observed_length || result.length_error != 0.0) return false;
    for (double e : result.step_errors)
        if (e > spec.e_max) return false;
    return true;
}

} // namespace progind
