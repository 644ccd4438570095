#ifndef PROGIND_INTERPRETER_HPP
#define PROGIND_INTERPRETER_HPP

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "progind/ast.hpp"
#include "progind/trace.hpp"

namespace progind {

/// Per-step action error and its gradient with respect to the predicted
/// parameters. The gradient callback only sees steps where the names agree.
struct ActionError {
    std::function<double(std::string_view predicted, std::span<const double> theta_hat,
                         std::string_view observed, std::span<const double> theta)>
        value;
    std::function<void(std::span<const double> theta_hat, std::span<const double> theta,
                       std::span<double> grad_out)>
        gradient;
};

/// Euclidean parameter distance; a wrong action name adds `mismatch_penalty`.
ActionError euclidean_action_error(double mismatch_penalty);

struct ErrorSpec {
    double e_max = 0.01;
    ActionError sigma_act;
    std::function<double(int observed_len, int executed_len)> sigma_len;

    /// Euclidean sigma_act with mismatch penalty e_max + 1, sigma_len = 0.
    static ErrorSpec standard(double e_max = 0.01);
};

/// Preorder flattening of a program bound to a variable ordering. Children
/// always follow their parent, so reverse order evaluates bottom-up.
struct FlatNode {
    NodeKind kind = NodeKind::param;
    FunctionKind fn = FunctionKind::add;
    std::string name;
    int dim = 1;
    int param_id = -1;
    int var_id = -1;
    int leaf = -1;      // leaf ordinal, leaves only
    int slot = -1;      // variable slot ordinal, var leaves only
    int offset = 0;     // into the per-step value buffer
    std::vector<int> children;
};

struct CompiledProgram {
    std::vector<FlatNode> nodes;
    int stride = 0;     // doubles per step
    int leaf_count = 0;
    int slot_count = 0;

    /// `variable_names` fixes var_id; unknown variables throw.
    static CompiledProgram compile(const Program& program, const std::vector<std::string>& variable_names);
};

enum class ArgSource { constant, variable, application };

/// View of one node's evaluation at one executed step.
struct CallRecord {
    std::string_view function;   // empty for leaves
    ArgSource source = ArgSource::application;
    int param_id = -1;
    std::string_view variable;
    int read_time = 0;
    std::span<const int> children;
    std::span<const double> value;
};

/// Values of every node at every executed step: the reverse-mode tape.
class CallTrace {
public:
    CallTrace() = default;
    explicit CallTrace(std::shared_ptr<const CompiledProgram> program) : program_(std::move(program)) {}

    int steps() const { return static_cast<int>(times_.size()); }
    std::size_t records_per_step() const { return program_ ? program_->nodes.size() : 0; }
    int time(int step) const { return times_[static_cast<std::size_t>(step)]; }
    CallRecord record(int step, int node) const;

    const CompiledProgram& program() const { return *program_; }
    std::span<const double> step_values(int step) const;

    // Used by the interpreter while executing.
    std::span<double> append_step(int t);

private:
    std::shared_ptr<const CompiledProgram> program_;
    std::vector<int> times_;
    std::vector<double> values_;
};

struct ExecutionResult {
    int observed_length = 0;
    int executed_length = 0;
    std::vector<std::string> actions;
    std::vector<Vec> thetas;
    std::vector<double> step_errors;
    double length_error = 0.0;
    double loss = 0.0;
    // The e_max threshold fired. Implies T' < T except when it fires at t = T.
    bool terminated_early = false;
    CallTrace call_trace;
};

struct StepEvaluation {
    std::string action;
    Vec theta;
    CallTrace record;  // a single step
};

/// Full-length execution with every step error within e_max and no length
/// error.
bool matches(const ExecutionResult& result, const ErrorSpec& spec);

/// Evaluate the program once against `memory`.
StepEvaluation evaluate_step(const Program& program, const MemoryState& memory);

/// Forward pass over the trace, stopping after the first step whose error
/// exceeds spec.e_max. That step's error is part of the loss.
ExecutionResult execute(const Program& program, const ParamValues& params, const ObservationTrace& trace,
                        const ErrorSpec& spec);

/// As `execute`, reusing a program already compiled against the trace.
ExecutionResult execute(std::shared_ptr<const CompiledProgram> compiled, const ParamValues& params,
                        const ObservationTrace& trace, const ErrorSpec& spec);

} // namespace progind

#endif
