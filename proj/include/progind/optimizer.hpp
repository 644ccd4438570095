#ifndef PROGIND_OPTIMIZER_HPP
#define PROGIND_OPTIMIZER_HPP

#include <map>
#include <string>
#include <vector>

#include "progind/ast.hpp"
#include "progind/autodiff.hpp"
#include "progind/interpreter.hpp"
#include "progind/trace.hpp"
#include "progind/variable_index.hpp"

namespace progind {

struct OptimizerConfig {
    double learning_rate = 0.2;
    double epsilon = 1e-8;
    int max_iters = 1000;
    double tol = 1e-9;
    int patience = 10;
};

struct ParamState {
    Vec value;
    Vec accumulator;
};

struct SlotState {
    std::string variable;
    int dim = 1;
    Vec accumulator;  // squared read gradients, summed over reads and iterations
};

struct OptimizerState {
    std::map<int, ParamState> params;
    std::vector<SlotState> slots;
    double learning_rate = 0.2;
    double epsilon = 1e-8;
    int iteration = 0;

    static OptimizerState init(const Program& program, const ParamValues& values, const OptimizerConfig& cfg);
    ParamValues values() const;
    void reset_accumulators();
};

/// acc += g*g; p -= lr * g / sqrt(acc + eps), elementwise.
OptimizerState adagrad_step(OptimizerState state, const Gradients& grads);

struct Reassignment {
    Program program;
    OptimizerState state;
    bool changed = false;
};

/// Gradient-guided rebinding of variable slots. Each slot's read values take
/// a virtual AdaGrad step; the nearest variable at every read time gets a
/// vote and a strict-majority winner other than the current one replaces it.
Reassignment reassign_variables(Program program, OptimizerState state, const Gradients& grads,
                                const VariableIndex& index, const ObservationTrace& trace);

struct OptimizedCandidate {
    Program program;
    ParamValues params;
    ExecutionResult result;
    Gradients gradients;
    int iterations = 0;
    bool accepted = false;
    std::vector<double> loss_history;
};

/// Forward/backward/update loop. Stops on acceptance, after max_iters, or
/// once the loss changes by less than tol (relative) for `patience`
/// consecutive iterations. Returns the accepted state if any, else the
/// lowest-loss state seen.
OptimizedCandidate optimize(const Program& program, const ParamValues& params, const ObservationTrace& trace,
                            const VariableIndex& index, const ErrorSpec& spec, const OptimizerConfig& config = {});

} // namespace progind

#endif
