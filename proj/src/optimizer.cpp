#include "progind/optimizer.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace progind {

OptimizerState OptimizerState::init(const Program& program, const ParamValues& values, const OptimizerConfig& cfg) {
    OptimizerState s;
    s.learning_rate = cfg.learning_rate;
    s.epsilon = cfg.epsilon;
    for (const auto& leaf : leaves(program)) {
        if (leaf.kind == NodeKind::param) {
            auto it = values.find(leaf.param_id);
            Vec v = it != values.end() ? it->second : Vec(static_cast<std::size_t>(leaf.dim), 0.0);
            s.params[leaf.param_id] = {v, Vec(v.size(), 0.0)};
        } else {
            s.slots.push_back({leaf.var, leaf.dim, Vec(static_cast<std::size_t>(leaf.dim), 0.0)});
        }
    }
    return s;
}

ParamValues OptimizerState::values() const {
    ParamValues out;
    for (const auto& [id, p] : params) out[id] = p.value;
    return out;
}

void OptimizerState::reset_accumulators() {
    for (auto& [id, p] : params) std::fill(p.accumulator.begin(), p.accumulator.end(), 0.0);
    for (auto& s : slots) std::fill(s.accumulator.begin(), s.accumulator.end(), 0.0);
}

OptimizerState adagrad_step(OptimizerState state, const Gradients& grads) {
    for (auto& [id, p] : state.params) {
        auto it = grads.params.find(id);
        if (it == grads.params.end()) continue;
        const Vec& g = it->second;
        for (std::size_t k = 0; k < p.value.size(); ++k) {
            p.accumulator[k] += g[k] * g[k];
            p.value[k] -= state.learning_rate * g[k] / std::sqrt(p.accumulator[k] + state.epsilon);
        }
    }
    ++state.iteration;
    return state;
}

Reassignment reassign_variables(Program program, OptimizerState state, const Gradients& grads,
                                const VariableIndex& index, const ObservationTrace& trace) {
    Reassignment out{std::move(program), std::move(state), false};
    const double lr = out.state.learning_rate;
    const double eps = out.state.epsilon;

    for (const VarSlotGradient& sg : grads.slots) {
        SlotState& slot = out.state.slots[static_cast<std::size_t>(sg.slot)];
        const int d = slot.dim;
        if (index.tree_size(1, d) < 2) continue;
        const int current = trace.variable_id(slot.variable);

        Vec& acc = slot.accumulator;
        for (const Vec& g : sg.per_read)
            for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += g[k] * g[k];

        std::map<std::string, int> votes;
        Vec moved(static_cast<std::size_t>(d));
        for (std::size_t r = 0; r < sg.read_times.size(); ++r) {
            const int t = sg.read_times[r];
            const Vec& g = sg.per_read[r];
            const auto cur = trace.value(current, t);
            for (std::size_t k = 0; k < moved.size(); ++k) moved[k] = cur[k] - lr * g[k] / std::sqrt(acc[k] + eps);
            const NearestVariable hit = index.nearest(t, d, moved);
            double d_hit = 0.0, d_cur = 0.0;
            for (std::size_t k = 0; k < moved.size(); ++k) {
                d_hit += (moved[k] - hit.value[k]) * (moved[k] - hit.value[k]);
                d_cur += (moved[k] - cur[k]) * (moved[k] - cur[k]);
            }
            // The current binding keeps any distance tie.
            ++votes[d_cur <= d_hit ? slot.variable : hit.name];
        }

        std::string winner = slot.variable;
        int best = votes[slot.variable];
        bool tied = false;
        for (const auto& [name, n] : votes) {
            if (name == slot.variable) continue;
            if (n > best) {
                best = n;
                winner = name;
                tied = false;
            } else if (n == best) {
                tied = true;
            }
        }
        if (winner != slot.variable && !tied) {
            out.program = rename_variable(out.program, sg.leaf, winner);
            slot.variable = winner;
            out.changed = true;
        }
    }
    if (out.changed) out.state.reset_accumulators();
    return out;
}

namespace {

bool has_alternatives(const OptimizerState& s, const VariableIndex& index) {
    if (!s.params.empty()) return true;
    for (const auto& slot : s.slots)
        if (index.tree_size(1, slot.dim) > 1) return true;
    return false;
}

} // namespace

OptimizedCandidate optimize(const Program& program, const ParamValues& params, const ObservationTrace& trace,
                            const VariableIndex& index, const ErrorSpec& spec, const OptimizerConfig& config) {
    OptimizerState state = OptimizerState::init(program, params, config);
    Program current = program;
    auto compiled = std::make_shared<const CompiledProgram>(CompiledProgram::compile(current, trace.variable_names()));
    const bool can_move = has_alternatives(state, index);

    OptimizedCandidate best;
    double best_loss = std::numeric_limits<double>::infinity();
    double prev_loss = std::numeric_limits<double>::quiet_NaN();
    int stalled = 0;
    const int max_iters = std::max(1, config.max_iters);

    int it = 0;
    for (; it < max_iters; ++it) {
        ExecutionResult result = execute(compiled, state.values(), trace, spec);
        const double loss = result.loss;
        best.loss_history.push_back(loss);
        const bool accepted = matches(result, spec);
        const bool improved = loss < best_loss;

        Gradients grads;
        if (accepted || improved || can_move) grads = backward(result, trace, spec);
        if (accepted || improved) {
            best.program = current;
            best.params = state.values();
            best.result = result;
            best.gradients = grads;
            best.accepted = accepted;
            best_loss = loss;
        }
        if (accepted || !can_move) {
            ++it;
            break;
        }

        if (!std::isnan(prev_loss) && std::abs(prev_loss - loss) <= config.tol * std::max(std::abs(prev_loss), 1e-300)) {
            if (++stalled >= config.patience) {
                ++it;
                break;
            }
        } else {
            stalled = 0;
        }
        prev_loss = loss;

        state = adagrad_step(std::move(state), grads);
        Reassignment re = reassign_variables(std::move(current), std::move(state), grads, index, trace);
        current = std::move(re.program);
        state = std::move(re.state);
        if (re.changed)
            compiled = std::make_shared<const CompiledProgram>(CompiledProgram::compile(current, trace.variable_names()));
    }
    best.iterations = std::min(it, max_iters);
    return best;
}

} // namespace progind
