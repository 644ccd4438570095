#include "progind/autodiff.hpp"

#include <cmath>

#include "progind/error.hpp"

namespace progind {

Matrix Matrix::identity(int n) {
    Matrix m{n, n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0)};
    for (int i = 0; i < n; ++i) m.data[static_cast<std::size_t>(i * n + i)] = 1.0;
    return m;
}

Matrix jacobian(const FunctionSpec& fn, const std::vector<Vec>& args, int arg) {
    if (arg < 0 || arg >= static_cast<int>(args.size()) || args.size() != fn.arity())
        throw Error(Errc::out_of_range, "argument index " + std::to_string(arg) + " out of range for '" + fn.name + "'");
    switch (fn.kind) {
    case FunctionKind::add:
        return Matrix::identity(static_cast<int>(args[0].size()));
    case FunctionKind::sub: {
        Matrix m = Matrix::identity(static_cast<int>(args[0].size()));
        if (arg == 1)
            for (double& x : m.data) x = -x;
        return m;
    }
    case FunctionKind::action:
        return Matrix::identity(static_cast<int>(args[0].size()));
    case FunctionKind::scale: {
        const Vec& c = args[0];
        const Vec& x = args[1];
        const int n = static_cast<int>(x.size());
        if (arg == 0) return Matrix{n, 1, x};  // d(c*x)/dc = x
        Matrix m = Matrix::identity(n);
        for (double& v : m.data) v *= c[0];
        return m;
    }
    }
    throw Error(Errc::unknown_function, "no Jacobian for '" + fn.name + "'");
}

Matrix action_error_jacobian(std::span<const double> theta_hat, std::span<const double> theta) {
    const int n = static_cast<int>(theta.size());
    Matrix m{1, n, std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += (theta_hat[i] - theta[i]) * (theta_hat[i] - theta[i]);
    const double norm = std::sqrt(s);
    if (norm > 0.0)
        for (int i = 0; i < n; ++i) m.data[static_cast<std::size_t>(i)] = (theta_hat[i] - theta[i]) / norm;
    return m;
}

Gradients backward(const CallTrace& call_trace, const ExecutionResult& result, const ObservationTrace& trace,
                   const ErrorSpec& spec) {
    if (call_trace.steps() != result.executed_length || result.observed_length != trace.length())
        throw Error(Errc::mismatched_trace, "call trace does not belong to this execution");
    const CompiledProgram& prog = call_trace.program();
    const auto n_nodes = prog.nodes.size();

    Gradients g;
    g.slots.resize(static_cast<std::size_t>(prog.slot_count));
    for (const FlatNode& n : prog.nodes) {
        if (n.kind == NodeKind::param && !g.params.contains(n.param_id))
            g.params[n.param_id] = Vec(static_cast<std::size_t>(n.dim), 0.0);
        if (n.kind == NodeKind::var) {
            auto& s = g.slots[static_cast<std::size_t>(n.slot)];
            s.slot = n.slot;
            s.leaf = n.leaf;
            s.variable = n.name;
            s.total.assign(static_cast<std::size_t>(n.dim), 0.0);
        }
    }

    std::vector<double> adj(static_cast<std::size_t>(prog.stride));
    const FlatNode& root = prog.nodes.front();
    for (int step = 0; step < call_trace.steps(); ++step) {
        const int t = call_trace.time(step);
        const auto vals = call_trace.step_values(step);
        std::fill(adj.begin(), adj.end(), 0.0);

        // Mismatched action names carry a constant penalty: no gradient.
        if (result.actions[static_cast<std::size_t>(step)] == trace.action(t)) {
            const auto th_hat = vals.subspan(static_cast<std::size_t>(root.offset), static_cast<std::size_t>(root.dim));
            spec.sigma_act.gradient(th_hat, trace.theta(t),
                                    std::span<double>(adj).subspan(static_cast<std::size_t>(root.offset),
                                                                   static_cast<std::size_t>(root.dim)));
        }

        // Preorder visits parents before children; push each adjoint down
        // through the transpose of the local Jacobian.
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const FlatNode& n = prog.nodes[i];
            const double* a = adj.data() + n.offset;
            const auto dim = static_cast<std::size_t>(n.dim);
            switch (n.kind) {
            case NodeKind::action: {
                double* c = adj.data() + prog.nodes[static_cast<std::size_t>(n.children[0])].offset;
                for (std::size_t k = 0; k < dim; ++k) c[k] += a[k];
                break;
            }
            case NodeKind::function: {
                const FlatNode& lhs = prog.nodes[static_cast<std::size_t>(n.children[0])];
                const FlatNode& rhs = prog.nodes[static_cast<std::size_t>(n.children[1])];
                double* ca = adj.data() + lhs.offset;
                double* cb = adj.data() + rhs.offset;
                switch (n.fn) {
                case FunctionKind::add:
                    for (std::size_t k = 0; k < dim; ++k) {
                        ca[k] += a[k];
                        cb[k] += a[k];
                    }
                    break;
                case FunctionKind::sub:
                    for (std::size_t k = 0; k < dim; ++k) {
                        ca[k] += a[k];
                        cb[k] -= a[k];
                    }
                    break;
                case FunctionKind::scale: {
                    const double c = vals[static_cast<std::size_t>(lhs.offset)];
                    const double* x = vals.data() + rhs.offset;
                    double dc = 0.0;
                    for (std::size_t k = 0; k < dim; ++k) {
                        dc += a[k] * x[k];
                        cb[k] += c * a[k];
                    }
                    ca[0] += dc;
                    break;
                }
                case FunctionKind::action:
                    throw Error(Errc::unknown_function, "action below the root");
                }
                break;
            }
            case NodeKind::param: {
                Vec& gp = g.params[n.param_id];
                for (std::size_t k = 0; k < dim; ++k) gp[k] += a[k];
                break;
            }
            case NodeKind::var: {
                auto& s = g.slots[static_cast<std::size_t>(n.slot)];
                s.read_times.push_back(t);
                s.per_read.emplace_back(a, a + dim);
                for (std::size_t k = 0; k < dim; ++k) s.total[k] += a[k];
                break;
            }
            }
        }
    }

    g.leaf_norms.assign(static_cast<std::size_t>(prog.leaf_count), 0.0);
    for (const FlatNode& n : prog.nodes) {
        if (!(n.kind == NodeKind::param || n.kind == NodeKind::var)) continue;
        const Vec& v = n.kind == NodeKind::param ? g.params[n.param_id] : g.slots[static_cast<std::size_t>(n.slot)].total;
        double s = 0.0;
        for (double x : v) s += x * x;
        g.leaf_norms[static_cast<std::size_t>(n.leaf)] = std::sqrt(s);
    }
    return g;
}

} // namespace progind
