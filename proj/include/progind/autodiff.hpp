#ifndef PROGIND_AUTODIFF_HPP
#define PROGIND_AUTODIFF_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "progind/ast.hpp"
#include "progind/interpreter.hpp"

namespace progind {

/// Dense row-major matrix, small enough to return by value.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r * cols + c)]; }
    static Matrix identity(int n);
};

/// Jacobian of a built-in function with respect to argument `arg`.
Matrix jacobian(const FunctionSpec& fn, const std::vector<Vec>& args, int arg);

/// Jacobian (a row vector) of the Euclidean action error at theta_hat.
Matrix action_error_jacobian(std::span<const double> theta_hat, std::span<const double> theta);

struct VarSlotGradient {
    int slot = 0;
    int leaf = 0;
    std::string variable;
    std::vector<int> read_times;
    std::vector<Vec> per_read;  // dL/dv evaluated at each read time
    Vec total;
};

struct Gradients {
    std::map<int, Vec> params;
    std::vector<VarSlotGradient> slots;
    std::vector<double> leaf_norms;  // ||dL/dx||_2 per leaf ordinal
};

/// Reverse-mode pass over the call trace of `result`, seeded at every step
/// included in the loss.
Gradients backward(const CallTrace& call_trace, const ExecutionResult& result, const ObservationTrace& trace,
                   const ErrorSpec& spec);

inline Gradients backward(const ExecutionResult& result, const ObservationTrace& trace, const ErrorSpec& spec) {
    return backward(result.call_trace, result, trace, spec);
}

} // namespace progind

#endif
