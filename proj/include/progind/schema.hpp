#ifndef PROGIND_SCHEMA_HPP
#define PROGIND_SCHEMA_HPP

#include <map>
#include <string>
#include <vector>

namespace progind {

using Vec = std::vector<double>;

/// Names and dimensions of the observed variables and of the action parameter
/// vectors. Ordered maps keep iteration lexicographic, which the variable
/// index and the expansion RNG rely on.
struct TraceSchema {
    std::map<std::string, int> variables;
    std::map<std::string, int> actions;

    /// Variable names of dimension `dim`, ascending.
    std::vector<std::string> variables_of_dimension(int dim) const;

    bool operator==(const TraceSchema&) const = default;
};

} // namespace progind

#endif
