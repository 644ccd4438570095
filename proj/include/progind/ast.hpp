#ifndef PROGIND_AST_HPP
#define PROGIND_AST_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "progind/schema.hpp"

namespace progind {

enum class FunctionKind { add, sub, scale, action };

/// Dimension placeholder in a signature. Every generic slot of one function
/// binds to the same dimension, fixed by the dimension its parent expects.
inline constexpr int kGenericDim = 0;

struct FunctionSpec {
    std::string name;
    FunctionKind kind = FunctionKind::add;
    std::vector<int> arg_dims;
    int out_dim = kGenericDim;

    std::size_t arity() const { return arg_dims.size(); }
    bool is_action() const { return kind == FunctionKind::action; }

    /// Concrete argument dimensions when the result must have dimension
    /// `out`, or nullopt if the signature cannot produce it.
    std::optional<std::vector<int>> instantiate(int out) const;
};

/// The instruction set: primitive actions plus pure functions.
class Registry {
public:
    Registry() = default;

    void add(FunctionSpec spec);
    const FunctionSpec* find(std::string_view name) const;

    const std::vector<FunctionSpec>& specs() const { return specs_; }
    std::vector<const FunctionSpec*> actions() const;
    std::vector<const FunctionSpec*> functions() const;

    /// add, sub, scale over any dimension, plus one action per schema entry.
    static Registry standard(const TraceSchema& schema);

    /// Actions of `schema` only; callers add the functions they want.
    static Registry actions_only(const TraceSchema& schema);

private:
    std::vector<FunctionSpec> specs_;
};

FunctionSpec make_add();
FunctionSpec make_sub();
FunctionSpec make_scale();

enum class NodeKind { action, function, param, var };

struct Node {
    NodeKind kind = NodeKind::param;
    FunctionKind fn = FunctionKind::add;
    std::string name;   // function, action or variable name
    int param_id = -1;  // param leaves only
    int dim = 1;        // value dimension; for actions, the parameter dimension
    std::vector<Node> children;

    bool is_leaf() const { return kind == NodeKind::param || kind == NodeKind::var; }
    bool operator==(const Node&) const = default;
};

struct ComplexityWeights {
    double depth = 10.0;
    double params = 5.0;
    double vars = 1.0;
};

using ParamValues = std::map<int, Vec>;

/// Immutable typed program. Either empty or rooted at an action node.
class Program {
public:
    Program() = default;
    explicit Program(Node root);

    bool empty() const { return !root_.has_value(); }
    const Node& root() const { return *root_; }

    bool operator==(const Program&) const = default;

private:
    std::optional<Node> root_;
};

/// A leaf in preorder position `ordinal`, with the child-index path from root.
struct LeafRef {
    int ordinal = 0;
    NodeKind kind = NodeKind::param;
    int param_id = -1;
    std::string var;
    int dim = 1;
    std::vector<int> path;
};

std::vector<LeafRef> leaves(const Program& program);
std::size_t node_count(const Program& program);
int max_param_id(const Program& program);

/// Copy of `program` with leaf `ordinal` replaced by `subtree`.
Program replace_leaf(const Program& program, int ordinal, Node subtree);

/// Copy of `program` with the variable in leaf `ordinal` renamed.
Program rename_variable(const Program& program, int ordinal, const std::string& var);

struct ParsedProgram {
    Program program;
    ParamValues params;
};

/// Parse and type-check an s-expression. Numeric literals and `?` become
/// parameter leaves; literals seed the parameter value, `?` seeds zeros.
ParsedProgram parse_program(std::string_view text, const Registry& registry,
                            const TraceSchema& schema);

/// Canonical text. Parameters print with `%#.*g` at `precision` significant
/// digits; vector parameters print as `[a b ...]`.
std::string print_program(const Program& program, const ParamValues& params,
                          int precision = 6);

/// Program text with every parameter replaced by `?`.
std::string canonical_key(const Program& program);

/// Edges on the longest root-to-leaf path; 0 for the empty program.
int depth(const Program& program);

int param_leaf_count(const Program& program);
int var_leaf_count(const Program& program);

double complexity(const Program& program, const ComplexityWeights& w = {});

} // namespace progind

#endif
