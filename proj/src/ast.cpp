#include "progind/ast.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>

#include "progind/error.hpp"

namespace progind {

const char* to_string(Errc code) {
    switch (code) {
    case Errc::parse_error: return "parse error";
    case Errc::unknown_symbol: return "unknown symbol";
    case Errc::arity_mismatch: return "arity mismatch";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::missing_parameter: return "missing parameter";
    case Errc::duplicate_parameter: return "duplicate parameter";
    case Errc::format_error: return "format error";
    case Errc::missing_variable: return "missing variable";
    case Errc::non_contiguous_timesteps: return "non-contiguous timesteps";
    case Errc::out_of_range: return "out of range";
    case Errc::no_variable_of_dimension: return "no variable of dimension";
    case Errc::empty_program: return "empty program";
    case Errc::unknown_function: return "unknown function";
    case Errc::mismatched_trace: return "mismatched trace";
    case Errc::invalid_config: return "invalid configuration";
    }
    return "error";
}

std::vector<std::string> TraceSchema::variables_of_dimension(int dim) const {
    std::vector<std::string> out;
    for (const auto& [name, d] : variables)
        if (d == dim) out.push_back(name);
    return out;
}

std::optional<std::vector<int>> FunctionSpec::instantiate(int out) const {
    if (out_dim != kGenericDim && out_dim != out) return std::nullopt;
    std::vector<int> dims = arg_dims;
    for (int& d : dims)
        if (d == kGenericDim) d = out;
    return dims;
}

FunctionSpec make_add() { return {"add", FunctionKind::add, {kGenericDim, kGenericDim}, kGenericDim}; }
FunctionSpec make_sub() { return {"sub", FunctionKind::sub, {kGenericDim, kGenericDim}, kGenericDim}; }
FunctionSpec make_scale() { return {"scale", FunctionKind::scale, {1, kGenericDim}, kGenericDim}; }

void Registry::add(FunctionSpec spec) {
    if (spec.arity() == 0)
        throw Error(Errc::arity_mismatch, "function '" + spec.name + "' must take at least one argument");
    if (find(spec.name) != nullptr)
        throw Error(Errc::unknown_symbol, "duplicate instruction name '" + spec.name + "'");
    specs_.push_back(std::move(spec));
}

const FunctionSpec* Registry::find(std::string_view name) const {
    for (const auto& s : specs_)
        if (s.name == name) return &s;
    return nullptr;
}

std::vector<const FunctionSpec*> Registry::actions() const {
    std::vector<const FunctionSpec*> out;
    for (const auto& s : specs_)
        if (s.is_action()) out.push_back(&s);
    return out;
}

std::vector<const FunctionSpec*> Registry::functions() const {
    std::vector<const FunctionSpec*> out;
    for (const auto& s : specs_)
        if (!s.is_action()) out.push_back(&s);
    return out;
}

Registry Registry::actions_only(const TraceSchema& schema) {
    Registry r;
    for (const auto& [name, dim] : schema.actions)
        r.add({name, FunctionKind::action, {dim}, kGenericDim});
    return r;
}

Registry Registry::standard(const TraceSchema& schema) {
    Registry r = actions_only(schema);
    r.add(make_add());
    r.add(make_sub());
    r.add(make_scale());
    return r;
}

Program::Program(Node root) : root_(std::move(root)) {}

namespace {

void collect_leaves(const Node& n, std::vector<int>& path, std::vector<LeafRef>& out) {
    if (n.is_leaf()) {
        LeafRef ref;
        ref.ordinal = static_cast<int>(out.size());
        ref.kind = n.kind;
        ref.param_id = n.param_id;
        if (n.kind == NodeKind::var) ref.var = n.name;
        ref.dim = n.dim;
        ref.path = path;
        out.push_back(std::move(ref));
        return;
    }
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        collect_leaves(n.children[i], path, out);
        path.pop_back();
    }
}

std::size_t count_nodes(const Node& n) {
    std::size_t c = 1;
    for (const auto& ch : n.children) c += count_nodes(ch);
    return c;
}

int node_depth(const Node& n) {
    int d = 0;
    for (const auto& ch : n.children) d = std::max(d, 1 + node_depth(ch));
    return d;
}

void count_leaves(const Node& n, int& params, int& vars, int& max_id) {
    if (n.kind == NodeKind::param) {
        ++params;
        max_id = std::max(max_id, n.param_id);
    } else if (n.kind == NodeKind::var) {
        ++vars;
    }
    for (const auto& ch : n.children) count_leaves(ch, params, vars, max_id);
}

Node& node_at(Node& root, const std::vector<int>& path) {
    Node* cur = &root;
    for (int i : path) cur = &cur->children[static_cast<std::size_t>(i)];
    return *cur;
}

std::string format_number(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%#.*g", precision, v);
    return buf;
}

void print_node(const Node& n, const ParamValues* params, int precision, std::string& out) {
    switch (n.kind) {
    case NodeKind::var:
        out += n.name;
        return;
    case NodeKind::param: {
        if (params == nullptr) {
            out += '?';
            return;
        }
        auto it = params->find(n.param_id);
        if (it == params->end())
            throw Error(Errc::missing_parameter, "no value for parameter " + std::to_string(n.param_id));
        const Vec& v = it->second;
        if (v.size() == 1) {
            out += format_number(v[0], precision);
        } else {
            out += '[';
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ' ';
                out += format_number(v[i], precision);
            }
            out += ']';
        }
        return;
    }
    case NodeKind::action:
    case NodeKind::function:
        out += '(';
        out += n.name;
        for (const auto& ch : n.children) {
            out += ' ';
            print_node(ch, params, precision, out);
        }
        out += ')';
        return;
    }
}

// Recursive-descent reader over a token stream.
class Parser {
public:
    Parser(std::string_view text, const Registry& reg, const TraceSchema& schema)
        : text_(text), reg_(reg), schema_(schema) {
        tokenize();
    }

    ParsedProgram parse() {
        ParsedProgram out;
        if (tokens_.size() == 2 && tokens_[0] == "(" && tokens_[1] == ")") return out;
        if (tokens_.empty()) throw Error(Errc::parse_error, "empty input");
        if (tokens_[0] != "(") throw Error(Errc::parse_error, "program must start with '('");
        ++pos_;
        const std::string name = take_symbol();
        const FunctionSpec* spec = reg_.find(name);
        if (spec == nullptr) throw Error(Errc::unknown_symbol, "unknown action '" + name + "'");
        if (!spec->is_action())
            throw Error(Errc::unknown_symbol, "program root must be an action, got '" + name + "'");
        Node root;
        root.kind = NodeKind::action;
        root.fn = FunctionKind::action;
        root.name = name;
        root.dim = spec->arg_dims.front();
        parse_args(root, *spec, spec->arg_dims, out.params);
        if (pos_ != tokens_.size()) throw Error(Errc::parse_error, "trailing input after program");
        out.program = Program(std::move(root));
        return out;
    }

private:
    void tokenize() {
        std::size_t i = 0;
        while (i < text_.size()) {
            const char c = text_[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (c == '(' || c == ')' || c == '[' || c == ']') {
                tokens_.emplace_back(1, c);
                ++i;
            } else {
                std::size_t j = i;
                while (j < text_.size() && !std::isspace(static_cast<unsigned char>(text_[j])) &&
                       text_[j] != '(' && text_[j] != ')' && text_[j] != '[' && text_[j] != ']')
                    ++j;
                tokens_.emplace_back(text_.substr(i, j - i));
                i = j;
            }
        }
    }

    const std::string& peek() const {
        if (pos_ >= tokens_.size()) throw Error(Errc::parse_error, "unexpected end of input");
        return tokens_[pos_];
    }

    std::string take_symbol() {
        const std::string& tok = peek();
        if (tok == "(" || tok == ")" || tok == "[" || tok == "]")
            throw Error(Errc::parse_error, "expected a symbol, got '" + tok + "'");
        ++pos_;
        return tok;
    }

    static std::optional<double> as_number(const std::string& tok) {
        if (tok.empty()) return std::nullopt;
        const char* begin = tok.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end != begin + tok.size()) return std::nullopt;
        return v;
    }

    void parse_args(Node& parent, const FunctionSpec& spec, const std::vector<int>& dims,
                    ParamValues& params) {
        std::size_t count = 0;
        while (peek() != ")") {
            if (count >= dims.size())
                throw Error(Errc::arity_mismatch, "'" + spec.name + "' takes " +
                                                      std::to_string(dims.size()) + " argument(s)");
            parent.children.push_back(parse_expr(dims[count], params));
            ++count;
        }
        ++pos_;
        if (count != dims.size())
            throw Error(Errc::arity_mismatch, "'" + spec.name + "' takes " + std::to_string(dims.size()) +
                                                  " argument(s), got " + std::to_string(count));
    }

    Node make_param(int dim, Vec value, ParamValues& params) {
        Node n;
        n.kind = NodeKind::param;
        n.dim = dim;
        n.param_id = next_param_++;
        params[n.param_id] = std::move(value);
        return n;
    }

    Node parse_expr(int dim, ParamValues& params) {
        const std::string tok = peek();
        if (tok == ")") throw Error(Errc::parse_error, "unexpected ')'");
        if (tok == "(") {
            ++pos_;
            const std::string name = take_symbol();
            const FunctionSpec* spec = reg_.find(name);
            if (spec == nullptr) throw Error(Errc::unknown_symbol, "unknown function '" + name + "'");
            if (spec->is_action())
                throw Error(Errc::unknown_symbol, "action '" + name + "' may only appear at the root");
            auto dims = spec->instantiate(dim);
            if (!dims)
                throw Error(Errc::dimension_mismatch, "'" + name + "' cannot produce dimension " +
                                                          std::to_string(dim));
            Node n;
            n.kind = NodeKind::function;
            n.fn = spec->kind;
            n.name = name;
            n.dim = dim;
            parse_args(n, *spec, *dims, params);
            return n;
        }
        if (tok == "[") {
            ++pos_;
            Vec values;
            while (peek() != "]") {
                auto v = as_number(peek());
                if (!v) throw Error(Errc::parse_error, "expected number in vector literal, got '" + peek() + "'");
                values.push_back(*v);
                ++pos_;
            }
            ++pos_;
            if (static_cast<int>(values.size()) != dim)
                throw Error(Errc::dimension_mismatch, "vector literal of length " +
                                                          std::to_string(values.size()) + " where " +
                                                          std::to_string(dim) + " expected");
            return make_param(dim, std::move(values), params);
        }
        ++pos_;
        if (tok == "?") return make_param(dim, Vec(static_cast<std::size_t>(dim), 0.0), params);
        if (auto v = as_number(tok)) {
            if (dim != 1)
                throw Error(Errc::dimension_mismatch, "scalar literal where dimension " +
                                                          std::to_string(dim) + " expected");
            return make_param(1, Vec{*v}, params);
        }
        auto it = schema_.variables.find(tok);
        if (it == schema_.variables.end()) {
            if (reg_.find(tok) != nullptr)
                throw Error(Errc::parse_error, "instruction '" + tok + "' used without parentheses");
            throw Error(Errc::unknown_symbol, "unknown variable '" + tok + "'");
        }
        if (it->second != dim)
            throw Error(Errc::dimension_mismatch, "variable '" + tok + "' has dimension " +
                                                      std::to_string(it->second) + ", expected " +
                                                      std::to_string(dim));
        Node n;
        n.kind = NodeKind::var;
        n.name = tok;
        n.dim = dim;
        return n;
    }

    std::string_view text_;
    const Registry& reg_;
    const TraceSchema& schema_;
    std::vector<std::string> tokens_;
    std::size_t pos_ = 0;
    int next_param_ = 0;
};

} // namespace

std::vector<LeafRef> leaves(const Program& program) {
    std::vector<LeafRef> out;
    if (program.empty()) return out;
    std::vector<int> path;
    collect_leaves(program.root(), path, out);
    return out;
}

std::size_t node_count(const Program& program) {
    return program.empty() ? 0 : count_nodes(program.root());
}

int max_param_id(const Program& program) {
    int params = 0, vars = 0, max_id = -1;
    if (!program.empty()) count_leaves(program.root(), params, vars, max_id);
    return max_id;
}

Program replace_leaf(const Program& program, int ordinal, Node subtree) {
    const auto refs = leaves(program);
    if (ordinal < 0 || ordinal >= static_cast<int>(refs.size()))
        throw Error(Errc::out_of_range, "leaf ordinal " + std::to_string(ordinal) + " out of range");
    Node root = program.root();
    node_at(root, refs[static_cast<std::size_t>(ordinal)].path) = std::move(subtree);
    return Program(std::move(root));
}

Program rename_variable(const Program& program, int ordinal, const std::string& var) {
    const auto refs = leaves(program);
    if (ordinal < 0 || ordinal >= static_cast<int>(refs.size()) ||
        refs[static_cast<std::size_t>(ordinal)].kind != NodeKind::var)
        throw Error(Errc::out_of_range, "leaf " + std::to_string(ordinal) + " is not a variable slot");
    Node root = program.root();
    node_at(root, refs[static_cast<std::size_t>(ordinal)].path).name = var;
    return Program(std::move(root));
}

ParsedProgram parse_program(std::string_view text, const Registry& registry, const TraceSchema& schema) {
    return Parser(text, registry, schema).parse();
}

std::string print_program(const Program& program, const ParamValues& params, int precision) {
    if (program.empty()) return "()";
    std::string out;
    print_node(program.root(), &params, precision, out);
    return out;
}

std::string canonical_key(const Program& program) {
    if (program.empty()) return "()";
    std::string out;
    print_node(program.root(), nullptr, 0, out);
    return out;
}

int depth(const Program& program) {
    return program.empty() ? 0 : node_depth(program.root());
}

int param_leaf_count(const Program& program) {
    int params = 0, vars = 0, max_id = -1;
    if (!program.empty()) count_leaves(program.root(), params, vars, max_id);
    return params;
}

int var_leaf_count(const Program& program) {
    int params = 0, vars = 0, max_id = -1;
    if (!program.empty()) count_leaves(program.root(), params, vars, max_id);
    return vars;
}

double complexity(const Program& program, const ComplexityWeights& w) {
    return w.depth * depth(program) + w.params * param_leaf_count(program) +
           w.vars * var_leaf_count(program);
}

} // namespace progind
