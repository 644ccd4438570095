#include <gtest/gtest.h>

#include <random>
#include <set>

#include "progind/ast.hpp"
#include "progind/error.hpp"

using namespace progind;

namespace {

TraceSchema xv_schema() {
    TraceSchema s;
    s.variables = {{"x", 1}, {"v", 1}, {"p2", 2}};
    s.actions = {{"accel", 1}, {"push", 2}};
    return s;
}

Errc parse_error_code(const std::string& text) {
    const auto schema = xv_schema();
    try {
        parse_program(text, Registry::standard(schema), schema);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error for " << text;
    return Errc::format_error;
}

ParsedProgram parse(const std::string& text) {
    const auto schema = xv_schema();
    return parse_program(text, Registry::standard(schema), schema);
}

} // namespace

TEST(Parse, ScaleProgram) {
    const auto p = parse("(accel (scale -9.8 x))");
    const Node& root = p.program.root();
    EXPECT_EQ(root.kind, NodeKind::action);
    EXPECT_EQ(root.name, "accel");
    ASSERT_EQ(root.children.size(), 1u);
    const Node& scale = root.children[0];
    EXPECT_EQ(scale.kind, NodeKind::function);
    EXPECT_EQ(scale.fn, FunctionKind::scale);
    ASSERT_EQ(scale.children.size(), 2u);
    EXPECT_EQ(scale.children[0].kind, NodeKind::param);
    EXPECT_EQ(scale.children[1].kind, NodeKind::var);
    EXPECT_EQ(scale.children[1].name, "x");
    EXPECT_DOUBLE_EQ(p.params.at(scale.children[0].param_id)[0], -9.8);
}

TEST(Parse, Errors) {
    EXPECT_EQ(parse_error_code("(accel x v)"), Errc::arity_mismatch);
    EXPECT_EQ(parse_error_code("(accel (add x"), Errc::parse_error);
    EXPECT_EQ(parse_error_code("(accel (mul x v))"), Errc::unknown_symbol);
    EXPECT_EQ(parse_error_code("(accel y)"), Errc::unknown_symbol);
    EXPECT_EQ(parse_error_code("(accel p2)"), Errc::dimension_mismatch);
    EXPECT_EQ(parse_error_code("(accel (add x p2))"), Errc::dimension_mismatch);
    EXPECT_EQ(parse_error_code("(accel x) extra"), Errc::parse_error);
}

TEST(Parse, ActionsOnlyAtRoot) {
    EXPECT_EQ(parse_error_code("(accel (accel x))"), Errc::unknown_symbol);
    EXPECT_EQ(parse_error_code("(add x v)"), Errc::unknown_symbol);
}

TEST(Parse, QuestionMarkAndVectors) {
    const auto p = parse("(push (add [1 2] (scale ? p2)))");
    ASSERT_EQ(p.params.size(), 2u);
    EXPECT_EQ(p.params.at(0), (Vec{1.0, 2.0}));
    EXPECT_EQ(p.params.at(1), (Vec{0.0}));
    EXPECT_EQ(print_program(p.program, p.params), "(push (add [1.00000 2.00000] (scale 0.00000 p2)))");
}

TEST(Parse, ParamIdsArePreorder) {
    const auto p = parse("(accel (add (scale 1 x) (scale 2 v)))");
    const auto ls = leaves(p.program);
    ASSERT_EQ(ls.size(), 4u);
    EXPECT_EQ(ls[0].param_id, 0);
    EXPECT_EQ(ls[2].param_id, 1);
    EXPECT_EQ(p.params.at(1)[0], 2.0);
}

TEST(Print, Formatting) {
    const auto p = parse("(accel (scale -9.8 x))");
    EXPECT_EQ(print_program(p.program, p.params), "(accel (scale -9.80000 x))");
    EXPECT_EQ(print_program(Program{}, {}), "()");
    EXPECT_THROW(print_program(p.program, {}), Error);
}

TEST(Print, RoundTrip) {
    for (const char* text : {"(accel (add (scale 0.5 x) (sub v (scale -1.25 x))))", "(accel x)",
                             "(push (scale 3 (add p2 [0.5 -0.5])))"}) {
        const auto p = parse(text);
        const auto q = parse(print_program(p.program, p.params, 17));
        EXPECT_EQ(p.program, q.program) << text;
        EXPECT_EQ(p.params, q.params) << text;
    }
}

TEST(Depth, Examples) {
    EXPECT_EQ(depth(Program{}), 0);
    EXPECT_EQ(depth(parse("(accel 1)").program), 1);
    EXPECT_EQ(depth(parse("(accel (add x v))").program), 2);
    EXPECT_EQ(depth(parse("(accel (add (scale 1 x) (scale 2 v)))").program), 3);
}

TEST(Complexity, Examples) {
    EXPECT_EQ(complexity(Program{}), 0.0);
    EXPECT_EQ(complexity(parse("(accel 1)").program), 15.0);
    EXPECT_EQ(complexity(parse("(accel (scale -9.8 x))").program), 26.0);
    EXPECT_EQ(complexity(parse("(accel (add (scale 1 x) (scale 2 v)))").program), 42.0);
    EXPECT_EQ(complexity(parse("(accel (add x x))").program, {1, 2, 3}), 2.0 + 6.0);
}

TEST(CanonicalKey, Examples) {
    EXPECT_EQ(canonical_key(parse("(accel (scale -9.8 x))").program), "(accel (scale ? x))");
    EXPECT_EQ(canonical_key(parse("(accel (scale -9.8 x))").program),
              canonical_key(parse("(accel (scale 0.3 x))").program));
    EXPECT_NE(canonical_key(parse("(accel (scale ? x))").program), canonical_key(parse("(accel (scale ? v))").program));
    EXPECT_NE(canonical_key(parse("(accel (add x ?))").program), canonical_key(parse("(accel (add ? x))").program));
    EXPECT_EQ(canonical_key(Program{}), "()");
}

TEST(Registry, RejectsBadSpecs) {
    Registry r;
    r.add(make_add());
    EXPECT_THROW(r.add(make_add()), Error);
    EXPECT_THROW(r.add(FunctionSpec{"nullary", FunctionKind::add, {}, kGenericDim}), Error);
    EXPECT_EQ(r.find("add")->arity(), 2u);
    EXPECT_EQ(r.find("mul"), nullptr);
}

TEST(Registry, Instantiate) {
    const FunctionSpec scale = make_scale();
    const auto dims = scale.instantiate(3);
    ASSERT_TRUE(dims);
    EXPECT_EQ(*dims, (std::vector<int>{1, 3}));
    FunctionSpec fixed{"norm2", FunctionKind::add, {2, 2}, 1};
    EXPECT_FALSE(fixed.instantiate(2));
    EXPECT_TRUE(fixed.instantiate(1));
}

TEST(Tree, ReplaceAndRename) {
    const auto p = parse("(accel (add x 1))");
    Node scale;
    scale.kind = NodeKind::function;
    scale.fn = FunctionKind::scale;
    scale.name = "scale";
    Node c;
    c.param_id = 5;
    Node v;
    v.kind = NodeKind::var;
    v.name = "v";
    scale.children = {c, v};
    const Program q = replace_leaf(p.program, 0, scale);
    EXPECT_EQ(canonical_key(q), "(accel (add (scale ? v) ?))");
    EXPECT_EQ(max_param_id(q), 5);
    EXPECT_EQ(node_count(q), 6u);
    EXPECT_EQ(canonical_key(rename_variable(q, 1, "x")), "(accel (add (scale ? x) ?))");
    EXPECT_THROW(replace_leaf(p.program, 7, scale), Error);
}

namespace {

Node random_expr(std::mt19937_64& rng, int budget, int& next_id) {
    std::uniform_int_distribution<int> pick(0, budget > 0 ? 4 : 1);
    const int k = pick(rng);
    Node n;
    if (k == 0) {
        n.kind = NodeKind::param;
        n.param_id = next_id++;
        return n;
    }
    if (k == 1) {
        n.kind = NodeKind::var;
        n.name = (rng() & 1u) ? "x" : "v";
        return n;
    }
    n.kind = NodeKind::function;
    n.fn = k == 2 ? FunctionKind::add : k == 3 ? FunctionKind::sub : FunctionKind::scale;
    n.name = k == 2 ? "add" : k == 3 ? "sub" : "scale";
    n.children.push_back(random_expr(rng, budget - 1, next_id));
    n.children.push_back(random_expr(rng, budget - 1, next_id));
    return n;
}

} // namespace

TEST(Property, RandomProgramsRoundTripAndKeysCollideOnlyOnParams) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> val(0.0, 3.0);
    std::set<std::string> keys;
    std::map<std::string, std::string> key_of_structure;
    for (int i = 0; i < 300; ++i) {
        int next_id = 0;
        Node root;
        root.kind = NodeKind::action;
        root.fn = FunctionKind::action;
        root.name = "accel";
        root.children.push_back(random_expr(rng, 3, next_id));
        const Program prog(root);
        ParamValues params;
        for (int id = 0; id < next_id; ++id) params[id] = {val(rng)};

        const auto again = parse(print_program(prog, params, 17));
        EXPECT_EQ(again.program, prog);
        EXPECT_EQ(again.params, params);

        // Same structure and names always give the same key, different
        // structures never do: the key is a function of the ?-erased text.
        ParamValues zeros;
        for (int id = 0; id < next_id; ++id) zeros[id] = {0.0};
        const std::string erased = print_program(prog, zeros);
        const std::string key = canonical_key(prog);
        auto [it, fresh] = key_of_structure.emplace(erased, key);
        if (!fresh) EXPECT_EQ(it->second, key);
        EXPECT_EQ(canonical_key(parse(print_program(prog, params)).program), key);

        EXPECT_GE(complexity(prog), 0.0);
        EXPECT_EQ(complexity(prog), 10.0 * depth(prog) + 5.0 * param_leaf_count(prog) + var_leaf_count(prog));
    }
    std::set<std::string> distinct_keys;
    for (const auto& [erased, key] : key_of_structure) distinct_keys.insert(key);
    EXPECT_EQ(distinct_keys.size(), key_of_structure.size());
}

TEST(Property, ExtendingALeafNeverLowersDepthOrLeafCount) {
    const auto p = parse("(accel (add x (scale 2 v)))");
    const auto before = leaves(p.program).size();
    for (int leaf = 0; leaf < static_cast<int>(before); ++leaf) {
        Node add;
        add.kind = NodeKind::function;
        add.fn = FunctionKind::add;
        add.name = "add";
        Node a;
        a.kind = NodeKind::var;
        a.name = "x";
        add.children = {a, a};
        const Program q = replace_leaf(p.program, leaf, add);
        EXPECT_GE(depth(q), depth(p.program));
        EXPECT_GE(leaves(q).size(), before);
        EXPECT_GE(complexity(q), complexity(p.program));
    }
}
