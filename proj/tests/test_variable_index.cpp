#include <gtest/gtest.h>

#include <random>

#include "progind/error.hpp"
#include "progind/variable_index.hpp"

using namespace progind;

namespace {

ObservationTrace two_scalars(double x, double v) {
    TraceSchema s;
    s.variables = {{"x", 1}, {"v", 1}};
    s.actions = {{"accel", 1}};
    return ObservationTrace(s, {{1, {{"x", {x}}, {"v", {v}}}, "accel", {0.0}}});
}

// Linear scan: smallest squared distance, ties to the smaller name.
std::string scan_nearest(const ObservationTrace& tr, int t, int d, const Vec& q) {
    std::string best;
    double best_d2 = 0.0;
    for (const auto& name : tr.variable_names()) {
        const int id = tr.variable_id(name);
        if (tr.variable_dim(id) != d) continue;
        const auto p = tr.value(id, t);
        double d2 = 0.0;
        for (int k = 0; k < d; ++k) d2 += (q[static_cast<std::size_t>(k)] - p[static_cast<std::size_t>(k)]) *
                                          (q[static_cast<std::size_t>(k)] - p[static_cast<std::size_t>(k)]);
        if (best.empty() || d2 < best_d2) {
            best = name;
            best_d2 = d2;
        }
    }
    return best;
}

} // namespace

TEST(NearestVariable, Examples) {
    const auto tr = two_scalars(0.5, -1.2);
    const VariableIndex idx = build_variable_index(tr);
    const Vec q{-1.0};
    const NearestVariable hit = nearest_variable(idx, 1, 1, q);
    EXPECT_EQ(hit.name, "v");
    EXPECT_EQ(hit.value, (Vec{-1.2}));

    const Vec on_x{0.5};
    EXPECT_EQ(idx.nearest_name(1, 1, on_x), "x");

    const auto sym = two_scalars(0.3, -0.3);
    const VariableIndex sidx(sym);
    const Vec zero{0.0};
    const auto tie = sidx.nearest(1, 1, zero);
    EXPECT_EQ(tie.name, "v");
    EXPECT_EQ(tie.value, (Vec{-0.3}));
}

TEST(NearestVariable, Errors) {
    const VariableIndex idx(two_scalars(0.0, 1.0));
    const Vec q2{0.0, 0.0};
    const Vec q1{0.0};
    EXPECT_THROW(idx.nearest(1, 2, q2), Error);
    EXPECT_THROW(idx.nearest(2, 1, q1), Error);
    EXPECT_THROW(idx.nearest(1, 1, q2), Error);
    try {
        idx.nearest(1, 2, q2);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::no_variable_of_dimension);
    }
}

TEST(VariableIndex, Cardinality) {
    TraceSchema s;
    s.variables = {{"x", 1}, {"v", 1}, {"w", 3}};
    s.actions = {{"a", 1}};
    std::vector<TraceStep> steps;
    for (int t = 1; t <= 5; ++t) steps.push_back({t, {{"x", {1.0 * t}}, {"v", {-1.0 * t}}, {"w", {0, 0, 0}}}, "a", {0}});
    const VariableIndex idx(ObservationTrace(s, steps));
    EXPECT_EQ(idx.length(), 5);
    for (int t = 1; t <= 5; ++t) {
        EXPECT_EQ(idx.tree_size(t, 1), 2u);
        EXPECT_EQ(idx.tree_size(t, 3), 1u);
        EXPECT_EQ(idx.tree_size(t, 2), 0u);
    }
    const Vec far{100.0, -5.0, 7.0};
    EXPECT_EQ(idx.nearest_name(3, 3, far), "w");
}

TEST(VariableIndex, SingleVariableAlwaysWins) {
    TraceSchema s;
    s.variables = {{"only", 2}};
    s.actions = {{"a", 1}};
    const ObservationTrace tr(s, {{1, {{"only", {0.0, 0.0}}}, "a", {0.0}}});
    const VariableIndex idx(tr);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 100.0);
    for (int i = 0; i < 50; ++i) {
        const Vec q{n(rng), n(rng)};
        EXPECT_EQ(idx.nearest_name(1, 2, q), "only");
    }
}

TEST(Property, MatchesLinearScan) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        TraceSchema s;
        const int n_vars = 2 + static_cast<int>(rng() % 25);
        for (int i = 0; i < n_vars; ++i) s.variables["v" + std::to_string(i)] = 1 + static_cast<int>(rng() % 3);
        s.actions = {{"a", 1}};
        // Integer coordinates on a small grid produce plenty of exact ties.
        std::uniform_int_distribution<int> coord(-3, 3);
        std::vector<TraceStep> steps;
        for (int t = 1; t <= 4; ++t) {
            TraceStep st{t, {}, "a", {0.0}};
            for (const auto& [name, d] : s.variables) {
                Vec v(static_cast<std::size_t>(d));
                for (double& x : v) x = coord(rng);
                st.vars[name] = v;
            }
            steps.push_back(st);
        }
        const ObservationTrace tr(s, steps);
        const VariableIndex idx(tr);
        std::uniform_real_distribution<double> real(-4.0, 4.0);
        for (int q = 0; q < 200; ++q) {
            const int t = 1 + static_cast<int>(rng() % 4);
            const int d = 1 + static_cast<int>(rng() % 3);
            if (idx.tree_size(t, d) == 0) continue;
            Vec query(static_cast<std::size_t>(d));
            for (double& x : query) x = (q % 2 == 0) ? coord(rng) * 0.5 : real(rng);
            EXPECT_EQ(idx.nearest_name(t, d, query), scan_nearest(tr, t, d, query));
        }
    }
}

TEST(KdTree, Basic) {
    const KdTree tree(2, {0, 0, 1, 1, 2, 2, 1, 1}, {3, 1, 2, 0});
    const Vec q{1.1, 0.9};
    const auto hit = tree.nearest(q);
    EXPECT_EQ(hit.label, 0);  // two copies of (1,1): lower label
    EXPECT_NEAR(hit.dist2, 0.02, 1e-12);
    EXPECT_EQ(tree.size(), 4u);
}
