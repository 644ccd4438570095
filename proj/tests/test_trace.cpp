#include <gtest/gtest.h>

#include <sstream>

#include "progind/error.hpp"
#include "progind/experiments.hpp"
#include "progind/trace.hpp"

using namespace progind;

namespace {

Errc load_error(const std::string& doc) {
    std::istringstream in(doc);
    try {
        load_trace(in);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "accepted: " << doc;
    return Errc::parse_error;
}

const char* kHeader = R"({"schema":{"variables":{"x":1,"v":1},"actions":{"accel":1}},"steps":[)";

std::string doc_with(const std::string& steps) { return std::string(kHeader) + steps + "]}"; }

std::string step(int t, const std::string& vars, const std::string& theta = "[0.5]") {
    return R"({"t":)" + std::to_string(t) + R"(,"vars":)" + vars + R"(,"action":{"name":"accel","theta":)" + theta + "}}";
}

} // namespace

TEST(LoadTrace, PendulumFile) {
    const ObservationTrace pend = simulate_second_order(SecondOrderConfig::pendulum());
    std::stringstream buf;
    save_trace(pend, buf);
    const ObservationTrace back = load_trace(buf);
    EXPECT_EQ(back.length(), 100);
    EXPECT_EQ(back.schema().variables, (std::map<std::string, int>{{"v", 1}, {"x", 1}}));
    EXPECT_EQ(back.schema().actions, (std::map<std::string, int>{{"accel", 1}}));
    EXPECT_EQ(back, pend);
}

TEST(LoadTrace, Errors) {
    const std::string ok = R"({"x":[1],"v":[2]})";
    EXPECT_EQ(load_error(doc_with(step(1, ok) + "," + step(2, ok) + "," + step(3, R"({"x":[1]})"))),
              Errc::missing_variable);
    EXPECT_EQ(load_error(doc_with(step(1, ok, "[1,2]"))), Errc::dimension_mismatch);
    EXPECT_EQ(load_error(doc_with(step(1, R"({"x":[1,2],"v":[2]})"))), Errc::dimension_mismatch);
    EXPECT_EQ(load_error(doc_with(step(1, ok) + "," + step(3, ok))), Errc::non_contiguous_timesteps);
    EXPECT_EQ(load_error(doc_with(step(2, ok))), Errc::non_contiguous_timesteps);
    EXPECT_EQ(load_error(doc_with("")), Errc::format_error);
    EXPECT_EQ(load_error("{not json"), Errc::format_error);
    EXPECT_EQ(load_error(R"({"steps":[]})"), Errc::format_error);
    EXPECT_EQ(load_error(doc_with(step(1, R"({"x":[1],"v":["a"]})"))), Errc::format_error);
}

TEST(MemoryAt, Pendulum) {
    const ObservationTrace pend = simulate_second_order(SecondOrderConfig::pendulum());
    const MemoryState m1 = memory_at(pend, 1, {{0, {2.0}}});
    EXPECT_EQ(m1.t, 1);
    EXPECT_DOUBLE_EQ(m1.vars.at("x")[0], 0.1);
    EXPECT_DOUBLE_EQ(m1.vars.at("v")[0], 0.0);
    EXPECT_EQ(m1.params.at(0), (Vec{2.0}));

    const MemoryState last = memory_at(pend, 100, {});
    EXPECT_EQ(last.vars, pend.steps().back().vars);
    EXPECT_THROW(memory_at(pend, 0, {}), Error);
    EXPECT_THROW(memory_at(pend, 101, {}), Error);

    const MemoryState again = memory_at(pend, 37, {});
    EXPECT_EQ(again.vars, memory_at(pend, 37, {}).vars);
}

TEST(ObservationTrace, ColumnAccess) {
    TraceSchema s;
    s.variables = {{"a", 2}, {"b", 1}};
    s.actions = {{"go", 1}};
    std::vector<TraceStep> steps{{1, {{"a", {1, 2}}, {"b", {3}}}, "go", {0.1}}, {2, {{"a", {4, 5}}, {"b", {6}}}, "go", {0.2}}};
    ObservationTrace tr(s, steps);
    EXPECT_EQ(tr.variable_names(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(tr.variable_id("b"), 1);
    EXPECT_EQ(tr.variable_id("zzz"), -1);
    const auto a2 = tr.value(0, 2);
    ASSERT_EQ(a2.size(), 2u);
    EXPECT_EQ(a2[0], 4.0);
    EXPECT_EQ(a2[1], 5.0);
    EXPECT_EQ(tr.value(1, 1)[0], 3.0);
    EXPECT_EQ(tr.theta(2)[0], 0.2);
    EXPECT_EQ(tr.action(1), "go");
}

TEST(SaveLoad, RoundTripIsIdentity) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        PaddleConfig cfg;
        cfg.seed = seed;
        const ObservationTrace tr = simulate_paddle(cfg);
        std::stringstream buf;
        save_trace(tr, buf);
        EXPECT_EQ(load_trace(buf), tr);
    }
}
