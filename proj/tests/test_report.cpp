#include <gtest/gtest.h>

#include <json.hpp>

#include "progind/error.hpp"
#include "progind/experiments.hpp"
#include "progind/report.hpp"

using namespace progind;

namespace {

Errc merge_error(const std::string& text) {
    RunConfig c;
    try {
        merge_run_config_json(c, text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "accepted " << text;
    return Errc::parse_error;
}

std::string section(const std::string& report, const std::string& name) {
    const auto b = report.find("[" + name + "]");
    const auto e = report.find("[/" + name + "]");
    if (b == std::string::npos || e == std::string::npos) return {};
    return report.substr(b + name.size() + 2, e - b - name.size() - 2);
}

} // namespace

TEST(RunConfig, DefaultsAndMerge) {
    RunConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.top_k, 3);
    EXPECT_EQ(c.weights.depth, 10.0);
    merge_run_config_json(c, R"({"e_max":0.2,"weights":[1,2,3],"seed":9,"workers":4})");
    EXPECT_EQ(c.e_max, 0.2);
    EXPECT_EQ(c.weights.params, 2.0);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.search().workers, 4);
    EXPECT_EQ(c.error_spec().e_max, 0.2);
    EXPECT_EQ(c.max_opt_iters, RunConfig{}.max_opt_iters);

    RunConfig back;
    merge_run_config_json(back, run_config_json(c));
    EXPECT_EQ(run_config_json(back), run_config_json(c));
}

TEST(RunConfig, Rejects) {
    EXPECT_EQ(merge_error(R"({"nope":1})"), Errc::format_error);
    EXPECT_EQ(merge_error(R"({"weights":[1,2]})"), Errc::format_error);
    EXPECT_EQ(merge_error(R"({"e_max":"big"})"), Errc::format_error);
    EXPECT_EQ(merge_error("[1]"), Errc::format_error);
    EXPECT_EQ(merge_error("{"), Errc::format_error);
    RunConfig c;
    c.e_max = -1.0;
    EXPECT_THROW(c.validate(), Error);
    c = {};
    c.top_k = 0;
    EXPECT_THROW(c.validate(), Error);
}

TEST(Report, ProgramsRoundTripToReportedLoss) {
    const auto tr = simulate_second_order(SecondOrderConfig::pendulum());
    RunConfig cfg;
    cfg.seed = 42;
    const auto reg = Registry::standard(tr.schema());
    const SolutionSet s = induce(tr, reg, cfg.error_spec(), cfg.search());
    ASSERT_TRUE(s.solution);
    const std::string report = format_report(s, cfg, "pendulum.trace");
    EXPECT_NE(program_section(report).find("status: accepted"), std::string::npos);
    EXPECT_NE(section(report, "config").find("e_max = 0.01"), std::string::npos);

    const auto doc = nlohmann::json::parse(section(report, "json"));
    EXPECT_TRUE(doc.at("accepted").get<bool>());
    std::vector<nlohmann::json> entries{doc.at("solution")};
    for (const auto& t : doc.at("top")) entries.push_back(t);
    EXPECT_EQ(entries.size(), 1 + s.top.size());
    for (const auto& e : entries) {
        const auto p = parse_program(e.at("program_exact").get<std::string>(), reg, tr.schema());
        const auto r = execute(p.program, p.params, tr, cfg.error_spec());
        EXPECT_EQ(r.loss, e.at("loss").get<double>()) << e.dump();
        EXPECT_EQ(canonical_key(p.program), e.at("structure").get<std::string>());
        EXPECT_EQ(complexity(p.program), e.at("complexity").get<double>());
        EXPECT_EQ(e.at("f_total").get<double>(), e.at("complexity").get<double>() + e.at("loss").get<double>());
    }

    RunConfig echoed;
    merge_run_config_json(echoed, doc.at("config").dump());
    EXPECT_EQ(run_config_json(echoed), run_config_json(cfg));

    const SolutionSet again = induce(tr, reg, cfg.error_spec(), cfg.search());
    EXPECT_EQ(program_section(format_report(again, cfg, "pendulum.trace")), program_section(report));
}

TEST(Report, NoSolution) {
    SolutionSet s;
    s.iterations = 7;
    const std::string report = format_report(s, RunConfig{}, "t");
    EXPECT_NE(program_section(report).find("no accepted solution"), std::string::npos);
    const auto doc = nlohmann::json::parse(section(report, "json"));
    EXPECT_TRUE(doc.at("solution").is_null());
    EXPECT_EQ(doc.at("iterations").get<int>(), 7);
    EXPECT_EQ(program_section("nothing here"), "");
}
