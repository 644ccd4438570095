#include "progind/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "progind/error.hpp"

namespace progind {

SecondOrderConfig SecondOrderConfig::pendulum() { return {}; }

SecondOrderConfig SecondOrderConfig::oscillator() {
    SecondOrderConfig c;
    c.k1 = -4.0;
    c.k2 = -0.25;
    c.x0 = 8.0;
    c.v0 = 0.0;
    return c;
}

ObservationTrace simulate_second_order(const SecondOrderConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw Error(Errc::invalid_config, "dt must be positive");
    if (cfg.steps < 1) throw Error(Errc::invalid_config, "steps must be at least 1");
    if (!std::isfinite(cfg.k1) || !std::isfinite(cfg.k2) || !std::isfinite(cfg.x0) || !std::isfinite(cfg.v0))
        throw Error(Errc::invalid_config, "coefficients and initial state must be finite");

    TraceSchema schema;
    schema.variables = {{"v", 1}, {"x", 1}};
    schema.actions = {{"accel", 1}};
    std::vector<TraceStep> steps;
    steps.reserve(static_cast<std::size_t>(cfg.steps));
    double x = cfg.x0, v = cfg.v0;
    for (int t = 1; t <= cfg.steps; ++t) {
        const double accel = cfg.k1 * x + cfg.k2 * v;
        steps.push_back({t, {{"x", {x}}, {"v", {v}}}, "accel", {accel}});
        v = v + accel * cfg.dt;
        x = x + v * cfg.dt;
    }
    return ObservationTrace(std::move(schema), std::move(steps));
}

double paddle_action(const PaddleConfig& cfg, double agent_y, double ball_y) {
    const double u = cfg.c_ball * ball_y - cfg.c_agent * agent_y;
    if (std::abs(u) <= cfg.deadband) return 0.0;
    return u > 0.0 ? 1.0 : -1.0;
}

ObservationTrace simulate_paddle(const PaddleConfig& cfg) {
    if (!(cfg.dt > 0.0) || cfg.steps < 1) throw Error(Errc::invalid_config, "dt must be positive and steps >= 1");
    if (!(cfg.field_height > 0.0)) throw Error(Errc::invalid_config, "field height must be positive");
    if (!(cfg.deadband >= 0.0)) throw Error(Errc::invalid_config, "deadband must be nonnegative");
    if (!std::isfinite(cfg.c_agent) || !std::isfinite(cfg.c_ball))
        throw Error(Errc::invalid_config, "controller coefficients must be finite");
    if (cfg.ball_speed < 0.0 || cfg.paddle_speed < 0.0 || cfg.opponent_speed < 0.0)
        throw Error(Errc::invalid_config, "speeds must be nonnegative");

    // The seed perturbs the serve: starting height and direction.
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);
    const double H = cfg.field_height;
    double ball = std::clamp(cfg.ball_y0 + jitter(rng), 0.0, H);
    double dir = (rng() & 1u) ? 1.0 : -1.0;
    double agent = cfg.agent_y0;
    double opponent = cfg.opponent_y0;

    TraceSchema schema;
    schema.variables = {{"agent_y", 1}, {"ball_y", 1}, {"opponent_y", 1}};
    schema.actions = {{"move", 1}};
    std::vector<TraceStep> steps;
    steps.reserve(static_cast<std::size_t>(cfg.steps));
    for (int t = 1; t <= cfg.steps; ++t) {
        const double theta = paddle_action(cfg, agent, ball);
        steps.push_back({t, {{"agent_y", {agent}}, {"ball_y", {ball}}, {"opponent_y", {opponent}}}, "move", {theta}});

        agent = std::clamp(agent + theta * cfg.paddle_speed * cfg.dt, 0.0, H);
        const double reach = cfg.opponent_speed * cfg.dt;
        opponent += std::clamp(ball - opponent, -reach, reach);
        ball += dir * cfg.ball_speed * cfg.dt;
        if (ball > H) {
            ball = 2.0 * H - ball;
            dir = -1.0;
        } else if (ball < 0.0) {
            ball = -ball;
            dir = 1.0;
        }
    }
    return ObservationTrace(std::move(schema), std::move(steps));
}

} // namespace progind
