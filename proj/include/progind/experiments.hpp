#ifndef PROGIND_EXPERIMENTS_HPP
#define PROGIND_EXPERIMENTS_HPP

#include <cstdint>

#include "progind/trace.hpp"

namespace progind {

/// x'' = k1 x + k2 x', observed as accel(theta) with theta the instantaneous
/// acceleration.
struct SecondOrderConfig {
    double k1 = -9.8;
    double k2 = 0.0;
    double x0 = 0.1;
    double v0 = 0.0;
    double dt = 0.01;
    int steps = 100;

    static SecondOrderConfig pendulum();
    static SecondOrderConfig oscillator();
};

/// Semi-implicit Euler rollout; variables {x, v}, action accel.
ObservationTrace simulate_second_order(const SecondOrderConfig& cfg);

/// Synthetic paddle controller standing in for a learnt game policy. The
/// agent moves by move(+1/0/-1) following the sign of
/// u = c_ball * ball_y - c_agent * agent_y outside a deadband.
struct PaddleConfig {
    double field_height = 10.0;
    double ball_y0 = 5.0;
    double ball_speed = 9.0;   // units per second, reversed at 0 and field_height
    double agent_y0 = 4.0;
    double paddle_speed = 4.0;
    double opponent_y0 = 5.0;
    double opponent_speed = 3.0;
    double deadband = 0.5;
    double c_agent = 0.35;
    double c_ball = 0.30;
    double dt = 0.05;
    int steps = 200;
    std::uint64_t seed = 7;
};

/// The controller's decision for one state: 0 inside the deadband, else the
/// sign of u.
double paddle_action(const PaddleConfig& cfg, double agent_y, double ball_y);

/// Variables {agent_y, ball_y, opponent_y}, action move.
ObservationTrace simulate_paddle(const PaddleConfig& cfg);

} // namespace progind

#endif
