#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "grl/environment.hpp"

using namespace grl;

namespace {

GadgetDef two_qubit_gadget() { return {"g", 2, 1, {{GateKind::CZ, {0, 1}, -1}, {GateKind::RZ, {1, 0}, 0}}}; }
GadgetDef one_qubit_gadget() {
    return {"s", 1, 1, {{GateKind::SX, {0, 0}, -1}, {GateKind::RZ, {0, 0}, 0}, {GateKind::SX, {0, 0}, -1}}};
}

}  // namespace

TEST(ActionTable, Sizes) {
    EXPECT_EQ(build_action_table(2, kNativeKinds).size(), 7u);
    EXPECT_EQ(build_action_table(3, kNativeKinds).size(), 12u);
    EXPECT_EQ(build_action_table(2, kUniversalKinds).size(), 8u);
    const GadgetDef g2 = two_qubit_gadget();
    const GadgetDef g1 = one_qubit_gadget();
    EXPECT_EQ(build_action_table(2, kNativeKinds, std::span(&g2, 1)).size(), 7u + 2u);
    EXPECT_EQ(build_action_table(3, kNativeKinds, std::span(&g1, 1)).size(), 12u + 3u);
}

TEST(ActionTable, OrderAndUniqueness) {
    const ActionTable t = build_action_table(3, kNativeKinds);
    EXPECT_EQ(t[0], (Action{GateKind::CZ, {0, 1}, 2, -1, 0}));
    EXPECT_EQ(t[2], (Action{GateKind::CZ, {1, 2}, 2, -1, 0}));
    EXPECT_EQ(t[3], (Action{GateKind::RZ, {0, 0}, 1, -1, 1}));
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j) EXPECT_NE(t[i], t[j]);
}

TEST(Environment, ResetGivesEmptyObservationAndBasisCost) {
    Environment env(make_tfim_episode({2, 1.0, 1.0}, kNativeKinds, {}, 20));
    const StepOutcome s = env.reset();
    EXPECT_TRUE(std::all_of(s.observation.data.begin(), s.observation.data.end(), [](auto v) { return v == 0; }));
    EXPECT_EQ(s.reward, 0.0);
    EXPECT_FALSE(s.done);
    // <00|H|00> = -J, mu = -J - 2h.
    EXPECT_NEAR(s.energy, -1.0, 1e-15);
    EXPECT_NEAR(s.cost, 2.0, 1e-15);
    EXPECT_EQ(env.steps(), 0);
}

TEST(Environment, RewardBranches) {
    EpisodeConfig cfg = make_tfim_episode({2, 1.0, 1.0}, kNativeKinds, {}, 2);
    Environment env(cfg);

    env.set_threshold(100.0);
    env.reset();
    StepOutcome s = env.step(0);
    EXPECT_EQ(s.reward, 5.0);
    EXPECT_TRUE(s.done);
    EXPECT_THROW(env.step(0), std::logic_error);

    env.set_threshold(1e-9);
    env.reset();
    s = env.step(1);
    EXPECT_EQ(s.reward, 0.0);
    EXPECT_FALSE(s.done);
    s = env.step(2);
    EXPECT_EQ(s.reward, -5.0);
    EXPECT_TRUE(s.done);

    env.reset();
    EXPECT_THROW(env.step(7), std::out_of_range);
    EXPECT_THROW(env.step(-1), std::out_of_range);
}

TEST(Environment, OptimizesAllParametersJointly) {
    // RY-like rotation from SX RZ SX reaches the best product state of the weak-field chain.
    Environment env(make_tfim_episode({2, 1.0, 0.3}, kNativeKinds, {}, 20));
    env.set_threshold(1e-12);
    env.reset();
    env.step(3);  // SX(0)
    const StepOutcome s1 = env.step(1);  // RZ(0)
    ASSERT_EQ(s1.optimized_params.size(), 1u);
    const StepOutcome s2 = env.step(3);  // SX(0)
    // -<Z0> - h<X0> minimized over the x-z circle: -sqrt(1 + h^2).
    EXPECT_NEAR(s2.energy, -std::sqrt(1.0 + 0.09), 1e-9);
    EXPECT_NEAR(s2.cost, std::abs(s2.energy - (-1.0 - 0.6)), 1e-15);
    EXPECT_EQ(env.circuit().parameters.size(), 1u);
}

TEST(Environment, GadgetAddsItsAngleSlots) {
    GadgetLibrary lib{one_qubit_gadget(), two_qubit_gadget()};
    Environment env(make_tfim_episode({2, 1.0, 0.5}, kNativeKinds, lib, 20));
    env.set_threshold(1e-12);
    env.reset();
    const int first_gadget = 7;
    env.step(first_gadget);
    EXPECT_EQ(env.circuit().parameters.size(), 1u);
    env.step(first_gadget + 2);  // two-qubit gadget (0, 1)
    EXPECT_EQ(env.circuit().parameters.size(), 2u);
    const Circuit flat = env.bound_circuit();
    EXPECT_EQ(flat.size(), 5u);
    EXPECT_TRUE(is_bound(flat));
}

TEST(Environment, RandomEpisodesRespectInvariants) {
    std::mt19937_64 rng(61);
    EpisodeConfig cfg = make_tfim_episode({2, 1.0, 1.0}, kNativeKinds, {}, 8);
    cfg.optimizer_evaluations = 100;
    Environment env(cfg);
    env.set_threshold(0.8);
    std::uniform_int_distribution<int> pick(0, env.num_actions() - 1);
    for (int episode = 0; episode < 30; ++episode) {
        env.reset();
        int positive = 0;
        while (!env.done()) {
            const StepOutcome s = env.step(pick(rng));
            EXPECT_TRUE(s.reward == 5.0 || s.reward == 0.0 || s.reward == -5.0);
            EXPECT_GE(s.cost, 0.0);
            EXPECT_EQ(s.done, s.cost < 0.8 || env.steps() >= 8);
            positive += s.reward > 0;
        }
        EXPECT_LE(env.steps(), 8);
        EXPECT_LE(positive, 1);
    }
}

TEST(Curriculum, InitialThreshold) {
    const CurriculumState s = curriculum_init({}, -3.0);
    EXPECT_EQ(s.threshold, 5e-3);
    EXPECT_EQ(s.amortization, 1e-4);
}

TEST(Curriculum, NewBestResetsThreshold) {
    CurriculumState s = curriculum_init({}, -3.0);
    s = curriculum_update(s, {0.9, false});
    EXPECT_DOUBLE_EQ(s.zeta_best, 0.9);
    EXPECT_DOUBLE_EQ(s.threshold, 0.9 + 1e-4);
    s = curriculum_update(s, {0.95, false});
    EXPECT_DOUBLE_EQ(s.threshold, 0.9 + 1e-4);
}

TEST(Curriculum, AmortizationShrinksEvery50Successes) {
    CurriculumState s = curriculum_init({}, -3.0);
    s = curriculum_update(s, {0.5, true});
    for (int i = 1; i < 50; ++i) s = curriculum_update(s, {0.5, true});
    EXPECT_EQ(s.success_count, 50);
    EXPECT_NEAR(s.amortization, 9e-5, 1e-18);
}

TEST(Curriculum, GreedyShiftAndBacktrack) {
    CurriculumConfig cfg;
    cfg.greedy_period = 10;
    cfg.failure_streak_limit = 3;
    CurriculumState s = curriculum_init(cfg, -3.0);
    s = curriculum_update(s, {0.2, false});
    for (int i = 1; i < 10; ++i) s = curriculum_update(s, {0.3, false});
    EXPECT_TRUE(s.after_greedy);
    EXPECT_DOUBLE_EQ(s.threshold, 0.2);
    s = curriculum_update(s, {0.3, false});
    s = curriculum_update(s, {0.3, false});
    EXPECT_DOUBLE_EQ(s.threshold, 0.2);
    s = curriculum_update(s, {0.3, false});
    EXPECT_FALSE(s.after_greedy);
    EXPECT_DOUBLE_EQ(s.threshold, 0.2 + 1e-4);
}

TEST(Curriculum, ThresholdStaysPositive) {
    CurriculumState s = curriculum_init({}, -3.0);
    s = curriculum_update(s, {0.0, true});
    for (int i = 0; i < 10; ++i) s = curriculum_update(s, {0.0, true});
    EXPECT_GT(s.threshold, 0.0);
}
