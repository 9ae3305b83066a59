#include <gtest/gtest.h>

#include "abbm/errors.hpp"
#include "harness/config.hpp"

using namespace abbm;
using namespace abbm::harness;

TEST(Config, ParseText) {
  const auto cfg = parse_config(
      "# comment\n"
      "beta = 2\n"
      "rho=0.5   # trailing\n"
      "frame = drifted\n"
      "p_1 = 0.25\n"
      "p_3 = 0.75\n"
      "checkpoints = 1, 2.5, 4\n"
      "phi = step,tent\n"
      "barrier_mode = tag\n"
      "upper_line_z = 6\n"
      "\n");
  EXPECT_EQ(cfg.beta, 2.0);
  EXPECT_EQ(cfg.rho, 0.5);
  EXPECT_EQ(cfg.frame, Frame::DriftedAbsorbedAtZero);
  EXPECT_EQ(cfg.offspring, (std::map<int, double>{{1, 0.25}, {3, 0.75}}));
  EXPECT_EQ(cfg.checkpoint_grid(), (std::vector<double>{1.0, 2.5, 4.0}));
  EXPECT_EQ(cfg.phi, (std::vector<std::string>{"step", "tent"}));
  EXPECT_EQ(cfg.barrier_mode, BarrierMode::Tag);
  EXPECT_EQ(cfg.upper_line_z, 6.0);
}

TEST(Config, ZeroChildrenRejected) {
  ExperimentConfig cfg;
  try {
    cfg.set("p_0", "0.1");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("L >= 1"), std::string::npos);
  }
}

TEST(Config, UnknownKeyAndBadValues) {
  ExperimentConfig cfg;
  EXPECT_THROW(cfg.set("bogus", "1"), ConfigError);
  EXPECT_THROW(cfg.set("beta", "fast"), ConfigError);
  EXPECT_THROW(cfg.set("replicas", "-3"), ConfigError);
  EXPECT_THROW(cfg.set("frame", "sideways"), ConfigError);
  EXPECT_THROW(parse_config("beta 2\n"), ConfigError);
  cfg.set("phi", "wiggle");
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, Validation) {
  ExperimentConfig cfg;
  cfg.set("x0", "0");
  EXPECT_ANY_THROW(cfg.validate());
  cfg.set("frame", "none");
  EXPECT_NO_THROW(cfg.validate());
  cfg.set("late_touch_s", "1");
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, HashIgnoresExecutionKeys) {
  ExperimentConfig a, b;
  b.set("threads", "7");
  b.set("output", "/tmp/x.jsonl");
  b.set("summary", "/tmp/x.csv");
  EXPECT_EQ(a.hash(), b.hash());
  b.set("seed", "2");
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
}

TEST(Config, CanonicalIsOrderIndependent) {
  const auto a = parse_config("rho = 0.3\nbeta = 1.5\n");
  const auto b = parse_config("beta = 1.5\nrho = 0.3\n");
  EXPECT_EQ(a.canonical(), b.canonical());
}

TEST(Config, ToSpec) {
  auto cfg = parse_config(
      "horizon = 3\ndt = 0.5\nupper_line_z = 4\ntruncation_s = 1\nphi = half\nbarrier_mode = tag\n"
      "late_touch_s = 1,2\nlate_touch_A = 1.5\nreplicas = 9\nseed = 5\nthreads = 2\n");
  const auto spec = cfg.to_spec();
  EXPECT_EQ(spec.replicas, 9u);
  EXPECT_EQ(spec.master_seed, 5u);
  EXPECT_EQ(spec.threads, 2u);
  EXPECT_EQ(spec.options.checkpoints.size(), 6u);
  EXPECT_EQ(spec.options.upper_line, 4.0);
  EXPECT_EQ(spec.functionals.upper_line, 4.0);
  ASSERT_EQ(spec.functionals.test_functions.size(), 1u);
  EXPECT_EQ(spec.functionals.test_functions[0].name(), "half");
  EXPECT_EQ(spec.functionals.late_touch_window, 1.5);
  EXPECT_EQ(spec.params.lambda_star, std::sqrt(2.0));
}

TEST(Config, Helpers) {
  EXPECT_EQ(trim("  a b \t"), "a b");
  EXPECT_EQ(parse_list("1, 2,3", "k"), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(parse_uint("12", "k"), 12u);
  EXPECT_THROW(parse_uint("1.5", "k"), ConfigError);
  EXPECT_THROW(parse_double("", "k"), ConfigError);
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
}
