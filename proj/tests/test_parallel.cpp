#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <stdexcept>

#include "micromaser/parallel.hpp"

using namespace micromaser;

TEST_CASE("batch of trajectories: parallel equals the serial reference") {
  SimParams p;
  p.R = 500;
  p.delta_phi = 0.05;
  p.eta_g = 0.8;
  p.r_b = 2;
  TrajectoryOptions options;
  options.controller = ControllerConfig::defaults_for(p);
  const auto schedule = InjectionSchedule::uniform_spacing(2, 4);
  const auto serial = run_batch(p, schedule, 30.0, 77, 16, options, Execution::serial);
  const auto parallel = run_batch(p, schedule, 30.0, 77, 16, options, Execution::parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    REQUIRE(serial[i].events.size() == parallel[i].events.size());
    for (std::size_t k = 0; k < serial[i].events.size(); ++k) {
      CHECK(serial[i].events[k].t == parallel[i].events[k].t);
      CHECK(serial[i].events[k].kind == parallel[i].events[k].kind);
    }
    REQUIRE(serial[i].detections.size() == parallel[i].detections.size());
    for (std::size_t k = 0; k < serial[i].detections.size(); ++k)
      CHECK(serial[i].detections[k].t_trigger == parallel[i].detections[k].t_trigger);
  }
}

TEST_CASE("trajectory i of a batch is the single run with child seed i") {
  SimParams p;
  p.R = 200;
  const auto schedule = InjectionSchedule::fixed_spacing(1.0, 0.5);
  const auto batch = run_batch(p, schedule, 5.0, 3, 4, {}, Execution::parallel);
  const auto single = run_trajectory(p, schedule, 5.0, child_seed(3, 2));
  REQUIRE(batch[2].events.size() == single.events.size());
  for (std::size_t k = 0; k < single.events.size(); ++k) CHECK(batch[2].events[k].t == single.events[k].t);
}

TEST_CASE("chained occupation estimate is execution independent") {
  SimParams p;
  p.R = 80;
  p.delta_phi = 0.2;
  p.n_t = 0.1;
  const auto a = sampled_occupation_chains(p, 200'000, 8, 5, Execution::serial);
  const auto b = sampled_occupation_chains(p, 200'000, 8, 5, Execution::parallel);
  CHECK(a == b);
}

TEST_CASE("worker exceptions surface after the loop, lowest index first") {
  std::atomic<int> visited{0};
  try {
    for_each_index(10, Execution::parallel, [&](std::size_t i) {
      ++visited;
      if (i == 3 || i == 7) throw std::runtime_error("index " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "index 3");
  }
  CHECK(visited == 10);
}
