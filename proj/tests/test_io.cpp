#include "doctest.h"
#include "pivot/errors.hpp"
#include "pivot/scenario_io.hpp"

using namespace pivot;

TEST_SUITE_BEGIN("scenario_io");

TEST_CASE("a minimal file fills in every documented default") {
  const Scenario sc = parse_scenario_text(
      R"({"object": {"dimensions": [0.6, 0.4, 0.2], "mass": 1.4}})");
  CHECK(sc.mpc.alpha == 100.0);
  CHECK(sc.mpc.beta == 0.1);
  CHECK(sc.mpc.n_p == 10);
  CHECK(sc.mpc.T == 0.02);
  CHECK(sc.gait.step_length == 0.085);
  CHECK(sc.weights.delta_ds == 10.0);
  CHECK(sc.weights.delta_qs == 1.0);
  CHECK(sc.detector.f_thr == 3.0);
  CHECK(sc.goal_steps == 2);
  CHECK(sc.object.inertia(0, 0) ==
        doctest::Approx(1.4 / 12 * (0.16 + 0.04)).epsilon(1e-12));
  CHECK_NOTHROW(validate_scenario(sc));
}

TEST_CASE("negative mass is rejected with the field named") {
  CHECK_THROWS_WITH_AS(
      parse_scenario_text(R"({"object": {"dimensions": [1, 1, 1], "mass": -2}})"),
      doctest::Contains("object.mass"), ValidationError);
}

TEST_CASE("unknown keys are parse errors") {
  CHECK_THROWS_AS(parse_scenario_text(R"({"objct": {}})"), ParseError);
  CHECK_THROWS_AS(parse_scenario_text(R"({"mpc": {"alpa": 2}})"), ParseError);
}

TEST_CASE("malformed JSON reports a parse diagnostic") {
  CHECK_THROWS_AS(parse_scenario_text("{ not json"), ParseError);
}

TEST_CASE("an event list round-trips through serialize and parse") {
  Scenario sc = make_default_scenario();
  DisturbanceEvent ev;
  ev.kind = DisturbanceEvent::Kind::Payload;
  ev.time = 1.5;
  ev.mass = 2.0;
  ev.position = Vec3(0, 0, 0.1);
  sc.events.push_back(ev);
  DisturbanceEvent push;
  push.kind = DisturbanceEvent::Kind::Push;
  push.time = 2.25;
  push.force = Vec3(0, 15, 0);
  push.duration = 0.2;
  sc.events.push_back(push);

  const Scenario back = parse_scenario_text(serialize_scenario(sc));
  REQUIRE(back.events.size() == 2);
  CHECK(back.events[0].kind == DisturbanceEvent::Kind::Payload);
  CHECK(back.events[0].time == 1.5);
  CHECK(back.events[0].mass == 2.0);
  CHECK((back.events[0].position - Vec3(0, 0, 0.1)).norm() == 0.0);
  CHECK(back.events[1].kind == DisturbanceEvent::Kind::Push);
  CHECK(back.events[1].duration == 0.2);
  CHECK(serialize_scenario(back) == serialize_scenario(sc));
}

TEST_CASE("the serialized echo reparses to an identical configuration") {
  Scenario sc = make_default_scenario();
  sc.name = "echo";
  sc.seed = 42;
  sc.mpc.n_p = 7;
  sc.weights.beta_g = 0.25;
  sc.allow_switching = false;
  const Scenario back = parse_scenario_text(serialize_scenario(sc));
  CHECK(serialize_scenario(back) == serialize_scenario(sc));
}

TEST_CASE("validation collects every violated invariant") {
  Scenario sc = make_default_scenario();
  sc.mpc.alpha = -1;
  sc.weights.delta_ds = 0.5;  // below delta_qs
  sc.goal_steps = 0;
  try {
    validate_scenario(sc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.issues.size() >= 3);
  }
}

TEST_CASE("equal disturbance penalties are rejected before running") {
  Scenario sc = make_default_scenario();
  sc.weights.delta_ds = sc.weights.delta_qs = 1.0;
  CHECK_THROWS_AS(validate_scenario(sc), ValidationError);
}

TEST_SUITE_END();
