#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "micromaser/config.hpp"
#include "micromaser/csv_io.hpp"
#include "micromaser/harness.hpp"
#include "micromaser/manifest.hpp"
#include "micromaser/simulation.hpp"

using namespace micromaser;
namespace fs = std::filesystem;

namespace {

bool names_key(const ConfigError& e, const std::string& key) {
  for (const auto& msg : e.errors)
    if (msg.rfind(key + ":", 0) == 0) return true;
  return false;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("micromaser_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("minimal config takes documented defaults") {
  const auto c = parse_config_text("R = 100\ngamma = 20\n");
  CHECK(c.sim.phi0 == std::numbers::pi);
  CHECK(c.sim.n_t == 0.0);
  CHECK(c.sim.n_max == 20);
  CHECK(c.sim.delta_phi == 0.0);
  CHECK(c.sim.eta_g == 1.0);
  CHECK(c.sim.two_atom_mode == TwoAtomMode::off);
  CHECK(c.controller.window == 0.25);
  CHECK(c.controller.reset_mode == ResetMode::free_decay);
  CHECK(c.controller.reset_duration == doctest::Approx(0.25));
  CHECK(std::isinf(c.controller.rearm_rate));
  CHECK(c.n_injections == 1000);
  CHECK(c.R_list == std::vector<double>{50, 100, 200, 300, 500, 700, 1000});
}

TEST_CASE("out-of-range efficiency is named") {
  try {
    parse_config_text("R = 100\ngamma = 20\neta_g = 1.3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(names_key(e, "eta_g"));
  }
}

TEST_CASE("every problem is reported, not just the first") {
  try {
    parse_config_text("eta_g = 1.3\nbogus = 1\nn_max = 2\nthreshold = -1\nR = abc\nR_list = 1, x\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(names_key(e, "eta_g"));
    CHECK(names_key(e, "bogus"));
    CHECK(names_key(e, "n_max"));
    CHECK(names_key(e, "threshold"));
    CHECK(names_key(e, "R"));
    CHECK(names_key(e, "gamma"));
    CHECK(names_key(e, "R_list"));
  }
}

TEST_CASE("malformed lines and duplicates are errors") {
  CHECK_THROWS_AS(parse_config_text("R = 100\ngamma = 20\njust words\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("R = 100\nR = 200\ngamma = 20\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("preset = fig9\n"), ConfigError);
}

TEST_CASE("Fig. 5 preset") {
  const auto c = parse_config_text("preset = fig5\n");
  CHECK(c.sim.r_b == 2.0);
  CHECK(c.sim.delta_phi / c.sim.phi0 == doctest::Approx(0.005));
  CHECK(c.sim.eta_g == 0.8);
  CHECK(c.controller.threshold == 10.0);
  CHECK(c.sim.gamma == 20.0);
  CHECK(c.sim.R == 500.0);
  const auto f4 = preset_config("fig4");
  CHECK(f4.sim.r_b == 4.0);
  CHECK(f4.controller.threshold == 20.0);
  const auto f3 = preset_config("fig3");
  CHECK(f3.sim.R == 100.0);
  CHECK(f3.sim.gamma == 20.0);
  CHECK(f3.sim.r_b == 0.0);
}

TEST_CASE("shipped preset files parse to the built-in presets") {
  for (const auto& name : preset_names()) {
    const fs::path file = fs::path(MICROMASER_SOURCE_DIR) / "presets" / (name + ".conf");
    REQUIRE(fs::exists(file));
    const auto c = parse_config(file);
    const auto built_in = preset_config(name);
    CHECK(c.sim.R == built_in.sim.R);
    CHECK(c.sim.r_b == built_in.sim.r_b);
    CHECK(c.sim.delta_phi == doctest::Approx(built_in.sim.delta_phi));
    CHECK(c.controller.threshold == built_in.controller.threshold);
  }
}

TEST_CASE("relative phase spread and keys set after a preset") {
  const auto c = parse_config_text("R = 300\ndelta_phi_rel = 0.01\npreset = fig5\n");
  CHECK(c.sim.R == 300.0);
  CHECK(c.sim.delta_phi == doctest::Approx(0.01 * std::numbers::pi));
  CHECK_THROWS_AS(parse_config_text("preset = fig5\ndelta_phi = 0.1\ndelta_phi_rel = 0.1\n"), ConfigError);
}

TEST_CASE("canonical text parses back to the same configuration") {
  auto c = preset_config("fig5");
  c.seed = 987654321987654321ULL;
  c.R_list = {10, 20.5};
  c.controller.rearm_rate = 7.5;
  c.sim.two_atom_mode = TwoAtomMode::phenomenological;
  c.trajectory.injection_times = {0.5, 1.25};
  const auto back = parse_config_text(c.to_text());
  CHECK(back.to_text() == c.to_text());
  CHECK(back.seed == c.seed);
  CHECK(back.sim.delta_phi == c.sim.delta_phi);
  const auto with_inf = parse_config_text(preset_config("fig3").to_text());
  CHECK(std::isinf(with_inf.controller.rearm_rate));
}

TEST_CASE("command-line overrides") {
  const auto base = preset_config("fig5");
  const auto c = apply_overrides(base, {{"R", "700"}, {"seed", "3"}});
  CHECK(c.sim.R == 700);
  CHECK(c.seed == 3);
  CHECK(c.controller.threshold == 10);
  CHECK(apply_overrides(base, {{"gamma", "40"}}).controller.reset_duration == doctest::Approx(5.0 / 40));
  CHECK_THROWS_AS(apply_overrides(base, {{"eta_e", "-1"}}), ConfigError);
}

TEST_CASE("csv files carry the schema line") {
  std::vector<EventRecord> events{{0.5, JumpKind::Injection, 1, {}, 0}, {0.51, JumpKind::AtomGround, 2, 3.14, 1}};
  std::ostringstream out;
  csv::write_events(out, events);
  const auto text = out.str();
  CHECK(text.rfind("# schema_version=1,table=events\nt,kind,n_after,phi_used\n", 0) == 0);

  std::ostringstream clicks;
  csv::write_clicks(clicks, std::vector<ClickRecord>{{0.51, Channel::ground, ClickOrigin::background}});
  CHECK(clicks.str() == "# schema_version=1,table=clicks\nt,channel,origin\n0.51,ground,background\n");

  std::ostringstream eff;
  csv::write_efficiency(eff, std::vector<EfficiencyPoint>{});
  CHECK(eff.str().find("R,two_atom_mode,injected,detected,efficiency,ci_low,ci_high,mean_latency,false_triggers,error") !=
        std::string::npos);
}

TEST_CASE("event csv round trips exactly") {
  SimParams p;
  p.R = 400;
  p.delta_phi = 0.2;
  p.n_t = 0.1;
  const auto run = run_trajectory_at(p, {0.3, 1.7}, 5.0, 12);
  std::stringstream io;
  csv::write_events(io, run.events);
  const auto back = csv::read_events(io);
  REQUIRE(back.size() == run.events.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].t == run.events[i].t);
    CHECK(back[i].kind == run.events[i].kind);
    CHECK(back[i].n_after == run.events[i].n_after);
    CHECK(back[i].phi_used == run.events[i].phi_used);
  }
  std::stringstream wrong("# schema_version=2,table=events\nt,kind,n_after,phi_used\n");
  CHECK_THROWS(csv::read_events(wrong));
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("output directory resolution") {
  RunConfig c;
  c.output_dir = "runs/a";
  CommandOptions o;
  ::setenv("MICROMASER_OUTPUT_ROOT", "/tmp/root", 1);
  CHECK(resolve_output_dir(c, o) == fs::path("/tmp/root/runs/a"));
  c.output_dir = "/abs/dir";
  CHECK(resolve_output_dir(c, o) == fs::path("/abs/dir"));
  o.output_dir = "/explicit";
  CHECK(resolve_output_dir(c, o) == fs::path("/explicit"));
}

TEST_CASE("figure3 run twice gives identical digests and replays from its manifest") {
  auto c = preset_config("fig3");
  c.seed = 7;
  CommandOptions a;
  a.output_dir = scratch("fig3_a");
  CommandOptions b;
  b.output_dir = scratch("fig3_b");
  const auto first = run_command("figure3", c, a);
  const auto second = run_command("figure3", c, b);
  REQUIRE(first.files == second.files);
  for (const auto& f : first.files) CHECK(slurp(*a.output_dir / f) == slurp(*b.output_dir / f));

  const auto replayed = parse_config(*a.output_dir / "manifest.txt");
  CHECK(replayed.to_text() == c.to_text());
  CommandOptions r;
  r.output_dir = scratch("fig3_replay");
  const auto third = run_command("figure3", replayed, r);
  for (const auto& f : third.files) CHECK(slurp(*a.output_dir / f) == slurp(*r.output_dir / f));
  const auto manifest = slurp(*a.output_dir / "manifest.txt");
  CHECK(manifest.find("digest.fig3_events.csv = sha256:" + sha256_hex(slurp(*a.output_dir / "fig3_events.csv"))) !=
        std::string::npos);
}

TEST_CASE("check mode gates the exit code") {
  auto c = preset_config("fig3");
  CommandOptions o;
  o.check = true;
  o.output_dir = scratch("fig3_check");
  CHECK(run_command("figure3", c, o).exit_code == 0);

  auto h = preset_config("fig3");
  h.hysteresis.R_values = {10, 20};  // too low for bistability
  o.output_dir = scratch("hyst_check");
  const auto out = run_command("hysteresis", h, o);
  CHECK(out.exit_code != 0);
  CHECK(!out.check_failures.empty());
  o.check = false;
  CHECK(run_command("hysteresis", h, o).exit_code == 0);
}

TEST_CASE("trajectory command writes per-run files and surfaces truncation") {
  auto c = preset_config("fig3");
  c.sim.n_max = 4;
  c.trajectory.count = 2;
  c.trajectory.t_end = 1.0;
  c.trajectory.injection_times = {0.1, 0.1001, 0.1002, 0.1003, 0.1004, 0.1005};
  CommandOptions o;
  o.output_dir = scratch("traj");
  const auto out = run_command("trajectory", c, o);
  CHECK(fs::exists(*o.output_dir / "events_0000.csv"));
  CHECK(fs::exists(*o.output_dir / "clicks_0001.csv"));
  CHECK(!out.warnings.empty());
}

TEST_CASE("unknown command and unwritable output") {
  CHECK_THROWS_AS(run_command("figure9", preset_config("fig3"), {}), std::invalid_argument);
  CommandOptions o;
  o.output_dir = "/proc/micromaser_cannot_write_here";
  try {
    run_command("figure3", preset_config("fig3"), o);
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/proc/micromaser_cannot_write_here") != std::string::npos);
  }
}
