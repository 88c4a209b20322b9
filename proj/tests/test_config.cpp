#include <doctest.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcsde/config.hpp"

using namespace tcsde;

TEST_SUITE("config") {

TEST_CASE("set trims keys and values and rejects empty keys") {
  Config cfg;
  cfg.set("  alpha  ", "  0.8  ");
  CHECK(cfg.contains("alpha"));
  CHECK(cfg.get_string("alpha", "") == "0.8");
  CHECK_THROWS_AS(cfg.set("   ", "1"), std::invalid_argument);
  CHECK_THROWS_AS(cfg.set("", "1"), std::invalid_argument);
}

TEST_CASE("text parsing skips comments and blanks and splits on the first equals") {
  Config cfg;
  cfg.load_text(
      "# a comment\n"
      "\n"
      "alpha = 0.8\n"
      "   # indented comment\n"
      "label = a=b=c\n"
      "spaced   =   7\n",
      "test.cfg");
  CHECK(cfg.get_string("alpha", "") == "0.8");
  CHECK(cfg.get_string("label", "") == "a=b=c");  // later '=' stay in the value
  CHECK(cfg.get_long("spaced", 0) == 7);

  try {
    Config bad;
    bad.load_text("alpha = 0.8\nnot a pair\n", "broken.cfg");
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("broken.cfg:2") != std::string::npos);
    CHECK(msg.find("not a pair") != std::string::npos);
  }
  Config bad2;
  CHECK_THROWS_AS(bad2.load_text("= 3\n", "x"), std::invalid_argument);
}

TEST_CASE("command line overrides parse and layer on top") {
  Config cfg;
  cfg.load_text("alpha = 0.5\nseed = 1\n", "base");
  cfg.apply_overrides({"alpha=0.8", "extra=yes"});
  CHECK(cfg.get_double("alpha", 0.0) == 0.8);  // later assignment wins
  CHECK(cfg.get_long("seed", 0) == 1);
  CHECK(cfg.get_string("extra", "") == "yes");
  CHECK_THROWS_AS(cfg.apply_overrides({"novalue"}), std::invalid_argument);
  CHECK_THROWS_AS(cfg.apply_overrides({"=5"}), std::invalid_argument);
}

TEST_CASE("typed getters fall back when absent and name the key when bad") {
  Config cfg;
  cfg.set("d", "0.25");
  cfg.set("n", "42");
  cfg.set("u", "18446744073709551615");
  cfg.set("bad", "fish");
  cfg.set("neg", "-3");
  CHECK(cfg.get_double("d", 0.0) == 0.25);
  CHECK(cfg.get_double("missing", 1.5) == 1.5);
  CHECK(cfg.get_long("n", 0) == 42);
  CHECK(cfg.get_long("missing", -7) == -7);
  CHECK(cfg.get_u64("u", 0) == 18446744073709551615ULL);
  CHECK(cfg.get_u64("missing", 9) == 9);
  CHECK(cfg.get_long("neg", 0) == -3);

  try {
    (void)cfg.get_double("bad", 0.0);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("'bad'") != std::string::npos);
    CHECK(msg.find("fish") != std::string::npos);
  }
  CHECK_THROWS_AS((void)cfg.get_long("d", 0), std::invalid_argument);  // "0.25"
  CHECK_THROWS_AS((void)cfg.get_u64("neg", 0), std::invalid_argument);
  CHECK_THROWS_AS((void)cfg.get_long("bad", 0), std::invalid_argument);
}

TEST_CASE("double lists split on commas and reject junk") {
  Config cfg;
  cfg.set("lags", "0.25, 0.125 ,0.0625");
  const auto v = cfg.get_double_list("lags", {});
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 0.25);
  CHECK(v[1] == 0.125);
  CHECK(v[2] == 0.0625);
  const auto fb = cfg.get_double_list("missing", {1.0, 2.0});
  REQUIRE(fb.size() == 2);
  CHECK(fb[0] == 1.0);
  cfg.set("junk", "1.0, two");
  CHECK_THROWS_AS((void)cfg.get_double_list("junk", {}), std::invalid_argument);
  cfg.set("hole", "1.0,,2.0");
  CHECK_THROWS_AS((void)cfg.get_double_list("hole", {}), std::invalid_argument);
}

TEST_CASE("unknown keys are rejected by name") {
  Config cfg;
  cfg.set("alpha", "0.8");
  cfg.set("mystery", "1");
  try {
    cfg.require_known({"alpha", "seed"});
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("'mystery'") != std::string::npos);
  }
  cfg.set("seed", "2");
  Config ok;
  ok.set("alpha", "1");
  ok.require_known({"alpha"});
}

TEST_CASE("entries expose the stored map for echoing") {
  Config cfg;
  cfg.load_text("b = 2\na = 1\n", "t");
  const auto& m = cfg.entries();
  REQUIRE(m.size() == 2);
  CHECK(m.begin()->first == "a");  // deterministic, sorted iteration
  CHECK(m.at("a") == "1");
  CHECK(m.at("b") == "2");
}

}  // TEST_SUITE
