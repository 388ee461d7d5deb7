#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mcpg/error.hpp"
#include "mcpg/kvconfig.hpp"

using namespace mcpg;

namespace {

KvConfig parse(const std::string& text) {
  std::istringstream in(text);
  return KvConfig::parse(in, "test");
}

}  // namespace

TEST_SUITE("kvconfig") {

TEST_CASE("parsing") {
  const KvConfig kv = parse(
      "# header\n"
      "\n"
      "  a = 1.5   # trailing\n"
      "b=2\n"
      "list = 1, 2.5 ,3\n"
      "flag = yes\n"
      "a = 2.5\n");
  CHECK(kv.get_double("a") == 2.5);
  CHECK(kv.get_int("b") == 2);
  CHECK(kv.get_doubles("list") == std::vector<double>{1.0, 2.5, 3.0});
  CHECK(kv.get_bool("flag"));
  CHECK(kv.get_double("missing", 7.0) == 7.0);
  CHECK(kv.entries().size() == 4);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse("just words\n"), ValidationError);
  CHECK_THROWS_AS(parse(" = 3\n"), ValidationError);
  const KvConfig kv = parse("x = abc\ny = 1.5\nz = maybe\nw = 1e999\n");
  CHECK_THROWS_AS(kv.get_double("x"), ValidationError);
  CHECK_THROWS_AS(kv.get_int("y"), ValidationError);
  CHECK_THROWS_AS(kv.get_bool("z"), ValidationError);
  CHECK_THROWS_AS(kv.get_double("w"), ValidationError);
  CHECK_THROWS_AS(kv.text("nope"), ValidationError);
  CHECK(kv.unknown_keys({"x", "y"}) == std::vector<std::string>{"w", "z"});
  CHECK_THROWS_AS(kv.require_known({"x", "y"}), ValidationError);
  CHECK_THROWS_AS(KvConfig::load("/nonexistent/plant.conf"), InvalidArgument);
}

TEST_CASE("round trip") {
  KvConfig kv;
  kv.set("g", 0.1);
  kv.set("third", 1.0 / 3.0);
  kv.set("n", 42);
  kv.set("on", false);
  kv.set("v", std::vector<double>{1.0, 1.3});
  kv.set("s", std::string("hexapod"));
  std::stringstream text;
  kv.write(text);
  const KvConfig back = KvConfig::parse(text);
  CHECK(back.entries() == kv.entries());
  CHECK(back.get_double("third") == 1.0 / 3.0);
  CHECK_FALSE(back.get_bool("on"));
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(3.0) == "3");
  CHECK(format_double(0.03125) == "0.03125");
  for (double v : {1.0 / 3.0, 2.0 / 3.0, 1e-300, 123456.789}) CHECK(std::stod(format_double(v)) == v);
}

}  // TEST_SUITE
