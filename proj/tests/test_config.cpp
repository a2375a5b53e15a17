#include "doctest.h"
#include "maxstable/config.hpp"

using namespace maxstable;

namespace {

const char* kMinimal = R"(seed = 1
[model.s]
family = sequence
coeffs = 3,1
)";

int error_line(const std::string& text, std::string* field = nullptr) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    if (field) *field = e.field();
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.seed == 1u);
  CHECK(c.model == "s");
  CHECK(c.format == OutputFormat::json);
  CHECK(c.order == LatticeOrder::lexicographic);
  CHECK(c.command == Command::theta);
  CHECK(model_alpha(*build_model(c)) == 1.0);
}

TEST_CASE("errors name line and field") {
  std::string field;
  CHECK(error_line("replicates = 1000\n[model.s]\nfamily = independent\n", &field) == 0);
  CHECK(field == "seed");
  CHECK(error_line(std::string("replicates = -5\n") + kMinimal, &field) == 1);
  CHECK(field == "replicates");
  CHECK(error_line(std::string("replicates = 50\n") + kMinimal, &field) == 1);
  CHECK(error_line("seed = 1\n[model.s]\nfamily = weird\n", &field) == 3);
  CHECK(field == "model.s.family");
  CHECK(error_line(std::string("window = 3..1\n") + kMinimal, &field) == 1);
  CHECK(field == "window");
  CHECK(error_line(std::string("window = 0:4\n") + kMinimal, &field) == 1);
  CHECK(error_line(std::string("bogus = 2\n") + kMinimal, &field) == 1);
  CHECK(error_line(std::string(kMinimal) + "colour = red\n", &field) == 5);
  CHECK(field == "model.s.colour");
  CHECK(error_line(std::string("seed = 2\n") + kMinimal) == 2);
  CHECK(error_line("seed = 1\n[model.a]\nfamily = independent\n[model.b]\nfamily = alternating\n", &field) == 0);
  CHECK(field == "model");
  CHECK(error_line("seed = 1\n[model.m]\nfamily = mixture\np = 0.5\ncomponents = m,m\n") > 0);
}

TEST_CASE("every family builds") {
  const char* text = R"(seed = 9
model = top
[model.b]
family = brown_resnick
scale = 0.5
exponent = 1.5
dim = 1
[model.t]
family = brown_resnick
variogram = table
table = 1:1; 2:1.5; 3:2
[model.s]
family = sequence
entries = 0:1; 2:0.5
alpha = 2
[model.i]
family = independent
[model.a]
family = alternating
[model.p]
family = product
factors = b,i
[model.top]
family = mixture
p = 0.7
components = i,a
[model.ft]
family = from_tail
tail = b
support = -3..3
)";
  const auto c = parse_config(text);
  for (const auto& [name, _] : c.models) {
    INFO(name);
    CHECK_NOTHROW(build_model(c, name));
  }
  CHECK(model_dim(*build_model(c, "p")) == 2);
  CHECK(model_alpha(*build_model(c, "s")) == 2.0);
  // components must share alpha
  const std::string bad = std::string(text).replace(std::string(text).find("components = i,a"), 16, "components = s,a");
  CHECK_THROWS_AS(parse_config(bad), ParseError);
}

TEST_CASE("serialise round trip") {
  const char* text = R"(command = fidi
seed = 42
replicates = 5000
window = -5..5
points = 0;1;3
thresholds = 1,2,0.5
tilt_point = 1
methods = fidi_neglog,fidi_anchored
format = csv
order = reversed_lexicographic
[model.br]
family = brown_resnick
scale = 2
)";
  const auto c = parse_config(text);
  const auto again = parse_config(serialize_config(c));
  CHECK(again == c);
  CHECK(serialize_config(again) == serialize_config(c));
  CHECK(again.points.size() == 3);
  CHECK(again.thresholds[2] == 0.5);
  CHECK(again.format == OutputFormat::csv);
}

TEST_CASE("overrides") {
  const auto c = parse_config("[model.s]\nfamily = independent\n", {{"seed", "77"}, {"format", "csv"}});
  CHECK(c.seed == 77u);
  CHECK(c.format == OutputFormat::csv);
  CHECK_THROWS_AS(parse_config(kMinimal, {{"nonsense", "1"}}), ParseError);
}

TEST_CASE("windows and points") {
  CHECK(parse_window("-30..30") == Window::cube(1, -30, 30));
  CHECK(parse_window("0..10, -2..2") == Window(LatticePoint{0, -2}, LatticePoint{10, 2}));
  CHECK(format_window(parse_window("0..10,-2..2")) == "0..10,-2..2");
  CHECK_THROWS(parse_window("1..x"));
  const auto p = parse_points("0,0;1,0");
  REQUIRE(p.size() == 2);
  CHECK(p[1] == LatticePoint{1, 0});
}
