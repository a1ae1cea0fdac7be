#include <string>

#include <gtest/gtest.h>

#include "chainent/config.hpp"
#include "chainent/error.hpp"

using namespace chainent;

namespace {

const std::string kMinimal = R"({
  "model": {"N": 6, "pre": {"omega": 3, "k": 2}, "post": {"omega": 0.1, "k": 2.5}},
  "time": {"t_max": 10, "dt": 0.1}
})";

std::string failing_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

}  // namespace

TEST(ParseConfig, MinimalOscillatorDefaults) {
  const RunConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.mode, ModelMode::oscillator);
  EXPECT_EQ(c.chain.n_sites, 6);
  EXPECT_EQ(c.chain.boundary, Boundary::periodic);
  EXPECT_EQ(c.chain.omega_i, 3.0);
  EXPECT_EQ(c.chain.k_f, 2.5);
  EXPECT_TRUE(c.second_half);
  EXPECT_EQ(c.partition().traced, (std::vector<int>{3, 4, 5}));
  EXPECT_EQ(c.alphas, (std::vector<int>{1}));
  EXPECT_EQ(c.precision, 12);
  EXPECT_EQ(c.quench.kind, ChainQuench::Kind::sudden);
  EXPECT_EQ(c.grid().count, 101u);
}

TEST(ParseConfig, TwoSitesDefaultToSingleBond) {
  const RunConfig c = parse_config(R"({"model": {"N": 2, "pre": {"omega": 1, "k": 12},
    "post": {"omega": 0.15, "k": 8.6}}, "time": {"t_max": 1, "dt": 0.5}})");
  EXPECT_EQ(c.chain.boundary, Boundary::open);
}

TEST(ParseConfig, BoseHubbardMapping) {
  const RunConfig c = parse_config(R"({"model": {"mode": "bose_hubbard", "omega_bh_i": 3,
    "omega_bh_f": 2.15, "J": 2}, "time": {"t_max": 1, "dt": 0.01}, "entropy": {"alphas": [2, 1]}})");
  EXPECT_EQ(c.mode, ModelMode::bose_hubbard);
  EXPECT_EQ(c.chain.n_sites, 2);
  EXPECT_EQ(c.chain.boundary, Boundary::open);
  EXPECT_EQ(c.chain.omega_i, 1.0);
  EXPECT_EQ(c.chain.k_i, 12.0);
  EXPECT_NEAR(c.chain.omega_f, 0.15, 1e-15);
  EXPECT_EQ(c.alphas, (std::vector<int>{1, 2}));
}

TEST(ParseConfig, ErrorsNameTheField) {
  const std::string model = R"("model": {"N": 4, "pre": {"omega": 3, "k": 2}, "post": {"omega": 0.1, "k": 2.5}})";
  const std::string time = R"("time": {"t_max": 1, "dt": 0.1})";
  EXPECT_EQ(failing_path("{" + model + "," + time + R"(, "partition": {"traced": [0]}})"), "partition.traced");
  EXPECT_EQ(failing_path("{" + model + "," + time + R"(, "partition": {"traced": [5]}})"), "partition.traced");
  EXPECT_EQ(failing_path("{" + model + "," + time + R"(, "partition": {"traced": [1,2,3,4]}})"), "partition.traced");
  EXPECT_EQ(failing_path("{" + model + "," + time + R"(, "partition": {"traced": "first_half"}})"), "partition.traced");
  EXPECT_EQ(failing_path("{" + model + R"(, "time": {"t_max": 1}})"), "time.dt");
  EXPECT_EQ(failing_path("{" + model + R"(, "time": {"t_max": 0.01, "dt": 0.1}})"), "time.t_max");
  EXPECT_EQ(failing_path("{" + model + R"(, "time": {"t_max": 1, "dt": -1}})"), "time.dt");
  EXPECT_EQ(failing_path("{" + model + "," + time + R"(, "colour": 1})"), "colour");
  EXPECT_EQ(failing_path("{" + model + "," + time + R"(, "entropy": {"alphas": [0]}})"), "entropy.alphas");
  EXPECT_EQ(failing_path("{" + model + "," + time + R"(, "entropy": {"alpha": [1]}})"), "entropy.alpha");
  EXPECT_EQ(failing_path("{" + model + "," + time + R"(, "output": {"precision": 40}})"), "output.precision");
  EXPECT_EQ(failing_path(R"({"model": {"N": "4", "pre": {"omega": 3, "k": 2}}, )" + time + "}"), "model.N");
  EXPECT_EQ(failing_path(R"({"model": {"N": 4, "pre": {"omega": 3, "kk": 2}}, )" + time + "}"), "model.pre.k");
  EXPECT_EQ(failing_path(R"({"model": {"N": 4, "pre": {"omega": 3, "k": 2, "m": 1}, "post": {"omega": 1, "k": 1}}, )" + time + "}"), "model.pre.m");
  EXPECT_EQ(failing_path(R"({"model": {"N": 4, "pre": {"omega": 3, "k": 2}}, )" + time + "}"), "model.post");
  EXPECT_EQ(failing_path(R"({"model": {"N": 4, "pre": {"omega": 0, "k": 2}, "post": {"omega": 1, "k": 1}}, )" + time + "}"), "model");
  EXPECT_EQ(failing_path(R"({"model": {"N": 4, "boundary": "ring", "pre": {"omega": 1, "k": 2}, "post": {"omega": 1, "k": 1}}, )" + time + "}"), "model.boundary");
  EXPECT_EQ(failing_path("{" + time + "}"), "model");
  EXPECT_EQ(failing_path("[1, 2]"), "<root>");
  EXPECT_EQ(failing_path("{not json"), "<root>");
}

TEST(ParseConfig, BoseHubbardRestrictions) {
  const std::string time = R"("time": {"t_max": 1, "dt": 0.1})";
  EXPECT_EQ(failing_path(R"({"model": {"mode": "bose_hubbard", "omega_bh_i": 2, "omega_bh_f": 2.15, "J": 2}, )" + time + "}"),
            "model.omega_bh_i");
  EXPECT_EQ(failing_path(R"({"model": {"mode": "bose_hubbard", "omega_bh_i": 3, "omega_bh_f": 1.5, "J": 2}, )" + time + "}"),
            "model.omega_bh_f");
  EXPECT_EQ(failing_path(R"({"model": {"mode": "bose_hubbard", "omega_bh_i": 3, "omega_bh_f": 2, "J": 2}, )" + time + "}"),
            "<accepted>");
  EXPECT_EQ(failing_path(R"({"model": {"mode": "bose_hubbard", "N": 3, "omega_bh_i": 3, "omega_bh_f": 2.1, "J": 2}, )" + time + "}"),
            "model.N");
  EXPECT_EQ(failing_path(R"({"model": {"mode": "bose_hubbard", "omega_bh_i": 3, "omega_bh_f": 2.1, "J": 2},
    "quench": {"kind": "general", "table": [[0, 1, 1]]}, )" + time + "}"),
            "quench.kind");
}

TEST(ParseConfig, GeneralQuench) {
  const RunConfig c = parse_config(R"({"model": {"N": 4, "pre": {"omega": 3, "k": 2}},
    "quench": {"kind": "general", "interpolation": "step", "table": [[0, 1, 1], [2.5, 0.1, 2.5]]},
    "time": {"t_max": 5, "dt": 0.1}})");
  EXPECT_EQ(c.quench.kind, ChainQuench::Kind::general);
  EXPECT_EQ(c.quench.interpolation, Interpolation::step);
  ASSERT_EQ(c.quench.table.size(), 2u);
  EXPECT_EQ(c.quench.table[1].t, 2.5);
  EXPECT_EQ(c.chain.omega_f, 0.1);
  EXPECT_EQ(c.chain.k_f, 2.5);

  EXPECT_EQ(failing_path(R"({"model": {"N": 4, "pre": {"omega": 3, "k": 2}, "post": {"omega": 1, "k": 1}},
    "quench": {"kind": "general", "table": [[0, 1, 1]]}, "time": {"t_max": 5, "dt": 0.1}})"), "model.post");
  EXPECT_EQ(failing_path(R"({"model": {"N": 4, "pre": {"omega": 3, "k": 2}},
    "quench": {"kind": "general", "table": [[0.5, 1, 1]]}, "time": {"t_max": 5, "dt": 0.1}})"), "quench.table");
  EXPECT_EQ(failing_path(R"({"model": {"N": 4, "pre": {"omega": 3, "k": 2}},
    "quench": {"kind": "general", "table": [[0, 1]]}, "time": {"t_max": 5, "dt": 0.1}})"), "quench.table[0]");
}

TEST(CanonicalJson, RoundTripsAndSortsKeys) {
  const RunConfig c = parse_config(kMinimal);
  const std::string echo = canonical_json(c);
  EXPECT_EQ(echo.find('\n'), std::string::npos);
  EXPECT_LT(echo.find("\"entropy\""), echo.find("\"model\""));
  EXPECT_NE(echo.find("\"version\":\"" + std::string(library_version()) + "\""), std::string::npos);
  EXPECT_EQ(canonical_json(parse_config(echo)), echo);

  const RunConfig general = parse_config(R"({"model": {"N": 5, "boundary": "open", "pre": {"omega": 3, "k": 2}},
    "quench": {"kind": "general", "table": [[0, 1, 1], [1, 2, 0.5]]},
    "partition": {"traced": [1, 4]}, "time": {"t_max": 2, "dt": 0.25}, "output": {"path": "x.csv"}})");
  const std::string g = canonical_json(general);
  EXPECT_EQ(canonical_json(parse_config(g)), g);
  EXPECT_EQ(g.find("x.csv"), std::string::npos);
  EXPECT_NE(g.find("\"traced\":[1,4]"), std::string::npos);
}

TEST(WithOverride, SetsNestedKeys) {
  const std::string text = with_override(kMinimal, "model.post.omega", "0.3");
  EXPECT_EQ(parse_config(text).chain.omega_f, 0.3);
  const std::string created = with_override(kMinimal, "entropy.alphas", "[1,2]");
  EXPECT_EQ(parse_config(created).alphas, (std::vector<int>{1, 2}));
  const std::string word = with_override(kMinimal, "model.boundary", "open");
  EXPECT_EQ(parse_config(word).chain.boundary, Boundary::open);
  EXPECT_THROW(with_override(kMinimal, "model.N.x", "1"), ConfigError);
  EXPECT_THROW(with_override(kMinimal, "model..N", "1"), ConfigError);
}
