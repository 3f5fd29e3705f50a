#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "hodgelim/io.hpp"
#include "hodgelim/sampling.hpp"

using namespace hodgelim;
using io::Json;

namespace {
bool same_flags(const ParabolicData& a, const ParabolicData& b) {
  if (a.points != b.points || a.flags.size() != b.flags.size()) return false;
  for (std::size_t i = 0; i < a.flags.size(); ++i) {
    if (a.flags[i].weights != b.flags[i].weights) return false;
    for (std::size_t j = 0; j < a.flags[i].steps(); ++j)
      if (rank(a.flags[i].spaces[j].hcat(b.flags[i].spaces[j])) != a.flags[i].spaces[j].cols()) return false;
  }
  return true;
}
}  // namespace

TEST(Io, RoundTrip) {
  std::mt19937_64 rng(3);
  std::vector<FuchsianSystem> systems{fixtures::f1(), fixtures::f1(true)};
  for (int i = 0; i < 6; ++i) systems.push_back(random_system(rng, 2 + static_cast<std::size_t>(i % 2), 3 + static_cast<std::size_t>(i % 3)));
  for (const auto& s : systems) {
    const Json j = Json::parse(io::system_json(s).dump());
    const FuchsianSystem t = io::system_from_json(j);
    EXPECT_EQ(t.rank, s.rank);
    EXPECT_EQ(t.points, s.points);
    for (std::size_t i = 0; i < s.residues.size(); ++i) EXPECT_TRUE(t.residues[i] == s.residues[i]);
    EXPECT_TRUE(same_flags(t.par, s.par));
  }
}

TEST(Io, DefaultFlagsAreEigenWeights) {
  Json j = io::system_json(fixtures::f1());
  j.erase("parabolic");
  const FuchsianSystem s = io::system_from_json(j);
  EXPECT_EQ(s.par.flags[2].steps(), 1u);
  EXPECT_EQ(s.par.flags[0].weights, (std::vector<Rat>{Rat(1, 2), Rat(0)}));
}

TEST(Io, RejectsMalformed) {
  const Json good = io::system_json(fixtures::f1());
  auto broken = [&](auto edit) {
    Json j = good;
    edit(j);
    return j;
  };
  EXPECT_THROW(io::system_from_json(broken([](Json& j) { j.erase("rank"); })), std::invalid_argument);
  EXPECT_THROW(io::system_from_json(broken([](Json& j) { j["rank"] = 0; })), std::invalid_argument);
  EXPECT_THROW(io::system_from_json(broken([](Json& j) { j["points"][0] = "x/2"; })), std::invalid_argument);
  EXPECT_THROW(io::system_from_json(broken([](Json& j) { j["residues"][0][0][0] = "1"; })), std::invalid_argument);
  EXPECT_THROW(io::system_from_json(broken([](Json& j) { j["parabolic"][1]["point"] = "7"; })), std::invalid_argument);
  EXPECT_THROW(io::system_from_json(broken([](Json& j) { j["parabolic"][1]["point"] = "0"; })), std::invalid_argument);
  EXPECT_THROW(io::system_from_json(broken([](Json& j) { j["residues"].erase(0); })), std::invalid_argument);
  EXPECT_THROW(io::eigenvalues_from_json(Json{{"eigen", 1}}), std::invalid_argument);
}

TEST(Io, ReportsUseRationalStrings) {
  const PartialOper po = iterate_to_partial_oper(fixtures::f1());
  const Json t = Json::parse(io::trace_lines(po));
  EXPECT_EQ(t["levels"][0]["pardeg"], "1");
  const Json k = io::kostov_json({{Rat(1, 5), Rat(-1, 5)}, {Rat(1, 7), Rat(-1, 7)}, {Rat(3, 35), Rat(-3, 35)}});
  EXPECT_TRUE(k["generic"].get<bool>());
  const Json bad = io::kostov_json({{Rat(1, 2), Rat(-1, 2)}, {Rat(1, 2), Rat(-1, 2)}});
  EXPECT_FALSE(bad["generic"].get<bool>());
  EXPECT_EQ(bad["violation"]["sum"], "1");
}
