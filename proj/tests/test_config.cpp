#include <gtest/gtest.h>

#include <filesystem>

#include "ecasim/config/config.hpp"

using namespace ecasim;
using ecasim::config::ParseError;
using ecasim::config::parse_scenario;

namespace {

int error_line(std::string_view text)
{
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

} // namespace

TEST(Config, MinimalUsesDefaults)
{
  const auto s = parse_scenario("n = 4\n");
  ASSERT_EQ(s.stations.size(), 4u);
  for (const auto& st : s.stations) {
    EXPECT_EQ(st.protocol, station::Protocol::EcaFairShare);
  }
  const engine::Scenario defaults = engine::Scenario::uniform(4, station::Protocol::EcaFairShare);
  EXPECT_EQ(s.edca_params, defaults.edca_params);
  EXPECT_EQ(s.eca_params, defaults.eca_params);
  EXPECT_EQ(s.access, phy::AccessMode::BasicAccess);
  EXPECT_EQ(s.p_e, 0.0);
  EXPECT_EQ(s.eca.sr_reduction, mac::SrReduction::Half);
  EXPECT_EQ(s.eca.stickiness, 1);
  EXPECT_EQ(s.eca.stickiness_max, 2);
  EXPECT_EQ(engine::fingerprint(s), engine::fingerprint(defaults));
}

TEST(Config, FullExample)
{
  const auto s = parse_scenario(R"(
# comment
n = 6            ; trailing comment
protocol = edca
traffic = nonsaturated
access = rts_cts
p_e = 0.1
duration = 5
replications = 3
seed = 42

[eca]
sr_reduction = smaller
stickiness = 2

[edca.BE]
cw_min = 16
)");
  EXPECT_EQ(s.stations.size(), 6u);
  EXPECT_EQ(s.stations[0].protocol, station::Protocol::Edca);
  EXPECT_EQ(s.traffic, engine::TrafficProfile::NonSaturated);
  EXPECT_EQ(s.access, phy::AccessMode::RtsCts);
  EXPECT_DOUBLE_EQ(s.p_e, 0.1);
  EXPECT_DOUBLE_EQ(s.duration_s, 5.0);
  EXPECT_EQ(s.replications, 3);
  EXPECT_EQ(s.seed, 42u);
  EXPECT_EQ(s.eca.sr_reduction, mac::SrReduction::Smaller);
  EXPECT_EQ(s.eca.stickiness, 2);
  EXPECT_EQ(s.edca_params[index(Ac::BE)].cw_min, 16);
  EXPECT_EQ(s.stations[0].sources, engine::profile_sources(engine::TrafficProfile::NonSaturated));
}

TEST(Config, HalfAndHalfMixAlternates)
{
  const auto s = parse_scenario("n = 10\nprotocol_mix = edca:50, eca_fs:50\n");
  ASSERT_EQ(s.stations.size(), 10u);
  for (std::size_t i = 0; i < s.stations.size(); ++i) {
    EXPECT_EQ(s.stations[i].protocol, i % 2 == 0 ? station::Protocol::Edca : station::Protocol::EcaFairShare) << i;
  }
}

TEST(Config, ExplicitStationList)
{
  const auto s = parse_scenario("n = 3\nstations = edca, eca_txop, eca_fs\n");
  EXPECT_EQ(s.stations[1].protocol, station::Protocol::EcaTxop);
  EXPECT_EQ(error_line("n = 3\nstations = edca, eca_fs\n"), 2);
}

TEST(Config, RangeErrorsNameTheLine)
{
  try {
    parse_scenario("n = 5\n\np_e = 1.5\n");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    EXPECT_NE(e.detail().find("1.5"), std::string::npos);
  }
  EXPECT_EQ(error_line("n = 0\n"), 1);
  EXPECT_EQ(error_line("n = 4\nduration = -1\n"), 2);
  EXPECT_EQ(error_line("n = 4\nreplications = two\n"), 2);
}

TEST(Config, RejectsUnknownNames)
{
  EXPECT_EQ(error_line("n = 4\nbogus = 1\n"), 2);
  EXPECT_EQ(error_line("n = 4\n[nowhere]\nx = 1\n"), 2);
  EXPECT_EQ(error_line("n = 4\nprotocol = dcf\n"), 2);
  EXPECT_EQ(error_line("n = 4\nn = 5\n"), 2);
  EXPECT_EQ(error_line("n = 4\nthis line has no equals\n"), 2);
  EXPECT_EQ(error_line("n = 4\naccess = carrier_pigeon\n"), 2);
}

TEST(Config, MixMustCoverEveryStation)
{
  EXPECT_GT(error_line("n = 10\nprotocol_mix = edca:50, eca_fs:40\n"), 0);
  EXPECT_GT(error_line("n = 3\nprotocol_mix = edca:50, eca_fs:50\n"), 0);
  EXPECT_GT(error_line("n = 4\nprotocol = edca\nprotocol_mix = edca:50, eca_fs:50\n"), 0);
}

TEST(Config, MissingStationCount)
{
  EXPECT_THROW(parse_scenario("protocol = edca\n"), ParseError);
  EXPECT_THROW(config::load_scenario("/nonexistent/scenario.cfg"), ParseError);
}

TEST(Config, ShippedScenariosLoad)
{
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(ECASIM_SOURCE_DIR "/scenarios")) {
    if (entry.path().extension() == ".cfg") {
      SCOPED_TRACE(entry.path().string());
      EXPECT_NO_THROW(config::load_scenario(entry.path()).validate());
      ++count;
    }
  }
  EXPECT_GE(count, 5);
}
