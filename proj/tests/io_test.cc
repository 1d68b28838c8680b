#include <cmath>
#include <limits>
#include <sstream>

#include "gtest/gtest.h"
#include "netrecon/dynamics.h"
#include "netrecon/errors.h"
#include "netrecon/graph.h"
#include "netrecon/io.h"

namespace netrecon {
namespace {

TEST(Io, DoublesRoundTrip) {
  for (double v : {0.0, -0.0, 1.0, 0.1, -1.0 / 3.0, 1e-300, 6.02214076e23,
                   std::numeric_limits<double>::denorm_min()}) {
    EXPECT_EQ(ParseDouble(FormatDouble(v)), v);
  }
  EXPECT_EQ(FormatDouble(0.5), "0.5");
  EXPECT_THROW(ParseDouble("1.5x"), FormatError);
  EXPECT_THROW(ParseInt("7.0"), FormatError);
}

TEST(Io, SplitCsv) {
  const auto f = SplitCsvLine("1, 2,x ,");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "2");
  EXPECT_EQ(f[2], "x");
  EXPECT_EQ(f[3], "");
}

TEST(Io, TrajectoryRoundTrip) {
  const NetworkSystem sys = SampleSystem(GenerateErdosRenyi(8, 0.3, 1), {}, 2);
  const auto trajs = SimulatePinchedFamily(sys, SamplePinchMagnitudes(8, 0.1, 0.9, 3), 3);
  std::stringstream buf;
  WriteTrajectoriesCsv(buf, trajs);
  EXPECT_EQ(buf.str().substr(0, 12), "q,t,i,value\n");
  const auto back = ReadTrajectoriesCsv(buf);
  ASSERT_EQ(back.size(), trajs.size());
  for (std::size_t q = 0; q < trajs.size(); ++q) {
    EXPECT_EQ(back[q].pinch_index, trajs[q].pinch_index);
    EXPECT_EQ(back[q].pinch_magnitude, trajs[q].pinch_magnitude);
    ASSERT_EQ(back[q].states.size(), trajs[q].states.size());
    for (std::size_t t = 0; t < trajs[q].states.size(); ++t) {
      EXPECT_EQ(back[q].states[t], trajs[q].states[t]);
    }
  }
}

TEST(Io, TrajectoryGapIsRejected) {
  std::stringstream buf("q,t,i,value\n1,0,1,0.5\n1,2,1,0.1\n");
  EXPECT_THROW(ReadTrajectoriesCsv(buf), FormatError);
}

}  // namespace
}  // namespace netrecon
