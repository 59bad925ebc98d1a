// Copyright 2026 The tempord Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sstream>

#include "tempord/puv_matrix.hpp"
#include "tempord/rng.hpp"

using namespace tempord;

TEST(PuvMatrix, SeedConventions) {
  const PuvMatrix m(5, 2);
  EXPECT_EQ(m(0, 1), 0.5);
  EXPECT_EQ(m(0, 3), 1.0);
  EXPECT_EQ(m(3, 0), 0.0);
  EXPECT_EQ(m(3, 4), 0.5);
  EXPECT_EQ(m(2, 2), 0.0);
}

TEST(PuvMatrix, ComplementIsExact) {
  Rng rng(9);
  PuvMatrix m(30, 0);
  for (NodeId u = 0; u < 30; ++u)
    for (NodeId v = 0; v < 30; ++v)
      if (u != v) m.set(u, v, uniform01(rng));
  for (NodeId u = 0; u < 30; ++u)
    for (NodeId v = 0; v < 30; ++v)
      if (u != v) EXPECT_EQ(m(u, v) + m(v, u), 1.0);
}

TEST(PuvMatrix, RowSums) {
  PuvMatrix m(3, 0);
  m.set(0, 1, 0.9);
  m.set(0, 2, 0.7);
  m.set(1, 2, 0.6);
  const auto s = m.row_sums();
  EXPECT_NEAR(s[0], 1.6, 1e-15);
  EXPECT_NEAR(s[1], 0.1 + 0.6, 1e-15);
  const std::vector<NodeId> sub{0, 2};
  EXPECT_NEAR(m.row_sum(2, sub), 0.3, 1e-15);
}

TEST(PuvMatrix, CsvRoundTripIsExact) {
  Rng rng(2);
  PuvMatrix m(6, 2);
  for (NodeId u = 2; u < 6; ++u)
    for (NodeId v = u + 1; v < 6; ++v) m.set(u, v, uniform01(rng));
  std::stringstream ss;
  write_puv_csv(ss, m);
  const PuvMatrix back = read_puv_csv(ss, 2);
  for (NodeId u = 0; u < 6; ++u)
    for (NodeId v = 0; v < 6; ++v) EXPECT_EQ(back(u, v), m(u, v));
}

TEST(PuvMatrix, CsvRejectsBrokenComplement) {
  std::istringstream in("node,0,1\n0,,0.7\n1,0.7,\n");
  EXPECT_THROW(read_puv_csv(in), Error);
}
