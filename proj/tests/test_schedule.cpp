/*
 * Copyright 2026 The s5cells Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "s5/error.hpp"
#include "s5/schedule.hpp"

namespace s5::alien {
namespace {

using Members = std::vector<std::uint64_t>;

TEST(Schedule, NextMember) {
  Schedule evens = Schedule::parse("0:+2");
  EXPECT_EQ(evens.next(4), 6U);
  EXPECT_EQ(evens.next(5), 6U);
  Schedule base = Schedule::parse("0,1,2:pow2");
  EXPECT_EQ(base.next(2), 4U);
  EXPECT_EQ(base.next(4), 8U);
  EXPECT_EQ(Schedule::naturals().next(9), 10U);
}

TEST(Schedule, NextPowComposes) {
  for (const char* text : {"0:+3", "0,5,11:+gap", "1:*2", "beta(1:+2)", "all"}) {
    Schedule s = Schedule::parse(text);
    for (std::uint64_t i = 0; i < 40; ++i) {
      EXPECT_EQ(s.next_pow(i, 2), s.next(s.next(i))) << text;
      EXPECT_EQ(s.next_pow(i, 0), i);
    }
  }
}

TEST(Schedule, Rules) {
  EXPECT_EQ(Schedule::parse("0,5,11:+gap").members_upto(40), (Members{0, 5, 11, 18, 26, 35}));
  EXPECT_EQ(Schedule::parse("1:*3").members_upto(30), (Members{1, 3, 9, 27}));
  EXPECT_EQ(Schedule::parse("3:+1").members_upto(6), (Members{3, 4, 5, 6}));
  EXPECT_EQ(Schedule::parse("1,4:+1").members_upto(6), (Members{1, 4, 5, 6}));
  EXPECT_EQ(Schedule::parse("2,7").members_upto(100), (Members{2, 7}));
  EXPECT_EQ(Schedule::parse("{}").members_upto(100), Members{});
}

TEST(Schedule, ContainsAgreesWithMembers) {
  for (const char* text : {"0,5,11:+gap", "3:+4", "beta(2)", "beta(0:+1)", "2:pow2"}) {
    Schedule s = Schedule::parse(text);
    auto m = s.members_upto(70);
    for (std::uint64_t n = 0; n <= 70; ++n)
      EXPECT_EQ(s.contains(n), std::binary_search(m.begin(), m.end(), n)) << text << " " << n;
  }
}

TEST(Beta, Examples) {
  EXPECT_EQ(Schedule::beta(Schedule::finite({})).members_upto(20), (Members{0, 1, 2, 4, 8, 16}));
  EXPECT_EQ(Schedule::parse("beta(2)").members_upto(10), (Members{0, 1, 2, 4, 5, 6, 7, 8}));
  EXPECT_EQ(Schedule::parse("beta({})").next(2), 4U);
}

TEST(Beta, StrictlyIncreasingAndInjective) {
  Schedule a = Schedule::parse("beta(1,3)");
  Schedule b = Schedule::parse("beta(1,4)");
  auto ma = a.members_upto(40);
  for (std::size_t i = 1; i < ma.size(); ++i) EXPECT_LT(ma[i - 1], ma[i]);
  EXPECT_NE(ma, b.members_upto(40));
}

TEST(Schedule, TextRoundTrip) {
  for (const char* text : {"0,5,11:+gap", "3:+1", "1:*2", "0,1,2:pow2", "2,7", "{}", "beta(1,4:+1)"}) {
    Schedule s = Schedule::parse(text);
    EXPECT_EQ(Schedule::parse(s.to_string()).members_upto(200), s.members_upto(200)) << text;
  }
  EXPECT_EQ(Schedule::parse("3:+1").to_string(), "3:+1");
}

TEST(Schedule, Errors) {
  EXPECT_THROW(Schedule::parse("1,x:+1"), ParseError);
  EXPECT_THROW(Schedule::parse("1:?"), ParseError);
  EXPECT_THROW(Schedule::parse("{1,4}:+1"), ParseError);
  EXPECT_THROW(Schedule::parse("4,1:+1"), InputError);
  EXPECT_THROW(Schedule::parse("1:+0"), InputError);
  EXPECT_THROW(Schedule::parse("2,7").next(7), CapExceeded);
  EXPECT_THROW(Schedule::parse("{}").first(), PreconditionError);
}

}  // namespace
}  // namespace s5::alien
