#include <gtest/gtest.h>

#include <numeric>
#include <stdexcept>

#include "lambdap/parallel.hpp"

using namespace lambdap;

TEST(Parallel, MapIsIndexedAndThreadIndependent) {
  auto f = [](std::size_t i) { return static_cast<double>(i * i) * 0.5; };
  const auto one = parallel_map<double>(1000, f, 1);
  const auto four = parallel_map<double>(1000, f, 4);
  EXPECT_EQ(one, four);
  EXPECT_EQ(one[10], 50.0);
}

TEST(Parallel, ZeroCountIsNoop) {
  int calls = 0;
  parallel_for(0, [&](std::size_t) { ++calls; }, 3);
  EXPECT_EQ(calls, 0);
}

TEST(Parallel, ExceptionPropagates) {
  EXPECT_THROW(parallel_for(
                   100,
                   [](std::size_t i) {
                     if (i == 37) throw std::runtime_error("boom");
                   },
                   4),
               std::runtime_error);
}

TEST(Parallel, DefaultThreadsSettable) {
  const unsigned old = default_threads();
  set_default_threads(3);
  EXPECT_EQ(default_threads(), 3u);
  set_default_threads(old);
}
