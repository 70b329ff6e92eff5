#include <array>
#include <cmath>

#include "doctest.h"
#include "teletype/sampler.hpp"

using namespace teletype;

namespace {

double three_sigma(double p, double n) { return 3.0 * std::sqrt(p * (1 - p) / n); }

}  // namespace

TEST_CASE("degenerate probabilities") {
  Sampler always({1.0, 1.0, 1});
  Sampler never({0.0, 0.0, 1});
  for (int i = 0; i < 1000; ++i) {
    CHECK(always.enroll_session().enrolled);
    CHECK(always.sample_event());
    CHECK_FALSE(never.enroll_session().enrolled);
    CHECK_FALSE(never.sample_event());
  }
  CHECK_THROWS(Sampler({1.5, 0.5, 1}));
  CHECK_THROWS(Sampler({0.5, -0.1, 1}));
}

TEST_CASE("rates converge to defaults") {
  constexpr int kTrials = 1'000'000;
  Sampler sampler(SamplerConfig{.seed = 2024});
  int enrolled = 0, events = 0;
  for (int i = 0; i < kTrials; ++i) {
    enrolled += sampler.enroll_session().enrolled;
    events += sampler.sample_event();
  }
  CHECK(std::abs(enrolled / double(kTrials) - 0.01) <= three_sigma(0.01, kTrials));
  CHECK(std::abs(events / double(kTrials) - 0.005) <= three_sigma(0.005, kTrials));
}

TEST_CASE("same seed, same decisions") {
  Sampler a({0.3, 0.4, 99}), b({0.3, 0.4, 99});
  for (int i = 0; i < 2000; ++i) {
    auto ea = a.enroll_session(), eb = b.enroll_session();
    CHECK(ea.enrolled == eb.enrolled);
    CHECK(ea.session_id == eb.session_id);
    CHECK(a.sample_event() == b.sample_event());
  }
}

TEST_CASE("ids do not depend on the enrollment probability") {
  Sampler a({0.01, 0.5, 5}), b({0.9, 0.5, 5});
  for (int i = 0; i < 100; ++i) CHECK(a.enroll_session().session_id == b.enroll_session().session_id);
}

TEST_CASE("leading digit of ids is uniform") {
  Sampler sampler({0.5, 0.5, 77});
  std::array<int, 10> counts{};
  constexpr int kIds = 100'000;
  for (int i = 0; i < kIds; ++i) {
    std::string id = sampler.enroll_session().session_id.str();
    REQUIRE(id.size() == 15);
    ++counts[id[0] - '0'];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += (c - kIds / 10.0) * (c - kIds / 10.0) / (kIds / 10.0);
  // Critical value of chi-square with 9 degrees of freedom at alpha = 0.001.
  CHECK(chi2 < 27.877);
}
