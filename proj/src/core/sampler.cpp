#include "teletype/sampler.hpp"

#include <stdexcept>

namespace teletype {

namespace {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  return std::mt19937_64(seq);
}

double checked_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
  }
  return p;
}

}  // namespace

Sampler::Sampler(const SamplerConfig& config)
    : config_(config),
      enroll_rng_(make_stream(config.seed, 1)),
      id_rng_(make_stream(config.seed, 2)),
      event_rng_(make_stream(config.seed, 3)),
      enroll_coin_(checked_probability(config.p_session, "p_session")),
      event_coin_(checked_probability(config.p_event, "p_event")),
      id_dist_(0, SessionId::kLimit - 1) {}

Enrollment Sampler::enroll_session() {
  Enrollment e;
  e.enrolled = enroll_coin_(enroll_rng_);
  e.session_id = SessionId(id_dist_(id_rng_));
  return e;
}

bool Sampler::sample_event() { return event_coin_(event_rng_); }

}  // namespace teletype
