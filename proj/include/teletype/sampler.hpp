#pragma once

#include <cstdint>
#include <random>

#include "teletype/record.hpp"

namespace teletype {

struct SamplerConfig {
  double p_session = 0.01;
  double p_event = 0.005;
  std::uint64_t seed = 0;
};

struct Enrollment {
  bool enrolled = false;
  SessionId session_id;
};

/// Two-level uniform sampling: a per-session enrollment coin and a per-analysis
/// event coin. The enrollment coin, the session id and the event coins come
/// from three independent mt19937_64 streams derived from the seed, so the id
/// stream does not depend on p_session.
///
/// The sampler never sees document content; its inputs are the config only.
class Sampler {
 public:
  /// Throws std::invalid_argument unless both probabilities are in [0, 1].
  explicit Sampler(const SamplerConfig& config);

  /// Draws one session: the enrollment coin plus a 15-digit identifier.
  Enrollment enroll_session();

  /// One Bernoulli(p_event) trial per analysis invocation.
  bool sample_event();

  const SamplerConfig& config() const { return config_; }

 private:
  SamplerConfig config_;
  std::mt19937_64 enroll_rng_;
  std::mt19937_64 id_rng_;
  std::mt19937_64 event_rng_;
  std::bernoulli_distribution enroll_coin_;
  std::bernoulli_distribution event_coin_;
  std::uniform_int_distribution<std::uint64_t> id_dist_;
};

}  // namespace teletype
