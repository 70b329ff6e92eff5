#pragma once

#include <cstdint>
#include <string>

#include "teletype/client/client.hpp"

namespace fixtures {

inline teletype::client::ClientConfig always(std::uint64_t seed, double p_event = 1.0) {
  teletype::client::ClientConfig c;
  c.sampler.p_session = 1.0;
  c.sampler.p_event = p_event;
  c.sampler.seed = seed;
  return c;
}

// Types the nonstrict listing line by line, switches the pragma to strict and
// retypes the last two lines.
inline const char* kWorkedScenario =
    "globals condition\n"
    "file Main\n"
    "--!nonstrict\n"
    "local x = { p = 5, q = nil }\n"
    "if condition then x.q = 7 end\n"
    "endfile\n"
    "open Main\n"
    "type Main 4 local y = x.p + x.q\n"
    "type Main 5 local z = x.r\n"
    "set_mode Main strict\n"
    "delete Main 4 2\n"
    "type Main 4 local y = x.p + x.q\n"
    "type Main 5 local z = x.r\n";

// A strict module gains a data model access.
inline const char* kDiscrepancyScenario =
    "data_model Workspace\n"
    "file Main\n"
    "--!strict\n"
    "local x = 1\n"
    "endfile\n"
    "open Main\n"
    "type Main 3 local h = game.Workspace\n";

}  // namespace fixtures
