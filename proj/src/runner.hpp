#pragma once

// Command dispatch: turns a parsed configuration plus a command name into a
// machine document (JSON or CSV), a human-readable summary, and an exit code.

#include <string>

#include "config.hpp"

namespace apqr::run {

inline constexpr int exit_ok = 0;       // success
inline constexpr int exit_compute = 1;  // computation failed (stage named)
inline constexpr int exit_config = 2;   // schema violation (field path named)
inline constexpr int exit_verdict = 3;  // a consistency verdict failed

struct outcome {
    int code = exit_ok;
    std::string document; // machine output in the requested format
    std::string human;    // 3-significant-figure summary
};

// command: evaluate | optimize | sweep | mc | oracle. Never throws for
// config or computation problems; those come back as coded outcomes with a
// JSON error document.
outcome run(const cfg::run_config& rc, const std::string& command,
            const cfg::overrides& ov);

// Parses the configuration and overrides first; schema problems come back as
// exit_config outcomes.
outcome run_json(const std::string& config_json, const std::string& command,
                 const std::string& overrides_json);

} // namespace apqr::run
