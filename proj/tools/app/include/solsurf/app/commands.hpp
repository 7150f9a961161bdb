#pragma once

// The four subcommands. Each returns the process exit code:
// 0 pass, 1 check failure, 2 configuration or input error.

#include <iosfwd>

#include "solsurf/app/checks.hpp"
#include "solsurf/app/config.hpp"

namespace solsurf::app {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

// Suite settings taken from a config (lambda, Frechet steps, tolerances).
Settings settings_from(const Config& c);

int cmd_solve(const Config& c, std::ostream& out);
int cmd_immerse(const Config& c, std::ostream& out);
int cmd_verify(const Config& c, std::ostream& out);
int cmd_export(const Config& c, std::ostream& out);

} // namespace solsurf::app
