#pragma once

#include "lms_cli/config.hpp"
#include "lms_cli/context.hpp"

#include <iosfwd>

namespace lms::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the configured experiment into cfg.out and writes manifest.yaml.
/// Returns the process exit code; failures remove partial outputs.
int run(const RunConfig& cfg, std::ostream& log);

/// The work itself; throws on failure.
void execute(const RunConfig& cfg, RunContext& ctx);

/// `reproduce` targets: fig4, fig5, fig7, fig8, fig9, fig10, fig11, fig12, fig12c.
void reproduce(const RunConfig& cfg, RunContext& ctx);
const std::vector<std::string>& reproduce_targets();

std::string version();

}  // namespace lms::cli
