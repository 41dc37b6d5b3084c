#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace warpsol {

inline constexpr const char* kManifestSchema = "warp-soliton/manifest-v1";

/// Runs one subcommand (ground-state, constants, kappa, scan, rho, vk, spectrum, geometry).
/// Writes a JSON summary to `out` and diagnostics to `err`.
/// Returns 0 on success, 1 on usage or input errors, 2 on numerical failure.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace warpsol
