#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "warpsol/config.hpp"
#include "warpsol/ground_state.hpp"

namespace warpsol {

inline constexpr const char* kCacheSchema = "warp-soliton/profile-cache-v1";
inline constexpr const char* kCacheDirEnv = "WARPSOL_CACHE_DIR";

std::string sha256_hex(std::string_view data);

/// Content address of a cached ground state.
struct CacheKey {
  int n_max = 25;
  int d = 2;
  double p = 3.0;
  double newton_tol = 1e-12;

  nlohmann::json to_json() const;
  std::string digest() const;  ///< SHA-256 of the canonical key JSON
};

/// $WARPSOL_CACHE_DIR if set, else config.cache_dir (empty disables caching).
std::string resolve_cache_dir(const SolverConfig& config);

void cache_profile(const std::string& dir, const CacheKey& key, const GroundState& gs);

/// Returns the cached profile, or nullopt on a miss. Entries with a bad digest, a different
/// key or a residual above tolerance are rejected with a message in `warning`.
std::optional<GroundState> load_profile(const std::string& dir, const CacheKey& key,
                                        std::string* warning = nullptr);

/// Cache-aware solve; warnings about rejected entries go to `warn` when given.
GroundState cached_ground_state(const SolverConfig& config, int n_max, std::ostream* warn = nullptr);

}  // namespace warpsol
