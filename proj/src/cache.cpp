#include "warpsol/cache.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "warpsol/errors.hpp"

namespace warpsol {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

nlohmann::json CacheKey::to_json() const {
  return {{"schema", kSpectralSchema}, {"n_max", n_max}, {"d", d}, {"p", p},
          {"newton_tol", newton_tol}};
}

std::string CacheKey::digest() const { return sha256_hex(to_json().dump()); }

std::string resolve_cache_dir(const SolverConfig& config) {
  if (const char* env = std::getenv(kCacheDirEnv); env != nullptr && *env != '\0') return env;
  return config.cache_dir;
}

namespace {

fs::path entry_path(const std::string& dir, const CacheKey& key) {
  return fs::path(dir) / (key.digest() + ".json");
}

double collocation_residual(const SpectralFunction& g) {
  const auto nodes = collocation_nodes(g.basis().size());
  double worst = 0.0;
  for (double x : nodes.nodes) worst = std::max(worst, std::abs(scaled_cubic_residual(g, x)));
  return worst;
}

}  // namespace

void cache_profile(const std::string& dir, const CacheKey& key, const GroundState& gs) {
  fs::create_directories(dir);
  const auto profile = to_json(gs.profile);
  const nlohmann::json entry{{"schema", kCacheSchema},
                             {"key", key.to_json()},
                             {"profile", profile},
                             {"digest", sha256_hex(profile.dump())},
                             {"residual_norm", gs.residual_norm},
                             {"newton_iters", gs.newton_iters}};
  const auto path = entry_path(dir, key);
  const auto tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp);
    os << entry.dump(1) << '\n';
    if (!os) throw std::runtime_error("cannot write cache entry " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::optional<GroundState> load_profile(const std::string& dir, const CacheKey& key,
                                        std::string* warning) {
  const auto path = entry_path(dir, key);
  if (!fs::exists(path)) return std::nullopt;
  const auto reject = [&](const std::string& why) -> std::optional<GroundState> {
    if (warning != nullptr) *warning = "cache entry " + path.string() + " rejected: " + why;
    return std::nullopt;
  };
  try {
    std::ifstream is(path);
    const auto entry = nlohmann::json::parse(is);
    if (entry.at("schema") != kCacheSchema) return reject("schema mismatch");
    if (entry.at("key") != key.to_json()) return reject("key mismatch");
    const auto& profile = entry.at("profile");
    if (sha256_hex(profile.dump()) != entry.at("digest").get<std::string>()) {
      return reject("digest mismatch");
    }
    auto sf = spectral_from_json(profile);
    if (sf.n_max() != key.n_max) return reject("n_max mismatch");
    const double res = collocation_residual(sf);
    if (!(res < key.newton_tol)) return reject("residual " + std::to_string(res) + " above tolerance");
    GroundState gs{std::move(sf), key.d, key.p, res, entry.value("newton_iters", 0), {res}};
    return gs;
  } catch (const std::exception& e) {
    return reject(e.what());
  }
}

GroundState cached_ground_state(const SolverConfig& config, int n_max, std::ostream* warn) {
  const std::string dir = resolve_cache_dir(config);
  const CacheKey key{n_max, 2, 3.0, config.newton_tol};
  if (!dir.empty()) {
    std::string warning;
    if (auto hit = load_profile(dir, key, &warning)) return std::move(*hit);
    if (!warning.empty() && warn != nullptr) *warn << "warning: " << warning << "; recomputing\n";
  }
  auto gs = solve_ground_state(config, n_max);
  if (!dir.empty()) {
    try {
      cache_profile(dir, key, gs);
    } catch (const std::exception& e) {
      if (warn != nullptr) *warn << "warning: could not store cache entry: " << e.what() << '\n';
    }
  }
  return gs;
}

}  // namespace warpsol
