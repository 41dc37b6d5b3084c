#include "warpsol/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "warpsol/cache.hpp"
#include "warpsol/errors.hpp"
#include "warpsol/geometry.hpp"
#include "warpsol/linearized.hpp"
#include "warpsol/manifold_soliton.hpp"
#include "warpsol/stability.hpp"

namespace warpsol {

namespace {

using json = nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError("malformed JSON in " + path + ": " + e.what());
  }
}

WarpingFunction read_warp(const std::string& path) {
  try {
    return warp_from_json(read_json(path));
  } catch (const json::exception& e) {
    throw UsageError("malformed warp file " + path + ": " + e.what());
  }
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("range must look like A:B, got '" + text + "'");
  try {
    std::size_t used = 0;
    const double a = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    const std::string rest = text.substr(colon + 1);
    const double b = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError("range must look like A:B, got '" + text + "'");
  }
}

double parse_alpha(const std::string& text) {
  if (text == "inf" || text == "infinity") return INFINITY;
  try {
    std::size_t used = 0;
    const double a = std::stod(text, &used);
    if (used != text.size() || !(a > 0.0)) throw std::invalid_argument(text);
    return a;
  } catch (const std::logic_error&) {
    throw UsageError("alpha must be a positive number or 'inf', got '" + text + "'");
  }
}

// Output files plus the manifest written next to each of them.
class RunContext {
 public:
  RunContext(std::string command, SolverConfig config)
      : command_(std::move(command)), config_(std::move(config)),
        start_(std::chrono::steady_clock::now()) {}

  const SolverConfig& config() const { return config_; }

  void write_output(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    os << content;
    os.close();
    if (!os) throw UsageError("cannot write " + path);
    outputs_.push_back({{"path", path}, {"sha256", sha256_hex(content)}});
  }

  void write_manifests() const {
    if (outputs_.empty()) return;
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const json manifest{{"schema", kManifestSchema},
                        {"command", command_},
                        {"config", to_json(config_)},
                        {"schemas",
                         {{"spectral", kSpectralSchema},
                          {"warp", kWarpSchema},
                          {"cache", kCacheSchema},
                          {"manifest", kManifestSchema}}},
                        {"wall_time_seconds", wall},
                        {"outputs", outputs_}};
    for (const auto& o : outputs_) {
      std::ofstream os(o.at("path").get<std::string>() + ".manifest.json");
      os << manifest.dump(2) << '\n';
    }
  }

 private:
  std::string command_;
  SolverConfig config_;
  std::chrono::steady_clock::time_point start_;
  json outputs_ = json::array();
};

struct Pipeline {
  const SolverConfig& config;
  std::ostream& err;
  std::optional<EuclideanBackground> background_;
  std::optional<ExpansionProfiles> profiles_;
  std::optional<StabilityConstants> constants_;

  const EuclideanBackground& background() {
    if (!background_) {
      background_ = make_background(config, cached_ground_state(config, config.n_max_fine, &err));
    }
    return *background_;
  }
  const StabilityConstants& constants() {
    if (!constants_) {
      profiles_ = compute_Qhat1(background());
      constants_ = compute_constants(background(), *profiles_);
    }
    return *constants_;
  }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solitary waves of the cubic NLS on warped-product surfaces", "warpsol"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file overriding solver defaults");

  auto* gs_cmd = app.add_subcommand("ground-state", "Spectral ground state Q");
  std::optional<int> gs_nmax;
  std::string gs_out;
  gs_cmd->add_option("--nmax", gs_nmax, "Basis degree")->check(CLI::Range(10, 400));
  gs_cmd->add_option("--out", gs_out, "Write the profile JSON here");

  auto* const_cmd = app.add_subcommand("constants", "Stability constants b1, b2");
  std::string const_out;
  const_cmd->add_option("--out", const_out, "Write the constants JSON here");

  auto* kappa_cmd = app.add_subcommand("kappa", "kappa = c1^2 b1 + c2 b2 and its classification");
  double k_c1 = 0.0, k_c2 = 0.0;
  kappa_cmd->add_option("--c1", k_c1)->required();
  kappa_cmd->add_option("--c2", k_c2)->required();

  auto* scan_cmd = app.add_subcommand("scan", "Classification over a (c1, c2) grid");
  std::string s_c1, s_c2, s_out = "scan.csv";
  int s_steps = 11, s_jobs = 1;
  scan_cmd->add_option("--c1", s_c1, "A:B")->required();
  scan_cmd->add_option("--c2", s_c2, "C:D")->required();
  scan_cmd->add_option("--steps", s_steps)->check(CLI::Range(2, 100000));
  scan_cmd->add_option("--out", s_out, "CSV output path")->capture_default_str();
  scan_cmd->add_option("--jobs", s_jobs)->check(CLI::Range(1, 256));

  auto* rho_cmd = app.add_subcommand("rho", "Curved-space correction rho_alpha");
  std::string r_alpha, r_warp, r_out;
  rho_cmd->add_option("--alpha", r_alpha)->required();
  rho_cmd->add_option("--warp", r_warp)->required();
  rho_cmd->add_option("--out", r_out);

  auto* vk_cmd = app.add_subcommand("vk", "Sign of the mass derivative at alpha");
  std::string v_alpha, v_warp;
  vk_cmd->add_option("--alpha", v_alpha)->required();
  vk_cmd->add_option("--warp", v_warp)->required();

  auto* spec_cmd = app.add_subcommand("spectrum", "Low spectrum of L_+ or L_-");
  std::string sp_variant = "plus", sp_alpha = "inf", sp_warp;
  int sp_k = 4;
  spec_cmd->add_option("--variant", sp_variant)->check(CLI::IsMember({"plus", "minus"}));
  spec_cmd->add_option("--alpha", sp_alpha);
  spec_cmd->add_option("--warp", sp_warp);
  spec_cmd->add_option("--k", sp_k)->check(CLI::Range(1, 10));

  auto* geo_cmd = app.add_subcommand("geometry", "Curvature, potential and V0d of a warp");
  std::string g_warp;
  int g_d = 2;
  double g_p = 3.0;
  geo_cmd->add_option("--warp", g_warp)->required();
  geo_cmd->add_option("--d", g_d)->check(CLI::Range(2, 64));
  geo_cmd->add_option("--p", g_p);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  std::string command;
  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);

  try {
    SolverConfig config;
    if (!config_path.empty()) config = config_from_json(read_json(config_path));
    config.validate();
    RunContext ctx(command, config);
    Pipeline pipe{config, err, {}, {}, {}};

    if (gs_cmd->parsed()) {
      const int n = gs_nmax.value_or(config.n_max);
      const auto gs = cached_ground_state(config, n, &err);
      const QuadratureRule rule{QuadScheme::gauss_legendre_mapped, config.quad_panels, config.r_max,
                                QuadMapping::linear};
      json j = to_json(gs.profile);
      j["mass"] = mass(gs, rule);
      j["residual_norm"] = gs.residual_norm;
      j["f0"] = gs.f0();
      j["newton_iters"] = gs.newton_iters;
      if (!gs_out.empty()) ctx.write_output(gs_out, dump(j));
      out << dump(j);
    } else if (const_cmd->parsed()) {
      const json j = to_json(pipe.constants());
      if (!const_out.empty()) ctx.write_output(const_out, dump(j));
      out << dump(j);
    } else if (kappa_cmd->parsed()) {
      out << dump(to_json(kappa(k_c1, k_c2, pipe.constants())));
    } else if (scan_cmd->parsed()) {
      const auto c1 = parse_range(s_c1);
      const auto c2 = parse_range(s_c2);
      const auto result = scan(c1, c2, s_steps, pipe.constants(), s_jobs);
      ctx.write_output(s_out, to_csv(result));
      json boundary = json::array();
      for (const auto& [a, b] : result.boundary) boundary.push_back({{"c1", a}, {"c2", b}});
      std::size_t stable = 0;
      for (const auto& row : result.rows) stable += row.classification == KappaClass::stable_candidate;
      out << dump({{"out", s_out},
                   {"rows", result.rows.size()},
                   {"stable_candidate_rows", stable},
                   {"b1", pipe.constants().b1},
                   {"b2", pipe.constants().b2()},
                   {"boundary", boundary}});
    } else if (rho_cmd->parsed()) {
      const double alpha = parse_alpha(r_alpha);
      if (std::isinf(alpha)) throw UsageError("rho needs a finite alpha");
      const auto warp = read_warp(r_warp);
      const auto& bg = pipe.background();
      const auto cs = fixed_point_rho(alpha, warp, bg);
      json j = to_json(cs, false);
      j["mass"] = manifold_mass(cs, bg);
      j["mass_euclidean"] = bg.mass;
      j["profile_residual"] = profile_equation_residual(cs, bg);
      const auto st = strauss_check(cs, bg);
      j["strauss"] = {{"pass", st.pass}, {"constant", st.constant}, {"weighted_sup", st.weighted_sup}};
      if (!r_out.empty()) {
        json full = j;
        full["r"] = bg.grid->r;
        full["rho"] = cs.rho;
        ctx.write_output(r_out, dump(full));
      }
      out << dump(j);
    } else if (vk_cmd->parsed()) {
      const double alpha = parse_alpha(v_alpha);
      if (std::isinf(alpha)) throw UsageError("vk needs a finite alpha");
      out << dump(to_json(vk_sign(read_warp(v_warp), alpha, pipe.background())));
    } else if (spec_cmd->parsed()) {
      const double alpha = parse_alpha(sp_alpha);
      const auto warp = sp_warp.empty() ? WarpingFunction::flat() : read_warp(sp_warp);
      if (!std::isinf(alpha) && sp_warp.empty()) throw UsageError("spectrum at finite alpha needs --warp");
      const auto& bg = pipe.background();
      std::vector<double> profile = bg.Q;
      if (!std::isinf(alpha)) {
        const auto cs = fixed_point_rho(alpha, warp, bg);
        for (std::size_t i = 0; i < profile.size(); ++i) profile[i] += cs.rho[i];
      }
      const auto op = build_L(variant_from_string(sp_variant), alpha, warp, bg.d, bg.p, profile, bg.grid);
      const auto slice = low_spectrum(op, sp_k, config.eig_tol);
      json j = to_json(slice);
      j["variant"] = sp_variant;
      j["alpha"] = std::isinf(alpha) ? json("inf") : json(alpha);
      j["essential_edge"] =
          essential_edge(alpha, std::isinf(alpha) ? 0.0 : estimate_V0d(warp, bg.d).V0d);
      out << dump(j);
    } else if (geo_cmd->parsed()) {
      const auto warp = read_warp(g_warp);
      json j = to_json(estimate_V0d(warp, g_d));
      j["warp"] = to_json(warp);
      json samples = json::array();
      for (double r : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        samples.push_back({{"r", r},
                           {"V", potential_V(warp, g_d, r)},
                           {"phi", weight_phi(warp, g_d, g_p, r)}});
      }
      j["potential_samples"] = samples;
      out << dump(j);
    }
    ctx.write_manifests();
    return 0;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("warpsol");
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace warpsol
