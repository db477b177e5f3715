#include "gard/bench.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace gard::bench {

namespace {

using Json = nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

datagen::InlierModel parse_inlier(const Json& j) {
  check_keys(j, {"type", "sigma", "truncate_to", "snr_db", "alpha", "beta", "gamma", "delta", "sigma1", "sigma2"},
             "instance.inlier");
  const std::string type = j.at("type").get<std::string>();
  auto only = [&](const std::set<std::string>& keys) {
    std::set<std::string> allowed = keys;
    allowed.insert("type");
    check_keys(j, allowed, "instance.inlier (" + type + ")");
  };
  if (type == "none") {
    only({});
    return datagen::NoInlier{};
  }
  if (type == "gaussian") {
    only({"sigma", "truncate_to"});
    datagen::GaussianInlier g;
    g.sigma = j.value("sigma", g.sigma);
    if (j.contains("truncate_to")) g.truncate_to = j.at("truncate_to").get<double>();
    return g;
  }
  if (type == "snr") {
    only({"snr_db"});
    return datagen::SnrGaussianInlier{j.value("snr_db", 20.0)};
  }
  if (type == "stable") {
    only({"alpha", "beta", "gamma", "delta"});
    datagen::StableParams p;
    p.alpha = j.value("alpha", p.alpha);
    p.beta = j.value("beta", p.beta);
    p.gamma = j.value("gamma", p.gamma);
    p.delta = j.value("delta", p.delta);
    return p;
  }
  if (type == "two_gaussian_mix") {
    only({"sigma1", "sigma2"});
    datagen::TwoGaussianMix g;
    g.sigma1 = j.value("sigma1", g.sigma1);
    g.sigma2 = j.value("sigma2", g.sigma2);
    return g;
  }
  throw ConfigError("instance.inlier: unknown type '" + type + "'");
}

Json inlier_json(const datagen::InlierModel& model) {
  return std::visit(Overloaded{
                        [](const datagen::NoInlier&) { return Json{{"type", "none"}}; },
                        [](const datagen::GaussianInlier& g) {
                          Json j{{"type", "gaussian"}, {"sigma", g.sigma}};
                          if (g.truncate_to) j["truncate_to"] = *g.truncate_to;
                          return j;
                        },
                        [](const datagen::SnrGaussianInlier& g) { return Json{{"type", "snr"}, {"snr_db", g.snr_db}}; },
                        [](const datagen::StableParams& p) {
                          return Json{{"type", "stable"}, {"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma},
                                      {"delta", p.delta}};
                        },
                        [](const datagen::TwoGaussianMix& g) {
                          return Json{{"type", "two_gaussian_mix"}, {"sigma1", g.sigma1}, {"sigma2", g.sigma2}};
                        },
                    },
                    model);
}

void parse_irls(const Json& j, baselines::IrlsConfig& cfg, const std::string& where, std::set<std::string> extra = {}) {
  std::set<std::string> allowed{"tuning_c", "max_iters", "param_tol", "scale"};
  allowed.insert(extra.begin(), extra.end());
  check_keys(j, allowed, where);
  cfg.tuning_c = j.value("tuning_c", cfg.tuning_c);
  cfg.max_iters = j.value("max_iters", cfg.max_iters);
  cfg.param_tol = j.value("param_tol", cfg.param_tol);
  if (j.contains("scale")) {
    if (j.at("scale").is_null()) cfg.fixed_scale.reset();
    else cfg.fixed_scale = j.at("scale").get<double>();
  }
}

Json irls_json(const baselines::IrlsConfig& cfg) {
  Json j{{"tuning_c", cfg.tuning_c}, {"max_iters", cfg.max_iters}, {"param_tol", cfg.param_tol}};
  j["scale"] = cfg.fixed_scale ? Json(*cfg.fixed_scale) : Json(nullptr);
  return j;
}

Engine parse_engine(const std::string& s) {
  if (s == "naive") return Engine::kNaive;
  if (s == "cholesky") return Engine::kCholesky;
  throw ConfigError("method_params.gard.engine: expected naive or cholesky, got '" + s + "'");
}

void apply_keys(ExperimentConfig& cfg, const Json& j) {
  check_keys(j, {"experiment", "methods", "n", "m", "fractions", "n_values", "m_values", "noise_tests", "trials",
                 "master_seed", "workers", "instance", "method_params", "theory", "output_path"},
             "config");
  if (j.contains("experiment")) cfg.experiment = parse_experiment(j.at("experiment").get<std::string>());
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
  }
  if (j.contains("n")) cfg.n = j.at("n").get<Index>();
  if (j.contains("m")) cfg.m = j.at("m").get<Index>();
  if (j.contains("fractions")) cfg.fractions = j.at("fractions").get<std::vector<double>>();
  if (j.contains("n_values")) cfg.n_values = j.at("n_values").get<std::vector<Index>>();
  if (j.contains("m_values")) cfg.m_values = j.at("m_values").get<std::vector<Index>>();
  if (j.contains("noise_tests")) {
    cfg.noise_tests.clear();
    for (const auto& t : j.at("noise_tests")) {
      try {
        cfg.noise_tests.push_back(datagen::parse_noise_test(t.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
  if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("workers")) cfg.workers = j.at("workers").get<unsigned>();
  if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();

  if (j.contains("instance")) {
    const Json& in = j.at("instance");
    check_keys(in, {"inlier", "outlier_magnitude", "outlier_sign", "hypercube_halfwidth", "theta_std", "y0_peak_band"},
               "instance");
    InstanceModel& im = cfg.instance;
    if (in.contains("inlier")) im.inlier = parse_inlier(in.at("inlier"));
    im.outlier_magnitude = in.value("outlier_magnitude", im.outlier_magnitude);
    im.hypercube_halfwidth = in.value("hypercube_halfwidth", im.hypercube_halfwidth);
    im.theta_std = in.value("theta_std", im.theta_std);
    if (in.contains("outlier_sign")) {
      const std::string s = in.at("outlier_sign").get<std::string>();
      if (s == "random") im.outlier_sign = datagen::OutlierSign::kRandom;
      else if (s == "fixed") im.outlier_sign = datagen::OutlierSign::kFixed;
      else throw ConfigError("instance.outlier_sign: expected random or fixed");
    }
    if (in.contains("y0_peak_band")) {
      const Json& b = in.at("y0_peak_band");
      if (b.is_null()) {
        im.y0_peak_band.reset();
      } else {
        const auto v = b.get<std::vector<double>>();
        if (v.size() != 2) throw ConfigError("instance.y0_peak_band: expected [lo, hi]");
        im.y0_peak_band = std::make_pair(v[0], v[1]);
      }
    }
  }

  if (j.contains("method_params")) {
    const Json& mp = j.at("method_params");
    check_keys(mp, {"gard", "m_est", "romp", "admm"}, "method_params");
    MethodParams& p = cfg.params;
    if (mp.contains("gard")) {
      const Json& g = mp.at("gard");
      check_keys(g, {"engine", "epsilon0", "max_outliers"}, "method_params.gard");
      if (g.contains("engine")) p.gard_engine = parse_engine(g.at("engine").get<std::string>());
      if (g.contains("epsilon0")) p.gard_epsilon0 = g.at("epsilon0").get<double>();
      if (g.contains("max_outliers")) p.gard_max_outliers = g.at("max_outliers").get<Index>();
    }
    if (mp.contains("m_est")) parse_irls(mp.at("m_est"), p.m_est, "method_params.m_est");
    if (mp.contains("romp")) {
      const Json& r = mp.at("romp");
      parse_irls(r, p.romp, "method_params.romp", {"epsilon0"});
      if (r.contains("epsilon0")) p.romp_epsilon0 = r.at("epsilon0").get<double>();
    }
    if (mp.contains("admm")) {
      const Json& a = mp.at("admm");
      check_keys(a, {"lambda", "rho0", "rho_growth", "rho_cap", "stop_tol", "max_iters"}, "method_params.admm");
      p.admm.lambda = a.value("lambda", p.admm.lambda);
      p.admm.rho0 = a.value("rho0", p.admm.rho0);
      p.admm.rho_growth = a.value("rho_growth", p.admm.rho_growth);
      p.admm.rho_cap = a.value("rho_cap", p.admm.rho_cap);
      p.admm.stop_tol = a.value("stop_tol", p.admm.stop_tol);
      p.admm.max_iters = a.value("max_iters", p.admm.max_iters);
    }
  }

  if (j.contains("theory")) {
    const Json& t = j.at("theory");
    check_keys(t, {"max_n", "max_s", "workers"}, "theory");
    cfg.budget.max_n = t.value("max_n", cfg.budget.max_n);
    cfg.budget.max_s = t.value("max_s", cfg.budget.max_s);
    cfg.budget.workers = t.value("workers", cfg.budget.workers);
  }
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  for (int k = 0; lo + k * step <= hi + 1e-12; ++k) out.push_back(lo + k * step);
  return out;
}

ExperimentConfig base(Experiment e, Index n, Index m, int trials) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  cfg.n = n;
  cfg.m = m;
  cfg.trials = trials;
  cfg.output_path = "bench_out";
  return cfg;
}

ExperimentConfig support_noisy(Index n, Index m, int trials, std::vector<double> fractions) {
  ExperimentConfig cfg = base(Experiment::kSupport, n, m, trials);
  cfg.methods = {Method::kGard};
  cfg.fractions = std::move(fractions);
  // Gaussian with expected norm epsilon0, clipped to the bound.
  cfg.instance.inlier = datagen::GaussianInlier{28.0 / std::sqrt(static_cast<double>(n)), 28.0};
  cfg.instance.outlier_magnitude = 150.0;
  cfg.instance.y0_peak_band = std::make_pair(170.0, 180.0);
  return cfg;
}

const std::map<std::string, std::function<ExperimentConfig()>>& registry() {
  static const std::map<std::string, std::function<ExperimentConfig()>> presets{
      {"mse-ci",
       [] {
         ExperimentConfig c = base(Experiment::kMseSweep, 120, 10, 20);
         c.fractions = {0.0, 0.05, 0.1, 0.15, 0.2};
         return c;
       }},
      {"mse-desk",
       [] {
         ExperimentConfig c = base(Experiment::kMseSweep, 200, 20, 20);
         c.fractions = {0.05, 0.1, 0.15, 0.2, 0.25};
         return c;
       }},
      {"mse-full",
       [] {
         ExperimentConfig c = base(Experiment::kMseSweep, 600, 50, 100);
         c.fractions = grid(0.0, 0.45, 0.05);
         return c;
       }},
      {"scaling-ci",
       [] {
         ExperimentConfig c = base(Experiment::kScaling, 0, 10, 10);
         c.n_values = {60, 90, 120};
         c.methods = {Method::kGard, Method::kMEst};
         return c;
       }},
      {"scaling-full",
       [] {
         ExperimentConfig c = base(Experiment::kScaling, 0, 100, 100);
         c.n_values = {300, 600, 1200, 2400, 4800};
         c.methods = {Method::kGard, Method::kMEst};
         return c;
       }},
      {"support-noiseless-ci",
       [] {
         ExperimentConfig c = base(Experiment::kSupport, 30, 5, 20);
         c.methods = {Method::kGard};
         c.fractions = {0.0, 1.0 / 30, 2.0 / 30, 3.0 / 30, 4.0 / 30};
         c.instance.inlier = datagen::NoInlier{};
         return c;
       }},
      {"support-noiseless-full",
       [] {
         ExperimentConfig c = base(Experiment::kSupport, 600, 100, 10000);
         c.methods = {Method::kGard};
         c.fractions = grid(0.0, 0.2, 0.01);
         c.instance.inlier = datagen::NoInlier{};
         return c;
       }},
      {"support-noisy-ci", [] { return support_noisy(30, 5, 20, {0.0, 1.0 / 30, 2.0 / 30, 0.1}); }},
      {"support-noisy-full", [] { return support_noisy(600, 100, 10000, grid(0.0, 0.2, 0.01)); }},
      {"support-snr-full",
       [] {
         ExperimentConfig c = support_noisy(600, 100, 10000, grid(0.0, 0.2, 0.01));
         c.instance.inlier = datagen::SnrGaussianInlier{20.0};
         return c;
       }},
      {"phase-ci",
       [] {
         ExperimentConfig c = base(Experiment::kPhase, 300, 0, 10);
         c.m_values = {10, 20, 40};
         c.fractions = grid(0.0, 0.45, 0.05);
         c.methods = {Method::kGard, Method::kMEst};
         return c;
       }},
      {"phase-full",
       [] {
         ExperimentConfig c = base(Experiment::kPhase, 600, 0, 200);
         c.m_values = {50, 100, 150, 200, 250, 300};
         c.fractions = grid(0.0, 0.45, 0.025);
         c.methods = {Method::kGard, Method::kMEst};
         return c;
       }},
      {"noise-suite-ci",
       [] {
         ExperimentConfig c = base(Experiment::kNoiseSuite, 100, 10, 5);
         c.noise_tests = {datagen::NoiseTest::kA, datagen::NoiseTest::kB, datagen::NoiseTest::kC,
                          datagen::NoiseTest::kD};
         return c;
       }},
      {"noise-suite-desk",
       [] {
         ExperimentConfig c = base(Experiment::kNoiseSuite, 200, 20, 20);
         c.noise_tests = {datagen::NoiseTest::kA, datagen::NoiseTest::kB, datagen::NoiseTest::kC,
                          datagen::NoiseTest::kD};
         return c;
       }},
      {"noise-suite-full",
       [] {
         ExperimentConfig c = base(Experiment::kNoiseSuite, 600, 100, 100);
         c.noise_tests = {datagen::NoiseTest::kA, datagen::NoiseTest::kB, datagen::NoiseTest::kC,
                          datagen::NoiseTest::kD};
         c.methods = {Method::kGard, Method::kMEst, Method::kRomp};
         return c;
       }},
      {"certify-ci",
       [] {
         ExperimentConfig c = base(Experiment::kCertify, 30, 5, 10);
         c.methods = {Method::kGard};
         c.fractions = {1.0 / 30, 2.0 / 30, 0.1};
         c.instance.inlier = datagen::NoInlier{};
         return c;
       }},
  };
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

ExperimentConfig preset(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("unknown preset '" + name + "'");
  return it->second();
}

ExperimentConfig apply_config_json(const ExperimentConfig& base_cfg, const std::string& json_text) {
  ExperimentConfig cfg = base_cfg;
  try {
    apply_keys(cfg, Json::parse(json_text));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config_file(const ExperimentConfig& base_cfg, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return apply_config_json(base_cfg, ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["experiment"] = to_string(cfg.experiment);
  std::vector<std::string> methods;
  for (Method m : cfg.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  j["n"] = cfg.n;
  j["m"] = cfg.m;
  j["fractions"] = cfg.fractions;
  j["n_values"] = cfg.n_values;
  j["m_values"] = cfg.m_values;
  std::vector<std::string> tests;
  for (auto t : cfg.noise_tests) tests.push_back(datagen::to_string(t));
  j["noise_tests"] = tests;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["workers"] = cfg.workers;

  const InstanceModel& im = cfg.instance;
  Json in;
  in["inlier"] = inlier_json(im.inlier);
  in["outlier_magnitude"] = im.outlier_magnitude;
  in["outlier_sign"] = im.outlier_sign == datagen::OutlierSign::kRandom ? "random" : "fixed";
  in["hypercube_halfwidth"] = im.hypercube_halfwidth;
  in["theta_std"] = im.theta_std;
  in["y0_peak_band"] = im.y0_peak_band ? Json{im.y0_peak_band->first, im.y0_peak_band->second} : Json(nullptr);
  j["instance"] = in;

  const MethodParams& p = cfg.params;
  Json mp;
  Json g{{"engine", std::string(to_string(p.gard_engine))}};
  if (p.gard_epsilon0) g["epsilon0"] = *p.gard_epsilon0;
  if (p.gard_max_outliers) g["max_outliers"] = *p.gard_max_outliers;
  mp["gard"] = g;
  mp["m_est"] = irls_json(p.m_est);
  Json r = irls_json(p.romp);
  if (p.romp_epsilon0) r["epsilon0"] = *p.romp_epsilon0;
  mp["romp"] = r;
  mp["admm"] = Json{{"lambda", p.admm.lambda},       {"rho0", p.admm.rho0},         {"rho_growth", p.admm.rho_growth},
                    {"rho_cap", p.admm.rho_cap},     {"stop_tol", p.admm.stop_tol}, {"max_iters", p.admm.max_iters}};
  j["method_params"] = mp;
  j["theory"] = Json{{"max_n", cfg.budget.max_n}, {"max_s", cfg.budget.max_s}, {"workers", cfg.budget.workers}};
  j["output_path"] = cfg.output_path;
  return j.dump(2);
}

MethodParams noise_suite_params(const MethodParams& base_params, datagen::NoiseTest test, Index n) {
  MethodParams p = base_params;
  double eps = 3.0;
  std::optional<double> scale;
  switch (test) {
    case datagen::NoiseTest::kA:
      scale = 1.2;
      break;
    case datagen::NoiseTest::kB:
    case datagen::NoiseTest::kC:
      scale = 1.0;
      break;
    case datagen::NoiseTest::kD:
      // Bound on the summed inlier vector, sqrt(0.6^2 + 0.8^2) sqrt(n).
      eps = std::sqrt(static_cast<double>(n));
      break;
  }
  if (!p.gard_epsilon0) p.gard_epsilon0 = eps;
  if (!p.romp_epsilon0) p.romp_epsilon0 = eps;
  if (!p.m_est.fixed_scale) p.m_est.fixed_scale = scale;
  if (!p.romp.fixed_scale) p.romp.fixed_scale = scale;
  return p;
}

}  // namespace gard::bench
