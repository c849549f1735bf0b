// spectrascope: information spectra of finite-alphabet stationary processes.
//
// Exit codes: 0 success, 1 usage or input error, 2 a mathematical check
// (bound or dominance) failed.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectrascope/io.hpp"
#include "spectrascope/isomorph.hpp"
#include "spectrascope/mtypes.hpp"

using nlohmann::json;
using namespace spectrascope;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

long long resolve_cap(long long flag_cap) {
  if (const char* env = std::getenv("SPECTRASCOPE_CAP")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end == env || v <= 0) throw Error("SPECTRASCOPE_CAP must be a positive integer");
    return v;
  }
  return flag_cap;
}

void emit(const json& j, const std::string& out_path) {
  std::string text = dump_json(j);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

struct SpectrumFile {
  std::optional<StaircaseSpectrum> staircase;
  std::optional<SpectrumEstimate> estimate;
};

SpectrumFile load_spectrum(const std::string& path) {
  json j = json::parse(read_file(path));
  SpectrumFile f;
  if (j.contains("jumps"))
    f.staircase = staircase_from_json(j);
  else
    f.estimate = estimate_from_json(j);
  return f;
}

std::vector<double> make_grid(double lo, double hi, int points) {
  if (points < 2 || hi <= lo) throw Error("invalid tau grid specification");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

int run_iso_demo(const std::string& which, const std::string& out_path,
                 std::uint64_t seed) {
  if (which == "counterexample") {
    // two distinct ergodic components with equal entropy vs one ergodic
    // process with that entropy: identical staircases, different ergodicity
    auto mixture = std::make_shared<MixtureModel>(
        std::vector<ModelPtr>{make_bernoulli(0.1), make_bernoulli(0.9)},
        std::vector<double>{0.5, 0.5});
    auto single = make_bernoulli(0.1);
    IsomorphismObstruction o = check_isomorphism_obstruction(*mixture, *single);
    emit(obstruction_to_json(o), out_path);
    return o.verdict == "non_isomorphic_by_ergodicity" ? kExitOk : kExitCheckFailed;
  }
  if (which != "pasting") throw Error("iso-demo: --which must be pasting or counterexample");

  auto mix_x = std::make_shared<MixtureModel>(
      std::vector<ModelPtr>{make_bernoulli(0.1), make_bernoulli(0.5)},
      std::vector<double>{0.7, 0.3});
  auto mix_y = std::make_shared<MixtureModel>(
      std::vector<ModelPtr>{make_bernoulli(0.9), make_bernoulli(0.5)},
      std::vector<double>{0.7, 0.3});
  auto pair = RegularMixturePair::make(mix_x, mix_y);
  std::vector<CodePair> codes{{binary_flip_code(), binary_flip_code()},
                              {identity_code(binary_alphabet()),
                               identity_code(binary_alphabet())}};
  PastedCode pasted = paste_codes(pair, std::move(codes), 1000);
  IsomorphismCertificate cert = verify_isomorphism(pasted, 2000, 2000, 3, seed);

  json j = certificate_to_json(cert);
  bool spectra_equal =
      check_isomorphism_obstruction(*mix_x, *mix_y).verdict != "spectra_differ";
  j["spectra_equal"] = spectra_equal;
  emit(j, out_path);
  bool ok = spectra_equal && cert.round_trip_failure_rate == 0.0 &&
            cert.classification_accuracy >= 0.999 && cert.tv_distance <= 0.02;
  return ok ? kExitOk : kExitCheckFailed;
}

int run(int argc, char** argv) {
  CLI::App app{"information spectra of finite-alphabet stationary processes"};
  app.require_subcommand(1);

  long long cap_flag = kDefaultCap;
  app.add_option("--cap", cap_flag, "enumeration state cap (env SPECTRASCOPE_CAP overrides)");

  std::string model_path, out_path, csv_path, code_path;
  std::string upper_path, lower_path;
  int n = 1000, k = 8, workers = 1;
  long long samples = 5000;
  std::uint64_t seed = 1;
  double gamma = 0.02;
  double tau_min = 0.0, tau_max = -1.0;
  int tau_points = 512;

  auto* entropy = app.add_subcommand("entropy", "entropy rate of a model");
  entropy->add_option("--model", model_path)->required();
  entropy->add_option("--k", k, "conditioning order for factor brackets");
  entropy->add_option("--out", out_path);

  auto* sx = app.add_subcommand("spectrum-exact", "exact staircase of a mixture");
  sx->add_option("--model", model_path)->required();
  sx->add_option("--out", out_path);
  sx->add_option("--csv", csv_path, "also write CSV on the default tau grid");

  auto* se = app.add_subcommand("spectrum-estimate", "empirical spectrum by sampling");
  se->add_option("--model", model_path)->required();
  se->add_option("--n", n);
  se->add_option("--gamma", gamma);
  se->add_option("--samples", samples);
  se->add_option("--seed", seed);
  se->add_option("--workers", workers);
  se->add_option("--tau-min", tau_min);
  se->add_option("--tau-max", tau_max);
  se->add_option("--tau-points", tau_points);
  se->add_option("--out", out_path);
  se->add_option("--csv", csv_path);

  double slack = -1.0;
  auto* dom = app.add_subcommand("dominance", "check F_lower <= F_upper + slack");
  dom->add_option("--upper", upper_path)->required();
  dom->add_option("--lower", lower_path)->required();
  dom->add_option("--slack", slack, "default: 0 for staircases, DKW-based for estimates");
  dom->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "exhaustive small-scale verifiers");
  verify->require_subcommand(1);

  auto* lemma2 = verify->add_subcommand("lemma2", "finite spectrum comparison bound");
  lemma2->add_option("--model", model_path)->required();
  lemma2->add_option("--code", code_path)->required();
  int l2_n = 3;
  lemma2->add_option("--n", l2_n);
  std::string grid_spec = "default";
  lemma2->add_option("--grid", grid_spec, "only 'default' is defined");
  lemma2->add_option("--out", out_path);

  auto* com = verify->add_subcommand("change-of-measure", "component-vs-mixture bound");
  com->add_option("--model", model_path)->required();
  int component = 0;
  com->add_option("--component", component);
  int com_n = 8;
  com->add_option("--n", com_n);
  double com_gamma = 0.2;
  com->add_option("--gamma", com_gamma);
  com->add_option("--out", out_path);

  auto* types = verify->add_subcommand("types", "Markov type partition and count bound");
  types->add_option("--model", model_path)->required();
  int t_n = 6, t_k = 1;
  types->add_option("--n", t_n);
  types->add_option("--k", t_k);
  types->add_option("--out", out_path);

  auto* hamming = verify->add_subcommand("hamming", "Hamming ball counting bound");
  int h_n = 5, h_alpha = 2;
  double h_beta = 0.2;
  hamming->add_option("--N", h_n);
  hamming->add_option("--beta", h_beta);
  hamming->add_option("--alphabet-size", h_alpha);
  hamming->add_option("--out", out_path);

  auto* iso = app.add_subcommand("iso-demo", "bundled pasting and counterexample demos");
  std::string which = "pasting";
  iso->add_option("--which", which, "pasting | counterexample");
  iso->add_option("--seed", seed);
  iso->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;  // --help exits 0, bad usage exits 1
  }
  long long cap = resolve_cap(cap_flag);

  if (entropy->parsed()) {
    ModelPtr model = load_model(model_path, cap);
    json j;
    if (model->kind() == ModelKind::Factor) {
      EntropyBracket b =
          static_cast<const FactorModel&>(*model).entropy_rate_bracket(k, cap);
      j = {{"lower", b.lower}, {"upper", b.upper}, {"k", k}};
    } else if (model->kind() == ModelKind::Mixture) {
      StaircaseSpectrum s = mixture_spectrum(static_cast<const MixtureModel&>(*model));
      j = {{"entropy_rate", entropy_integral(s)}, {"via", "spectrum integral"}};
    } else {
      j = {{"entropy_rate", model->entropy_rate()}};
    }
    emit(j, out_path);
    return kExitOk;
  }

  if (sx->parsed()) {
    ModelPtr model = load_model(model_path, cap);
    if (model->kind() != ModelKind::Mixture)
      throw Error("spectrum-exact requires a mixture model");
    StaircaseSpectrum s = mixture_spectrum(static_cast<const MixtureModel&>(*model));
    emit(staircase_to_json(s), out_path);
    if (!csv_path.empty())
      write_file(csv_path, spectrum_to_csv(s, default_tau_grid(model->alphabet().size(),
                                                               0.02, tau_points)));
    return kExitOk;
  }

  if (se->parsed()) {
    ModelPtr model = load_model(model_path, cap);
    std::vector<double> grid =
        tau_max > 0.0 ? make_grid(tau_min, tau_max, tau_points)
                      : default_tau_grid(model->alphabet().size(), gamma, tau_points);
    SpectrumEstimate est =
        empirical_spectrum(*model, n, gamma, samples, std::move(grid), seed, workers);
    emit(estimate_to_json(est), out_path);
    if (!csv_path.empty()) write_file(csv_path, spectrum_to_csv(est));
    return kExitOk;
  }

  if (dom->parsed()) {
    SpectrumFile upper = load_spectrum(upper_path);
    SpectrumFile lower = load_spectrum(lower_path);
    DominanceReport r;
    if (upper.staircase && lower.staircase) {
      r = dominance_check(*upper.staircase, *lower.staircase, slack < 0.0 ? 0.0 : slack);
    } else if (upper.estimate && lower.estimate) {
      double s = slack < 0.0 ? default_dominance_slack(upper.estimate->num_samples,
                                                       lower.estimate->num_samples)
                             : slack;
      r = dominance_check(*upper.estimate, *lower.estimate, s);
    } else if (upper.staircase) {
      double s = slack < 0.0 ? 2.0 * dkw_radius_95(lower.estimate->num_samples) : slack;
      r = dominance_check(*upper.staircase, *lower.estimate, s);
    } else {
      double s = slack < 0.0 ? 2.0 * dkw_radius_95(upper.estimate->num_samples) : slack;
      r = dominance_check(*upper.estimate, *lower.staircase, s);
    }
    emit(dominance_to_json(r), out_path);
    return r.dominates ? kExitOk : kExitCheckFailed;
  }

  if (lemma2->parsed()) {
    if (grid_spec != "default") throw Error("verify lemma2: unknown grid '" + grid_spec + "'");
    ModelPtr model = load_model(model_path, cap);
    CodePtr code = load_code(code_path);
    Coupling coupling = build_coupling(model, code, l2_n, cap);
    json points = json::array();
    bool all_pass = true;
    for (double tau : {0.2, 0.4, 0.6, 0.8, 1.0, 1.2})
      for (double g : {0.05, 0.2, 0.5})
        for (double beta : {0.05, 0.25}) {
          FiniteBoundReport r = verify_finite_bound(coupling, tau, g, beta);
          json p = finite_bound_to_json(r);
          p["tau"] = tau;
          p["gamma"] = g;
          p["beta"] = beta;
          points.push_back(p);
          all_pass = all_pass && r.pass;
        }
    emit(json{{"n", l2_n}, {"points", points}, {"pass", all_pass}}, out_path);
    return all_pass ? kExitOk : kExitCheckFailed;
  }

  if (com->parsed()) {
    ModelPtr model = load_model(model_path, cap);
    if (model->kind() != ModelKind::Mixture)
      throw Error("verify change-of-measure requires a mixture model");
    const auto& mixture = static_cast<const MixtureModel&>(*model);
    if (component < 0 || static_cast<size_t>(component) >= mixture.num_components())
      throw Error("component index out of range");
    ChangeOfMeasureReport r = verify_change_of_measure(mixture.component(component),
                                                       mixture, com_n, com_gamma, cap);
    json j = change_of_measure_to_json(r);
    j["component"] = component;
    j["n"] = com_n;
    j["gamma"] = com_gamma;
    emit(j, out_path);
    return r.pass ? kExitOk : kExitCheckFailed;
  }

  if (types->parsed()) {
    ModelPtr model = load_model(model_path, cap);
    int a = model->alphabet().size();
    TypeCountReport count = type_count_bound(t_n, t_k, a, cap);

    // partition and same-type-same-probability, exhaustively
    long long covered = 0;
    bool same_prob = true;
    MarkovApproximation approx = markov_approximation(*model, t_k, cap);
    std::map<std::string, double> class_prob;
    for_each_word(a, t_n, [&](std::span<const int> word, long long) {
      ++covered;
      MarkovType t = markov_type(word, t_k, a);
      std::string key;
      for (const auto& [block, c] : t.counts)
        key += std::to_string(block) + ":" + std::to_string(c) + ";";
      double p;
      try {
        p = std::exp2(approx_log_probability(approx, word));
      } catch (const Error&) {
        return;  // conditioning block outside the model support
      }
      auto [it, fresh] = class_prob.emplace(key, p);
      if (!fresh && std::abs(it->second - p) > 1e-12) same_prob = false;
    });
    bool partition = covered == ipow(a, t_n);
    bool all_pass = count.pass && partition && same_prob;
    emit(json{{"n", t_n},
              {"k", t_k},
              {"observed_types", count.observed},
              {"type_count_bound", count.bound},
              {"partition", partition},
              {"same_type_same_probability", same_prob},
              {"pass", all_pass}},
         out_path);
    return all_pass ? kExitOk : kExitCheckFailed;
  }

  if (hamming->parsed()) {
    HammingBallReport r = hamming_ball_bound_check(h_n, h_beta, h_alpha);
    emit(json{{"count", r.count}, {"bound", r.bound}, {"pass", r.pass}}, out_path);
    return r.pass ? kExitOk : kExitCheckFailed;
  }

  if (iso->parsed()) return run_iso_demo(which, out_path, seed);

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
