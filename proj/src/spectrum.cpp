#include "spectrascope/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace spectrascope {

namespace {

constexpr double kMergeTol = 1e-9;  // component rates closer than this share a jump

std::vector<std::pair<double, double>> merge_jumps(
    std::vector<std::pair<double, double>> raw) {
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<double, double>> jumps;
  for (const auto& [tau, mass] : raw) {
    if (mass == 0.0) continue;
    if (!jumps.empty() && tau - jumps.back().first <= kMergeTol)
      jumps.back().second += mass;
    else
      jumps.emplace_back(tau, mass);
  }
  return jumps;
}

}  // namespace

StaircaseSpectrum mixture_spectrum(const MixtureModel& mixture,
                                   const std::vector<std::optional<double>>& certified) {
  std::vector<std::pair<double, double>> raw;
  for (size_t i = 0; i < mixture.num_components(); ++i) {
    double w = mixture.weights()[i];
    if (w == 0.0) continue;
    const Model& c = mixture.component(i);
    double rate;
    if (i < certified.size() && certified[i].has_value()) {
      rate = *certified[i];
    } else if (c.kind() == ModelKind::Iid || c.kind() == ModelKind::Markov) {
      rate = c.entropy_rate();
    } else {
      throw Error("mixture_spectrum: component " + std::to_string(i) +
                  " has no exact entropy rate; supply a certified value");
    }
    raw.emplace_back(rate, w);
  }
  return StaircaseSpectrum{merge_jumps(std::move(raw))};
}

std::vector<double> default_tau_grid(int alphabet_size, double gamma, int points) {
  if (points < 2) throw Error("tau grid needs at least 2 points");
  double hi = std::log2(static_cast<double>(alphabet_size)) + 2.0 * gamma;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = hi * static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

SpectrumEstimate empirical_spectrum(const Model& model, int n, double gamma,
                                    long long num_samples, std::vector<double> tau_grid,
                                    std::uint64_t seed, int workers) {
  if (gamma <= 0.0) throw Error("empirical_spectrum: gamma must be positive");
  if (num_samples < 1) throw Error("empirical_spectrum: num_samples must be >= 1");
  if (tau_grid.empty()) throw Error("empirical_spectrum: empty tau grid");
  if (!std::is_sorted(tau_grid.begin(), tau_grid.end()))
    throw Error("empirical_spectrum: tau grid must be sorted");
  if (workers < 1) workers = 1;

  // Path j always uses substream derive_seed(seed, j); the result does not
  // depend on how the index range is split across workers.
  std::vector<double> rates(num_samples);
  auto run_range = [&](long long lo, long long hi) {
    std::vector<int> symbols;
    for (long long j = lo; j < hi; ++j) {
      symbols.clear();
      symbols.reserve(n);
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
      model.sample_into(symbols, n, rng);
      double lp = model.log_probability(symbols);
      rates[j] = lp == kNegInf ? kPosInf : -lp / static_cast<double>(n);
    }
  };
  if (workers == 1) {
    run_range(0, num_samples);
  } else {
    std::vector<std::thread> pool;
    long long chunk = (num_samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      long long lo = w * chunk, hi = std::min<long long>(num_samples, lo + chunk);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  std::vector<double> sorted = rates;
  std::sort(sorted.begin(), sorted.end());
  SpectrumEstimate est;
  est.n = n;
  est.gamma = gamma;
  est.num_samples = num_samples;
  est.seed = seed;
  est.tau_grid = std::move(tau_grid);
  est.cdf.reserve(est.tau_grid.size());
  for (double tau : est.tau_grid) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), tau + gamma);
    est.cdf.push_back(static_cast<double>(it - sorted.begin()) /
                      static_cast<double>(num_samples));
  }
  return est;
}

SpectralBounds spectral_bounds(const StaircaseSpectrum& spectrum) {
  if (spectrum.jumps.empty()) throw Error("spectral_bounds: empty spectrum");
  return SpectralBounds{spectrum.jumps.front().first, spectrum.jumps.back().first};
}

SpectralBounds spectral_bounds(const SpectrumEstimate& estimate, double epsilon) {
  if (estimate.cdf.empty()) throw Error("spectral_bounds: empty spectrum");
  if (epsilon <= 0.0 || epsilon >= 0.5)
    throw Error("spectral_bounds: epsilon must lie in (0, 0.5)");
  SpectralBounds b{estimate.tau_grid.back(), estimate.tau_grid.back()};
  bool inf_set = false, sup_set = false;
  for (size_t i = 0; i < estimate.cdf.size(); ++i) {
    if (!inf_set && estimate.cdf[i] >= epsilon) {
      b.inf_entropy = estimate.tau_grid[i];
      inf_set = true;
    }
    if (!sup_set && estimate.cdf[i] >= 1.0 - epsilon) {
      b.sup_entropy = estimate.tau_grid[i];
      sup_set = true;
    }
  }
  return b;
}

double entropy_integral(const StaircaseSpectrum& spectrum) {
  // integral of (1 - F) over [0, inf), piecewise constant between jumps
  double integral = 0.0;
  double prev_tau = 0.0;
  double cum = 0.0;
  for (const auto& [tau, mass] : spectrum.jumps) {
    integral += (1.0 - cum) * (tau - prev_tau);
    cum += mass;
    prev_tau = tau;
  }
  return integral;
}

namespace {

DominanceReport dominance_at_points(const std::vector<double>& taus,
                                    const std::vector<double>& f_upper,
                                    const std::vector<double>& f_lower, double slack) {
  DominanceReport r;
  r.dominates = true;
  r.gap = kNegInf;
  for (size_t i = 0; i < taus.size(); ++i) {
    double gap = f_lower[i] - f_upper[i];
    if (gap > r.gap) {
      r.gap = gap;
      r.tau_star = taus[i];
    }
    if (gap > slack) r.dominates = false;
  }
  if (r.gap == kNegInf) r.gap = 0.0;
  return r;
}

}  // namespace

DominanceReport dominance_check(const StaircaseSpectrum& upper,
                                const StaircaseSpectrum& lower, double slack) {
  std::vector<double> taus;
  for (const auto& [t, m] : upper.jumps) taus.push_back(t);
  for (const auto& [t, m] : lower.jumps) taus.push_back(t);
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  std::vector<double> fu, fl;
  for (double t : taus) {
    fu.push_back(upper.eval(t));
    fl.push_back(lower.eval(t));
  }
  return dominance_at_points(taus, fu, fl, slack);
}

DominanceReport dominance_check(const SpectrumEstimate& upper,
                                const SpectrumEstimate& lower, double slack) {
  if (upper.tau_grid.size() != lower.tau_grid.size())
    throw Error("dominance_check: estimates must share one tau grid");
  for (size_t i = 0; i < upper.tau_grid.size(); ++i)
    if (std::abs(upper.tau_grid[i] - lower.tau_grid[i]) > 1e-12)
      throw Error("dominance_check: estimates must share one tau grid");
  return dominance_at_points(upper.tau_grid, upper.cdf, lower.cdf, slack);
}

DominanceReport dominance_check(const StaircaseSpectrum& upper,
                                const SpectrumEstimate& lower, double slack) {
  std::vector<double> fu;
  for (double t : lower.tau_grid) fu.push_back(upper.eval(t));
  return dominance_at_points(lower.tau_grid, fu, lower.cdf, slack);
}

DominanceReport dominance_check(const SpectrumEstimate& upper,
                                const StaircaseSpectrum& lower, double slack) {
  std::vector<double> fl;
  for (double t : upper.tau_grid) fl.push_back(lower.eval(t));
  return dominance_at_points(upper.tau_grid, upper.cdf, fl, slack);
}

double dkw_radius_95(long long num_samples) {
  return std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(num_samples)));
}

double default_dominance_slack(long long samples_upper, long long samples_lower) {
  return 2.0 * (dkw_radius_95(samples_upper) + dkw_radius_95(samples_lower));
}

Theorem1Report validate_theorem1(const MixtureModel& mixture, int n, double gamma,
                                 long long num_samples, std::uint64_t seed,
                                 double tolerance, double exclusion_radius, int workers) {
  Theorem1Report report;
  report.exact = mixture_spectrum(mixture);
  report.estimate =
      empirical_spectrum(mixture, n, gamma, num_samples,
                         default_tau_grid(mixture.alphabet().size(), gamma), seed, workers);
  report.sup_gap = 0.0;
  for (size_t i = 0; i < report.estimate.tau_grid.size(); ++i) {
    double tau = report.estimate.tau_grid[i];
    bool near_jump = false;
    for (const auto& [jt, jm] : report.exact.jumps)
      if (std::abs(tau - jt) < exclusion_radius) near_jump = true;
    if (near_jump) continue;
    ++report.points_checked;
    report.sup_gap =
        std::max(report.sup_gap, std::abs(report.estimate.cdf[i] - report.exact.eval(tau)));
  }
  report.pass = report.sup_gap <= tolerance;
  return report;
}

}  // namespace spectrascope
