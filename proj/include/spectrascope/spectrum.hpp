#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spectrascope/core.hpp"
#include "spectrascope/model.hpp"

namespace spectrascope {

/// Exact spectrum of a finite ergodic mixture: sorted jump locations
/// (component entropy rates) with their accumulated weights.
struct StaircaseSpectrum {
  std::vector<std::pair<double, double>> jumps;  // (tau_j, mass_j), tau strictly increasing

  /// F(tau) = sum of masses at jumps <= tau; right-continuous by construction.
  double eval(double tau) const {
    double f = 0.0;
    for (const auto& [t, m] : jumps) {
      if (t <= tau) f += m;
      else break;
    }
    return f;
  }
};

/// Empirical CDF of the normalized self-information at fixed (n, gamma).
struct SpectrumEstimate {
  int n = 0;
  double gamma = 0.0;
  long long num_samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> tau_grid;
  std::vector<double> cdf;  // cdf[i] = fraction of paths with rate <= tau_grid[i] + gamma
};

struct SpectralBounds {
  double inf_entropy = 0.0;
  double sup_entropy = 0.0;
};

struct DominanceReport {
  bool dominates = false;
  double tau_star = 0.0;  // witnessing point when violated
  double gap = 0.0;       // max of F_lower - F_upper over checked points
};

struct Theorem1Report {
  StaircaseSpectrum exact;
  SpectrumEstimate estimate;
  double sup_gap = 0.0;
  long long points_checked = 0;
  bool pass = false;
};

/// Entropy rates of all mixture components; components without a closed form
/// use the caller-supplied certified rates (indexed like the components).
StaircaseSpectrum mixture_spectrum(
    const MixtureModel& mixture,
    const std::vector<std::optional<double>>& certified_rates = {});

std::vector<double> default_tau_grid(int alphabet_size, double gamma, int points = 512);

SpectrumEstimate empirical_spectrum(const Model& model, int n, double gamma,
                                    long long num_samples, std::vector<double> tau_grid,
                                    std::uint64_t seed, int workers = 1);

SpectralBounds spectral_bounds(const StaircaseSpectrum& spectrum);
SpectralBounds spectral_bounds(const SpectrumEstimate& estimate, double epsilon);

/// Exact integral of (1 - F) over [0, inf) for a finite staircase.
double entropy_integral(const StaircaseSpectrum& spectrum);

/// dominates iff F_lower(tau) <= F_upper(tau) + slack everywhere checked.
/// A `violated` verdict certifies no homomorphism lower -> upper exists (up
/// to the statistical confidence carried by the slack).
DominanceReport dominance_check(const StaircaseSpectrum& upper,
                                const StaircaseSpectrum& lower, double slack = 0.0);
DominanceReport dominance_check(const SpectrumEstimate& upper,
                                const SpectrumEstimate& lower, double slack);
DominanceReport dominance_check(const StaircaseSpectrum& upper,
                                const SpectrumEstimate& lower, double slack);
DominanceReport dominance_check(const SpectrumEstimate& upper,
                                const StaircaseSpectrum& lower, double slack);

/// One-sided 95% DKW radius sqrt(ln(2/0.05) / (2 num_samples)).
double dkw_radius_95(long long num_samples);
/// Default estimate-vs-estimate slack: twice the DKW 95% radius combined over
/// both sample counts.
double default_dominance_slack(long long samples_upper, long long samples_lower);

/// Monte Carlo validation of the staircase formula: empirical vs exact
/// spectrum, excluding a neighborhood of each jump.
Theorem1Report validate_theorem1(const MixtureModel& mixture, int n, double gamma,
                                 long long num_samples, std::uint64_t seed,
                                 double tolerance = 0.03, double exclusion_radius = 0.05,
                                 int workers = 1);

}  // namespace spectrascope
