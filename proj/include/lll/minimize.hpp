#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lll/fock.hpp"

namespace lll {

struct OptimizerConfig {
  std::size_t truncation = 48;
  /// Random starts, tried after the catalog starts φ_0, φ_1, ψ_1.
  int restarts = 6;
  int max_iters = 20000;
  double armijo = 1e-4;       ///< sufficient-decrease constant
  double backtrack = 0.5;     ///< step shrink factor
  int max_backtracks = 60;
  double grad_tol = 1e-9;     ///< bound on the Lagrange residual
  std::uint64_t seed = 0;
  double zero_radius = 6.0;

  /// Throws InvalidParameter unless N >= 8, restarts >= 1 and grad_tol > 0.
  void validate() const;
};

enum class WaveClass { Phi0, Phi1, PsiB, Unclassified };
const char* to_string(WaveClass c);

/// Overlap threshold for a class label.
inline constexpr double kClassThreshold = 1.0 - 1e-4;

struct Classification {
  WaveClass label = WaveClass::Unclassified;
  double overlap = 0.0;  ///< with the assigned class, else the best candidate
  double overlap_phi0 = 0.0;
  double overlap_phi1 = 0.0;
  double overlap_psi = 0.0;
  std::optional<double> b_fit;  ///< from P = 1/(1+b²)² after centring
};

/// Compares u with φ_0, φ_1 and ψ_{b_fit} modulo phase, rotation and translation.
/// Requires M(u) = 1 within 1e-8 (InvalidParameter otherwise).
Classification classify(const FockCoefficients& u);

struct ZeroReport {
  std::vector<Complex> roots;       ///< all roots of the trimmed polynomial
  std::vector<double> residuals;    ///< |p(z)| / Σ|c_n||z|ⁿ per root
  int degree = 0;
  int count_inside = 0;             ///< roots with |z| <= radius
  double radius = 0.0;
};

/// Roots of Σ a_n zⁿ/√n! after trimming trailing |a_n| < 1e-13.
/// Throws DegenerateInput when every coefficient is below that level.
ZeroReport find_zeros(const FockCoefficients& u, double radius);
int count_zeros(const FockCoefficients& u, double radius);

/// gₖ = 2∂G_μ/∂āₖ; Re gₖ and Im gₖ are the partial derivatives of G_μ in
/// Re aₖ and Im aₖ.
std::vector<Complex> wirtinger_gradient(const FockCoefficients& u, double mu);

struct MinimizationResult {
  double mu = 0.0;
  FockCoefficients u;
  double G_value = 0.0;
  double P_value = 0.0;
  double H_value = 0.0;
  Complex Q_value{};
  double lagrange_residual = 0.0;
  Classification classification;
  int zero_count = 0;
  int restart_index = 0;  ///< which start produced the result
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_trace;  ///< G_μ after every accepted step, start included
};

/// Riemannian descent on M(u) = 1 from every start; returns the lowest G_μ
/// (ties within 1e-12 go to the earlier start). MuNonPositive for μ <= 0.
/// A result whose residual misses grad_tol is returned with converged = false.
MinimizationResult minimize_G(double mu, const OptimizerConfig& config);

/// Descent from one given start.
MinimizationResult descend(const FockCoefficients& start, double mu, const OptimizerConfig& config);

/// Same as minimize_G but throws NoConvergence on an unconverged result.
MinimizationResult minimize_G_checked(double mu, const OptimizerConfig& config);

nlohmann::json result_to_json(const MinimizationResult& r);

struct ScanRow {
  double mu = 0.0;
  MinimizationResult result;
  double G_phi0 = 0.0;  ///< 1
  double G_phi1 = 0.0;  ///< 1/2 + μ
  double G_psi1 = 0.0;  ///< 1 + (μ - 1/2)/4
};

/// Grid from..to inclusive in steps of `step` (rounded to the nearest count).
std::vector<double> mu_grid(double from, double to, double step);
std::vector<ScanRow> scan_mu(const std::vector<double>& grid, const OptimizerConfig& config);
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);

struct Mu0Estimate {
  double lower = 0.0;
  double upper = 0.0;
  int evaluations = 0;
  std::string caveat = "empirical, truncation-dependent";
};

/// Bisection for the onset of φ_1 as global minimizer on (5/32, 1/2).
/// Throws InconsistentBracket when the classification is not monotone.
Mu0Estimate estimate_mu0(const OptimizerConfig& config, double width = 1e-3);

enum class SemiclassicalRegime {
  InfinitelyManyZeros,  ///< μ_eff < 5/32
  Intermediate,         ///< 5/32 <= μ_eff < 1/2
  Degenerate,           ///< μ_eff = 1/2
  GaussianUnique,       ///< μ_eff > 1/2
};
const char* to_string(SemiclassicalRegime r);
SemiclassicalRegime semiclassical_regime(double mu_eff);

struct SemiclassicalReport {
  double Na = 0.0;  ///< product N·a
  double h = 0.0;
  double omega2 = 0.0;       ///< Ω_h² = 1 - h²
  double mu_eff = 0.0;       ///< 4πh²/(NaΩ_h²)
  double h_lower = 0.0;      ///< threshold at κ = 5/32
  double h_upper = 0.0;      ///< threshold at κ = 1/2
  double E_phi0 = 0.0;
  double E_phi1 = 0.0;
  SemiclassicalRegime regime = SemiclassicalRegime::Intermediate;
};

/// Threshold h with h² = κNaΩ_h²/(4π), i.e. h² = c/(1+c), c = κNa/(4π).
double semiclassical_threshold(double Na, double kappa);
/// InvalidParameter unless 0 < h < 1 and N, a > 0.
SemiclassicalReport semiclassical(double N, double a, double h);
nlohmann::json semiclassical_to_json(const SemiclassicalReport& r);

}  // namespace lll
