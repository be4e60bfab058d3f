#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace lll {

using Complex = std::complex<double>;

/// Coefficients (a_0, ..., a_N) of u = Σ a_n φ_n in the special Hermite basis
/// φ_n(z) = zⁿ e^{-|z|²/2} / √(π n!).
class FockCoefficients {
 public:
  /// The zero function with a single retained mode.
  FockCoefficients() : coeffs_(1) {}
  /// Throws InvalidParameter on an empty or non-finite sequence.
  explicit FockCoefficients(std::vector<Complex> coeffs);

  static FockCoefficients zeros(std::size_t truncation);
  /// φ_n, requires n <= truncation.
  static FockCoefficients basis(std::size_t n, std::size_t truncation);

  std::size_t truncation() const { return coeffs_.size() - 1; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  const Complex& operator[](std::size_t n) const { return coeffs_[n]; }
  Complex& operator[](std::size_t n) { return coeffs_[n]; }

  /// Zero-pads or cuts to the requested truncation.
  FockCoefficients resized(std::size_t truncation) const;
  FockCoefficients scaled(Complex factor) const;

 private:
  std::vector<Complex> coeffs_;
};

/// Closed-form catalog functions (stationary waves and their relatives).
namespace wave {
struct PhiN {
  std::size_t n = 0;
};
/// φ_n^α(z) = (z - ᾱ)ⁿ e^{-|z|²/2 - |α|²/2 + αz} / √(π n!).
struct PhiNAlpha {
  std::size_t n = 0;
  Complex alpha{};
};
/// The one-zero family linking φ_1 (b = 0) to -φ_0 (b → ∞).
struct PsiB {
  double b = 0.0;
};
/// (a0 φ_0 + a1 φ_1) e^{cz}, normalised to unit mass.
struct EqualityFamily {
  Complex a0{1.0};
  Complex a1{};
  Complex c{};
};
/// φ_{k,h} written in the rescaled variable z/√h, where it is φ_k.
struct SemiclassicalPhi {
  int k = 0;
  double h = 0.5;
};
}  // namespace wave

using WaveSpec = std::variant<wave::PhiN, wave::PhiNAlpha, wave::PsiB,
                              wave::EqualityFamily, wave::SemiclassicalPhi>;

/// Tail-mass threshold of catalog expansions, relative to the total mass.
inline constexpr double kCatalogTailTolerance = 1e-14;
/// Tail-mass threshold of magnetic translations, relative to the input mass.
inline constexpr double kTranslationTailTolerance = 1e-10;

FockCoefficients catalog_coefficients(const WaveSpec& spec, std::size_t truncation);

/// Frequency λ of the stationary wave e^{-iλt}u (φ_n, φ_n^α and ψ_b only).
double stationary_frequency(const WaveSpec& spec);

double mass(const FockCoefficients& u);
double angular_momentum(const FockCoefficients& u);
Complex magnetic_momentum(const FockCoefficients& u);
double hamiltonian(const FockCoefficients& u);

/// Weights √(C(j,n)/2ʲ) of the quartic term, so that
/// 8πH = Σ_j |Σ_{n+p=j} w(j,n) a_n a_p|².
///
/// Rows are built by Pascal's rule with halving, which keeps every entry in
/// [0, 1] and never forms a factorial.
class QuarticWeights {
 public:
  explicit QuarticWeights(std::size_t truncation);

  std::size_t truncation() const { return truncation_; }
  double operator()(std::size_t j, std::size_t n) const {
    return table_[j * (2 * truncation_ + 1) + n];
  }

  /// 8πH(u); u.truncation() must not exceed truncation().
  double quartic(const FockCoefficients& u) const;
  /// c_j = Σ_{n+p=j} w(j,n) a_n a_p for j = 0..2N.
  std::vector<Complex> pair_sums(const FockCoefficients& u) const;

 private:
  std::size_t truncation_;
  std::vector<double> table_;
};

struct FunctionalReport {
  double mu = 0.0;
  double M = 0.0;
  double P = 0.0;
  double H = 0.0;
  Complex Q{};
  double B = 0.0;
  double E = 0.0;
  double G = 0.0;  ///< 8πH + μP
  double F = 0.0;  ///< 8πH + M(μP - M)
};

FunctionalReport functionals(const FockCoefficients& u, double mu);

/// G_μ(u) = 8πH(u) + μP(u).
double energy(const FockCoefficients& u, double mu);

FockCoefficients apply_phase(const FockCoefficients& u, double gamma);
/// u(z) ↦ u(e^{iθ}z).
FockCoefficients apply_rotation(const FockCoefficients& u, double theta);
/// Magnetic translation u(z) ↦ u(z+α) e^{(z̄α - zᾱ)/2} at fixed truncation.
/// Throws TruncationTooSmall when the discarded tail exceeds
/// kTranslationTailTolerance·M(u).
FockCoefficients apply_translation(const FockCoefficients& u, Complex alpha);

/// Matrix of the magnetic translation by α on modes 0..rows-1 × 0..cols-1,
/// i.e. the Weyl displacement with parameter β = -ᾱ.
Eigen::MatrixXcd displacement_matrix(Complex alpha, std::size_t rows, std::size_t cols);

/// (p/2π)^{1/p}‖φ_n‖_p - (q/2π)^{1/q}‖φ_n‖_q, nonnegative by Carlen's inequality.
double carlen_gap(std::size_t n, double p, double q);
/// ‖φ_n‖_p from the radial closed form.
double basis_lp_norm(std::size_t n, double p);

}  // namespace lll
