#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lll/errors.hpp"
#include "lll/fock.hpp"
#include "lll/minimize.hpp"
#include "oracles.hpp"

using namespace lll;
using std::numbers::pi;

namespace {

// Component of g orthogonal to u on the unit sphere.
double tangential(const std::vector<Complex>& g, const FockCoefficients& u) {
  Complex lambda = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) lambda += std::conj(u[k]) * g[k];
  double r = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) r += std::norm(g[k] - lambda.real() * u[k]);
  return std::sqrt(r);
}

OptimizerConfig quick() {
  OptimizerConfig c;
  c.restarts = 3;
  return c;
}

}  // namespace

TEST_CASE("gradient against finite differences") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unif(0.0, 1.5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const FockCoefficients u = oracle::random_unit(rng, 12, 12);
    const double mu = unif(rng);
    const auto g = wirtinger_gradient(u, mu);
    const auto fd = oracle::finite_difference([&](const FockCoefficients& v) { return energy(v, mu); }, u);
    for (std::size_t k = 0; k < g.size(); ++k) worst = std::max(worst, std::abs(g[k] - fd[k]));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("stationary waves have radial gradients") {
  for (double mu : {0.1, 0.3, 0.8}) {
    const auto u0 = FockCoefficients::basis(0, 16);
    const auto u1 = FockCoefficients::basis(1, 16);
    CHECK(tangential(wirtinger_gradient(u0, mu), u0) < 1e-13);
    CHECK(tangential(wirtinger_gradient(u1, mu), u1) < 1e-13);
  }
  const auto psi = catalog_coefficients(wave::PsiB{1.0}, 64);
  CHECK(tangential(wirtinger_gradient(psi, 0.5), psi) < 1e-10);
}

TEST_CASE("descent is monotone and stays on the sphere") {
  std::mt19937_64 rng(2);
  OptimizerConfig cfg;
  for (double mu : {0.2, 0.45, 0.9}) {
    const FockCoefficients start = oracle::random_unit(rng, 10, cfg.truncation);
    const MinimizationResult r = descend(start, mu, cfg);
    REQUIRE(r.energy_trace.size() >= 2);
    CHECK(r.energy_trace.front() == doctest::Approx(energy(start, mu)));
    for (std::size_t i = 1; i < r.energy_trace.size(); ++i)
      CHECK(r.energy_trace[i] <= r.energy_trace[i - 1] + 1e-14);
    CHECK(std::abs(mass(r.u) - 1.0) <= 1e-12);
    CHECK(r.G_value == doctest::Approx(r.energy_trace.back()));
    if (r.converged) CHECK(r.lagrange_residual <= cfg.grad_tol);
  }
}

TEST_CASE("global minimizers at the reference values of mu") {
  const OptimizerConfig cfg = quick();
  const MinimizationResult r08 = minimize_G(0.8, cfg);
  CHECK(r08.converged);
  CHECK(std::abs(r08.G_value - 1.0) <= 1e-8);
  CHECK(r08.classification.label == WaveClass::Phi0);
  CHECK(r08.classification.overlap >= 1.0 - 1e-6);

  const MinimizationResult r049 = minimize_G(0.49, cfg);
  CHECK(std::abs(r049.G_value - 0.99) <= 1e-6);
  CHECK(r049.classification.label == WaveClass::Phi1);

  const MinimizationResult r05 = minimize_G(0.5, cfg);
  CHECK(std::abs(r05.G_value - 1.0) <= 1e-8);
  CHECK(r05.classification.label != WaveClass::Unclassified);

  const MinimizationResult r07 = minimize_G(0.7, cfg);
  CHECK(std::abs(r07.G_value - 1.0) <= 1e-6);
  CHECK(r07.classification.label == WaveClass::Phi0);

  for (const auto* r : {&r08, &r049, &r05, &r07}) {
    CHECK(std::abs(mass(r->u) - 1.0) <= 1e-12);
    if (r->converged) CHECK(std::abs(r->Q_value) <= 1e-6);
  }
}

TEST_CASE("small mu: many zeros and P > 1") {
  const MinimizationResult r = minimize_G(5.0 / 32.0 - 0.01, quick());
  CHECK(r.converged);
  CHECK(r.zero_count > 3);
  CHECK(r.G_value < 0.5 + r.mu - 1e-6);
  CHECK(r.P_value > 1.0);
  CHECK(r.classification.label == WaveClass::Unclassified);
  CHECK(std::abs(r.Q_value) <= 1e-6);
}

TEST_CASE("minimization is deterministic") {
  const MinimizationResult a = minimize_G(0.12, quick());
  const MinimizationResult b = minimize_G(0.12, quick());
  CHECK(a.G_value == b.G_value);
  CHECK(a.restart_index == b.restart_index);
  for (std::size_t k = 0; k < a.u.size(); ++k) CHECK(a.u[k] == b.u[k]);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(minimize_G(0.0, quick()), MuNonPositive);
  CHECK_THROWS_AS(minimize_G(-1.0, quick()), MuNonPositive);
  OptimizerConfig bad;
  bad.truncation = 4;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = OptimizerConfig{};
  bad.restarts = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = OptimizerConfig{};
  bad.grad_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  CHECK_NOTHROW(OptimizerConfig{}.validate());
}

TEST_CASE("classification") {
  const auto phi0 = apply_phase(FockCoefficients::basis(0, 48), 1.3);
  const Classification c0 = classify(phi0);
  CHECK(c0.label == WaveClass::Phi0);
  CHECK(c0.overlap == doctest::Approx(1.0).epsilon(1e-12));

  const auto shifted = apply_rotation(apply_translation(FockCoefficients::basis(1, 48), Complex(0.4, 0.2)), 0.7);
  CHECK(classify(shifted).label == WaveClass::Phi1);

  const Classification cpsi = classify(catalog_coefficients(wave::PsiB{1.0}, 64));
  CHECK(cpsi.label == WaveClass::PsiB);
  REQUIRE(cpsi.b_fit.has_value());
  CHECK(std::abs(*cpsi.b_fit - 1.0) <= 1e-6);

  std::mt19937_64 rng(8);
  CHECK(classify(oracle::random_unit(rng, 20, 48)).label == WaveClass::Unclassified);
  CHECK_THROWS_AS(classify(FockCoefficients::basis(0, 8).scaled(2.0)), InvalidParameter);
}

TEST_CASE("zero counting") {
  CHECK(count_zeros(FockCoefficients::basis(1, 48), 1.0) == 1);
  CHECK(count_zeros(catalog_coefficients(wave::PsiB{1.0}, 64), 2.0) == 1);
  CHECK(count_zeros(catalog_coefficients(wave::PsiB{1.0}, 64), 1.4) == 0);
  CHECK(count_zeros(FockCoefficients::basis(0, 48), 10.0) == 0);
  const ZeroReport rep = find_zeros(catalog_coefficients(wave::PsiB{1.0}, 64), 2.0);
  bool found = false;
  for (std::size_t i = 0; i < rep.roots.size(); ++i)
    if (std::abs(rep.roots[i] - Complex(1.5, 0.0)) < 1e-8) {
      found = true;
      CHECK(rep.residuals[i] < 1e-10);
    }
  CHECK(found);
  // Roots of a translated φ_2 sit at the translated origin.
  const auto t = apply_translation(FockCoefficients::basis(2, 64), Complex(0.5, -0.25));
  CHECK(count_zeros(t, 0.5) == 0);
  CHECK(count_zeros(t, 0.6) == 2);
  CHECK_THROWS_AS(count_zeros(FockCoefficients::zeros(10), 1.0), DegenerateInput);
}

TEST_CASE("scan rows and CSV") {
  const auto grid = mu_grid(0.05, 1.0, 0.05);
  REQUIRE(grid.size() == 20);
  CHECK(grid.front() == doctest::Approx(0.05));
  CHECK(grid.back() == doctest::Approx(1.0));

  const auto rows = scan_mu({0.7, 0.3, 0.1}, quick());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].mu == doctest::Approx(0.1));
  CHECK(rows[1].G_phi1 == doctest::Approx(0.8));
  CHECK(rows[1].G_psi1 == doctest::Approx(0.95));
  CHECK(rows[1].G_phi0 == 1.0);
  for (const ScanRow& row : rows) {
    CHECK(row.result.G_value <= std::min({row.G_phi0, row.G_phi1, row.G_psi1}) + 1e-8);
    if (row.mu < 0.5 && row.result.G_value < row.G_phi1 - 1e-9) CHECK(row.result.P_value > 1.0);
  }
  CHECK(std::abs(rows[2].result.G_value - 1.0) <= 1e-6);
  CHECK(rows[2].result.classification.label == WaveClass::Phi0);

  std::ostringstream out;
  write_scan_csv(out, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "mu,G_min,P,H,Qabs,class,b_fit,n_zeros,G_phi0,G_phi1,G_psi1");
  int count = 0;
  while (std::getline(in, line)) {
    ++count;
    CHECK(std::count(line.begin(), line.end(), ',') == 10);
  }
  CHECK(count == 3);
}

TEST_CASE("result JSON") {
  const auto doc = result_to_json(minimize_G(0.8, quick()));
  for (const char* key : {"mu", "G", "P", "H", "Q", "class", "zero_count", "converged", "coeffs"})
    CHECK(doc.contains(key));
  CHECK(doc.at("class") == "Phi0");
}

TEST_CASE("empirical mu0 bracket") {
  const Mu0Estimate e = estimate_mu0(OptimizerConfig{});
  CHECK(e.lower >= 5.0 / 32.0);
  CHECK(e.upper < 0.5);
  CHECK(e.lower < e.upper);
  CHECK(e.upper - e.lower <= 1e-3);
  CHECK(e.caveat.find("empirical") != std::string::npos);
}

TEST_CASE("semiclassical energies") {
  const double Na = 4 * pi / 0.75;
  const SemiclassicalReport r = semiclassical(Na, 1.0, 0.5);
  CHECK(r.omega2 == doctest::Approx(0.75));
  CHECK(r.E_phi0 == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(r.E_phi1 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(semiclassical(Na / 2, 2.0, 0.5).Na == doctest::Approx(Na));

  for (double h : {0.1, 0.3, 0.5, 0.9}) {
    const SemiclassicalReport s = semiclassical(7.0, 1.5, h);
    const double g = s.Na * s.omega2;
    for (int k : {0, 1}) {
      const auto u = catalog_coefficients(wave::SemiclassicalPhi{k, h}, 8);
      const double expected = h * (angular_momentum(u) + mass(u)) + g * 8 * pi * hamiltonian(u) / (4 * pi * h);
      CHECK((k == 0 ? s.E_phi0 : s.E_phi1) == doctest::Approx(expected).epsilon(1e-13));
    }
    CHECK(s.mu_eff == doctest::Approx(4 * pi * h * h / g));
  }

  for (double Na : {1.0, 10.0, 100.0})
    for (double kappa : {5.0 / 32.0, 0.5}) {
      const double h = semiclassical_threshold(Na, kappa);
      CHECK(semiclassical(Na, 1.0, h).mu_eff == doctest::Approx(kappa).epsilon(1e-12));
    }
  const double lo = semiclassical_threshold(20.0, 5.0 / 32.0), hi = semiclassical_threshold(20.0, 0.5);
  CHECK(semiclassical(20.0, 1.0, 0.5 * lo).regime == SemiclassicalRegime::InfinitelyManyZeros);
  CHECK(semiclassical(20.0, 1.0, 0.5 * (lo + hi)).regime == SemiclassicalRegime::Intermediate);
  CHECK(semiclassical(20.0, 1.0, std::min(0.999, 1.1 * hi)).regime == SemiclassicalRegime::GaussianUnique);
  CHECK(semiclassical_regime(0.5) == SemiclassicalRegime::Degenerate);
  CHECK(semiclassical_regime(5.0 / 32.0) == SemiclassicalRegime::Intermediate);
  CHECK(semiclassical_regime(0.1) == SemiclassicalRegime::InfinitelyManyZeros);
  CHECK(semiclassical_regime(0.6) == SemiclassicalRegime::GaussianUnique);

  CHECK_THROWS_AS(semiclassical(1.0, 1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(semiclassical(1.0, 1.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(semiclassical(0.0, 1.0, 0.5), InvalidParameter);
  const auto doc = semiclassical_to_json(r);
  CHECK(doc.at("regime") == to_string(r.regime));
}
