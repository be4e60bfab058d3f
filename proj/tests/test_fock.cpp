#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lll/errors.hpp"
#include "lll/fock.hpp"
#include "lll/io.hpp"
#include "oracles.hpp"

using namespace lll;
using doctest::Approx;
using std::numbers::pi;

namespace {

FockCoefficients coeffs(std::vector<Complex> a) { return FockCoefficients(std::move(a)); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("coefficient invariants") {
  CHECK_THROWS_AS(FockCoefficients(std::vector<Complex>{}), InvalidParameter);
  CHECK_THROWS_AS(coeffs({1.0, Complex(NAN, 0.0)}), InvalidParameter);
  CHECK_THROWS_AS(coeffs({1.0, Complex(0.0, INFINITY)}), InvalidParameter);
  const auto u = FockCoefficients::basis(3, 8);
  CHECK(u.truncation() == 8);
  CHECK(u.size() == 9);
  CHECK(u[3] == Complex(1.0));
}

TEST_CASE("conserved quantities") {
  CHECK(mass(coeffs({1.0, 0.0, 0.0})) == 1.0);
  CHECK(mass(FockCoefficients::zeros(5)) == 0.0);
  CHECK(angular_momentum(FockCoefficients::basis(1, 4)) == 1.0);
  CHECK(std::abs(magnetic_momentum(FockCoefficients::basis(0, 4))) == 0.0);
  const double s = 1.0 / std::sqrt(2.0);
  const Complex q = magnetic_momentum(coeffs({s, s}));
  CHECK(q.real() == Approx(0.5).epsilon(1e-15));
  CHECK(q.imag() == 0.0);
}

TEST_CASE("hamiltonian of basis functions") {
  CHECK(hamiltonian(FockCoefficients::basis(0, 6)) == Approx(1.0 / (8.0 * pi)).epsilon(1e-15));
  CHECK(hamiltonian(FockCoefficients::basis(2, 6)) == Approx(3.0 / (64.0 * pi)).epsilon(1e-15));
  for (std::size_t n : {5u, 40u, 150u, 300u}) {
    // 8πH(φ_n) = C(2n,n)/4ⁿ
    const double expected = std::exp(std::lgamma(2.0 * n + 1) - 2 * std::lgamma(n + 1.0) - 2.0 * n * std::log(2.0));
    CHECK(rel(8 * pi * hamiltonian(FockCoefficients::basis(n, n)), expected) < 1e-12);
  }
  const auto psi = catalog_coefficients(wave::PsiB{1.0}, 64);
  CHECK(8 * pi * hamiltonian(psi) == Approx(7.0 / 8.0).epsilon(1e-13));
}

TEST_CASE("functionals of the stationary waves") {
  for (double mu : {0.0, 0.3, 1.0}) {
    CHECK(std::abs(functionals(FockCoefficients::basis(0, 8), mu).B) < 1e-15);
    CHECK(std::abs(functionals(FockCoefficients::basis(1, 8), mu).B) < 1e-15);
    CHECK(functionals(FockCoefficients::basis(2, 8), mu).B == Approx(3.0 / 16.0).epsilon(1e-14));
  }
}

TEST_CASE("functionals against plane quadrature") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const FockCoefficients u = oracle::random_unit(rng, 8, 10);
    CHECK(std::abs(oracle::mass(u) - mass(u)) < 1e-9);
    CHECK(std::abs(oracle::angular(u) - angular_momentum(u)) < 1e-8);
    CHECK(std::abs(oracle::magnetic(u) - magnetic_momentum(u)) < 1e-8);
    CHECK(std::abs(oracle::quartic(u) - 8 * pi * hamiltonian(u)) < 1e-8);
  }
}

TEST_CASE("functional identities on random inputs") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    FockCoefficients u = oracle::random_unit(rng, 1 + trial % 20, 24);
    const double scale = 0.5 + 2.0 * unif(rng);
    u = u.scaled(scale);
    const double mu = unif(rng);
    const FunctionalReport r = functionals(u, mu);
    CHECK(r.M >= 0.0);
    CHECK(r.H >= 0.0);
    CHECK(r.P >= 0.0);
    const double size = r.M * r.M;
    CHECK(std::abs(r.E - (r.B + 0.25 * std::norm(r.Q))) <= 1e-12 * size);
    CHECK(std::abs(r.F - (2 * r.E + (mu - 0.5) * r.P * r.M)) <= 1e-12 * size * (1 + r.P));
    CHECK(r.B >= -1e-12 * size);
    CHECK(r.E >= -1e-12 * size);
    const FunctionalReport half = functionals(u, 0.5);
    CHECK(std::abs(half.F - 2 * half.E) <= 1e-12 * size * (1 + r.P));
    if (mu > 0.5) CHECK(r.F >= (mu - 0.5) * r.P * r.M - 1e-12 * size * (1 + r.P));
  }
}

TEST_CASE("phase and rotation invariance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int trial = 0; trial < 50; ++trial) {
    const FockCoefficients u = oracle::random_unit(rng, 12, 16);
    const double gamma = angle(rng), theta = angle(rng), mu = 0.37;
    const FunctionalReport r = functionals(u, mu);
    for (const FockCoefficients& v : {apply_phase(u, gamma), apply_rotation(u, theta)}) {
      const FunctionalReport s = functionals(v, mu);
      CHECK(std::abs(s.M - r.M) < 1e-13);
      CHECK(std::abs(s.P - r.P) < 1e-12);
      CHECK(std::abs(s.H - r.H) < 1e-13);
      CHECK(std::abs(s.B - r.B) < 1e-12);
      CHECK(std::abs(s.G - r.G) < 1e-12);
      CHECK(std::abs(std::abs(s.Q) - std::abs(r.Q)) < 1e-12);
    }
    CHECK(std::abs(magnetic_momentum(apply_phase(u, gamma)) - r.Q) < 1e-12);
    CHECK(std::abs(magnetic_momentum(apply_rotation(u, theta)) - std::exp(Complex(0, -theta)) * r.Q) < 1e-12);
  }
}

TEST_CASE("magnetic translation") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(-0.7, 0.7);
  for (int trial = 0; trial < 30; ++trial) {
    const FockCoefficients u = oracle::random_unit(rng, 12, 64);
    const Complex alpha(unif(rng), unif(rng));
    const FockCoefficients v = apply_translation(u, alpha);
    const double M = mass(u), P = angular_momentum(u);
    const Complex Q = magnetic_momentum(u);
    CHECK(std::abs(mass(v) - M) < 1e-10);
    CHECK(std::abs(angular_momentum(v) - (P - 2 * (std::conj(alpha) * Q).real() + std::norm(alpha) * M)) < 1e-10);
    CHECK(std::abs(magnetic_momentum(v) - (Q - alpha * M)) < 1e-10);
    const double B = functionals(u, 0.5).B;
    CHECK(std::abs(functionals(v, 0.5).B - B) <= 1e-9 * std::max(std::abs(B), 1e-3));
    const FockCoefficients back = apply_translation(v, -alpha);
    double err = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) err = std::max(err, std::abs(back[n] - u[n]));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("translation matches the pointwise definition") {
  std::mt19937_64 rng(21);
  const FockCoefficients u = oracle::random_unit(rng, 6, 48);
  const Complex alpha(0.6, -0.4);
  const FockCoefficients v = apply_translation(u, alpha);
  for (Complex z : {Complex(0.0), Complex(0.5, 1.0), Complex(-1.3, 0.2), Complex(2.0, -2.0)}) {
    const Complex expected =
        oracle::evaluate(u, z + alpha) * std::exp(0.5 * (std::conj(z) * alpha - z * std::conj(alpha)));
    CHECK(std::abs(oracle::evaluate(v, z) - expected) < 1e-12);
  }
}

TEST_CASE("displacement matrix is unitary") {
  for (Complex alpha : {Complex(0.3, 0.1), Complex(-1.0, 0.0), Complex(0.5, -0.8)}) {
    const Eigen::MatrixXcd d = displacement_matrix(alpha, 160, 160);
    // Columns far from the edge are complete.
    const Eigen::MatrixXcd block = d.leftCols(60);
    const Eigen::MatrixXcd gram = block.adjoint() * block;
    CHECK((gram - Eigen::MatrixXcd::Identity(60, 60)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("translation needs headroom") {
  CHECK_THROWS_AS(apply_translation(FockCoefficients::basis(8, 8), Complex(1.0, 0.0)), TruncationTooSmall);
  CHECK_NOTHROW(apply_translation(FockCoefficients::basis(0, 8), Complex(0.0, 0.0)));
}

TEST_CASE("catalog: basis and semiclassical functions") {
  const auto u = catalog_coefficients(wave::PhiN{0}, 8);
  CHECK(u.truncation() == 8);
  CHECK(u[0] == Complex(1.0));
  for (std::size_t n = 1; n <= 8; ++n) CHECK(u[n] == Complex(0.0));
  const auto s = catalog_coefficients(wave::SemiclassicalPhi{1, 0.3}, 10);
  CHECK(s[1] == Complex(1.0));
  CHECK_THROWS_AS(catalog_coefficients(wave::SemiclassicalPhi{0, 1.0}, 10), InvalidParameter);
  CHECK_THROWS_AS(catalog_coefficients(wave::SemiclassicalPhi{2, 0.5}, 10), InvalidParameter);
  CHECK_THROWS_AS(catalog_coefficients(wave::PhiN{9}, 8), TruncationTooSmall);
}

TEST_CASE("catalog: psi_b") {
  for (double b : {0.0, 0.25, 0.7, 1.0, 4.0}) {
    const auto u = catalog_coefficients(wave::PsiB{b}, 64);
    CHECK(std::abs(mass(u) - 1.0) < 1e-12);
    CHECK(std::abs(magnetic_momentum(u)) < 1e-12);
    CHECK(std::abs(angular_momentum(u) - 1.0 / std::pow(1 + b * b, 2)) < 1e-12);
    CHECK(std::abs(functionals(u, 0.5).B) < 1e-12);
  }
  // Coefficients against projection of the z-space formula.
  const auto u = catalog_coefficients(wave::PsiB{1.0}, 20);
  const auto ref = oracle::project([](Complex z) { return oracle::psi_b(1.0, z); }, 20);
  for (std::size_t n = 0; n <= 20; ++n) CHECK(std::abs(u[n] - ref[n]) < 1e-9);
  // Single zero at z = 3/2 (b = 1).
  const auto v = catalog_coefficients(wave::PsiB{1.0}, 64);
  CHECK(std::abs(oracle::evaluate(v, Complex(1.5, 0.0))) < 1e-13);
  CHECK_THROWS_AS(catalog_coefficients(wave::PsiB{-0.1}, 64), InvalidParameter);
  CHECK_THROWS_AS(catalog_coefficients(wave::PsiB{1.0}, 6), TruncationTooSmall);
}

TEST_CASE("catalog: phi_n^alpha against its closed form") {
  const Complex alpha(0.4, -0.3);
  for (std::size_t n : {0u, 1u, 3u}) {
    const auto u = catalog_coefficients(wave::PhiNAlpha{n, alpha}, 48);
    CHECK(std::abs(mass(u) - 1.0) < 1e-12);
    for (Complex z : {Complex(0.2, 0.1), Complex(-1.0, 0.7), Complex(1.5, -0.5)}) {
      const Complex expected = std::pow(z - std::conj(alpha), static_cast<double>(n)) *
                               std::exp(-0.5 * std::norm(z) - 0.5 * std::norm(alpha) + alpha * z) /
                               std::sqrt(pi * std::tgamma(n + 1.0));
      CHECK(std::abs(oracle::evaluate(u, z) - expected) < 1e-12);
    }
    // φ_n^α is the magnetic translate of φ_n by -ᾱ.
    const auto t = apply_translation(FockCoefficients::basis(n, 48), -std::conj(alpha));
    double diff = 0.0;
    for (std::size_t m = 0; m <= 48; ++m) diff = std::max(diff, std::abs(t[m] - u[m]));
    CHECK(diff < 1e-12);
  }
}

TEST_CASE("catalog: equality family") {
  const Complex a0(0.8, 0.1), a1(-0.3, 0.5), c(1.1, -0.6);
  const auto u = catalog_coefficients(wave::EqualityFamily{a0, a1, c}, 64);
  CHECK(std::abs(mass(u) - 1.0) < 1e-12);
  CHECK(std::abs(functionals(u, 0.5).B) < 1e-12);
  // Pointwise ratio against (a0 φ0 + a1 φ1) e^{cz} is a positive constant.
  auto raw = [&](Complex z) { return (a0 + a1 * z) * std::exp(c * z - 0.5 * std::norm(z)) / std::sqrt(pi); };
  const Complex k = oracle::evaluate(u, 0.3) / raw(0.3);
  CHECK(std::abs(k.imag()) < 1e-12);
  for (Complex z : {Complex(1.0, 1.0), Complex(-0.5, 0.2)}) CHECK(std::abs(oracle::evaluate(u, z) - k * raw(z)) < 1e-12);
}

TEST_CASE("catalog values of G") {
  for (int i = 0; i <= 20; ++i) {
    const double mu = 0.05 * i;
    CHECK(std::abs(energy(catalog_coefficients(wave::PhiN{0}, 64), mu) - 1.0) < 1e-12);
    CHECK(std::abs(energy(catalog_coefficients(wave::PhiN{1}, 64), mu) - (0.5 + mu)) < 1e-12);
    for (int k = 0; k <= 16; ++k) {
      const double b = 0.25 * k;
      const double expected = 1.0 + (mu - 0.5) / std::pow(1 + b * b, 2);
      CHECK(std::abs(energy(catalog_coefficients(wave::PsiB{b}, 64), mu) - expected) < 1e-12);
    }
  }
}

TEST_CASE("stationary frequencies") {
  CHECK(stationary_frequency(wave::PhiN{0}) == Approx(1.0 / (2 * pi)));
  CHECK(stationary_frequency(wave::PhiN{2}) == Approx(6.0 / 16.0 / (2 * pi)));
  CHECK(stationary_frequency(wave::PhiNAlpha{1, Complex(0.3, 0.2)}) == Approx(0.5 / (2 * pi)));
}

TEST_CASE("Carlen gap") {
  CHECK(carlen_gap(0, 2.0, 4.0) >= 0.0);
  CHECK(std::abs(carlen_gap(0, 3.0, 3.0)) < 1e-15);
  CHECK_THROWS_AS(carlen_gap(0, 0.5, 2.0), InvalidParameter);
  CHECK_THROWS_AS(carlen_gap(0, 3.0, 2.0), InvalidParameter);
  // Radial quadrature of ‖φ_n‖_p.
  auto norm = [](std::size_t n, double p) {
    const double lf = std::lgamma(n + 1.0);
    const double integral = oracle::simpson(
        [&](double r) {
          if (r == 0.0) return 0.0;
          const double logphi = n * std::log(r) - 0.5 * r * r - 0.5 * (std::log(pi) + lf);
          return 2 * pi * r * std::exp(p * logphi);
        },
        0.0, 20.0, 20000);
    return std::pow(integral, 1.0 / p);
  };
  CHECK(std::abs(basis_lp_norm(3, 2.0) - norm(3, 2.0)) < 1e-10);
  CHECK(std::abs(basis_lp_norm(3, 6.0) - norm(3, 6.0)) < 1e-10);
  const double expected = std::pow(2.0 / (2 * pi), 0.5) * norm(3, 2.0) - std::pow(6.0 / (2 * pi), 1.0 / 6) * norm(3, 6.0);
  CHECK(std::abs(carlen_gap(3, 2.0, 6.0) - expected) < 1e-10);
  for (std::size_t n = 0; n < 6; ++n)
    for (double p : {1.0, 2.0, 3.5})
      for (double q : {p, p + 1.0, 10.0}) CHECK(carlen_gap(n, p, q) >= -1e-12);
}

TEST_CASE("coefficient JSON") {
  const auto u = catalog_coefficients(wave::PsiB{0.5}, 12);
  const auto back = coefficients_from_json(coefficients_to_json(u));
  CHECK(back.truncation() == 12);
  for (std::size_t n = 0; n <= 12; ++n) CHECK(back[n] == u[n]);
  auto doc = coefficients_to_json(u);
  doc["truncation"] = 13;
  CHECK_THROWS_AS(coefficients_from_json(doc), FormatError);
  CHECK_THROWS_AS(coefficients_from_json(nlohmann::json::parse(R"({"truncation": 0, "coeffs": [[1]]})")), FormatError);
  CHECK_THROWS_AS(coefficients_from_json(nlohmann::json::parse(R"({"coeffs": []})")), FormatError);
}
