#include "lll/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "lll/errors.hpp"

namespace lll {

namespace {

std::string sci(double x) {
  std::ostringstream os;
  os.precision(2);
  os << std::scientific << x;
  return os.str();
}

using std::numbers::pi;

void require_finite(std::span<const Complex> coeffs) {
  for (const Complex& c : coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InvalidParameter("coefficient sequence contains NaN or Inf");
    }
  }
}

// Coherent state e^{-|α|²/2} Σ αᵐ/√m! φ_m on `count` modes.
std::vector<Complex> coherent(Complex alpha, std::size_t count) {
  std::vector<Complex> out(count);
  Complex term = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t m = 0; m < count; ++m) {
    if (m > 0) term *= alpha / std::sqrt(static_cast<double>(m));
    out[m] = term;
  }
  return out;
}

// Multiplication by (z - s) on Fock coefficients: z·φ_m = √(m+1) φ_{m+1}.
void multiply_by_shifted_z(std::vector<Complex>& v, Complex s) {
  for (std::size_t m = v.size(); m-- > 0;) {
    const Complex raised = m > 0 ? std::sqrt(static_cast<double>(m)) * v[m - 1] : 0.0;
    v[m] = raised - s * v[m];
  }
}

struct Expansion {
  std::vector<Complex> coeffs;
  bool normalise = false;
};

// Number of extra modes that makes the closed-form expansion converge when
// the dominant geometric ratio has squared modulus x.
std::size_t convergence_margin(double x) {
  return 80 + static_cast<std::size_t>(std::ceil(8.0 * x + 30.0 * std::sqrt(x)));
}

Expansion expand(const wave::PhiN& w, std::size_t count) {
  std::vector<Complex> out(count);
  out[w.n] = 1.0;
  return {std::move(out)};
}

Expansion expand(const wave::PhiNAlpha& w, std::size_t count) {
  // φ_n^α = (z - ᾱ)ⁿ φ_0^α / √n!, with φ_0^α the coherent state of parameter α.
  std::vector<Complex> v = coherent(w.alpha, count);
  for (std::size_t k = 0; k < w.n; ++k) {
    multiply_by_shifted_z(v, std::conj(w.alpha));
    const double inv = 1.0 / std::sqrt(static_cast<double>(k + 1));
    for (Complex& c : v) c *= inv;
  }
  return {std::move(v)};
}

Expansion expand(const wave::PsiB& w, std::size_t count) {
  const double b = w.b;
  const double gamma = b / (1.0 + b * b);
  const double shift = b * (2.0 + b * b) / (1.0 + b * b);
  // √π·C_b with C_b = e^{-γ²/2} / √(π(1+b²)).
  const double prefactor = std::exp(-0.5 * gamma * gamma) / std::sqrt(1.0 + b * b);
  std::vector<Complex> out(count);
  out[0] = -prefactor * shift;
  // a_n = √π C_b γ^{n-1} (n - βγ) / √n!, n >= 1.
  double t = 1.0;  // γ^{n-1}/√n!
  for (std::size_t n = 1; n < count; ++n) {
    if (n > 1) t *= gamma / std::sqrt(static_cast<double>(n));
    out[n] = prefactor * t * (static_cast<double>(n) - shift * gamma);
  }
  return {std::move(out)};
}

Expansion expand(const wave::EqualityFamily& w, std::size_t count) {
  // a_n = (a0 cⁿ + a1 n c^{n-1}) / √n!
  std::vector<Complex> out(count);
  Complex g = 1.0;  // cⁿ/√n!
  Complex previous = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    if (n > 0) {
      previous = g;
      g *= w.c / std::sqrt(static_cast<double>(n));
    }
    out[n] = w.a0 * g + w.a1 * std::sqrt(static_cast<double>(n)) * previous;
  }
  return {std::move(out), true};
}

Expansion expand(const wave::SemiclassicalPhi& w, std::size_t count) {
  std::vector<Complex> out(count);
  out[static_cast<std::size_t>(w.k)] = 1.0;
  return {std::move(out)};
}

void validate(const WaveSpec& spec) {
  if (const auto* w = std::get_if<wave::PsiB>(&spec)) {
    if (!(w->b >= 0.0) || !std::isfinite(w->b)) throw InvalidParameter("psi_b requires b >= 0");
  } else if (const auto* w = std::get_if<wave::SemiclassicalPhi>(&spec)) {
    if (!(w->h > 0.0 && w->h < 1.0)) throw InvalidParameter("semiclassical h must lie in (0,1)");
    if (w->k != 0 && w->k != 1) throw InvalidParameter("semiclassical k must be 0 or 1");
  } else if (const auto* w = std::get_if<wave::EqualityFamily>(&spec)) {
    if (w->a0 == 0.0 && w->a1 == 0.0) throw InvalidParameter("equality family with a0 = a1 = 0");
  }
}

std::size_t margin_for(const WaveSpec& spec) {
  return std::visit(
      [](const auto& w) -> std::size_t {
        using W = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<W, wave::PhiNAlpha>) {
          return w.n + convergence_margin(std::norm(w.alpha));
        } else if constexpr (std::is_same_v<W, wave::EqualityFamily>) {
          return convergence_margin(std::norm(w.c));
        } else if constexpr (std::is_same_v<W, wave::PsiB>) {
          return convergence_margin(0.25);
        } else {
          return 1;
        }
      },
      spec);
}

std::size_t required_modes(const WaveSpec& spec) {
  if (const auto* w = std::get_if<wave::PhiN>(&spec)) return w->n + 1;
  if (const auto* w = std::get_if<wave::SemiclassicalPhi>(&spec)) return w->k + 1;
  return 1;
}

}  // namespace

FockCoefficients::FockCoefficients(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidParameter("coefficient sequence must not be empty");
  require_finite(coeffs_);
}

FockCoefficients FockCoefficients::zeros(std::size_t truncation) {
  return FockCoefficients(std::vector<Complex>(truncation + 1));
}

FockCoefficients FockCoefficients::basis(std::size_t n, std::size_t truncation) {
  if (n > truncation) throw TruncationTooSmall("basis index exceeds truncation");
  FockCoefficients out = zeros(truncation);
  out[n] = 1.0;
  return out;
}

FockCoefficients FockCoefficients::resized(std::size_t truncation) const {
  std::vector<Complex> out(coeffs_.begin(),
                           coeffs_.begin() + std::min(coeffs_.size(), truncation + 1));
  out.resize(truncation + 1);
  return FockCoefficients(std::move(out));
}

FockCoefficients FockCoefficients::scaled(Complex factor) const {
  FockCoefficients out = *this;
  for (Complex& c : out.coeffs_) c *= factor;
  return out;
}

FockCoefficients catalog_coefficients(const WaveSpec& spec, std::size_t truncation) {
  validate(spec);
  const std::size_t keep = truncation + 1;
  if (required_modes(spec) > keep) {
    throw TruncationTooSmall("truncation " + std::to_string(truncation) +
                             " cannot hold the requested basis function");
  }
  const std::size_t count = keep + margin_for(spec);
  Expansion e = std::visit([count](const auto& w) { return expand(w, count); }, spec);

  double total = 0.0;
  double tail = 0.0;
  for (std::size_t n = count; n-- > 0;) {
    const double m = std::norm(e.coeffs[n]);
    total += m;
    if (n >= keep) tail += m;
  }
  if (tail > kCatalogTailTolerance * total) {
    throw TruncationTooSmall("tail mass " + sci(tail / total) +
                             " exceeds threshold at truncation " + std::to_string(truncation));
  }
  e.coeffs.resize(keep);
  FockCoefficients out(std::move(e.coeffs));
  return e.normalise ? out.scaled(1.0 / std::sqrt(total)) : out;
}

double stationary_frequency(const WaveSpec& spec) {
  auto central_binomial_ratio = [](std::size_t n) {
    // (2n)! / (n!² 4ⁿ)
    double r = 1.0;
    for (std::size_t i = 1; i <= n; ++i) r *= (2.0 * i - 1.0) / (2.0 * i);
    return r;
  };
  if (const auto* w = std::get_if<wave::PhiN>(&spec)) {
    return central_binomial_ratio(w->n) / (2.0 * pi);
  }
  if (const auto* w = std::get_if<wave::PhiNAlpha>(&spec)) {
    return central_binomial_ratio(w->n) / (2.0 * pi);
  }
  if (const auto* w = std::get_if<wave::PsiB>(&spec)) {
    validate(spec);
    const double b2 = w->b * w->b;
    return (2.0 * b2 + 1.0 + b2 / (1.0 + b2)) / (8.0 * pi * (1.0 + b2));
  }
  throw InvalidParameter("stationary frequency is catalogued for phi_n, phi_n^alpha and psi_b only");
}

double mass(const FockCoefficients& u) {
  double m = 0.0;
  for (const Complex& c : u.coeffs()) m += std::norm(c);
  return m;
}

double angular_momentum(const FockCoefficients& u) {
  double p = 0.0;
  for (std::size_t n = 1; n < u.size(); ++n) p += static_cast<double>(n) * std::norm(u[n]);
  return p;
}

Complex magnetic_momentum(const FockCoefficients& u) {
  Complex q = 0.0;
  for (std::size_t n = 0; n + 1 < u.size(); ++n) {
    q += std::sqrt(static_cast<double>(n + 1)) * u[n] * std::conj(u[n + 1]);
  }
  return q;
}

QuarticWeights::QuarticWeights(std::size_t truncation)
    : truncation_(truncation), table_((2 * truncation + 1) * (2 * truncation + 1), 0.0) {
  const std::size_t width = 2 * truncation + 1;
  // Row j holds C(j,n)/2ʲ; square roots are taken once the table is complete.
  std::vector<double> row(width, 0.0), next(width, 0.0);
  row[0] = 1.0;
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t n = 0; n <= j; ++n) table_[j * width + n] = std::sqrt(row[n]);
    next[0] = 0.5 * row[0];
    for (std::size_t n = 1; n <= j + 1 && n < width; ++n) next[n] = 0.5 * (row[n - 1] + row[n]);
    std::swap(row, next);
  }
}

std::vector<Complex> QuarticWeights::pair_sums(const FockCoefficients& u) const {
  const std::size_t n_max = u.truncation();
  if (n_max > truncation_) throw InvalidParameter("QuarticWeights: truncation too small for input");
  std::vector<Complex> c(2 * n_max + 1, 0.0);
  for (std::size_t j = 0; j <= 2 * n_max; ++j) {
    const std::size_t lo = j > n_max ? j - n_max : 0;
    const std::size_t hi = std::min(j, n_max);
    Complex s = 0.0;
    // Symmetric pairs are summed once and doubled.
    for (std::size_t n = lo; 2 * n < j; ++n) s += 2.0 * (*this)(j, n) * u[n] * u[j - n];
    if (j % 2 == 0 && j / 2 >= lo && j / 2 <= hi) s += (*this)(j, j / 2) * u[j / 2] * u[j / 2];
    c[j] = s;
  }
  return c;
}

double QuarticWeights::quartic(const FockCoefficients& u) const {
  double h = 0.0;
  for (const Complex& c : pair_sums(u)) h += std::norm(c);
  return h;
}

double hamiltonian(const FockCoefficients& u) {
  return QuarticWeights(u.truncation()).quartic(u) / (8.0 * pi);
}

double energy(const FockCoefficients& u, double mu) {
  return QuarticWeights(u.truncation()).quartic(u) + mu * angular_momentum(u);
}

FunctionalReport functionals(const FockCoefficients& u, double mu) {
  FunctionalReport r;
  r.mu = mu;
  r.M = mass(u);
  r.P = angular_momentum(u);
  r.Q = magnetic_momentum(u);
  const double quartic = QuarticWeights(u.truncation()).quartic(u);  // 8πH
  r.H = quartic / (8.0 * pi);
  r.E = 0.5 * quartic + 0.25 * r.M * r.P - 0.5 * r.M * r.M;
  r.B = r.E - 0.25 * std::norm(r.Q);
  r.G = quartic + mu * r.P;
  r.F = quartic + r.M * (mu * r.P - r.M);
  return r;
}

FockCoefficients apply_phase(const FockCoefficients& u, double gamma) {
  return u.scaled(std::polar(1.0, gamma));
}

FockCoefficients apply_rotation(const FockCoefficients& u, double theta) {
  FockCoefficients out = u;
  for (std::size_t n = 0; n < out.size(); ++n) out[n] *= std::polar(1.0, theta * static_cast<double>(n));
  return out;
}

Eigen::MatrixXcd displacement_matrix(Complex alpha, std::size_t rows, std::size_t cols) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                                              static_cast<Eigen::Index>(cols));
  const Complex beta = -std::conj(alpha);
  const double x = std::norm(beta);
  if (x == 0.0) {
    for (std::size_t i = 0; i < std::min(rows, cols); ++i) d(i, i) = 1.0;
    return d;
  }
  const double modulus = std::sqrt(x);
  const Complex phase = beta / modulus;
  const double damp = std::exp(-0.5 * x);

  // Entry (n+k, n) is β^k e^{-x/2} √(n!/(n+k)!) L_n^{(k)}(x); entry (m, m+k)
  // uses (-β̄)^k instead. ell[i] carries |β|^k √(i!/(i+k)!) L_i^{(k)}(x).
  double start = 1.0;  // |β|^k / √k!
  Complex lower_phase = 1.0;
  Complex upper_phase = 1.0;
  std::vector<double> ell;
  for (std::size_t k = 0; k < std::max(rows, cols); ++k) {
    if (k > 0) {
      start *= modulus / std::sqrt(static_cast<double>(k));
      lower_phase *= phase;
      upper_phase *= -std::conj(phase);
    }
    const std::size_t lower_len = rows > k ? std::min(cols, rows - k) : 0;
    const std::size_t upper_len = (k > 0 && cols > k) ? std::min(rows, cols - k) : 0;
    const std::size_t len = std::max(lower_len, upper_len);
    if (len == 0) continue;
    const double kd = static_cast<double>(k);
    ell.assign(len, 0.0);
    ell[0] = start;
    if (len > 1) ell[1] = start * (1.0 + kd - x) / std::sqrt(kd + 1.0);
    for (std::size_t i = 1; i + 1 < len; ++i) {
      const double id = static_cast<double>(i);
      const double a = (2.0 * id + 1.0 + kd - x) * std::sqrt((id + 1.0) / (id + 1.0 + kd));
      const double b = (id + kd) * std::sqrt(id * (id + 1.0) / ((id + kd) * (id + kd + 1.0)));
      ell[i + 1] = (a * ell[i] - b * ell[i - 1]) / (id + 1.0);
    }
    for (std::size_t n = 0; n < lower_len; ++n) d(n + k, n) = damp * lower_phase * ell[n];
    for (std::size_t m = 0; m < upper_len; ++m) d(m, m + k) = damp * upper_phase * ell[m];
  }
  return d;
}

FockCoefficients apply_translation(const FockCoefficients& u, Complex alpha) {
  const std::size_t n = u.size();
  const Eigen::MatrixXcd d = displacement_matrix(alpha, n, n);
  const Eigen::Map<const Eigen::VectorXcd> in(u.coeffs().data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXcd out = d * in;
  const double m_in = in.squaredNorm();
  const double m_out = out.squaredNorm();
  if (m_in - m_out > kTranslationTailTolerance * m_in) {
    throw TruncationTooSmall("translation pushes mass " + sci(m_in - m_out) +
                             " beyond truncation " + std::to_string(u.truncation()));
  }
  return FockCoefficients(std::vector<Complex>(out.data(), out.data() + n));
}

double basis_lp_norm(std::size_t n, double p) {
  if (!(p >= 1.0)) throw InvalidParameter("L^p norm requires p >= 1");
  const double nd = static_cast<double>(n);
  // ‖φ_n‖_p^p = (π n!)^{-p/2} π (2/p)^{np/2+1} Γ(np/2+1)
  const double log_pp = -0.5 * p * (std::log(pi) + std::lgamma(nd + 1.0)) + std::log(pi) +
                        (0.5 * nd * p + 1.0) * std::log(2.0 / p) + std::lgamma(0.5 * nd * p + 1.0);
  return std::exp(log_pp / p);
}

double carlen_gap(std::size_t n, double p, double q) {
  if (!(p >= 1.0)) throw InvalidParameter("carlen_gap requires p >= 1");
  if (!(q >= p)) throw InvalidParameter("carlen_gap requires q >= p");
  const double lhs = std::pow(p / (2.0 * pi), 1.0 / p) * basis_lp_norm(n, p);
  const double rhs = std::pow(q / (2.0 * pi), 1.0 / q) * basis_lp_norm(n, q);
  return lhs - rhs;
}

}  // namespace lll
