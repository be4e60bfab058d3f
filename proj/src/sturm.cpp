#include "lll/sturm.hpp"

#include <algorithm>

#include "lll/errors.hpp"

// Both parities share one recurrence once written in terms of j:
//   s_{k+2} = (j-4)s_{k+1} - (k+1)(j-k)s_k,  s_0 = 1, s_1 = j-4,
// with generating function Σ s_n xⁿ/n! = (1+x)^{j-2}(1-x)², closed form
// 4·(j-2)!/(j-n)!·(n-r_+)(n-r_-) and r_± = (j ± √j)/2. For odd j = 2p-1 these
// are u_k, p_±; for even j = 2q they are v_k, q_±. Only the number of minors
// examined differs: p-1 leading rows of T (odd), all q rows (even).

namespace lll {

namespace {

void require_certifiable(int j) {
  if (j < 6) throw OutOfRange("Sturm certificates start at j = 6, got j = " + std::to_string(j));
}

int sign_of(const mpz_class& x) { return sgn(x) > 0 ? 1 : (sgn(x) < 0 ? -1 : 0); }

// Effective signs under the zero convention.
std::vector<int> effective_signs(const std::vector<mpz_class>& minors) {
  std::vector<int> out;
  out.reserve(minors.size());
  for (const mpz_class& m : minors) {
    int s = sign_of(m);
    if (s == 0) s = out.empty() ? 1 : -out.back();
    out.push_back(s);
  }
  return out;
}

SturmCertificate evaluate(int j) {
  SturmCertificate cert = sturm_sequence(j);
  const std::vector<int> signs = effective_signs(cert.sequence);
  const int order = static_cast<int>(cert.sequence.size()) - 1;
  cert.sign_agreements = count_sign_agreements(cert.sequence);
  cert.nonpositive_count = order - cert.sign_agreements;
  cert.sign_transitions = 0;
  for (std::size_t r = 1; r < signs.size(); ++r)
    if (signs[r] != signs[r - 1]) ++cert.sign_transitions;
  for (std::size_t r = 0; r < cert.sequence.size(); ++r) {
    if (sgn(cert.sequence[r]) < 0) {
      cert.transition_index = static_cast<int>(r);
      break;
    }
  }
  std::tie(cert.root_lower, cert.root_upper) = root_window(j);

  bool in_window = false;
  if (cert.transition_index >= 0) {
    const Surd offset = Surd(static_cast<long>(cert.transition_index)) - cert.root_lower;
    in_window = offset.sign() > 0 && (offset - Surd(1)).sign() <= 0;
  }
  if (cert.nonpositive_count > 1) {
    cert.reason = std::to_string(cert.nonpositive_count) + " non-positive eigenvalues";
  } else if (cert.sign_transitions != 1) {
    cert.reason = std::to_string(cert.sign_transitions) + " sign transitions";
  } else if (!in_window) {
    cert.reason = "transition index " + std::to_string(cert.transition_index) +
                  " outside (r_-, r_- + 1] with r_- = " + cert.root_lower.to_string();
  } else {
    cert.passed = true;
    cert.reason = "ok";
  }
  return cert;
}

}  // namespace

int half_index(int j) { return j % 2 == 1 ? (j + 1) / 2 : j / 2; }

std::vector<mpz_class> sturm_terms(int j, std::size_t length) {
  if (j < 1) throw OutOfRange("recurrence needs j >= 1");
  std::vector<mpz_class> s;
  s.reserve(length);
  if (length > 0) s.emplace_back(1);
  if (length > 1) s.emplace_back(j - 4);
  for (std::size_t k = 0; s.size() < length; ++k) {
    const long kk = static_cast<long>(k);
    s.push_back((j - 4) * s[k + 1] - (kk + 1) * (j - kk) * s[k]);
  }
  return s;
}

mpq_class minor_scaling(int j, int k) {
  if (k < 0) throw OutOfRange("minor index must be nonnegative");
  // 8^{-k} · 0!1!…(k-1)! · (j)!(j-1)!…(j+1-k)!
  mpz_class num = 1;
  mpz_class lower = 1;  // i!
  mpz_class upper;      // (j+1-i)!
  mpz_fac_ui(upper.get_mpz_t(), static_cast<unsigned long>(j));
  for (int i = 0; i < k; ++i) {
    if (i > 0) lower *= i;
    if (i > 0) upper /= (j + 1 - i);
    num *= lower * upper;
  }
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 8, static_cast<unsigned long>(k));
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

SturmCertificate sturm_sequence(int j) {
  require_certifiable(j);
  SturmCertificate cert;
  cert.j = j;
  cert.parity = parity_of(j);
  const int last = cert.parity == Parity::Odd ? half_index(j) - 1 : half_index(j);
  cert.sequence = sturm_terms(j, static_cast<std::size_t>(last) + 1);
  // γ_k = γ_{k-1}·(k-1)!·(j+1-k)!/8
  cert.scalings.reserve(cert.sequence.size());
  cert.scalings.emplace_back(1);
  mpz_class lower = 1;
  mpz_class upper;
  mpz_fac_ui(upper.get_mpz_t(), static_cast<unsigned long>(j));
  for (int k = 1; k <= last; ++k) {
    if (k > 1) {
      lower *= k - 1;
      upper /= j + 2 - k;
    }
    mpq_class next = cert.scalings.back() * mpq_class(lower * upper, 8);
    next.canonicalize();
    cert.scalings.push_back(std::move(next));
  }
  return cert;
}

std::pair<int, int> closed_form_range(int j) { return {2, j - 2}; }

std::pair<Surd, Surd> root_window(int j) {
  if (j < 1) throw OutOfRange("root window needs j >= 1");
  const mpq_class centre(j, 2);
  const unsigned long r = static_cast<unsigned long>(j);
  return {Surd(centre, mpq_class(-1, 2), r), Surd(centre, mpq_class(1, 2), r)};
}

std::vector<mpz_class> closed_forms(int j) {
  const auto [lo, hi] = closed_form_range(j);
  std::vector<mpz_class> out;
  if (hi < lo) return out;
  const auto [r_minus, r_plus] = root_window(j);
  mpz_class falling = 1;  // (j-2)!/(j-n)!
  for (int n = lo; n <= hi; ++n) {
    if (n > lo) falling *= (j - n + 1);
    const Surd nn(static_cast<long>(n));
    Surd value = (nn - r_plus) * (nn - r_minus) * Surd(mpq_class(falling * 4));
    if (!value.is_rational() || value.rational().get_den() != 1) {
      throw std::logic_error("closed form did not reduce to an integer");
    }
    out.push_back(value.rational().get_num());
  }
  return out;
}

mpz_class closed_form(int j, int n) {
  const auto [lo, hi] = closed_form_range(j);
  if (n < lo || n > hi) {
    throw OutOfRange("closed form is valid for " + std::to_string(lo) + " <= n <= " + std::to_string(hi));
  }
  const auto [r_minus, r_plus] = root_window(j);
  mpz_class falling = 1;
  for (int m = j - n + 1; m <= j - 2; ++m) falling *= m;
  const Surd nn(static_cast<long>(n));
  const Surd value = (nn - r_plus) * (nn - r_minus) * Surd(mpq_class(falling * 4));
  if (!value.is_rational() || value.rational().get_den() != 1) {
    throw std::logic_error("closed form did not reduce to an integer");
  }
  return value.rational().get_num();
}

std::vector<mpz_class> generating_coefficients(int j) {
  if (j < 2) throw OutOfRange("generating polynomial needs j >= 2");
  const unsigned long e = static_cast<unsigned long>(j - 2);
  std::vector<mpz_class> binom(e + 1);
  for (unsigned long n = 0; n <= e; ++n) mpz_bin_uiui(binom[n].get_mpz_t(), e, n);
  auto b = [&](long n) { return (n < 0 || n > static_cast<long>(e)) ? mpz_class(0) : binom[n]; };
  std::vector<mpz_class> out;
  mpz_class fact = 1;
  for (long n = 0; n <= j + 2; ++n) {
    if (n > 0) fact *= n;
    out.push_back(fact * (b(n) - 2 * b(n - 1) + b(n - 2)));
  }
  return out;
}

bool generating_polynomial_check(int j) {
  const std::vector<mpz_class> poly = generating_coefficients(j);
  return poly == sturm_terms(j, poly.size());
}

int count_sign_agreements(const std::vector<mpz_class>& minors) {
  const std::vector<int> signs = effective_signs(minors);
  int agreements = 0;
  for (std::size_t r = 1; r < signs.size(); ++r)
    if (signs[r] == signs[r - 1]) ++agreements;
  return agreements;
}

SturmCertificate positivity_certificate(int j) {
  SturmCertificate cert = evaluate(j);
  if (!cert.passed) throw CertificateFailed("j = " + std::to_string(j) + ": " + cert.reason);
  return cert;
}

bool BlockVerdict::passed() const {
  if (!sturm.passed) return false;
  if (null_vectors && !*null_vectors) return false;
  if (min_scaled_eigenvalue && *min_scaled_eigenvalue < -1e-10) return false;
  return true;
}

BlockVerdict certify_block(int j, int exact_limit) {
  BlockVerdict verdict;
  verdict.sturm = evaluate(j);
  if (j <= exact_limit) {
    verdict.null_vectors = verify_null_vectors(j);
    const Eigen::MatrixXd s = scaled_block(centro_decompose(build_B_block(j)).S);
    const double norm = s.cwiseAbs().maxCoeff();
    const std::vector<double> ev = symmetric_eigenvalues(s);
    verdict.min_scaled_eigenvalue = ev.front() / norm;
    const auto gap = std::find_if(ev.begin(), ev.end(), [&](double x) { return x > 1e-9 * norm; });
    if (gap != ev.end()) verdict.spectral_gap = *gap;
  }
  return verdict;
}

nlohmann::json certificate_to_json(const SturmCertificate& cert) {
  nlohmann::json prefix = nlohmann::json::array();
  for (std::size_t k = 0; k < cert.sequence.size() && k < 16; ++k) prefix.push_back(cert.sequence[k].get_str());
  return {{"j", cert.j},
          {"parity", to_string(cert.parity)},
          {"verdict", cert.passed ? "pass" : "fail"},
          {"transition_index", cert.transition_index},
          {"sequence_prefix", prefix}};
}

}  // namespace lll
