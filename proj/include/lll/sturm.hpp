#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lll/spectra.hpp"
#include "lll/surd.hpp"

namespace lll {

/// Scaled principal minors Δ_k(0) = γ_k·s_k of the tridiagonal part T^(j) at 0.
///
/// Odd j = 2p-1 uses the order-(p-1) leading submatrix of T, so indices run
/// 0..p-1; even j = 2q uses all of T, indices 0..q.
struct SturmCertificate {
  int j = 0;
  Parity parity = Parity::Odd;
  std::vector<mpz_class> sequence;  ///< u_k (odd) or v_k (even)
  std::vector<mpq_class> scalings;  ///< γ_{p,k} or γ'_{q,k}
  int sign_agreements = 0;
  int nonpositive_count = 0;        ///< eigenvalues ≤ 0 of the examined matrix
  int sign_transitions = 0;
  int transition_index = -1;        ///< first strictly negative index
  Surd root_lower;                  ///< p_- or q_-
  Surd root_upper;                  ///< p_+ or q_+
  bool passed = false;
  std::string reason;
};

/// p for odd j, q for even j.
int half_index(int j);

/// First `length` terms of the three-term recurrence for block j
/// (no upper limit, so the terminating zeros can be observed). j >= 1.
std::vector<mpz_class> sturm_terms(int j, std::size_t length);

/// γ_{p,k} (odd) or γ'_{q,k} (even).
mpq_class minor_scaling(int j, int k);

/// Sequence up to index p-1 (odd) or q (even) with scalings; OutOfRange for j < 6.
SturmCertificate sturm_sequence(int j);

/// Valid n for the closed form: [2, 2p-3] (odd) or [2, 2q-2] (even).
std::pair<int, int> closed_form_range(int j);

/// 4·(2p-3)!/(2p-1-n)!·(n-p_+)(n-p_-) or the even analog, evaluated in
/// Q(√(2p-1)) resp. Q(√(2q)); OutOfRange outside closed_form_range.
mpz_class closed_form(int j, int n);
/// closed_form(j, n) for every n in closed_form_range(j), in order.
std::vector<mpz_class> closed_forms(int j);

/// p_± = (2p-1 ± √(2p-1))/2 or q_± = (2q ± √(2q))/2.
std::pair<Surd, Surd> root_window(int j);

/// n!·[xⁿ](1+x)^{2p-3}(1-x)² (odd) or (1+x)^{2q-2}(1-x)² (even), n = 0..deg+2.
std::vector<mpz_class> generating_coefficients(int j);
/// True iff generating_coefficients(j) agrees with the recurrence term by term.
bool generating_polynomial_check(int j);

/// Number of sign agreements between consecutive terms; a zero term takes
/// the sign opposite to its predecessor.
int count_sign_agreements(const std::vector<mpz_class>& minors);

/// Certifies S^(j) ⪰ 0 through λ_3(T) > 0 (odd) or λ_2(T) > 0 (even).
/// Throws CertificateFailed when the sign pattern does not have the expected shape.
SturmCertificate positivity_certificate(int j);

/// Certificate plus the exact and floating checks of spectra that complete it.
struct BlockVerdict {
  SturmCertificate sturm;
  std::optional<bool> null_vectors;           ///< exact S·v = S·w = 0
  std::optional<double> min_scaled_eigenvalue; ///< relative to max |entry|
  std::optional<double> spectral_gap;          ///< informational only
  bool passed() const;
};

/// Combined check for j >= 6; the spectra parts run only for j <= exact_limit.
BlockVerdict certify_block(int j, int exact_limit = 200);

nlohmann::json certificate_to_json(const SturmCertificate& cert);

}  // namespace lll
