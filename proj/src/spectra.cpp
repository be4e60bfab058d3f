#include "lll/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>

#include "lll/errors.hpp"

namespace lll {

namespace {

using WideReal =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<60>,
                                  boost::multiprecision::et_off>;

mpz_class factorial(unsigned long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

mpq_class pow2(unsigned long e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, e);
  return mpq_class(out);
}

// k!(j-k)! for k = 0..j
std::vector<mpz_class> pair_weights(int j) {
  std::vector<mpz_class> fact(static_cast<std::size_t>(j) + 1);
  fact[0] = 1;
  for (int k = 1; k <= j; ++k) fact[k] = fact[k - 1] * k;
  std::vector<mpz_class> w(fact.size());
  for (int k = 0; k <= j; ++k) w[k] = fact[k] * fact[j - k];
  return w;
}

void require_nonnegative(int j) {
  if (j < 0) throw OutOfRange("block index must be nonnegative");
}

// Constant part j!/2^{j+1} shared by every entry of B^(j) and E^(j).
mpq_class constant_part(int j) {
  mpq_class c(factorial(static_cast<unsigned long>(j)));
  c /= pow2(static_cast<unsigned long>(j) + 1);
  c.canonicalize();
  return c;
}

bool is_tridiagonal(const ExactMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k)
      if ((i > k + 1 || k > i + 1) && !m(i, k).is_zero()) return false;
  return true;
}

BlockMatrix split_reduced(const BlockMatrix& reduced, RankOneSplit& out) {
  const std::size_t n = reduced.order();
  mpq_class k_value(factorial(static_cast<unsigned long>(reduced.j)));
  k_value /= pow2(static_cast<unsigned long>(reduced.j));
  k_value.canonicalize();
  BlockMatrix k_block{reduced.j, BlockKind::RankOneK, ExactMatrix(n, n, Surd(k_value))};
  BlockMatrix t_block{reduced.j, BlockKind::TridiagonalT, reduced.entries - k_block.entries};
  if (!is_tridiagonal(t_block.entries)) {
    throw std::logic_error("reduced block minus its rank-one part is not tridiagonal");
  }
  out.delta = k_value * static_cast<long>(n);
  out.T = std::move(t_block);
  out.K = std::move(k_block);
  return out.T;
}

double scaled_entry(const Surd& value, const mpz_class& weight_product) {
  auto part = [&](const mpq_class& coeff, unsigned long radicand) {
    if (coeff == 0) return 0.0;
    mpq_class squared = coeff * coeff * radicand;
    squared /= weight_product;
    const double magnitude = std::sqrt(squared.get_d());
    return sgn(coeff) > 0 ? magnitude : -magnitude;
  };
  return part(value.rational(), 1) + part(value.irrational(), value.radicand());
}

WideReal to_wide(const Surd& value) {
  if (!value.is_rational()) throw std::logic_error("to_wide expects a rational entry");
  const mpq_class& q = value.rational();
  return WideReal(q.get_num().get_str()) / WideReal(q.get_den().get_str());
}

// Eigenvalues of a real symmetric matrix in extended precision: Householder
// tridiagonalisation followed by Sturm-count bisection on each eigenvalue.
std::vector<WideReal> wide_eigenvalues(std::vector<std::vector<WideReal>> a) {
  using boost::multiprecision::abs;
  using boost::multiprecision::sqrt;
  const std::size_t n = a.size();
  std::vector<WideReal> d(n), e(n, WideReal(0));

  for (std::size_t k = 0; n > 2 && k + 2 < n; ++k) {
    WideReal alpha2 = 0;
    for (std::size_t i = k + 1; i < n; ++i) alpha2 += a[i][k] * a[i][k];
    if (alpha2 == 0) continue;
    WideReal alpha = sqrt(alpha2);
    if (a[k + 1][k] > 0) alpha = -alpha;
    std::vector<WideReal> v(n, WideReal(0));
    v[k + 1] = a[k + 1][k] - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a[i][k];
    WideReal vnorm2 = 0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0) continue;
    // A ← HAH with H = I - 2vvᵀ/(vᵀv), applied as a rank-two update.
    std::vector<WideReal> p(n, WideReal(0));
    for (std::size_t i = k; i < n; ++i) {
      WideReal s = 0;
      for (std::size_t c = k + 1; c < n; ++c) s += a[i][c] * v[c];
      p[i] = 2 * s / vnorm2;
    }
    WideReal vp = 0;
    for (std::size_t i = k + 1; i < n; ++i) vp += v[i] * p[i];
    const WideReal kappa = vp / vnorm2;
    std::vector<WideReal> q(n, WideReal(0));
    for (std::size_t i = k; i < n; ++i) q[i] = p[i] - kappa * v[i];
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t c = k; c < n; ++c) a[i][c] -= v[i] * q[c] + q[i] * v[c];
  }
  WideReal norm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = a[i][i];
    if (i + 1 < n) e[i] = a[i + 1][i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    WideReal row = abs(d[i]);
    if (i + 1 < n) row += abs(e[i]);
    if (i > 0) row += abs(e[i - 1]);
    norm = std::max(norm, row);
  }
  if (norm == 0) return std::vector<WideReal>(n, WideReal(0));

  // Number of eigenvalues strictly below x.
  const WideReal tiny = norm * WideReal("1e-200");
  auto count_below = [&](const WideReal& x) {
    std::size_t count = 0;
    WideReal pivot = 1;
    for (std::size_t i = 0; i < n; ++i) {
      pivot = d[i] - x - (i > 0 ? e[i - 1] * e[i - 1] / pivot : WideReal(0));
      if (pivot == 0) pivot = -tiny;
      if (pivot < 0) ++count;
    }
    return count;
  };
  const WideReal tolerance = norm * WideReal("1e-50");
  std::vector<WideReal> out(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    WideReal lo = -norm, hi = norm;
    while (hi - lo > tolerance) {
      const WideReal mid = (lo + hi) / 2;
      if (count_below(mid) >= idx + 1) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out[idx] = (lo + hi) / 2;
  }
  return out;
}

std::vector<std::vector<WideReal>> to_wide(const ExactMatrix& m) {
  std::vector<std::vector<WideReal>> out(m.rows(), std::vector<WideReal>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) out[i][k] = to_wide(m(i, k));
  return out;
}

}  // namespace

const char* to_string(Parity parity) { return parity == Parity::Odd ? "odd" : "even"; }

const char* to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::FullB: return "FullB";
    case BlockKind::FullE: return "FullE";
    case BlockKind::ReducedS: return "ReducedS";
    case BlockKind::ReducedR: return "ReducedR";
    case BlockKind::SkewBlock: return "SkewBlock";
    case BlockKind::TridiagonalT: return "TridiagonalT";
    case BlockKind::RankOneK: return "RankOneK";
  }
  return "?";
}

BlockMatrix build_E_block(int j) {
  require_nonnegative(j);
  const std::size_t n = static_cast<std::size_t>(j) + 1;
  const std::vector<mpz_class> w = pair_weights(j);
  ExactMatrix m(n, n, Surd(constant_part(j)));
  for (std::size_t k = 0; k < n; ++k) {
    mpq_class diag(w[k] * (j - 4), 8);
    diag.canonicalize();
    m(k, k) += Surd(diag);
  }
  return {j, BlockKind::FullE, std::move(m)};
}

BlockMatrix build_B_block(int j) {
  BlockMatrix b = build_E_block(j);
  b.kind = BlockKind::FullB;
  const std::vector<mpz_class> w = pair_weights(j);
  // Coupling from |Q|²: -(k+1)!(j-k)!/8 between pairs k and k+1.
  for (int k = 0; k < j; ++k) {
    mpq_class off(w[k] * (k + 1), 8);
    off.canonicalize();
    b.entries(k, k + 1) -= Surd(off);
    b.entries(k + 1, k) -= Surd(off);
  }
  return b;
}

CentroDecomposition centro_decompose(const BlockMatrix& block) {
  const ExactMatrix& x = block.entries;
  if (!x.is_symmetric() || !x.is_centrosymmetric()) {
    throw NotCentrosymmetric("block is not symmetric and centrosymmetric");
  }
  if (x.rows() != static_cast<std::size_t>(block.j) + 1) {
    throw InvalidParameter("centro_decompose expects a full block of order j+1");
  }
  const int j = block.j;
  const std::size_t n = x.rows();
  CentroDecomposition d;
  d.j = j;
  d.parity = parity_of(j);
  const std::size_t half = n / 2;  // h (odd j) or m (even j)
  const std::size_t c_offset = d.parity == Parity::Odd ? half : half + 1;

  d.A = ExactMatrix(half, half);
  d.C = ExactMatrix(half, half);
  ExactMatrix plus(half, half), minus(half, half);
  for (std::size_t k = 0; k < half; ++k) {
    for (std::size_t l = 0; l < half; ++l) {
      d.A(k, l) = x(k, l);
      d.C(k, l) = x(c_offset + k, l);
      // (JC)(k,l) = X(j-k, l)
      const Surd& mirrored = x(n - 1 - k, l);
      plus(k, l) = x(k, l) + mirrored;
      minus(k, l) = x(k, l) - mirrored;
    }
  }
  d.skew = {j, BlockKind::SkewBlock, std::move(minus)};

  if (d.parity == Parity::Odd) {
    d.S = {j, BlockKind::ReducedS, std::move(plus)};
    return d;
  }
  d.x.resize(half);
  for (std::size_t k = 0; k < half; ++k) d.x[k] = x(k, half);
  d.q = x(half, half);
  ExactMatrix s(half + 1, half + 1);
  const Surd root2 = Surd::root(2);
  for (std::size_t k = 0; k < half; ++k) {
    for (std::size_t l = 0; l < half; ++l) s(k, l) = plus(k, l);
    s(k, half) = root2 * d.x[k];
    s(half, k) = s(k, half);
  }
  s(half, half) = d.q;
  d.S = {j, BlockKind::ReducedS, std::move(s)};
  d.R = BlockMatrix{j, BlockKind::ReducedR, std::move(plus)};
  return d;
}

ExactMatrix CentroDecomposition::reassemble() const {
  const std::size_t half = A.rows();
  const bool even = parity == Parity::Even;
  const std::size_t n = even ? 2 * half + 1 : 2 * half;
  const std::size_t off = even ? half + 1 : half;
  ExactMatrix x(n, n);
  for (std::size_t k = 0; k < half; ++k) {
    for (std::size_t l = 0; l < half; ++l) {
      x(k, l) = A(k, l);
      x(off + k, l) = C(k, l);
      x(l, off + k) = C(k, l);
      x(off + k, off + l) = A(half - 1 - k, half - 1 - l);
    }
  }
  if (even) {
    for (std::size_t k = 0; k < half; ++k) {
      x(k, half) = this->x[k];
      x(half, k) = this->x[k];
      x(half, off + k) = this->x[half - 1 - k];
      x(off + k, half) = this->x[half - 1 - k];
    }
    x(half, half) = q;
  }
  return x;
}

RankOneSplit rank_one_split(const CentroDecomposition& decomp) {
  RankOneSplit out;
  if (decomp.parity == Parity::Odd) {
    if (decomp.S.kind != BlockKind::ReducedS) throw WrongParityInput("odd split needs S^(j)");
    split_reduced(decomp.S, out);
  } else {
    if (!decomp.R) throw WrongParityInput("even split needs R^(j)");
    split_reduced(*decomp.R, out);
  }
  return out;
}

RankOneSplit rank_one_split(const BlockMatrix& reduced) {
  const bool odd = parity_of(reduced.j) == Parity::Odd;
  if ((odd && reduced.kind != BlockKind::ReducedS) || (!odd && reduced.kind != BlockKind::ReducedR)) {
    throw WrongParityInput(std::string("rank-one split of a ") + to_string(reduced.kind) +
                           " block at " + to_string(parity_of(reduced.j)) + " j");
  }
  RankOneSplit out;
  split_reduced(reduced, out);
  return out;
}

NullVectors null_vectors(int j) {
  if (j < 2) throw OutOfRange("kernel of multiplicity two requires j >= 2");
  const std::vector<mpz_class> w = pair_weights(j);
  NullVectors out;
  const bool odd = j % 2 == 1;
  const int head = odd ? (j + 1) / 2 : j / 2;
  for (int k = 0; k < head; ++k) {
    mpq_class v(1, w[k]);
    v.canonicalize();
    out.v.emplace_back(v);
    out.w.emplace_back(mpq_class(v * k * (j - k)));
  }
  if (!odd) {
    // Border entries 1/(√2 q!²) and 1/(√2 (q-1)!²), written as √2/(2·...).
    const int q = j / 2;
    mpz_class fq = factorial(static_cast<unsigned long>(q));
    mpz_class fq1 = factorial(static_cast<unsigned long>(q - 1));
    out.v.push_back(Surd::root(2, mpq_class(1, 2 * fq * fq)));
    out.w.push_back(Surd::root(2, mpq_class(1, 2 * fq1 * fq1)));
  }
  return out;
}

bool verify_null_vectors(int j) {
  const NullVectors nv = null_vectors(j);
  const CentroDecomposition d = centro_decompose(build_B_block(j));
  auto annihilated = [&](const ExactVector& vec) {
    const ExactVector image = d.S.entries * vec;
    return std::all_of(image.begin(), image.end(), [](const Surd& s) { return s.is_zero(); });
  };
  return annihilated(nv.v) && annihilated(nv.w);
}

bool is_positive_semidefinite(const ExactMatrix& m) {
  if (!m.is_symmetric()) return false;
  ExactMatrix a = m;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const int s = a(k, k).sign();
    if (s < 0) return false;
    if (s == 0) {
      for (std::size_t i = k + 1; i < n; ++i)
        if (!a(i, k).is_zero()) return false;
      continue;
    }
    const Surd inv = a(k, k).inverse();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      const Surd factor = a(i, k) * inv;
      for (std::size_t c = k + 1; c < n; ++c) a(i, c) -= factor * a(k, c);
    }
  }
  return true;
}

Eigen::MatrixXd scaled_block(const BlockMatrix& block) {
  const std::vector<mpz_class> w = pair_weights(block.j);
  const std::size_t n = block.order();
  if (n > w.size()) throw InvalidParameter("block order exceeds j+1");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) out(i, k) = scaled_entry(block.entries(i, k), w[i] * w[k]);
  return out;
}

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidParameter("symmetric_eigenvalues needs a square matrix");
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NoConvergence("symmetric eigensolver did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

InterlacingReport interlacing_check(int j, double tolerance) {
  if (j % 2 == 0) throw WrongParityInput("interlacing check is stated for odd j");
  if (j < 7) throw OutOfRange("interlacing check requires odd j >= 7");
  const CentroDecomposition d = centro_decompose(build_B_block(j));
  const RankOneSplit split = rank_one_split(d);

  const std::vector<WideReal> lt = wide_eigenvalues(to_wide(split.T.entries));
  const std::vector<WideReal> ls = wide_eigenvalues(to_wide(d.S.entries));
  const WideReal delta = to_wide(Surd(split.delta));
  WideReal norm = 0;
  for (std::size_t i = 0; i < d.S.order(); ++i)
    for (std::size_t k = 0; k < d.S.order(); ++k)
      norm = std::max(norm, boost::multiprecision::abs(to_wide(d.S.entries(i, k))));

  InterlacingReport r;
  r.j = j;
  r.delta = delta.convert_to<double>();
  r.norm = norm.convert_to<double>();
  WideReal shift = 0;
  WideReal worst = 0;
  const std::size_t p = lt.size();
  for (std::size_t i = 0; i < p; ++i) {
    r.t_eigenvalues.push_back(lt[i].convert_to<double>());
    r.s_eigenvalues.push_back(ls[i].convert_to<double>());
    r.weights.push_back(((ls[i] - lt[i]) / delta).convert_to<double>());
    shift += ls[i] - lt[i];
    // λ_i ≤ λ'_i ≤ λ_{i+1}
    worst = std::max(worst, lt[i] - ls[i]);
    if (i + 1 < p) worst = std::max(worst, ls[i] - lt[i + 1]);
  }
  r.shift_sum = shift.convert_to<double>();
  r.worst_order_violation = (worst / norm).convert_to<double>();
  r.trace_relative_error = (boost::multiprecision::abs(shift - delta) / delta).convert_to<double>();
  r.interlaces = r.worst_order_violation <= tolerance;
  r.trace_matches = r.trace_relative_error <= tolerance;
  return r;
}

}  // namespace lll
