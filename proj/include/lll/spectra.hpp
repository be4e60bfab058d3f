#pragma once

#include <Eigen/Core>
#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "lll/dense_matrix.hpp"
#include "lll/surd.hpp"

namespace lll {

/// Exact matrices over Q(√2); only the even-order reduced blocks carry √2.
using ExactMatrix = DenseMatrix<Surd>;
using ExactVector = std::vector<Surd>;

enum class Parity { Odd, Even };

inline Parity parity_of(int j) { return j % 2 == 0 ? Parity::Even : Parity::Odd; }
const char* to_string(Parity parity);

enum class BlockKind { FullB, FullE, ReducedS, ReducedR, SkewBlock, TridiagonalT, RankOneK };
const char* to_string(BlockKind kind);

/// One block of the quadratic form in the products A_jk = a_k a_{j-k}/√(k!(j-k)!).
///
/// Row and column k always refer to the pair (k, j-k), 0-based, whichever
/// kind of block this is; reduced blocks use a prefix of those indices.
struct BlockMatrix {
  int j = 0;
  BlockKind kind = BlockKind::FullB;
  ExactMatrix entries;

  std::size_t order() const { return entries.rows(); }
};

/// B^(j): order j+1, symmetric and centrosymmetric.
BlockMatrix build_B_block(int j);
/// E^(j): B^(j) without the magnetic-momentum coupling.
BlockMatrix build_E_block(int j);

/// Cantoni–Butler splitting of a symmetric centrosymmetric block.
///
/// Odd j (even order 2h): X = [[A, Cᵀ], [C, JAJ]], symmetric sector S = A + JC.
/// Even j (odd order 2m+1): X = [[A, x, Cᵀ], [xᵀ, q, xᵀJ], [C, Jx, JAJ]],
/// S = [[A + JC, √2x], [√2xᵀ, q]] and R = A + JC.
struct CentroDecomposition {
  int j = 0;
  Parity parity = Parity::Odd;
  ExactMatrix A;
  ExactMatrix C;
  ExactVector x;  ///< even j only
  Surd q;         ///< even j only
  BlockMatrix S;
  std::optional<BlockMatrix> R;  ///< even j only
  BlockMatrix skew;              ///< A - JC

  /// Rebuilds the full block from A, C (and x, q).
  ExactMatrix reassemble() const;
};

/// Throws NotCentrosymmetric when the input is not symmetric and centrosymmetric.
CentroDecomposition centro_decompose(const BlockMatrix& block);

/// Reduced block = T + K with T tridiagonal and K = (j!/2ʲ)·ones.
/// Odd j splits S^(j); even j splits R^(j). δ = trace(K).
struct RankOneSplit {
  BlockMatrix T;
  BlockMatrix K;
  mpq_class delta;
};

/// Throws WrongParityInput when the decomposition lacks the needed block.
RankOneSplit rank_one_split(const CentroDecomposition& decomp);
/// Same split from a reduced block alone: ReducedS for odd j, ReducedR for even j.
RankOneSplit rank_one_split(const BlockMatrix& reduced);

/// Closed-form kernel vectors v, w of S^(j), indexed like S (0-based).
struct NullVectors {
  ExactVector v;
  ExactVector w;
};

/// Defined for j >= 2, where 0 has multiplicity two in S^(j); OutOfRange otherwise.
NullVectors null_vectors(int j);

/// True iff S^(j)·v = 0 and S^(j)·w = 0 exactly.
bool verify_null_vectors(int j);

/// Exact positive-semidefiniteness test by symmetric elimination over Q(√2).
bool is_positive_semidefinite(const ExactMatrix& m);

/// Congruence D⁻¹XD⁻¹ with D = diag(√(k!(j-k)!)); preserves the signature.
Eigen::MatrixXd scaled_block(const BlockMatrix& block);

/// Eigenvalues in ascending order (throws NoConvergence).
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// Rank-one interlacing between T^(j) and S^(j) = T^(j) + K^(j), odd j >= 7.
///
/// Eigenvalues are computed from the raw (unscaled) exact blocks in extended
/// precision, since the trace identity is invisible in double precision once
/// the entries span thirty orders of magnitude.
struct InterlacingReport {
  int j = 0;
  std::vector<double> t_eigenvalues;  ///< λ_1 ≤ ... ≤ λ_p
  std::vector<double> s_eigenvalues;  ///< λ'_1 ≤ ... ≤ λ'_p
  std::vector<double> weights;        ///< m_i = (λ'_i - λ_i)/δ
  double delta = 0.0;
  double shift_sum = 0.0;             ///< Σ(λ'_i - λ_i)
  double norm = 0.0;                  ///< max |entry| of S
  double worst_order_violation = 0.0; ///< relative to ‖S‖
  double trace_relative_error = 0.0;  ///< |Σ(λ'-λ) - δ| / δ
  bool interlaces = false;
  bool trace_matches = false;
  bool passed() const { return interlaces && trace_matches; }
};

InterlacingReport interlacing_check(int j, double tolerance = 1e-9);

}  // namespace lll
