#pragma once

// Christoffel symbols of a_ij, the Riemannian covariant derivative of b_i,
// and the difference tensor D^i_jk between the Cartan horizontal
// coefficients and the Christoffel symbols.

#include "finsler/metric.hpp"
#include "finsler/numerics.hpp"
#include "finsler/tensors.hpp"

namespace finsler {

// gamma(i, j, k) = Gamma^i_jk
Tensor3 christoffel(const SpaceSpec& spec, const Vector& x);

struct ConnectionData {
  Tensor3 gamma;
  Matrix b_cov;  // b_cov(i, j) = b_ij = nabla_j b_i
  Matrix E;      // symmetric part of b_ij
  Matrix F;      // antisymmetric part of b_ij
};

ConnectionData covariant_db(const SpaceSpec& spec, const Vector& x);

struct DifferenceIngredients {
  Vector B_low;    // B_k = p0 b_k + p1 y_k
  Vector B_up;     // B^i = g^ij B_j
  Matrix B_mat;    // B_ij
  Matrix B_mixed;  // B_mixed(k, i) = B^k_i = g^kj B_ji
  Matrix F_mixed;  // F_mixed(k, i) = F^k_i = g^kj F_ji
  Matrix A;        // A(m, k) = A^m_k
  Vector lambda;   // lambda^m
  Vector b0;       // b0[k] = b_0k = y^i b_ik
  double B0 = 0.0;
  double E00 = 0.0;
};

DifferenceIngredients difference_ingredients(const TensorBundle& bundle, const ConnectionData& conn,
                                             const FlagPoint& flag);

// C^i_jk = g^il C_ljk
Tensor3 raise_first(const Tensor3& c, const Matrix& g_inv);

enum class SummationOrder { Printed, Reversed };

// d(i, j, k) = D^i_jk, all ten term groups of the standard formula.
Tensor3 difference_tensor(const DifferenceIngredients& ing, const TensorBundle& bundle, const ConnectionData& conn,
                          SummationOrder order = SummationOrder::Printed);

// Convenience: everything from (spec, flag).
Tensor3 difference_tensor(const SpaceSpec& spec, const FlagPoint& flag);

// b_{i|j} = b_ij - b_r D^r_ij, returned as (i, j).
Matrix cartan_covariant_b(const Matrix& b_cov, const Vector& b, const Tensor3& D);

}  // namespace finsler
