#pragma once

// Nonself-adjoint Hamiltonians H = T^-1 H_sa T built from a self-adjoint
// H_sa with eigendata (λ_k, ψ_k) and an intertwiner T. The eigenvectors
// ξ_k = T^-1 ψ_k of H form a Riesz-like basis.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rigged/linear_map.hpp"
#include "rigged/trend.hpp"
#include "rigged/types.hpp"

namespace rigged {

/// Σ_k λ_k ψ_k ψ_k*. Throws ValidationError unless ψ*ψ = I to 1e-10.
LinearMap build_hsa(const RVector& lambda, const CMatrix& psi);

struct HamiltonianPair {
  LinearMap h;
  LinearMap h_sa;
  LinearMap t;
  RVector eigenvalues;
  CMatrix psi;
  CMatrix xi; // ξ_k = T^-1 ψ_k
  bool repeated_eigenvalues = false;
};

/// H = T^-1 H_sa T. Throws InjectivityError when T is singular at the rank
/// tolerance.
HamiltonianPair build_pair(const RVector& lambda, const CMatrix& psi, const LinearMap& t);

/// |<Hξ, T†η> - <Tξ, H_sa η>|.
double weak_similarity_residual(const HamiltonianPair& pair, const CVector& xi, const CVector& eta);

/// max_k ‖Hξ_k - λ_k ξ_k‖ / ‖ξ_k‖.
double eigen_residual(const HamiltonianPair& pair);

/// ‖HH* - H*H‖ (spectral norm).
double non_normality(const HamiltonianPair& pair);

using MatrixRule = std::function<CMatrix(std::size_t)>;

struct DensityDiagnostic {
  std::vector<std::size_t> ladder;
  std::vector<std::size_t> rank;            // rank of T† per N
  std::vector<double> largest_angle;        // largest principal angle between range(T†) and C^N
  std::vector<double> adjoint_last_norm;    // ‖T† e_N‖
  std::vector<double> adjoint_norm;         // ‖T†‖
  double slope = 0.0;                       // log-log slope of ‖T† e_N‖
  bool growing = false;
  Verdict verdict = Verdict::inconclusive;  // pass (benign) | inconclusive (growing)
  std::string note;
};

DensityDiagnostic density_diagnostic(const MatrixRule& t_rule,
                                     const std::vector<std::size_t>& ladder,
                                     const TrendRule& trend = {});

/// T = diag(k), ψ a seeded random unitary, λ_k = k.
HamiltonianPair demo_pair(std::size_t n, std::uint64_t psi_seed);

} // namespace rigged
