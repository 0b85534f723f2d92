#pragma once

#include <Eigen/Dense>
#include <vector>

#include "specidx/linalg.hpp"

namespace specidx {

/// Orthogonal projection with an idempotency certificate.  Construction
/// validates self-adjointness, ||P^2 - P|| <= 1e-10 (spectral norm) and
/// spectrum within [-1e-10, 1 + 1e-10].
struct OrthProjection {
  MatrixXd matrix;
  int dim = 0;
  double idem_residual = 0.0;

  static OrthProjection from_matrix(MatrixXd p);

  /// round(trace), cross-checked against the count of eigenvalues >= 1/2.
  int rank() const;
};

/// Orthogonal projector onto the span of `basis` in R^dim.  An empty basis
/// gives the zero projection.  Throws DegenerateBasis when the smallest
/// singular value of the basis matrix is <= 1e-10.
OrthProjection make_projection(int dim,
                               const std::vector<Eigen::VectorXd>& basis);

struct IndexCertificate {
  int value = 0;
  int plus_cluster = 0;   // eigenvalues of P-Q in [1-tol, 1]
  int minus_cluster = 0;  // eigenvalues in [-1, -1+tol]
  bool gap_ok = true;
  VectorXd spectrum;      // sorted spectrum of P-Q
};

/// Index of the pair (P, Q): dim Ker(P-Q-I) - dim Ker(P-Q+I), realized as
/// cluster counts at +-1.  Throws NotFredholm when eigenvalues land in the
/// ambiguous bands (1-gap, 1-tol) or (-1+tol, -1+gap).
IndexCertificate index_pair(const OrthProjection& p, const OrthProjection& q,
                            double tol = 1e-6, double gap = 1e-3);

struct PairingEntry {
  double lambda;   // cluster magnitude in (tol, 1-tol)
  int mult_plus;
  int mult_minus;
};

/// Multiplicity pairing of the interior spectrum of P-Q: eigenvalues at
/// +lambda and -lambda must match for every magnitude strictly inside
/// (tol, 1-tol).
std::vector<PairingEntry> eigenvalue_pairing_report(const OrthProjection& p,
                                                    const OrthProjection& q,
                                                    double tol = 1e-6);

std::vector<PairingEntry> pairing_violations(
    const std::vector<PairingEntry>& report);

struct TraceIndexResult {
  double trace;
  int index;
  bool agree;
};

/// Tr(P-Q) against the index; in finite dimension they agree exactly.
TraceIndexResult trace_index_check(const OrthProjection& p,
                                   const OrthProjection& q, double tol = 1e-6);

}  // namespace specidx
