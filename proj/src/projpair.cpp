#include "specidx/projpair.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specidx/errors.hpp"

namespace specidx {

namespace {
constexpr double kIdemTol = 1e-10;
constexpr double kSymTol = 1e-12;
constexpr double kSpecTol = 1e-10;
}  // namespace

OrthProjection OrthProjection::from_matrix(MatrixXd p) {
  OrthProjection out;
  out.dim = static_cast<int>(p.rows());
  if (p.rows() != p.cols())
    throw NumericalError("OrthProjection: matrix not square");
  double sym = (p - p.transpose()).norm();
  if (sym > kSymTol) {
    std::ostringstream os;
    os << "OrthProjection: self-adjointness residual " << sym;
    throw NumericalError(os.str());
  }
  p = 0.5 * (p + p.transpose().eval());
  if (out.dim > 0) {
    VectorXd ev = sym_eigenvalues(p);
    double idem = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev(i) < -kSpecTol || ev(i) > 1.0 + kSpecTol)
        throw NumericalError("OrthProjection: eigenvalue outside [0,1]");
      idem = std::max(idem, std::abs(ev(i) * ev(i) - ev(i)));
    }
    out.idem_residual = idem;
    if (idem > kIdemTol)
      throw NumericalError("OrthProjection: idempotency residual too large");
  }
  out.matrix = std::move(p);
  return out;
}

int OrthProjection::rank() const {
  int r = static_cast<int>(std::lround(matrix.trace()));
  int byeig = 0;
  if (dim > 0) {
    VectorXd ev = sym_eigenvalues(matrix);
    byeig = static_cast<int>(ev.size()) - count_below(ev, 0.5);
  }
  if (r != byeig)
    throw NumericalError("OrthProjection: trace rank disagrees with spectrum");
  return r;
}

OrthProjection make_projection(int dim,
                               const std::vector<Eigen::VectorXd>& basis) {
  if (dim < 0) throw NumericalError("make_projection: negative dimension");
  if (basis.empty())
    return OrthProjection::from_matrix(MatrixXd::Zero(dim, dim));
  MatrixXd b(dim, static_cast<int>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].size() != dim)
      throw NumericalError("make_projection: vector dimension mismatch");
    b.col(static_cast<int>(j)) = basis[j];
  }
  Eigen::JacobiSVD<MatrixXd> svd(b, Eigen::ComputeThinU);
  if (svd.singularValues()(svd.singularValues().size() - 1) <= 1e-10)
    throw DegenerateBasis("make_projection: basis nearly dependent");
  MatrixXd u = svd.matrixU();
  return OrthProjection::from_matrix(u * u.transpose());
}

IndexCertificate index_pair(const OrthProjection& p, const OrthProjection& q,
                            double tol, double gap) {
  if (p.dim != q.dim)
    throw NumericalError("index_pair: dimension mismatch");
  if (!(tol > 0.0 && tol < gap && gap < 1.0))
    throw NumericalError("index_pair: need 0 < tol < gap < 1");
  IndexCertificate cert;
  cert.spectrum = sym_eigenvalues(p.matrix - q.matrix);
  for (Eigen::Index i = 0; i < cert.spectrum.size(); ++i) {
    double e = cert.spectrum(i);
    if (std::abs(e) > 1.0 + kSpecTol)
      throw NumericalError("index_pair: spectrum of P-Q escapes [-1,1]");
    if (e >= 1.0 - tol) ++cert.plus_cluster;
    if (e <= -1.0 + tol) ++cert.minus_cluster;
    bool ambiguous = (e > 1.0 - gap && e < 1.0 - tol) ||
                     (e > -1.0 + tol && e < -1.0 + gap);
    if (ambiguous) cert.gap_ok = false;
  }
  cert.value = cert.plus_cluster - cert.minus_cluster;
  if (!cert.gap_ok)
    throw NotFredholm("index_pair: eigenvalues of P-Q in the ambiguous band");
  return cert;
}

std::vector<PairingEntry> eigenvalue_pairing_report(const OrthProjection& p,
                                                    const OrthProjection& q,
                                                    double tol) {
  VectorXd ev = sym_eigenvalues(p.matrix - q.matrix);
  // Cluster interior magnitudes with absolute tolerance tol.
  std::vector<double> mags;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double a = std::abs(ev(i));
    if (a > tol && a < 1.0 - tol) mags.push_back(a);
  }
  std::sort(mags.begin(), mags.end());
  std::vector<PairingEntry> report;
  size_t i = 0;
  while (i < mags.size()) {
    double lo = mags[i];
    double rep = lo;
    size_t j = i;
    while (j < mags.size() && mags[j] - rep <= tol) rep = mags[j++];
    double center = 0.5 * (mags[i] + mags[j - 1]);
    int plus = 0, minus = 0;
    for (Eigen::Index t = 0; t < ev.size(); ++t) {
      if (std::abs(ev(t) - center) <= tol + (mags[j - 1] - mags[i])) ++plus;
      if (std::abs(ev(t) + center) <= tol + (mags[j - 1] - mags[i])) ++minus;
    }
    report.push_back({center, plus, minus});
    i = j;
  }
  return report;
}

std::vector<PairingEntry> pairing_violations(
    const std::vector<PairingEntry>& report) {
  std::vector<PairingEntry> bad;
  for (const auto& e : report)
    if (e.mult_plus != e.mult_minus) bad.push_back(e);
  return bad;
}

TraceIndexResult trace_index_check(const OrthProjection& p,
                                   const OrthProjection& q, double tol) {
  TraceIndexResult r;
  r.trace = (p.matrix - q.matrix).trace();
  r.index = index_pair(p, q, tol).value;
  r.agree = std::abs(r.trace - r.index) < 1e-8;
  return r;
}

}  // namespace specidx
