#include "oqs/heff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lapack.hpp"
#include "oqs/errors.hpp"

namespace oqs {

namespace {

constexpr double kWidthClampTol = 1e-10;
constexpr double kResidualTol = 1e-9;
constexpr double kSelfOverlapFloor = 1e-8;

bool is_symmetric(const RealMatrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

// Absolute floor for width tolerances when tr W is zero or tiny.
double roundoff_floor(const ComplexMatrix& m) {
  return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, m.norm()) *
         std::sqrt(static_cast<double>(std::max<Index>(m.rows(), 1)));
}

}  // namespace

IntrinsicHamiltonian::IntrinsicHamiltonian(RealMatrix h, double spacing)
    : h_(std::move(h)), spacing_(spacing) {
  if (h_.rows() < 1) throw StructuralError("intrinsic Hamiltonian must have N >= 1");
  if (!is_symmetric(h_)) throw StructuralError("intrinsic Hamiltonian must be exactly symmetric");
  if (!(spacing_ > 0.0)) throw StructuralError("mean level spacing must be positive");
}

CouplingAmplitudes::CouplingAmplitudes(RealMatrix a) : a_(std::move(a)) {
  if (a_.cols() < 1) throw StructuralError("coupling amplitudes need at least one channel");
  if (a_.rows() < 1) throw StructuralError("coupling amplitudes need at least one state");
}

double CouplingAmplitudes::channel_width(Index c) const {
  return kTwoPi * a_.col(c).squaredNorm();
}

RealVector CouplingAmplitudes::channel_widths() const {
  RealVector g(a_.cols());
  for (Index c = 0; c < a_.cols(); ++c) g(c) = channel_width(c);
  return g;
}

double CouplingAmplitudes::coupling(Index c, double spacing) const {
  return coupling_from_width(channel_width(c), a_.rows(), spacing);
}

double width_from_coupling(double kappa, Index states, double spacing) {
  return 2.0 * kappa * static_cast<double>(states) * spacing / kPi;
}

double coupling_from_width(double gamma, Index states, double spacing) {
  return kPi * gamma / (2.0 * static_cast<double>(states) * spacing);
}

RealMatrix build_w_matrix(const CouplingAmplitudes& amplitudes) {
  const RealMatrix& a = amplitudes.matrix();
  RealMatrix w = kTwoPi * a * a.transpose();
  // Symmetrize the rounding of the product.
  return 0.5 * (w + w.transpose());
}

double EffectiveHamiltonian::trace_w() const {
  return kTwoPi * a_.matrix().squaredNorm();
}

ComplexMatrix EffectiveHamiltonian::matrix() const {
  ComplexMatrix m = hermitian_part().cast<cplx>();
  m -= cplx(0.0, 0.5) * w().cast<cplx>();
  return m;
}

EffectiveHamiltonian assemble(IntrinsicHamiltonian h, CouplingAmplitudes a,
                              std::optional<RealMatrix> shift) {
  if (a.states() != h.dim()) {
    std::ostringstream os;
    os << "amplitude rows (" << a.states() << ") do not match intrinsic dimension (" << h.dim()
       << ")";
    throw StructuralError(os.str());
  }
  EffectiveHamiltonian heff;
  if (shift) {
    if (shift->rows() != h.dim() || shift->cols() != h.dim())
      throw StructuralError("energy shift has the wrong shape");
    if (!is_symmetric(*shift)) throw StructuralError("energy shift must be symmetric");
    heff.shift_ = std::move(*shift);
  } else {
    heff.shift_ = RealMatrix::Zero(h.dim(), h.dim());
  }
  heff.h_ = std::move(h);
  heff.a_ = std::move(a);
  return heff;
}

double ResonanceSet::total_width() const {
  return std::accumulate(poles.begin(), poles.end(), 0.0,
                         [](double s, const ComplexEnergy& p) { return s + p.width; });
}

ResonanceSet spectrum_of(const ComplexMatrix& m, double trace_w, const SpectrumOptions& options) {
  const Index n = m.rows();
  if (n != m.cols() || n < 1) throw StructuralError("spectrum needs a non-empty square matrix");
  if (n > options.max_dim) {
    std::ostringstream os;
    os << "dimension " << n << " exceeds the configured maximum " << options.max_dim;
    throw StructuralError(os.str());
  }

  const detail::GeneralEigen solver = detail::general_eigen(m, options.vectors);
  if (solver.info != 0) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& s = svd.singularValues();
    const double cond = s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1) : INFINITY;
    throw NumericError("complex eigensolver did not converge", cond);
  }

  const double clamp_tol = kWidthClampTol * trace_w + roundoff_floor(m);
  const ComplexVector& values = solver.values;

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::vector<ComplexEnergy> raw(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) raw[static_cast<std::size_t>(i)] = ComplexEnergy::from_complex(values(i));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return centroid_order(raw[static_cast<std::size_t>(a)], raw[static_cast<std::size_t>(b)]);
  });

  ResonanceSet rs;
  rs.poles.reserve(static_cast<std::size_t>(n));
  for (Index i : order) {
    ComplexEnergy p = raw[static_cast<std::size_t>(i)];
    if (p.width < 0.0) {
      if (p.width < -clamp_tol) {
        std::ostringstream os;
        os << "negative resonance width " << p.width << " below tolerance " << -clamp_tol;
        throw NumericError(os.str());
      }
      p.width = 0.0;
    }
    rs.poles.push_back(p);
  }

  if (options.vectors) {
    const ComplexMatrix& vecs = solver.vectors;
    ComplexMatrix right(n, n);
    for (Index k = 0; k < n; ++k) right.col(k) = vecs.col(order[static_cast<std::size_t>(k)]);

    const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
    for (Index k = 0; k < n; ++k) {
      const cplx lambda = values(order[static_cast<std::size_t>(k)]);
      const double residual = (m * right.col(k) - lambda * right.col(k)).norm() / right.col(k).norm();
      if (residual > kResidualTol * scale) {
        std::ostringstream os;
        os << "eigenvector residual " << residual << " exceeds " << kResidualTol << " |H_eff|";
        throw NumericError(os.str());
      }
    }

    // H_eff is complex symmetric, so the left eigenvectors are the transposed
    // right ones once each is scaled to x^T x = 1.
    const bool symmetric = (m - m.transpose()).norm() <= 1e-14 * scale;
    double min_overlap = 1.0;
    for (Index k = 0; k < n; ++k) {
      const cplx self = right.col(k).transpose() * right.col(k);
      min_overlap = std::min(min_overlap, std::abs(self) / right.col(k).squaredNorm());
    }
    rs.min_self_overlap = min_overlap;
    rs.well_conditioned = min_overlap > kSelfOverlapFloor;

    if (symmetric && rs.well_conditioned) {
      for (Index k = 0; k < n; ++k) {
        const cplx self = right.col(k).transpose() * right.col(k);
        right.col(k) /= std::sqrt(self);
      }
      rs.left = right;
    } else {
      // Fall back to the inverse; the flag above tells callers not to trust it.
      Eigen::PartialPivLU<ComplexMatrix> lu(right);
      rs.left = lu.inverse().transpose();
    }
    rs.right = std::move(right);
  }
  return rs;
}

ResonanceSet spectrum(const EffectiveHamiltonian& heff, const SpectrumOptions& options) {
  return spectrum_of(heff.matrix(), heff.trace_w(), options);
}

SumRuleReport verify_sum_rules(const ResonanceSet& rs, const EffectiveHamiltonian& heff,
                               double rel_tol) {
  SumRuleReport report;
  report.trace_w = heff.trace_w();
  report.total_width = rs.total_width();
  report.trace_residual = std::abs(report.total_width - report.trace_w);
  for (const auto& p : rs.poles) report.max_negative_width = std::max(report.max_negative_width, -p.width);

  if (rs.right && rs.left) {
    const ComplexMatrix gram = rs.left->transpose() * (*rs.right);
    report.biorthogonality_error =
        (gram - ComplexMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  }

  const ComplexMatrix m = heff.matrix();
  const double floor = roundoff_floor(m);
  if (report.trace_residual > rel_tol * report.trace_w + floor) {
    std::ostringstream os;
    os << "trace rule violated: sum Gamma = " << report.total_width << ", tr W = " << report.trace_w;
    throw ConsistencyError(os.str());
  }
  if (report.max_negative_width > kWidthClampTol * report.trace_w + floor)
    throw ConsistencyError("negative resonance width");
  return report;
}

}  // namespace oqs
