#include "oqs/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>

#include "lapack.hpp"
#include "oqs/errors.hpp"

namespace oqs {

namespace {

constexpr double kSingularTol = 1e-12;
constexpr double kCondLimit = 1e12;

ComplexMatrix one_plus_half_ik(const ComplexMatrix& k) {
  ComplexMatrix m = ComplexMatrix::Identity(k.rows(), k.cols());
  m += cplx(0.0, 0.5) * k;
  return m;
}

Eigen::PartialPivLU<ComplexMatrix> checked_lu(const ComplexMatrix& m) {
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kCondLimit)) {
    std::ostringstream os;
    os << "1 + iK/2 is ill-conditioned (rcond " << rcond << ")";
    throw NumericError(os.str(), rcond > 0 ? 1.0 / rcond : INFINITY);
  }
  return lu;
}

}  // namespace

ChannelPropagator::ChannelPropagator(const RealMatrix& hermitian, const CouplingAmplitudes& amplitudes) {
  if (hermitian.rows() != amplitudes.states())
    throw StructuralError("propagator: amplitude rows do not match the Hamiltonian");
  detail::SymmetricEigen es = detail::symmetric_eigen(hermitian, true);
  if (es.info != 0) throw NumericError("symmetric eigensolver did not converge");
  levels_ = std::move(es.values);
  vectors_ = std::move(es.vectors);
  projected_ = vectors_.transpose() * amplitudes.matrix();
  scale_ = std::max(1.0, levels_.cwiseAbs().maxCoeff());
}

void ChannelPropagator::check_regular(double energy) const {
  for (Index n = 0; n < levels_.size(); ++n) {
    if (std::abs(energy - levels_(n)) <= kSingularTol * scale_) {
      std::ostringstream os;
      os << "energy " << energy << " coincides with level " << levels_(n)
         << "; shift the energy grid (midpoint placement)";
      throw SingularityError(os.str());
    }
  }
}

RealMatrix ChannelPropagator::k_matrix(double energy) const {
  check_regular(energy);
  const Index m = projected_.cols();
  RealMatrix k = RealMatrix::Zero(m, m);
  RealVector w(levels_.size());
  for (Index n = 0; n < levels_.size(); ++n) w(n) = kTwoPi / (energy - levels_(n));
  k.noalias() = projected_.transpose() * w.asDiagonal() * projected_;
  return 0.5 * (k + k.transpose());
}

RealMatrix k_matrix(const IntrinsicHamiltonian& h, const CouplingAmplitudes& a, double energy) {
  return ChannelPropagator(h, a).k_matrix(energy);
}

ComplexMatrix s_matrix(const ComplexMatrix& k) {
  if (k.rows() != k.cols()) throw StructuralError("K must be square");
  auto lu = checked_lu(one_plus_half_ik(k));
  ComplexMatrix num = ComplexMatrix::Identity(k.rows(), k.cols()) - cplx(0.0, 0.5) * k;
  return num * lu.inverse();
}

ComplexMatrix t_matrix(const ComplexMatrix& k) {
  if (k.rows() != k.cols()) throw StructuralError("K must be square");
  auto lu = checked_lu(one_plus_half_ik(k));
  return k * lu.inverse();
}

ComplexMatrix full_propagator(const EffectiveHamiltonian& heff, double energy) {
  ChannelPropagator prop(heff);
  prop.check_regular(energy);
  const RealMatrix& u = prop.vectors();
  const RealVector& lv = prop.levels();
  RealVector g(lv.size());
  for (Index n = 0; n < lv.size(); ++n) g(n) = 1.0 / (energy - lv(n));
  // G in the eigenbasis is diagonal; G A = U diag(g) B.
  const RealMatrix ga = u * (g.asDiagonal() * prop.projected());
  const RealMatrix gmat = u * g.asDiagonal() * u.transpose();
  const RealMatrix k = kTwoPi * prop.projected().transpose() * g.asDiagonal() * prop.projected();
  auto lu = checked_lu(one_plus_half_ik(k.cast<cplx>()));
  const ComplexMatrix corr = lu.solve(ga.transpose().cast<cplx>());
  ComplexMatrix out = gmat.cast<cplx>();
  out -= cplx(0.0, kPi) * ga.cast<cplx>() * corr;
  return out;
}

ComplexMatrix direct_propagator(const EffectiveHamiltonian& heff, double energy) {
  ComplexMatrix m = -heff.matrix();
  m.diagonal().array() += energy;
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  return lu.inverse();
}

ScatteringSample scatter(const ChannelPropagator& prop, double energy) {
  ScatteringSample out;
  out.energy = energy;
  out.k = prop.k_matrix(energy);
  const Index m = out.k.rows();
  const ComplexMatrix kc = out.k.cast<cplx>();
  auto lu = checked_lu(one_plus_half_ik(kc));
  // K and (1 + iK/2)^-1 commute, so T = (1 + iK/2)^-1 K.
  out.t = lu.solve(kc);
  out.s = ComplexMatrix::Identity(m, m) - cplx(0.0, 1.0) * out.t;
  out.sigma = out.t.cwiseAbs2();
  out.conductance = (m % 2 == 0) ? conductance(out.sigma) : std::nan("");
  return out;
}

double unitarity_defect(const ComplexMatrix& s) {
  return (s.adjoint() * s - ComplexMatrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

double symmetry_defect(const ComplexMatrix& s) { return (s - s.transpose()).cwiseAbs().maxCoeff(); }

double conductance(const RealMatrix& sigma) {
  const Index m = sigma.rows();
  if (m % 2 != 0 || sigma.cols() != m) throw StructuralError("conductance needs an even channel count");
  const Index half = m / 2;
  return sigma.block(0, half, half, half).sum();
}

double transmission_coefficient(double kappa) {
  return 4.0 * kappa / ((1.0 + kappa) * (1.0 + kappa));
}

TransmissionReport transmission(const ComplexVector& mean_s_diagonal, const RealVector& kappa) {
  if (mean_s_diagonal.size() != kappa.size()) throw StructuralError("transmission: size mismatch");
  TransmissionReport r;
  r.measured.resize(kappa.size());
  r.predicted.resize(kappa.size());
  for (Index a = 0; a < kappa.size(); ++a) {
    r.measured(a) = 1.0 - std::norm(mean_s_diagonal(a));
    r.predicted(a) = transmission_coefficient(kappa(a));
  }
  return r;
}

double enhancement_factor(double elastic_fl, double inelastic_fl) {
  if (!(inelastic_fl > 0.0)) throw FitError("enhancement factor undefined: inelastic average is not positive");
  return elastic_fl / inelastic_fl;
}

double elastic_from_enhancement(double f, double tau, Index channels) {
  return f * tau / (f + static_cast<double>(channels) - 1.0);
}

double mean_conductance_prediction(double f, double tau, Index channels) {
  const double m = static_cast<double>(channels);
  return 0.25 * m * m * tau / (f + m - 1.0);
}

CorrelationAccumulator::CorrelationAccumulator(Index max_lag)
    : max_lag_(max_lag),
      sum_xy_(static_cast<std::size_t>(max_lag + 1)),
      sum_x_(static_cast<std::size_t>(max_lag + 1)),
      sum_y_(static_cast<std::size_t>(max_lag + 1)),
      count_(static_cast<std::size_t>(max_lag + 1)) {}

void CorrelationAccumulator::add(const std::vector<double>& series) {
  std::vector<cplx> c(series.begin(), series.end());
  add(c);
}

void CorrelationAccumulator::add(const std::vector<cplx>& x) {
  const Index n = static_cast<Index>(x.size());
  for (Index l = 0; l <= max_lag_ && l < n; ++l) {
    cplx sxy = 0.0, sx = 0.0, sy = 0.0;
    for (Index i = 0; i + l < n; ++i) {
      const cplx a = x[static_cast<std::size_t>(i)];
      const cplx b = x[static_cast<std::size_t>(i + l)];
      sxy += a * std::conj(b);
      sx += a;
      sy += b;
    }
    const auto k = static_cast<std::size_t>(l);
    sum_xy_[k] += sxy;
    sum_x_[k] += sx;
    sum_y_[k] += sy;
    count_[k] += static_cast<double>(n - l);
  }
  for (Index i = 0; i < n; ++i) {
    const int h = (2 * i < n) ? 0 : 1;
    half_sum_[h] += x[static_cast<std::size_t>(i)];
    half_count_[h] += 1.0;
  }
}

void CorrelationAccumulator::merge(const CorrelationAccumulator& other) {
  if (other.max_lag_ != max_lag_) throw StructuralError("cannot merge accumulators with different lags");
  for (std::size_t k = 0; k < count_.size(); ++k) {
    sum_xy_[k] += other.sum_xy_[k];
    sum_x_[k] += other.sum_x_[k];
    sum_y_[k] += other.sum_y_[k];
    count_[k] += other.count_[k];
  }
  for (int h = 0; h < 2; ++h) {
    half_sum_[h] += other.half_sum_[h];
    half_count_[h] += other.half_count_[h];
  }
}

std::vector<double> CorrelationAccumulator::covariance() const {
  std::vector<double> c(count_.size(), 0.0);
  for (std::size_t k = 0; k < count_.size(); ++k) {
    if (count_[k] <= 0.0) continue;
    const double n = count_[k];
    c[k] = (sum_xy_[k] / n - (sum_x_[k] / n) * std::conj(sum_y_[k] / n)).real();
  }
  return c;
}

double CorrelationAccumulator::first_half_mean() const {
  return half_count_[0] > 0 ? std::abs(half_sum_[0] / half_count_[0]) : 0.0;
}

double CorrelationAccumulator::second_half_mean() const {
  return half_count_[1] > 0 ? std::abs(half_sum_[1] / half_count_[1]) : 0.0;
}

CorrelationFit fit_lorentzian(const CorrelationAccumulator& acc, double step) {
  const std::vector<double> cov = acc.covariance();
  if (cov.empty() || !(cov[0] > 0.0)) throw FitError("correlation function has no variance");
  CorrelationFit fit;
  for (std::size_t k = 0; k < cov.size(); ++k) {
    fit.lag.push_back(step * static_cast<double>(k));
    fit.ratio.push_back(cov[k] / cov[0]);
  }

  fit.initial_guess = fit.lag.back();
  for (std::size_t k = 1; k < fit.ratio.size(); ++k) {
    if (fit.ratio[k] < 0.5) {
      const double r0 = fit.ratio[k - 1], r1 = fit.ratio[k];
      fit.initial_guess = fit.lag[k - 1] + step * (r0 - 0.5) / (r0 - r1);
      break;
    }
  }

  const double cut = 5.0 * fit.initial_guess;
  auto sse = [&](double logl) {
    const double l2 = std::exp(2.0 * logl);
    double s = 0.0;
    for (std::size_t k = 0; k < fit.lag.size() && fit.lag[k] <= cut; ++k) {
      const double d = fit.ratio[k] - l2 / (fit.lag[k] * fit.lag[k] + l2);
      s += d * d;
    }
    return s;
  };
  const double g = std::max(fit.initial_guess, 1e-3 * step);
  auto [best, val] = boost::math::tools::brent_find_minima(sse, std::log(g / 20.0), std::log(g * 20.0), 52);
  fit.length = std::exp(best);
  std::size_t used = 0;
  for (std::size_t k = 0; k < fit.lag.size() && fit.lag[k] <= cut; ++k) ++used;
  fit.residual = std::sqrt(val / static_cast<double>(std::max<std::size_t>(used, 1)));

  const double m0 = acc.first_half_mean(), m1 = acc.second_half_mean();
  const double ref = std::max(std::abs(m0), std::abs(m1));
  fit.drift_warning = ref > 0.0 && std::abs(m0 - m1) > 0.1 * ref;
  return fit;
}

double correlation_length_prediction(Index channels, double tau, double spacing) {
  return spacing * static_cast<double>(channels) * tau / kTwoPi;
}

double mean_width_prediction(Index channels, double tau, double spacing) {
  return -spacing * static_cast<double>(channels) / kTwoPi * std::log(1.0 - tau);
}

std::vector<double> midpoint_grid(double lo, double hi, Index n) {
  std::vector<double> g(static_cast<std::size_t>(std::max<Index>(n, 0)));
  const double h = (hi - lo) / static_cast<double>(n);
  for (Index i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (static_cast<double>(i) + 0.5) * h;
  return g;
}

}  // namespace oqs
