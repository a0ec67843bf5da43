#include "varsel/synthesis.hpp"

#include <cmath>
#include <random>
#include <string>

#include "varsel/seeding.hpp"

namespace varsel {

namespace {

constexpr std::uint64_t kInnovationStream = 1;
constexpr std::uint64_t kExogenousStream = 2;

std::size_t equation_count(const CoefficientSet& c) {
  if (c.A.empty()) throw DimensionMismatch("coefficient set has no endogenous lags");
  return static_cast<std::size_t>(c.A.front().cols());
}

void check_shapes(const CoefficientSet& c, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(equation_count(c));
  for (const auto& a : c.A)
    if (a.rows() != n || a.cols() != n) throw DimensionMismatch("A blocks must be n x n");
  for (const auto& b : c.B)
    if (b.rows() != static_cast<Eigen::Index>(d) || b.cols() != n)
      throw DimensionMismatch("B blocks must be d x n");
  if (c.C && c.C->size() != n) throw DimensionMismatch("C must be 1 x n");
}

Matrix companion(const CoefficientSet& c) {
  const auto n = static_cast<Eigen::Index>(equation_count(c));
  const auto p = static_cast<Eigen::Index>(c.A.size());
  // State row s_j = [y_j, y_{j-1}, ..., y_{j-p+1}] evolves as s_{j+1} = s_j M.
  Matrix M = Matrix::Zero(n * p, n * p);
  for (Eigen::Index t = 0; t < p; ++t) M.block(t * n, 0, n, n) = c.A[static_cast<std::size_t>(t)];
  for (Eigen::Index t = 0; t + 1 < p; ++t) M.block(t * n, (t + 1) * n, n, n).setIdentity();
  return M;
}

}  // namespace

double companion_spectral_radius(const CoefficientSet& coeffs) {
  check_shapes(coeffs, coeffs.B.empty() ? 0 : static_cast<std::size_t>(coeffs.B.front().rows()));
  const Matrix M = companion(coeffs);
  Eigen::EigenSolver<Matrix> solver(M, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("eigenvalue iteration for the companion matrix did not converge",
                           M.cwiseAbs().rowwise().sum().maxCoeff());
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

TimeSeriesDataset generate(const GeneratorSpec& spec) {
  const CoefficientSet& c = spec.true_coefficients;
  if (spec.T < 1) throw DataError("generator length T must be at least 1");
  if (!(spec.noise_scale >= 0.0) || !std::isfinite(spec.noise_scale))
    throw DataError("noise scale must be a finite nonnegative number");

  const std::size_t n = equation_count(c);
  std::size_t d = c.B.empty() ? spec.exogenous_dim : static_cast<std::size_t>(c.B.front().rows());
  if (spec.exogenous == ExogenousKind::Supplied && c.B.empty())
    d = static_cast<std::size_t>(spec.supplied_exogenous.cols());
  if (spec.exogenous == ExogenousKind::None && !c.B.empty())
    throw DataError("exogenous coefficients given without an exogenous process");
  if (spec.exogenous == ExogenousKind::None) d = 0;
  check_shapes(c, d);

  if (spec.noise_scale > 0.0) {
    const double radius = companion_spectral_radius(c);
    if (radius >= kStabilityMargin) throw Unstable(radius);
  }

  const auto total = static_cast<Eigen::Index>(spec.burn_in + spec.T);
  const auto nn = static_cast<Eigen::Index>(n);
  const auto dd = static_cast<Eigen::Index>(d);

  Matrix z = Matrix::Zero(total, dd);
  if (spec.exogenous == ExogenousKind::RandomWalk) {
    Rng rng = make_stream(spec.seed, kExogenousStream);
    std::normal_distribution<double> step(0.0, 1.0);
    for (Eigen::Index j = 0; j < total; ++j)
      for (Eigen::Index k = 0; k < dd; ++k) z(j, k) = (j ? z(j - 1, k) : 0.0) + step(rng);
  } else if (spec.exogenous == ExogenousKind::Supplied) {
    if (spec.supplied_exogenous.rows() != total || spec.supplied_exogenous.cols() != dd)
      throw DimensionMismatch("supplied exogenous series must be (burn_in + T) x d");
    z = spec.supplied_exogenous;
  }

  Rng rng = make_stream(spec.seed, kInnovationStream);
  std::normal_distribution<double> innovation(0.0, 1.0);
  const Eigen::Index forced = spec.initial_values ? spec.initial_values->rows() : 0;
  if (spec.initial_values && spec.initial_values->cols() != nn)
    throw DimensionMismatch("initial values must have one column per dependent variable");

  Matrix y = Matrix::Zero(total, nn);
  for (Eigen::Index j = 0; j < total; ++j) {
    if (j < forced) {
      y.row(j) = spec.initial_values->row(j);
      continue;
    }
    RowVector next = c.C ? RowVector(*c.C) : RowVector::Zero(nn);
    for (std::size_t t = 1; t <= c.A.size(); ++t) {
      const auto lag = j - static_cast<Eigen::Index>(t);
      if (lag >= 0) next += y.row(lag) * c.A[t - 1];
    }
    for (std::size_t t = 1; t <= c.B.size(); ++t) {
      const auto lag = j - static_cast<Eigen::Index>(t);
      if (lag >= 0) next += z.row(lag) * c.B[t - 1];
    }
    if (spec.noise_scale > 0.0)
      for (Eigen::Index i = 0; i < nn; ++i) next(i) += spec.noise_scale * innovation(rng);
    y.row(j) = next;
  }

  const auto burn = static_cast<Eigen::Index>(spec.burn_in);
  const auto rows = static_cast<Eigen::Index>(spec.T);
  Matrix obs(rows, nn + dd);
  obs.leftCols(nn) = y.bottomRows(rows);
  if (dd) obs.rightCols(dd) = z.middleRows(burn, rows);

  std::vector<std::string> names;
  std::vector<Role> roles;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("y" + std::to_string(i + 1));
    roles.push_back(Role::Dependent);
  }
  for (std::size_t k = 0; k < d; ++k) {
    names.push_back("z" + std::to_string(k + 1));
    roles.push_back(Role::Independent);
  }
  return TimeSeriesDataset(std::move(obs), std::move(names), std::move(roles));
}

CoefficientSet random_stable_coefficients(std::uint64_t seed, std::size_t n, std::size_t p,
                                          std::size_t d, std::size_t q, bool include_constant,
                                          double target_radius) {
  if (n < 1 || p < 1) throw DataError("need n >= 1 and p >= 1");
  if (!(target_radius > 0.0)) throw DataError("target radius must be positive");
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto draw = [&](std::size_t rows, std::size_t cols) {
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = unit(rng);
    return m;
  };

  CoefficientSet c;
  for (std::size_t t = 0; t < p; ++t) c.A.push_back(draw(n, n));
  for (std::size_t t = 0; t < q; ++t) c.B.push_back(0.5 * draw(d, n));
  if (include_constant) c.C = RowVector(draw(1, n));

  // Scaling A_t by s^t scales every companion eigenvalue by s.
  const double radius = companion_spectral_radius(c);
  if (radius > 0.0) {
    const double s = target_radius / radius;
    double factor = 1.0;
    for (auto& a : c.A) {
      factor *= s;
      a *= factor;
    }
  }
  return c;
}

Matrix forecast(const TimeSeriesDataset& ds, const FitResult& fit, std::size_t horizon,
                const std::optional<Matrix>& future_z) {
  if (horizon < 1) throw DataError("forecast horizon must be positive");
  const ModelConfig& cfg = fit.config;
  if (cfg.dependent_mask.size() != ds.width())
    throw DimensionMismatch("fit configuration does not match the dataset");
  const auto dep = cfg.dependent_columns();
  const auto indep = cfg.independent_columns();
  const auto n = static_cast<Eigen::Index>(dep.size());
  const auto d = static_cast<Eigen::Index>(indep.size());
  const auto T = static_cast<Eigen::Index>(ds.length());
  const auto H = static_cast<Eigen::Index>(horizon);
  const bool needs_future = cfg.q >= 1 && d > 0 && horizon >= 2;

  if (needs_future) {
    if (!future_z) throw DataError("forecast needs future exogenous values (future_z)");
    if (future_z->cols() != d || future_z->rows() < H - 1)
      throw DimensionMismatch("future exogenous values must be horizon x d");
  }

  Matrix y(T + H, n);
  Matrix z(T + H, d);
  for (Eigen::Index i = 0; i < n; ++i)
    y.col(i).head(T) = ds.observations().col(static_cast<Eigen::Index>(dep[i]));
  for (Eigen::Index k = 0; k < d; ++k)
    z.col(k).head(T) = ds.observations().col(static_cast<Eigen::Index>(indep[k]));
  if (needs_future) z.bottomRows(H).topRows(H - 1) = future_z->topRows(H - 1);

  const CoefficientSet& c = fit.coefficients;
  for (Eigen::Index h = 0; h < H; ++h) {
    const Eigen::Index t = T + h;
    RowVector next = c.C ? RowVector(*c.C) : RowVector::Zero(n);
    for (std::size_t l = 1; l <= cfg.p; ++l) next += y.row(t - static_cast<Eigen::Index>(l)) * c.A[l - 1];
    for (std::size_t l = 1; l <= cfg.q; ++l) next += z.row(t - static_cast<Eigen::Index>(l)) * c.B[l - 1];
    y.row(t) = next;
  }
  return y.bottomRows(H);
}

}  // namespace varsel
