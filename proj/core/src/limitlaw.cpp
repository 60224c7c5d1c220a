#include "ringlab/limitlaw.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "lapack_support.hpp"

namespace ringlab::limitlaw {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_spiked(const jordan::JordanSpec& spec, double b) {
  require(b > 0.0, "limitlaw: outer radius b must be positive");
  for (const auto& group : spec.groups())
    if (!(std::abs(group.theta) > b)) throw std::invalid_argument("limitlaw: spike below outer radius");
}

constexpr double kJitter = 1e-12;
constexpr double kIndefiniteFloor = -1e-8;
constexpr double kSchurConditionCap = 1e12;

// Hermitian pivoted Cholesky; tolerates semidefinite rank deficiency via a
// small diagonal jitter, rejects genuinely indefinite input.
ComplexMatrix pivoted_cholesky(ComplexMatrix g) {
  const auto d = g.rows();
  const double scale = std::max(1.0, g.diagonal().real().maxCoeff());
  g.diagonal().array() += kJitter * scale;

  ComplexMatrix l = ComplexMatrix::Zero(d, d);
  Eigen::VectorXd diag = g.diagonal().real();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;

  for (Eigen::Index t = 0; t < d; ++t) {
    Eigen::Index best = t;
    for (Eigen::Index i = t + 1; i < d; ++i)
      if (diag(order[static_cast<std::size_t>(i)]) > diag(order[static_cast<std::size_t>(best)])) best = i;
    std::swap(order[static_cast<std::size_t>(t)], order[static_cast<std::size_t>(best)]);
    const Eigen::Index row_t = order[static_cast<std::size_t>(t)];
    const double pivot = diag(row_t);
    if (pivot < kIndefiniteFloor * scale)
      throw std::logic_error("sample_m_vector: Gamma is indefinite (construction bug)");
    if (pivot <= 0.0) break;  // semidefinite tail exhausted
    const double root = std::sqrt(pivot);
    l(row_t, t) = root;
    for (Eigen::Index i = t + 1; i < d; ++i) {
      const Eigen::Index row = order[static_cast<std::size_t>(i)];
      Complex v = g(row, row_t);
      for (Eigen::Index s = 0; s < t; ++s) v -= l(row, s) * std::conj(l(row_t, s));
      l(row, t) = v / root;
      diag(row) -= std::norm(l(row, t));
    }
  }
  return l;
}

std::vector<Complex> pth_roots_of_spectrum(const ComplexMatrix& m, int p) {
  auto eig = detail::eig_values(m);
  if (eig.info != 0) throw ResampleRequired("limit matrix eigensolve failed");
  std::vector<Complex> points;
  points.reserve(eig.values.size() * static_cast<std::size_t>(p));
  for (const Complex& value : eig.values) {
    const double radius = std::pow(std::abs(value), 1.0 / p);
    const double angle = std::arg(value) / p;
    for (int s = 0; s < p; ++s) {
      const double phase = angle + 2.0 * kPi * s / p;
      points.emplace_back(radius * std::cos(phase), radius * std::sin(phase));
    }
  }
  return points;
}

// theta (M_IV - M_III M_I^-1 M_II) from the four blocks.
ComplexMatrix schur_limit_matrix(const ComplexMatrix& m_i, const ComplexMatrix& m_ii,
                                 const ComplexMatrix& m_iii, const ComplexMatrix& m_iv,
                                 Complex theta) {
  if (m_i.rows() == 0) return theta * m_iv;
  Eigen::JacobiSVD<ComplexMatrix> svd(m_i, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > kSchurConditionCap)
    throw ResampleRequired("M_I numerically singular");
  const ComplexMatrix solved = svd.solve(m_ii);
  return theta * (m_iv - m_iii * solved);
}

LimitConstellation constellation_from_draw(
    const jordan::JordanSpec& spec,
    const std::function<ComplexMatrix(int group, int rate_class)>& limit_matrix) {
  LimitConstellation constellation;
  for (int i = 0; i < spec.group_count(); ++i) {
    const auto& group = spec.group(i);
    GroupConstellation gc;
    gc.theta = group.theta;
    for (std::size_t j = 0; j < group.blocks.size(); ++j) {
      ClassConstellation cc;
      cc.rate_class = static_cast<int>(j) + 1;
      cc.p = group.blocks[j].p;
      cc.beta = group.blocks[j].beta;
      cc.m_matrix = limit_matrix(i, cc.rate_class);
      cc.points = pth_roots_of_spectrum(cc.m_matrix, cc.p);
      gc.classes.push_back(std::move(cc));
    }
    constellation.groups.push_back(std::move(gc));
  }
  return constellation;
}

constexpr int kMaxResampleAttempts = 64;

}  // namespace

int LimitCovariance::position(int group, int k, int l) const {
  for (std::size_t t = 0; t < index.size(); ++t)
    if (index[t].group == group && index[t].k == k && index[t].l == l) return static_cast<int>(t);
  throw std::invalid_argument("LimitCovariance: index (group, k, l) not present");
}

LimitCovariance covariance_matrix(const jordan::JordanSpec& spec, const jordan::BasisSpec& q,
                                  double b) {
  require(q.r() == spec.r(), "covariance_matrix: Q dimension must match the spec rank");
  require_spiked(spec, b);

  const auto idx = jordan::indexing(spec);
  LimitCovariance cov;
  cov.b = b;
  for (int i = 0; i < spec.group_count(); ++i)
    for (int k : idx.groups[static_cast<std::size_t>(i)].last_cols)
      for (int l : idx.groups[static_cast<std::size_t>(i)].first_cols)
        cov.index.push_back({i, k, l});

  const ComplexMatrix gram_left = q.q_inverse() * q.q_inverse().adjoint();  // Q^-1 (Q^-1)^*
  const ComplexMatrix gram_right = q.q().adjoint() * q.q();                 // Q^* Q

  const int dim = cov.dimension();
  cov.gamma.resize(dim, dim);
  for (int row = 0; row < dim; ++row) {
    const auto& a = cov.index[static_cast<std::size_t>(row)];
    const Complex theta_a = spec.group(a.group).theta;
    for (int col = 0; col < dim; ++col) {
      const auto& c = cov.index[static_cast<std::size_t>(col)];
      const Complex theta_c = spec.group(c.group).theta;
      const Complex kernel = b * b / (theta_a * std::conj(theta_c) - b * b);
      cov.gamma(row, col) = kernel * gram_left(a.k, c.k) * gram_right(c.l, a.l);
    }
  }
  cov.gamma = ((cov.gamma + cov.gamma.adjoint()) / 2.0).eval();  // exact Hermitian symmetrization
  cov.cholesky = pivoted_cholesky(cov.gamma);
  return cov;
}

ComplexVector sample_m_vector(const LimitCovariance& cov, SeededStream rng) {
  RandomStream stream(rng);
  ComplexVector g(cov.dimension());
  for (int i = 0; i < cov.dimension(); ++i) g(i) = stream.gaussian_complex();
  return cov.cholesky * g;
}

ComplexMatrix build_M(const LimitCovariance& cov, const ComplexVector& m,
                      const jordan::JordanIndexing& idx, int group, int rate_class,
                      Complex theta) {
  require(group >= 0 && group < static_cast<int>(idx.groups.size()), "build_M: group out of range");
  const auto& gi = idx.groups[static_cast<std::size_t>(group)];
  require(rate_class >= 1 && rate_class <= static_cast<int>(gi.k.size()),
          "build_M: rate class out of range");
  const auto j = static_cast<std::size_t>(rate_class - 1);

  const auto slice = [&](const std::vector<int>& ks, const std::vector<int>& ls) {
    ComplexMatrix block(ks.size(), ls.size());
    for (std::size_t a = 0; a < ks.size(); ++a)
      for (std::size_t c = 0; c < ls.size(); ++c)
        block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) =
            m(cov.position(group, ks[a], ls[c]));
    return block;
  };

  return schur_limit_matrix(slice(gi.k_minus[j], gi.l_minus[j]), slice(gi.k_minus[j], gi.l[j]),
                            slice(gi.k[j], gi.l_minus[j]), slice(gi.k[j], gi.l[j]), theta);
}

LimitConstellation sample_constellation(const jordan::JordanSpec& spec,
                                        const jordan::BasisSpec& q, double b, SeededStream rng) {
  const LimitCovariance cov = covariance_matrix(spec, q, b);
  const auto idx = jordan::indexing(spec);
  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    const ComplexVector m = sample_m_vector(cov, rng.substream(static_cast<std::uint64_t>(attempt)));
    try {
      return constellation_from_draw(spec, [&](int group, int rate_class) {
        return build_M(cov, m, idx, group, rate_class, spec.group(group).theta);
      });
    } catch (const ResampleRequired&) {
      // measure-zero event: redraw m
    }
  }
  throw std::runtime_error("sample_constellation: resample limit exceeded (degenerate covariance?)");
}

GinibreCaseLaw::GinibreCaseLaw(jordan::JordanSpec spec, double b) : spec_(std::move(spec)), b_(b) {
  require_spiked(spec_, b_);
}

Complex GinibreCaseLaw::scale(int group) const {
  const Complex theta = spec_.group(group).theta;
  return theta * b_ / std::sqrt(std::norm(theta) - b_ * b_);
}

LimitConstellation GinibreCaseLaw::sample(SeededStream rng) const {
  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    RandomStream stream(rng.substream(static_cast<std::uint64_t>(attempt)));
    // Per group: one i.i.d. Gaussian matrix over J(theta) x I(theta)
    // positions.  Slicing a single matrix per group keeps the joint law
    // across rate classes (M_I of class j contains class j' < j blocks).
    std::vector<ComplexMatrix> draws;
    draws.reserve(static_cast<std::size_t>(spec_.group_count()));
    for (int i = 0; i < spec_.group_count(); ++i) {
      const auto& group = spec_.group(i);
      int s = 0;
      for (const auto& cls : group.blocks) s += cls.beta;
      const double sigma_m = b_ / std::sqrt(std::norm(group.theta) - b_ * b_);
      ComplexMatrix y(s, s);
      for (int colv = 0; colv < s; ++colv)
        for (int row = 0; row < s; ++row) y(row, colv) = sigma_m * stream.gaussian_complex();
      draws.push_back(std::move(y));
    }
    try {
      return constellation_from_draw(spec_, [&](int group, int rate_class) {
        const auto& blocks = spec_.group(group).blocks;
        int rho = 0;
        for (int j = 0; j + 1 < rate_class; ++j) rho += blocks[static_cast<std::size_t>(j)].beta;
        const int beta = blocks[static_cast<std::size_t>(rate_class - 1)].beta;
        const ComplexMatrix& y = draws[static_cast<std::size_t>(group)];
        return schur_limit_matrix(y.topLeftCorner(rho, rho), y.block(0, rho, rho, beta),
                                  y.block(rho, 0, beta, rho), y.block(rho, rho, beta, beta),
                                  spec_.group(group).theta);
      });
    } catch (const ResampleRequired&) {
    }
  }
  throw std::runtime_error("GinibreCaseLaw: resample limit exceeded");
}

GinibreCaseLaw ginibre_case_law(const jordan::JordanSpec& spec, const jordan::BasisSpec& q,
                                double b) {
  require(q.r() == spec.r(), "ginibre_case_law: Q dimension must match the spec rank");
  require_spiked(spec, b);

  const auto idx = jordan::indexing(spec);
  const ComplexMatrix gram_left = q.q_inverse() * q.q_inverse().adjoint();
  const ComplexMatrix gram_right = q.q().adjoint() * q.q();

  std::vector<std::pair<int, int>> pairs;  // (k, l) across groups
  for (const auto& gi : idx.groups)
    for (int k : gi.last_cols)
      for (int l : gi.first_cols) pairs.emplace_back(k, l);

  double worst = 0.0;
  for (const auto& [k, l] : pairs)
    for (const auto& [k2, l2] : pairs) {
      const Complex value = gram_left(k, k2) * gram_right(l2, l);
      const Complex expected = (k == k2 && l == l2) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      worst = std::max(worst, std::abs(value - expected));
    }
  if (worst > 1e-10)
    throw std::runtime_error(
        "ginibre_case_law: Gram products are not the Kronecker pattern; use the general "
        "sample_constellation");
  return GinibreCaseLaw(spec, b);
}

double single_block_variance(Complex theta, double b) {
  require(b > 0.0, "single_block_variance: b must be positive");
  if (!(std::abs(theta) > b))
    throw std::invalid_argument("single_block_variance: requires |theta| > b");
  const double t2 = std::norm(theta);
  return b * b / (t2 * (t2 - b * b));
}

PairwiseCovariance pairwise_outlier_covariance(const jordan::JordanSpec& spec,
                                               const jordan::BasisSpec& q, double b, int group_a,
                                               int group_b) {
  require(q.r() == spec.r(), "pairwise_outlier_covariance: Q dimension mismatch");
  require(group_a != group_b, "pairwise_outlier_covariance: needs two distinct groups");
  require(group_a >= 0 && group_a < spec.group_count() && group_b >= 0 &&
              group_b < spec.group_count(),
          "pairwise_outlier_covariance: group out of range");
  const auto& ga = spec.group(group_a);
  const auto& gb = spec.group(group_b);
  require(ga.blocks.front().beta == 1 && gb.blocks.front().beta == 1,
          "pairwise_outlier_covariance: leading rate class must have multiplicity one");
  require(b > 0.0, "pairwise_outlier_covariance: b must be positive");
  if (!(std::abs(ga.theta) > b && std::abs(gb.theta) > b))
    throw std::invalid_argument("pairwise_outlier_covariance: spike below outer radius");

  const auto idx = jordan::indexing(spec);
  const int k = idx.groups[static_cast<std::size_t>(group_a)].k[0][0];   // last column
  const int l = idx.groups[static_cast<std::size_t>(group_a)].l[0][0];   // first column
  const int k2 = idx.groups[static_cast<std::size_t>(group_b)].k[0][0];
  const int l2 = idx.groups[static_cast<std::size_t>(group_b)].l[0][0];

  const ComplexMatrix gram_left = q.q_inverse() * q.q_inverse().adjoint();
  const ComplexMatrix gram_right = q.q().adjoint() * q.q();

  PairwiseCovariance out;
  const double b2 = b * b;
  out.sigma2 = std::norm(ga.theta) * b2 / (std::norm(ga.theta) - b2) *
               gram_left(k, k).real() * gram_right(l, l).real();
  out.sigma2_prime = std::norm(gb.theta) * b2 / (std::norm(gb.theta) - b2) *
                     gram_left(k2, k2).real() * gram_right(l2, l2).real();
  const Complex product = ga.theta * std::conj(gb.theta);
  out.cross = product * b2 / (product - b2) * gram_left(k, k2) * gram_right(l2, l);
  return out;
}

void write_constellation_csv(std::ostream& out, const LimitConstellation& constellation) {
  out << "group_index,theta_re,theta_im,rate_class,p,lambda_re,lambda_im,rescaled_re,rescaled_im\n";
  write_constellation_csv_rows(out, constellation);
}

void write_constellation_csv_rows(std::ostream& out, const LimitConstellation& constellation) {
  out.precision(17);
  for (std::size_t i = 0; i < constellation.groups.size(); ++i) {
    const auto& group = constellation.groups[i];
    for (const auto& cls : group.classes) {
      for (const Complex& point : cls.points) {
        out << i << ',' << group.theta.real() << ',' << group.theta.imag() << ','
            << cls.rate_class << ',' << cls.p << ',' << group.theta.real() << ','
            << group.theta.imag() << ',' << point.real() << ',' << point.imag() << '\n';
      }
    }
  }
}

}  // namespace ringlab::limitlaw
