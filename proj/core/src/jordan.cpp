#include "ringlab/jordan.hpp"

#include <Eigen/SVD>
#include <stdexcept>

#include "ringlab/randmat.hpp"

namespace ringlab::jordan {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

int Group::dimension() const {
  int dim = 0;
  for (const auto& cls : blocks) dim += cls.p * cls.beta;
  return dim;
}

JordanSpec::JordanSpec(std::vector<Group> groups, int max_rank) : groups_(std::move(groups)) {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const auto& group = groups_[i];
    require(!group.blocks.empty(), "JordanSpec: group without blocks");
    int prev_p = 0;
    for (std::size_t j = 0; j < group.blocks.size(); ++j) {
      const auto& cls = group.blocks[j];
      require(cls.p >= 1 && cls.beta >= 1, "JordanSpec: block sizes and multiplicities are positive");
      require(j == 0 || cls.p < prev_p, "JordanSpec: block sizes must be strictly decreasing");
      prev_p = cls.p;
    }
    for (std::size_t i2 = i + 1; i2 < groups_.size(); ++i2)
      require(group.theta != groups_[i2].theta, "JordanSpec: eigenvalues must be pairwise distinct");
    r_ += group.dimension();
  }
  require(r_ <= max_rank, "JordanSpec: total dimension exceeds the configured rank bound");
}

BasisSpec::BasisSpec(ComplexMatrix q, double rcond_floor) : q_(std::move(q)) {
  require(q_.rows() == q_.cols(), "BasisSpec: Q must be square");
  if (q_.rows() == 0) {  // rank-zero perturbation
    q_inv_.resize(0, 0);
    return;
  }
  require(q_.allFinite(), "BasisSpec: Q must be finite");
  Eigen::JacobiSVD<ComplexMatrix> svd(q_);
  const auto& sv = svd.singularValues();
  const double rcond = sv(sv.size() - 1) / sv(0);
  if (!(rcond >= rcond_floor))
    throw std::invalid_argument("BasisSpec: Q is numerically singular (rcond below floor)");
  q_inv_ = q_.partialPivLu().solve(ComplexMatrix::Identity(q_.rows(), q_.cols()));
}

BasisSpec BasisSpec::identity(int r) { return BasisSpec(ComplexMatrix::Identity(r, r)); }

ComplexMatrix build_jcf(const JordanSpec& spec) {
  ComplexMatrix j = ComplexMatrix::Zero(spec.r(), spec.r());
  int offset = 0;
  for (const auto& group : spec.groups()) {
    for (const auto& cls : group.blocks) {
      for (int rep = 0; rep < cls.beta; ++rep) {
        for (int t = 0; t < cls.p; ++t) {
          j(offset + t, offset + t) = group.theta;
          if (t + 1 < cls.p) j(offset + t, offset + t + 1) = 1.0;
        }
        offset += cls.p;
      }
    }
  }
  return j;
}

JordanIndexing indexing(const JordanSpec& spec) {
  JordanIndexing idx;
  int offset = 0;
  for (const auto& group : spec.groups()) {
    GroupIndexing gi;
    const auto classes = group.blocks.size();
    gi.k.resize(classes);
    gi.k_minus.resize(classes);
    gi.l.resize(classes);
    gi.l_minus.resize(classes);
    for (std::size_t j = 0; j < classes; ++j) {
      gi.k_minus[j] = gi.last_cols;  // all earlier classes' last columns
      gi.l_minus[j] = gi.first_cols;
      const auto& cls = group.blocks[j];
      for (int rep = 0; rep < cls.beta; ++rep) {
        const int first = offset;
        const int last = offset + cls.p - 1;
        gi.first_cols.push_back(first);
        gi.last_cols.push_back(last);
        gi.k[j].push_back(last);
        gi.l[j].push_back(first);
        offset += cls.p;
      }
    }
    idx.groups.push_back(std::move(gi));
  }
  return idx;
}

PerturbationRealization embed_perturbation(const JordanSpec& spec, const BasisSpec& q, int n,
                                           SeededStream rng,
                                           const std::optional<ComplexMatrix>& bulk_block) {
  require(q.r() == spec.r(), "embed_perturbation: Q dimension must match the spec rank");
  const int bulk = bulk_block ? static_cast<int>(bulk_block->rows()) : 0;
  if (bulk_block) require(bulk_block->rows() == bulk_block->cols(), "embed_perturbation: bulk block must be square");
  const int r_eff = spec.r() + bulk;
  require(n >= r_eff, "embed_perturbation: need n >= r");

  if (r_eff == 0) {
    PerturbationRealization zero;
    zero.p = ComplexMatrix::Zero(n, n);
    zero.b = ComplexMatrix::Zero(n, 0);
    zero.c = ComplexMatrix::Zero(0, n);
    zero.j = ComplexMatrix::Zero(0, 0);
    return zero;
  }

  ComplexMatrix j_eff = ComplexMatrix::Zero(r_eff, r_eff);
  j_eff.topLeftCorner(spec.r(), spec.r()) = build_jcf(spec);
  ComplexMatrix q_eff = ComplexMatrix::Identity(r_eff, r_eff);
  ComplexMatrix q_inv_eff = ComplexMatrix::Identity(r_eff, r_eff);
  q_eff.topLeftCorner(spec.r(), spec.r()) = q.q();
  q_inv_eff.topLeftCorner(spec.r(), spec.r()) = q.q_inverse();
  if (bulk_block) j_eff.bottomRightCorner(bulk, bulk) = *bulk_block;

  ComplexMatrix w;
  if (rng.is_null()) {
    w = ComplexMatrix::Zero(n, r_eff);
    w.topLeftCorner(r_eff, r_eff).setIdentity();
  } else {
    w = randmat::haar_frame(n, r_eff, rng);
  }

  PerturbationRealization out;
  out.b = w * (q_eff * j_eff);
  out.c = q_inv_eff * w.adjoint();
  out.p = out.b * out.c;
  out.j = std::move(j_eff);
  return out;
}

}  // namespace ringlab::jordan
