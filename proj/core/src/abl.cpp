#include "hardylab/abl.hpp"

#include <cmath>
#include <utility>

namespace hardylab::abl {

using statespace::Complex;
using statespace::kStateTol;

PrePostEnsemble::PrePostEnsemble(StateVector pre_state, StateVector post_state)
    : pre(pre_state.normalized()), post(post_state.normalized()) {
  if (!(pre.basis() == post.basis()))
    throw DomainError(ErrorCode::BasisMismatch,
                      "pre and post states must share a basis");
}

ProjectorFamily::ProjectorFamily(std::vector<Projector> members)
    : members_(std::move(members)) {
  if (members_.empty())
    throw DomainError(ErrorCode::InvalidArgument,
                      "a projector family needs at least one member");
  const auto& basis = members_.front().basis();
  std::size_t n = basis.size();
  for (const auto& p : members_)
    if (!(p.basis() == basis))
      throw DomainError(ErrorCode::BasisMismatch,
                        "family members must share a basis");
  // pairwise orthogonality and completeness, checked on dense matrices
  std::vector<Complex> sum(n * n, Complex{0.0, 0.0});
  std::vector<std::vector<Complex>> mats;
  mats.reserve(members_.size());
  for (const auto& p : members_) mats.push_back(p.matrix());
  for (std::size_t a = 0; a < mats.size(); ++a) {
    for (std::size_t i = 0; i < n * n; ++i) sum[i] += mats[a][i];
    for (std::size_t b = a + 1; b < mats.size(); ++b)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          Complex s{0.0, 0.0};
          for (std::size_t j = 0; j < n; ++j)
            s += mats[a][r * n + j] * mats[b][j * n + c];
          if (std::abs(s) > kStateTol)
            throw DomainError(ErrorCode::InvalidArgument,
                              "family members must be mutually orthogonal");
        }
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex expected = r == c ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      if (std::abs(sum[r * n + c] - expected) > kStateTol)
        throw DomainError(ErrorCode::InvalidArgument,
                          "family members must sum to the identity");
    }
}

ProjectorFamily ProjectorFamily::yes_no(const Projector& p) {
  return ProjectorFamily({p, p.complemented()});
}

double abl_probability(const PrePostEnsemble& e, const ProjectorFamily& family,
                       std::size_t i) {
  if (i >= family.size())
    throw DomainError(ErrorCode::InvalidArgument,
                      "family index out of range");
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t j = 0; j < family.size(); ++j) {
    StateVector projected = project(family[j], e.pre).state;
    double term = std::norm(inner_product(e.post, projected));
    denominator += term;
    if (j == i) numerator = term;
  }
  if (denominator <= 1e-15)
    throw DomainError(ErrorCode::PostSelectionIncompatible,
                      "post-selection incompatible: the ABL denominator "
                      "vanishes for this family");
  double p = numerator / denominator;
  return std::min(std::max(p, 0.0), 1.0);
}

StateVector back_evolve(const StateVector& post,
                        std::span<const LinearMap> maps) {
  StateVector v = post;
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) {
    if (!it->is_isometry())
      throw DomainError(ErrorCode::NonIsometricMap,
                        "back evolution requires isometric maps");
    v = apply(it->adjoint(), v);
  }
  return v;
}

void RealityAssignment::set(const std::string& observable, double value) {
  values_[observable] = value;
}

bool RealityAssignment::has(const std::string& observable) const {
  return values_.count(observable) != 0;
}

double RealityAssignment::at(const std::string& observable) const {
  auto it = values_.find(observable);
  if (it == values_.end())
    throw DomainError(ErrorCode::MissingObservable,
                      "no element of reality assigned to '" + observable +
                          "'");
  return it->second;
}

RealityAssignment assign_elements(const PrePostEnsemble& e,
                                  std::span<const LabeledObservable> obs) {
  RealityAssignment out;
  for (const auto& o : obs) {
    double p = abl_probability(e, ProjectorFamily::yes_no(o.projector), 0);
    if (p >= 1.0 - kAssignTol)
      out.set(o.label, 1.0);
    else if (p <= kAssignTol)
      out.set(o.label, 0.0);
  }
  return out;
}

AuditReport audit_product_rule(const RealityAssignment& a,
                               std::span<const ProductPair> pairs) {
  AuditReport report;
  for (const auto& pair : pairs) {
    if (!a.has(pair.a) || !a.has(pair.b) || !a.has(pair.ab)) {
      report.skipped.push_back("(" + pair.a + ", " + pair.b + ", " + pair.ab +
                               "): observable not assigned");
      continue;
    }
    double fa = a.at(pair.a);
    double fb = a.at(pair.b);
    double fab = a.at(pair.ab);
    if (fa * fb != fab)
      report.violations.push_back(ProductRuleViolation{pair, fa, fb, fab});
  }
  return report;
}

}  // namespace hardylab::abl
