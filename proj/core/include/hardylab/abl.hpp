#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hardylab/statespace.hpp"

namespace hardylab::abl {

using statespace::LinearMap;
using statespace::Projector;
using statespace::StateVector;

/// Tolerance separating "probability one/zero" from everything else when
/// attributing values. The scenarios of interest produce exact 0s and 1s;
/// drift past this is a bug, not physics.
inline constexpr double kAssignTol = 1e-10;

/// Pre- and post-selected pure ensemble, both states expressed at the time
/// of the intermediate measurement (forward-evolve the preparation,
/// back-evolve the post-selection). Construction normalizes both.
struct PrePostEnsemble {
  PrePostEnsemble(StateVector pre_state, StateVector post_state);

  StateVector pre;
  StateVector post;
};

/// Mutually orthogonal projectors summing to the identity.
class ProjectorFamily {
 public:
  explicit ProjectorFamily(std::vector<Projector> members);
  /// {P, 1 - P}.
  static ProjectorFamily yes_no(const Projector& p);

  std::size_t size() const { return members_.size(); }
  const Projector& operator[](std::size_t i) const { return members_[i]; }

 private:
  std::vector<Projector> members_;
};

/// Probability that an intermediate measurement of the family finds member i,
/// given the pre- and post-selection. Pure-state form of the
/// Aharonov-Bergmann-Lebowitz rule:
///   |<post|P_i|pre>|^2 / sum_j |<post|P_j|pre>|^2.
/// Errors with PostSelectionIncompatible when the denominator vanishes.
double abl_probability(const PrePostEnsemble& e, const ProjectorFamily& family,
                       std::size_t i);

/// Post-selected state pulled back through the listed maps (chronological
/// order): adjoints applied in reverse. Every map must be an isometry.
StateVector back_evolve(const StateVector& post,
                        std::span<const LinearMap> maps);

/// Values attributed to observables; only observables whose measurement
/// result is certain carry a value.
class RealityAssignment {
 public:
  void set(const std::string& observable, double value);
  bool has(const std::string& observable) const;
  /// Errors with MissingObservable when unassigned.
  double at(const std::string& observable) const;
  const std::map<std::string, double>& values() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

struct LabeledObservable {
  std::string label;
  Projector projector;
};

/// Assigns f(A)=1 (resp. 0) to each observable whose ABL probability for the
/// {P, 1-P} family is 1 (resp. 0) within kAssignTol; leaves the rest
/// unassigned.
RealityAssignment assign_elements(const PrePostEnsemble& e,
                                  std::span<const LabeledObservable> obs);

struct ProductPair {
  std::string a;
  std::string b;
  std::string ab;
};

struct ProductRuleViolation {
  ProductPair pair;
  double f_a;
  double f_b;
  double f_ab;
};

struct AuditReport {
  std::vector<ProductRuleViolation> violations;
  std::vector<std::string> skipped;  // pairs with unassigned observables
};

/// Reports every pair with f(AB) != f(A) * f(B).
AuditReport audit_product_rule(const RealityAssignment& a,
                               std::span<const ProductPair> pairs);

}  // namespace hardylab::abl
