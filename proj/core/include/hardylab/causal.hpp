#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardylab/abl.hpp"

// 1+1-dimensional Minkowski geometry (units c = 1) for the causal side of
// the workbench: light cones around measurement events, the union/
// intersection regions for nonlocal observables, the ER1/ER2/ER3 criteria as
// geometric gates, and Hellwig-Kraus validity regions. Measurement events
// are idealized points.
namespace hardylab::causal {

/// Width of the band treated as "on the cone"; the boundary is inclusive on
/// the side a criterion names (on-or-inside, on-or-outside).
inline constexpr double kConeTol = 1e-12;

struct SpacetimeEvent {
  double t = 0.0;
  double x = 0.0;
  std::string label;
};

class LorentzBoost {
 public:
  explicit LorentzBoost(double beta);

  double beta() const { return beta_; }
  double gamma() const;
  LorentzBoost inverse() const { return LorentzBoost(-beta_); }
  /// Boost by this, then by `then`: relativistic velocity addition.
  LorentzBoost composed_with(const LorentzBoost& then) const;

 private:
  double beta_;
};

SpacetimeEvent boost(const LorentzBoost& b, const SpacetimeEvent& e);

enum class IntervalClass { Timelike, Lightlike, Spacelike };

const char* interval_class_name(IntervalClass c);

struct Interval {
  double value;  // -(dt)^2 + (dx)^2
  IntervalClass cls;
};

Interval interval(const SpacetimeEvent& a, const SpacetimeEvent& b);

/// Predicate-defined region built from light-cone primitives with union,
/// intersection and complement. Immutable; evaluation is reentrant.
class CausalRegion {
 public:
  struct Node;  // expression-tree node, defined in the implementation

  /// On or inside the forward cone of the apex.
  static CausalRegion forward_interior(SpacetimeEvent apex);
  /// On or outside the forward cone.
  static CausalRegion forward_exterior(SpacetimeEvent apex);
  static CausalRegion backward_interior(SpacetimeEvent apex);
  static CausalRegion backward_exterior(SpacetimeEvent apex);
  static CausalRegion everything();
  static CausalRegion nothing();

  CausalRegion complemented() const;
  CausalRegion boosted(const LorentzBoost& b) const;
  bool contains(const SpacetimeEvent& e) const;

  friend CausalRegion region_union(std::span<const CausalRegion> parts);
  friend CausalRegion region_intersection(std::span<const CausalRegion> parts);

 private:
  explicit CausalRegion(std::shared_ptr<const Node> root);
  std::shared_ptr<const Node> root_;
};

CausalRegion region_union(std::span<const CausalRegion> parts);
CausalRegion region_union(const CausalRegion& a, const CausalRegion& b);
CausalRegion region_intersection(std::span<const CausalRegion> parts);
CausalRegion region_intersection(const CausalRegion& a, const CausalRegion& b);

bool region_membership(const CausalRegion& r, const SpacetimeEvent& e);

enum class ErKind { ER1, ER2, ER3 };

const char* er_kind_name(ErKind k);

/// Geometric gate of the element-of-reality criteria: true iff every
/// information event lies in the admissible region relative to the target
/// measurement event.
///   ER1: strictly earlier in the given frame (frame required);
///   ER2: on or inside the backward cone of the target;
///   ER3: on or outside the forward cone of the target.
/// ER2/ER3 accept an optional frame; their verdicts do not depend on it.
/// The probability-one quantum condition is checked by the abl/hardy side.
bool er_criterion(ErKind kind, std::span<const SpacetimeEvent> info,
                  const SpacetimeEvent& target,
                  std::optional<LorentzBoost> frame = std::nullopt);

enum class Combine { Union, Intersection };

/// Union / intersection of the exteriors of the forward cones of the apexes.
CausalRegion nonlocal_region(Combine kind,
                             std::span<const SpacetimeEvent> apexes);

/// Region where the pre-collapse state is attributed: after the preparation
/// events (union of their closed forward cones; unrestricted when none are
/// given) and outside the closed backward cones of the collapse events.
CausalRegion hellwig_kraus_validity(
    std::span<const SpacetimeEvent> preparation,
    std::span<const SpacetimeEvent> collapses);

/// True iff the observable's attributed value is identical in every frame.
/// Errors with MissingObservable when some frame lacks an assignment.
bool li1_check(
    const std::map<std::string, abl::RealityAssignment>& assignments_per_frame,
    const std::string& observable);

/// Event layout of the two-interferometer experiment in its rest frame.
struct Scenario {
  SpacetimeEvent u_plus_box;
  SpacetimeEvent u_minus_box;
  SpacetimeEvent bs2_plus;
  SpacetimeEvent bs2_minus;
  SpacetimeEvent d_plus;
  SpacetimeEvent d_minus;
  std::vector<double> boosts;

  static Scenario default_hardy();
  std::vector<SpacetimeEvent> events() const;
  /// BS2+ and BS2- must be simultaneous in the rest frame.
  void validate() const;
};

}  // namespace hardylab::causal
