#include "hardylab/causal.hpp"

#include <cmath>
#include <utility>

namespace hardylab::causal {

LorentzBoost::LorentzBoost(double beta) : beta_(beta) {
  if (!(std::abs(beta) < 1.0))
    throw DomainError(ErrorCode::InvalidArgument,
                      "|beta| must be smaller than 1");
}

double LorentzBoost::gamma() const {
  return 1.0 / std::sqrt(1.0 - beta_ * beta_);
}

LorentzBoost LorentzBoost::composed_with(const LorentzBoost& then) const {
  return LorentzBoost((beta_ + then.beta_) / (1.0 + beta_ * then.beta_));
}

SpacetimeEvent boost(const LorentzBoost& b, const SpacetimeEvent& e) {
  double g = b.gamma();
  return SpacetimeEvent{g * (e.t - b.beta() * e.x),
                        g * (e.x - b.beta() * e.t), e.label};
}

const char* interval_class_name(IntervalClass c) {
  switch (c) {
    case IntervalClass::Timelike: return "timelike";
    case IntervalClass::Lightlike: return "lightlike";
    case IntervalClass::Spacelike: return "spacelike";
  }
  return "?";
}

Interval interval(const SpacetimeEvent& a, const SpacetimeEvent& b) {
  double dt = b.t - a.t;
  double dx = b.x - a.x;
  double value = -dt * dt + dx * dx;
  IntervalClass cls = IntervalClass::Lightlike;
  if (value < -kConeTol)
    cls = IntervalClass::Timelike;
  else if (value > kConeTol)
    cls = IntervalClass::Spacelike;
  return Interval{value, cls};
}

struct CausalRegion::Node {
  enum class Kind { Primitive, Union, Intersection, Complement };
  enum class Cone { Forward, Backward };
  enum class Side { Interior, Exterior };

  Kind kind;
  Cone cone = Cone::Forward;
  Side side = Side::Interior;
  SpacetimeEvent apex;
  std::vector<std::shared_ptr<const Node>> children;

  bool contains(const SpacetimeEvent& e) const {
    switch (kind) {
      case Kind::Primitive: {
        double dt = cone == Cone::Forward ? e.t - apex.t : apex.t - e.t;
        double margin = dt - std::abs(e.x - apex.x);
        return side == Side::Interior ? margin >= -kConeTol
                                      : margin <= kConeTol;
      }
      case Kind::Union:
        for (const auto& c : children)
          if (c->contains(e)) return true;
        return false;
      case Kind::Intersection:
        for (const auto& c : children)
          if (!c->contains(e)) return false;
        return true;
      case Kind::Complement:
        return !children.front()->contains(e);
    }
    return false;
  }

  std::shared_ptr<const Node> boosted(const LorentzBoost& b) const {
    auto n = std::make_shared<Node>(*this);
    n->apex = causal::boost(b, apex);
    n->children.clear();
    for (const auto& c : children) n->children.push_back(c->boosted(b));
    return n;
  }
};

CausalRegion::CausalRegion(std::shared_ptr<const Node> root)
    : root_(std::move(root)) {}

namespace {

std::shared_ptr<const CausalRegion::Node> make_composite(
    CausalRegion::Node::Kind kind,
    std::vector<std::shared_ptr<const CausalRegion::Node>> children) {
  auto n = std::make_shared<CausalRegion::Node>();
  n->kind = kind;
  n->children = std::move(children);
  return n;
}

}  // namespace

CausalRegion CausalRegion::forward_interior(SpacetimeEvent apex) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Primitive;
  n->cone = Node::Cone::Forward;
  n->side = Node::Side::Interior;
  n->apex = std::move(apex);
  return CausalRegion(n);
}

CausalRegion CausalRegion::forward_exterior(SpacetimeEvent apex) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Primitive;
  n->cone = Node::Cone::Forward;
  n->side = Node::Side::Exterior;
  n->apex = std::move(apex);
  return CausalRegion(n);
}

CausalRegion CausalRegion::backward_interior(SpacetimeEvent apex) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Primitive;
  n->cone = Node::Cone::Backward;
  n->side = Node::Side::Interior;
  n->apex = std::move(apex);
  return CausalRegion(n);
}

CausalRegion CausalRegion::backward_exterior(SpacetimeEvent apex) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Primitive;
  n->cone = Node::Cone::Backward;
  n->side = Node::Side::Exterior;
  n->apex = std::move(apex);
  return CausalRegion(n);
}

CausalRegion CausalRegion::everything() {
  return CausalRegion(make_composite(Node::Kind::Intersection, {}));
}

CausalRegion CausalRegion::nothing() {
  return CausalRegion(make_composite(Node::Kind::Union, {}));
}

CausalRegion CausalRegion::complemented() const {
  return CausalRegion(make_composite(Node::Kind::Complement, {root_}));
}

CausalRegion CausalRegion::boosted(const LorentzBoost& b) const {
  return CausalRegion(root_->boosted(b));
}

bool CausalRegion::contains(const SpacetimeEvent& e) const {
  return root_->contains(e);
}

CausalRegion region_union(std::span<const CausalRegion> parts) {
  std::vector<std::shared_ptr<const CausalRegion::Node>> children;
  children.reserve(parts.size());
  for (const auto& p : parts) children.push_back(p.root_);
  return CausalRegion(make_composite(CausalRegion::Node::Kind::Union,
                                     std::move(children)));
}

CausalRegion region_union(const CausalRegion& a, const CausalRegion& b) {
  const CausalRegion parts[] = {a, b};
  return region_union(std::span<const CausalRegion>(parts, 2));
}

CausalRegion region_intersection(std::span<const CausalRegion> parts) {
  std::vector<std::shared_ptr<const CausalRegion::Node>> children;
  children.reserve(parts.size());
  for (const auto& p : parts) children.push_back(p.root_);
  return CausalRegion(make_composite(CausalRegion::Node::Kind::Intersection,
                                     std::move(children)));
}

CausalRegion region_intersection(const CausalRegion& a,
                                 const CausalRegion& b) {
  const CausalRegion parts[] = {a, b};
  return region_intersection(std::span<const CausalRegion>(parts, 2));
}

bool region_membership(const CausalRegion& r, const SpacetimeEvent& e) {
  return r.contains(e);
}

const char* er_kind_name(ErKind k) {
  switch (k) {
    case ErKind::ER1: return "ER1";
    case ErKind::ER2: return "ER2";
    case ErKind::ER3: return "ER3";
  }
  return "?";
}

bool er_criterion(ErKind kind, std::span<const SpacetimeEvent> info,
                  const SpacetimeEvent& target,
                  std::optional<LorentzBoost> frame) {
  if (kind == ErKind::ER1 && !frame)
    throw DomainError(ErrorCode::InvalidArgument,
                      "ER1 is stated relative to a frame; none was given");
  SpacetimeEvent t = frame ? boost(*frame, target) : target;
  for (const auto& raw : info) {
    SpacetimeEvent e = frame ? boost(*frame, raw) : raw;
    switch (kind) {
      case ErKind::ER1:
        if (!(e.t < t.t)) return false;
        break;
      case ErKind::ER2:
        if (!CausalRegion::backward_interior(t).contains(e)) return false;
        break;
      case ErKind::ER3:
        if (!CausalRegion::forward_exterior(t).contains(e)) return false;
        break;
    }
  }
  return true;
}

CausalRegion nonlocal_region(Combine kind,
                             std::span<const SpacetimeEvent> apexes) {
  if (apexes.empty())
    throw DomainError(ErrorCode::InvalidArgument,
                      "a nonlocal region needs at least one apex");
  std::vector<CausalRegion> parts;
  parts.reserve(apexes.size());
  for (const auto& a : apexes) parts.push_back(CausalRegion::forward_exterior(a));
  return kind == Combine::Union
             ? region_union(std::span<const CausalRegion>(parts))
             : region_intersection(std::span<const CausalRegion>(parts));
}

CausalRegion hellwig_kraus_validity(
    std::span<const SpacetimeEvent> preparation,
    std::span<const SpacetimeEvent> collapses) {
  CausalRegion prepared = CausalRegion::everything();
  if (!preparation.empty()) {
    std::vector<CausalRegion> futures;
    futures.reserve(preparation.size());
    for (const auto& p : preparation)
      futures.push_back(CausalRegion::forward_interior(p));
    prepared = region_union(std::span<const CausalRegion>(futures));
  }
  std::vector<CausalRegion> parts{prepared};
  for (const auto& c : collapses)
    parts.push_back(CausalRegion::backward_interior(c).complemented());
  return region_intersection(std::span<const CausalRegion>(parts));
}

bool li1_check(
    const std::map<std::string, abl::RealityAssignment>& assignments_per_frame,
    const std::string& observable) {
  bool first = true;
  double value = 0.0;
  for (const auto& [frame, assignment] : assignments_per_frame) {
    if (!assignment.has(observable))
      throw DomainError(ErrorCode::MissingObservable,
                        "'" + observable + "' missing in frame " + frame);
    double v = assignment.at(observable);
    if (first) {
      value = v;
      first = false;
    } else if (v != value) {
      return false;
    }
  }
  return true;
}

Scenario Scenario::default_hardy() {
  Scenario s;
  s.u_plus_box = {-1.0, 1.0, "u_plus_box"};
  s.u_minus_box = {-1.0, -1.0, "u_minus_box"};
  s.bs2_plus = {0.0, 1.0, "bs2_plus"};
  s.bs2_minus = {0.0, -1.0, "bs2_minus"};
  s.d_plus = {0.5, 1.5, "d_plus"};
  s.d_minus = {0.5, -1.5, "d_minus"};
  s.boosts = {0.0, 0.3, -0.3, 0.6, -0.6, 0.9, -0.9};
  return s;
}

std::vector<SpacetimeEvent> Scenario::events() const {
  return {u_plus_box, u_minus_box, bs2_plus, bs2_minus, d_plus, d_minus};
}

void Scenario::validate() const {
  if (std::abs(bs2_plus.t - bs2_minus.t) > kConeTol)
    throw DomainError(
        ErrorCode::InvalidArgument,
        "BS2+ and BS2- must be simultaneous in the rest frame");
  for (double b : boosts) (void)LorentzBoost(b);  // throws on |beta| >= 1
}

}  // namespace hardylab::causal
