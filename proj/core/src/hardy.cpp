#include "hardylab/hardy.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace hardylab::hardy {

namespace {

using statespace::Complex;

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

ModeLabel arm_label(char letter, char arm) {
  return ModeLabel{std::string{letter, arm}};
}

Basis arm_basis(char arm, std::initializer_list<char> letters) {
  std::vector<ModeLabel> ls;
  for (char c : letters) ls.push_back(arm_label(c, arm));
  return Basis(std::move(ls));
}

// s -> (i u + v)/sqrt(2)
LinearMap bs1_single(char arm) {
  return LinearMap(arm_basis(arm, {'s'}), arm_basis(arm, {'u', 'v'}),
                   {{arm_label('u', arm), arm_label('s', arm),
                     Complex{0.0, kInvSqrt2}},
                    {arm_label('v', arm), arm_label('s', arm),
                     Complex{kInvSqrt2, 0.0}}});
}

// u -> (c + i d)/sqrt(2),  v -> (i c + d)/sqrt(2)
LinearMap bs2_single(char arm) {
  return LinearMap(
      arm_basis(arm, {'u', 'v'}), arm_basis(arm, {'c', 'd'}),
      {{arm_label('c', arm), arm_label('u', arm), Complex{kInvSqrt2, 0.0}},
       {arm_label('d', arm), arm_label('u', arm), Complex{0.0, kInvSqrt2}},
       {arm_label('c', arm), arm_label('v', arm), Complex{0.0, kInvSqrt2}},
       {arm_label('d', arm), arm_label('v', arm), Complex{kInvSqrt2, 0.0}}});
}

LinearMap arm_pair_map(const LinearMap& plus, const LinearMap& minus) {
  return LinearMap::tensor(plus, minus).extended_with_gamma();
}

LinearMap plus_arm_map(bool bs2_present, const Basis& plus_modes,
                       const LinearMap& minus_side) {
  LinearMap plus_side =
      bs2_present ? bs2_single('+') : LinearMap::identity(plus_modes);
  return arm_pair_map(plus_side, minus_side);
}

}  // namespace

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Initial: return "initial";
    case Stage::AfterP: return "after_p";
    case Stage::AfterBS2Minus: return "after_bs2_minus";
    case Stage::AfterBS2Plus: return "after_bs2_plus";
    case Stage::AfterBoth: return "after_both";
  }
  return "?";
}

Stage stage_from_name(const std::string& name) {
  for (Stage s : {Stage::Initial, Stage::AfterP, Stage::AfterBS2Minus,
                  Stage::AfterBS2Plus, Stage::AfterBoth})
    if (name == stage_name(s)) return s;
  throw DomainError(ErrorCode::InvalidArgument,
                    "unknown stage '" + name + "'");
}

StageMaps build_stage_maps() {
  LinearMap bs1 = LinearMap::tensor(bs1_single('+'), bs1_single('-'));

  // u+u- -> gamma, identity on the other product modes
  Basis uv = bs1.codomain();
  std::vector<statespace::MapEntry> entries;
  for (const auto& l : uv.labels())
    if (l.name == "u+u-")
      entries.push_back({statespace::kGamma, l, Complex{1.0, 0.0}});
    else
      entries.push_back({l, l, Complex{1.0, 0.0}});
  LinearMap annihilation(uv, uv.with_gamma(), entries);

  Basis plus_uv = arm_basis('+', {'u', 'v'});
  Basis minus_uv = arm_basis('-', {'u', 'v'});
  LinearMap bs2_minus_only =
      arm_pair_map(LinearMap::identity(plus_uv), bs2_single('-'));
  LinearMap bs2_plus_only =
      arm_pair_map(bs2_single('+'), LinearMap::identity(minus_uv));
  LinearMap bs2_both = arm_pair_map(bs2_single('+'), bs2_single('-'));

  return StageMaps{std::move(bs1), std::move(annihilation),
                   std::move(bs2_minus_only), std::move(bs2_plus_only),
                   std::move(bs2_both)};
}

LinearMap bs2_completion(Stage from) {
  switch (from) {
    case Stage::AfterBS2Minus:
      return arm_pair_map(bs2_single('+'),
                          LinearMap::identity(arm_basis('-', {'c', 'd'})));
    case Stage::AfterBS2Plus:
      return arm_pair_map(LinearMap::identity(arm_basis('+', {'c', 'd'})),
                          bs2_single('-'));
    default:
      throw DomainError(ErrorCode::StageMismatch,
                        "completion is defined for one-arm snapshots only");
  }
}

Basis stage_basis(Stage s, const Optics& optics) {
  Basis plus_uv = arm_basis('+', {'u', 'v'});
  Basis minus_uv = arm_basis('-', {'u', 'v'});
  Basis plus_out = optics.bs2_plus_present ? arm_basis('+', {'c', 'd'})
                                           : plus_uv;
  Basis minus_out = optics.bs2_minus_present ? arm_basis('-', {'c', 'd'})
                                             : minus_uv;
  switch (s) {
    case Stage::Initial:
      return Basis::product(arm_basis('+', {'s'}), arm_basis('-', {'s'}));
    case Stage::AfterP:
      return Basis::product(plus_uv, minus_uv, /*with_gamma=*/true);
    case Stage::AfterBS2Minus:
      return Basis::product(plus_uv, minus_out, true);
    case Stage::AfterBS2Plus:
      return Basis::product(plus_out, minus_uv, true);
    case Stage::AfterBoth:
      return Basis::product(plus_out, minus_out, true);
  }
  throw DomainError(ErrorCode::InvalidArgument, "unknown stage");
}

HardyState evolve_to(Stage s, const Optics& optics) {
  StageMaps maps = build_stage_maps();
  Basis plus_uv = arm_basis('+', {'u', 'v'});
  Basis minus_uv = arm_basis('-', {'u', 'v'});

  StateVector v = StateVector::basis_state(stage_basis(Stage::Initial),
                                           ModeLabel{"s+s-"});
  if (s == Stage::Initial) return {s, std::move(v)};

  v = apply(maps.annihilation, apply(maps.bs1, v));
  if (s == Stage::AfterP) return {s, std::move(v)};

  LinearMap minus_side = optics.bs2_minus_present
                             ? bs2_single('-')
                             : LinearMap::identity(minus_uv);
  switch (s) {
    case Stage::AfterBS2Minus:
      return {s, apply(arm_pair_map(LinearMap::identity(plus_uv), minus_side),
                       v)};
    case Stage::AfterBS2Plus:
      return {s, apply(plus_arm_map(optics.bs2_plus_present, plus_uv,
                                    LinearMap::identity(minus_uv)),
                       v)};
    case Stage::AfterBoth:
      return {s,
              apply(plus_arm_map(optics.bs2_plus_present, plus_uv, minus_side),
                    v)};
    default:
      throw DomainError(ErrorCode::InvalidArgument, "unknown stage");
  }
}

double outcome_probability(Stage s, const Projector& outcome,
                           const Optics& optics) {
  HardyState h = evolve_to(s, optics);
  if (!(outcome.basis() == h.state.basis()))
    throw DomainError(ErrorCode::StageMismatch,
                      "projector is not defined on this stage's basis");
  return project(outcome, h.state).probability;
}

double conditional_probability(Stage s, const Projector& target,
                               const Projector& condition,
                               const Optics& optics) {
  HardyState h = evolve_to(s, optics);
  if (!(target.basis() == h.state.basis()) ||
      !(condition.basis() == h.state.basis()))
    throw DomainError(ErrorCode::StageMismatch,
                      "projector is not defined on this stage's basis");
  double p_condition = project(condition, h.state).probability;
  if (p_condition <= 1e-15)
    throw DomainError(ErrorCode::ZeroProbabilityCondition,
                      "conditioning outcome has zero probability");
  double p_joint = project(target.intersected(condition), h.state).probability;
  return p_joint / p_condition;
}

Projector mode_projector(const Basis& b, char arm, char letter) {
  std::vector<ModeLabel> selected;
  std::string wanted{letter, arm};
  for (const auto& l : b.labels()) {
    if (statespace::is_gamma(l)) continue;
    std::string part;
    if (l.name.size() == 2)
      part = l.name;  // single-particle basis
    else
      part = arm == '+' ? l.name.substr(0, 2) : l.name.substr(2, 2);
    if (part == wanted) selected.push_back(l);
  }
  return Projector::onto_labels(b, selected);
}

Projector u_plus(const Basis& b) { return mode_projector(b, '+', 'u'); }
Projector u_minus(const Basis& b) { return mode_projector(b, '-', 'u'); }
Projector d_plus(const Basis& b) { return mode_projector(b, '+', 'd'); }
Projector d_minus(const Basis& b) { return mode_projector(b, '-', 'd'); }

Projector u_plus_u_minus(const Basis& b) {
  return Projector::onto_labels(b, {ModeLabel{"u+u-"}});
}

}  // namespace hardylab::hardy
