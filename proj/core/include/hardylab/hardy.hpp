#pragma once

#include <string>
#include <vector>

#include "hardylab/statespace.hpp"

// Two overlapping Mach-Zehnder interferometers, one per particle arm.
// Emission in s+/s-, first beam splitters BS1 send s -> (i u + v)/sqrt(2),
// the u paths meet at the overlap point where u+u- annihilates into gamma,
// and second beam splitters BS2 send u -> (c + i d)/sqrt(2),
// v -> (i c + d)/sqrt(2) toward the C/D detectors. Detection at D+- is the
// projector onto the d+- modes. All mirrors between BS1 and BS2 carry
// phase 1.
namespace hardylab::hardy {

using statespace::Basis;
using statespace::LinearMap;
using statespace::ModeLabel;
using statespace::Projector;
using statespace::StateVector;

/// Snapshots along the run. AfterBS2Minus / AfterBS2Plus are the states seen
/// from the frames in which one arm has passed its second beam splitter and
/// the other has not; they are partial applications of the BS2 maps, not
/// dynamical evolution.
enum class Stage { Initial, AfterP, AfterBS2Minus, AfterBS2Plus, AfterBoth };

const char* stage_name(Stage s);
Stage stage_from_name(const std::string& name);

/// Which second beam splitters are in place. Removing one turns that arm's
/// snapshot into a which-path configuration (the u/v modes fly through
/// unchanged).
struct Optics {
  bool bs2_plus_present = true;
  bool bs2_minus_present = true;
};

struct HardyState {
  Stage stage;
  StateVector state;
};

struct StageMaps {
  LinearMap bs1;             // |s+s-> -> the four u/v product modes
  LinearMap annihilation;    // u+u- -> gamma, identity elsewhere
  LinearMap bs2_minus_only;  // AfterP basis, electron arm only
  LinearMap bs2_plus_only;   // AfterP basis, positron arm only
  LinearMap bs2_both;        // AfterP basis, both arms
};

/// The five stage maps; each is an isometry on its domain.
StageMaps build_stage_maps();

/// Completion map from a one-arm snapshot to the final basis (the remaining
/// arm's beam splitter).
LinearMap bs2_completion(Stage from);

Basis stage_basis(Stage s, const Optics& optics = {});

/// State at the requested stage, starting from |s+s->.
HardyState evolve_to(Stage s, const Optics& optics = {});

/// Born probability of the outcome projector at the given stage.
double outcome_probability(Stage s, const Projector& outcome,
                           const Optics& optics = {});

/// P(target=1 | condition=1) at the given stage, for commuting diagonal
/// projectors. Errors when the condition has (numerically) zero probability.
double conditional_probability(Stage s, const Projector& target,
                               const Projector& condition,
                               const Optics& optics = {});

/// Rank-k projector onto every product mode whose given arm ('+' or '-') is
/// in the given single-particle mode letter (u, v, c, d, s). gamma never
/// belongs to a single-arm mode.
Projector mode_projector(const Basis& b, char arm, char letter);

Projector u_plus(const Basis& b);
Projector u_minus(const Basis& b);
Projector d_plus(const Basis& b);
Projector d_minus(const Basis& b);
/// Rank-1 projector onto |u+u->.
Projector u_plus_u_minus(const Basis& b);

}  // namespace hardylab::hardy
