#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hardylab/errors.hpp"

namespace hardylab::statespace {

using Complex = std::complex<double>;

/// Tolerance for norm, isometry and idempotency checks on state-space values.
inline constexpr double kStateTol = 1e-12;

/// Symbolic name of one basis mode. Two-particle modes concatenate the
/// per-particle names (positron arm first, e.g. "u+v-"); the annihilation
/// outcome is the single joint label "gamma", orthogonal to every product
/// mode.
struct ModeLabel {
  std::string name;
  auto operator<=>(const ModeLabel&) const = default;
};

inline const ModeLabel kGamma{"gamma"};

inline bool is_gamma(const ModeLabel& l) { return l.name == kGamma.name; }

ModeLabel tensor(const ModeLabel& a, const ModeLabel& b);

/// Ordered set of pairwise-distinct mode labels. Construction canonicalizes
/// the order (lexicographic, gamma last) so serialized states are
/// byte-stable.
class Basis {
 public:
  Basis() = default;
  explicit Basis(std::vector<ModeLabel> labels);
  Basis(std::initializer_list<ModeLabel> labels)
      : Basis(std::vector<ModeLabel>(labels)) {}

  /// Product basis over two single-particle bases, optionally adjoined with
  /// the gamma sector.
  static Basis product(const Basis& plus, const Basis& minus,
                       bool with_gamma = false);

  std::size_t size() const { return labels_.size(); }
  const std::vector<ModeLabel>& labels() const { return labels_; }
  const ModeLabel& label(std::size_t i) const { return labels_[i]; }
  bool contains(const ModeLabel& l) const;
  std::size_t index_of(const ModeLabel& l) const;
  Basis with_gamma() const;

  bool operator==(const Basis&) const = default;

 private:
  std::vector<ModeLabel> labels_;
};

/// Complex amplitudes over a labeled orthonormal basis. Immutable after
/// construction.
class StateVector {
 public:
  StateVector(Basis basis, std::vector<Complex> amplitudes);

  static StateVector basis_state(const Basis& b, const ModeLabel& l);
  static StateVector from_terms(
      const Basis& b, std::span<const std::pair<ModeLabel, Complex>> terms);
  static StateVector from_terms(
      const Basis& b,
      std::initializer_list<std::pair<ModeLabel, Complex>> terms);

  const Basis& basis() const { return basis_; }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  Complex amplitude(const ModeLabel& l) const;

  double norm_squared() const;
  double norm() const;
  bool is_normalized(double tol = kStateTol) const;
  StateVector normalized() const;
  StateVector scaled(Complex factor) const;

 private:
  Basis basis_;
  std::vector<Complex> amplitudes_;
};

struct MapEntry {
  ModeLabel to;
  ModeLabel from;
  Complex value;
};

/// Linear map between labeled bases, stored dense (row-major over the
/// codomain). Immutable after construction.
class LinearMap {
 public:
  LinearMap(Basis domain, Basis codomain, std::span<const MapEntry> entries);
  LinearMap(Basis domain, Basis codomain,
            std::initializer_list<MapEntry> entries);

  static LinearMap identity(const Basis& b);
  /// Product map acting independently on the two particle arms.
  static LinearMap tensor(const LinearMap& plus, const LinearMap& minus);
  /// Same map extended by the one-dimensional gamma sector (gamma -> gamma).
  LinearMap extended_with_gamma() const;
  LinearMap adjoint() const;

  const Basis& domain() const { return domain_; }
  const Basis& codomain() const { return codomain_; }
  Complex entry(const ModeLabel& to, const ModeLabel& from) const;
  bool is_isometry(double tol = kStateTol) const;

 private:
  LinearMap(Basis domain, Basis codomain, std::vector<Complex> matrix);

  Basis domain_;
  Basis codomain_;
  std::vector<Complex> matrix_;  // codomain.size() x domain.size()

  friend StateVector apply(const LinearMap&, const StateVector&);
  friend LinearMap compose(const LinearMap&, const LinearMap&);
};

struct ProjectionResult;

/// Orthogonal projector: either a rank-k diagonal projector given by a
/// subset of basis labels, or an explicit Hermitian idempotent matrix.
class Projector {
 public:
  static Projector onto_labels(const Basis& b,
                               std::span<const ModeLabel> labels);
  static Projector onto_labels(const Basis& b,
                               std::initializer_list<ModeLabel> labels);
  /// Validates P*P = P and P = P^dagger within kStateTol.
  static Projector from_matrix(const Basis& b, std::vector<Complex> matrix);
  static Projector identity(const Basis& b);
  static Projector zero(const Basis& b);

  const Basis& basis() const { return basis_; }
  bool is_diagonal() const { return diagonal_; }
  /// Label mask, diagonal projectors only.
  const std::vector<bool>& mask() const;
  std::size_t rank() const;
  Projector complemented() const;
  /// Product of two commuting diagonal projectors (subset intersection).
  Projector intersected(const Projector& other) const;
  /// Dense matrix form, whatever the representation.
  std::vector<Complex> matrix() const;

 private:
  Projector(Basis b, std::vector<bool> mask);
  Projector(Basis b, std::vector<Complex> matrix);

  Basis basis_;
  bool diagonal_ = true;
  std::vector<bool> mask_;
  std::vector<Complex> matrix_;

  friend ProjectionResult project(const Projector&, const StateVector&);
};

struct ProjectionResult {
  StateVector state;    // unnormalized P|v>
  double probability;   // ||P v||^2 / ||v||^2
};

/// <a|b>, conjugate-linear in the first argument. Errors on basis mismatch.
Complex inner_product(const StateVector& a, const StateVector& b);

/// m applied to v. Errors when v's basis differs from m's domain.
StateVector apply(const LinearMap& m, const StateVector& v);

/// second o first.
LinearMap compose(const LinearMap& second, const LinearMap& first);

/// Unnormalized projection together with the Born probability. Errors on a
/// zero input vector.
ProjectionResult project(const Projector& p, const StateVector& v);

/// JSON object {"basis": [labels], "re": [..], "im": [..]}.
std::string to_json(const StateVector& v);
StateVector state_from_json(const std::string& text);

}  // namespace hardylab::statespace
