#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hardylab/errors.hpp"

// Real-valued functions on a maximal commuting set of Hermitian operators
// (all operators diagonal in one fixed orthonormal basis, so an operator is
// just its spectrum vector) that satisfy the product rule
// f(H_a H_b) = f(H_a) f(H_b). The module represents the parametric families,
// checks the rule numerically, classifies functions by their values on
// projectors, and exhaustively enumerates all 0/1 assignments on the
// projector lattice for small dimension.
namespace hardylab::prodrule {

/// Relative tolerance for the continuous product-rule checks. Lattice
/// assignments use exact integer arithmetic.
inline constexpr double kProdTol = 1e-9;

/// Element of the maximal commuting set: a real spectrum in the fixed basis.
/// Dimension must exceed 2.
class DiagonalOperator {
 public:
  explicit DiagonalOperator(std::vector<double> lambdas);

  static DiagonalOperator projector(std::size_t n,
                                    std::span<const std::size_t> indices);
  static DiagonalOperator projector(std::size_t n,
                                    std::initializer_list<std::size_t> indices);
  static DiagonalOperator zero(std::size_t n);

  std::size_t dimension() const { return lambdas_.size(); }
  double lambda(std::size_t i) const { return lambdas_[i]; }
  const std::vector<double>& lambdas() const { return lambdas_; }

  /// Entrywise product (the operator product in the common eigenbasis).
  DiagonalOperator entrywise_product(const DiagonalOperator& other) const;

  bool is_projector_spectrum() const;
  /// Bitmask of the eigenvalue-1 entries; projector spectra only.
  std::uint32_t support_mask() const;

 private:
  std::vector<double> lambdas_;
};

/// Diagonal projector identified with its index subset.
struct DiagonalProjector {
  std::size_t n = 0;
  std::uint32_t mask = 0;

  DiagonalOperator to_operator() const;
  std::vector<std::size_t> indices() const;
};

/// 0/1 assignment on all 2^n subsets of the projector lattice, indexed by
/// bitmask. Not every instance satisfies the product rule; enumeration
/// returns only the closed ones, and is_product_closed() tells.
struct ExplicitLattice {
  std::size_t n = 0;
  std::vector<bool> ones;  // size 2^n

  static ExplicitLattice from_one_sets(
      std::size_t n, const std::vector<std::vector<std::size_t>>& one_sets);
  std::vector<std::vector<std::size_t>> one_sets() const;
  /// f(A intersect B) = f(A) f(B) for all subset pairs.
  bool is_product_closed() const;

  bool operator==(const ExplicitLattice&) const = default;
};

/// The parametric product-rule families plus explicit lattice assignments.
///   Const1: f = 1 everywhere (including the zero operator).
///   Const0: f = 0 everywhere.
///   Case2:  f(H) = |lambda_i|^alpha for lambda_i != 0, 0 at lambda_i = 0;
///           the sign-carrying variant multiplies by sign(lambda_i).
///           alpha must be nonnegative.
///   Case3:  product of such factors over an index set of size >= 2, with
///           strictly positive exponents and per-index sign modes.
class ProductRuleFunction {
 public:
  struct Const1 {
    std::size_t n;
  };
  struct Const0 {
    std::size_t n;
  };
  struct Case2 {
    std::size_t n;
    std::size_t index;
    double alpha;
    bool sign_carrying;
  };
  struct Case3 {
    std::size_t n;
    std::vector<std::size_t> indices;
    std::vector<double> alphas;
    std::vector<bool> sign_carrying;
  };

  using Form = std::variant<Const1, Const0, Case2, Case3, ExplicitLattice>;

  static ProductRuleFunction const1(std::size_t n);
  static ProductRuleFunction const0(std::size_t n);
  static ProductRuleFunction case2(std::size_t n, std::size_t index,
                                   double alpha, bool sign_carrying = false);
  static ProductRuleFunction case3(std::size_t n,
                                   std::vector<std::size_t> indices,
                                   std::vector<double> alphas,
                                   std::vector<bool> sign_carrying = {});
  static ProductRuleFunction lattice(ExplicitLattice l);

  std::size_t dimension() const;
  const Form& form() const { return form_; }
  std::string describe() const;

 private:
  explicit ProductRuleFunction(Form f) : form_(std::move(f)) {}
  Form form_;
};

double evaluate(const ProductRuleFunction& f, const DiagonalOperator& h);

/// |f(a) f(b) - f(a.b)| <= tol * max(1, |f(a.b)|).
bool check_product_rule(const ProductRuleFunction& f, const DiagonalOperator& a,
                        const DiagonalOperator& b, double tol = kProdTol);

enum class CaseKind { Case1AllOne, Case2SomeOne, Case3AllZero };

const char* case_kind_name(CaseKind k);

struct CaseReport {
  CaseKind kind;
  /// Rank-1 projector indices with f = 1.
  std::vector<std::size_t> one_singletons;
  /// Minimal-rank projectors with f = 1 (relevant in Case 3; may be empty).
  std::vector<DiagonalProjector> minimal_ones;
};

CaseReport classify_on_projectors(const ProductRuleFunction& f, std::size_t n);

/// All product-closed 0/1 assignments on the subsets of {0..n-1}, found by a
/// backtracking search with immediate constraint checks. Deterministic,
/// canonical order. n must be in [3, 5].
std::vector<ExplicitLattice> enumerate_lattice_assignments(std::size_t n);

/// True iff every enumerated assignment that is 1 on some but not all
/// singletons has exactly one singleton at 1 and is its principal filter.
bool uniqueness_theorem_check(std::size_t n);

struct TraceStep {
  std::string identity;
  double lhs;
  double rhs;
  bool holds;
};

/// Numeric instantiation of the derivation chains behind Case 1 and Case 2
/// (f(K) = f(K)f(P_i) = f(K P_i), the reduction f(H) = f(lambda_i P_i), the
/// one-dimensional multiplicativity), evaluated on fixed sample spectra.
std::vector<TraceStep> case_derivation_trace(const ProductRuleFunction& f);

struct TrialReport {
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::uint64_t seed = 0;
};

/// Seeded random product-rule trials with spectrum entries uniform in
/// [-2, 2].
TrialReport random_product_rule_trials(const ProductRuleFunction& f,
                                       std::size_t trials, std::uint64_t seed,
                                       double tol = kProdTol);

}  // namespace hardylab::prodrule
