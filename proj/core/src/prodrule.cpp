#include "hardylab/prodrule.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace hardylab::prodrule {

namespace {

constexpr std::size_t kMinLatticeDim = 3;
constexpr std::size_t kMaxLatticeDim = 5;

std::string index_list(std::span<const std::size_t> is) {
  std::ostringstream out;
  out << "{";
  for (std::size_t k = 0; k < is.size(); ++k)
    out << (k ? "," : "") << is[k];
  out << "}";
  return out.str();
}

}  // namespace

DiagonalOperator::DiagonalOperator(std::vector<double> lambdas)
    : lambdas_(std::move(lambdas)) {
  if (lambdas_.size() <= 2)
    throw DomainError(ErrorCode::InvalidArgument,
                      "the commuting set lives in dimension N > 2");
  for (double l : lambdas_)
    if (!std::isfinite(l))
      throw DomainError(ErrorCode::InvalidArgument,
                        "spectrum entries must be finite");
}

DiagonalOperator DiagonalOperator::projector(
    std::size_t n, std::span<const std::size_t> indices) {
  std::vector<double> ls(n, 0.0);
  for (std::size_t i : indices) {
    if (i >= n)
      throw DomainError(ErrorCode::InvalidArgument,
                        "projector index out of range");
    ls[i] = 1.0;
  }
  return DiagonalOperator(std::move(ls));
}

DiagonalOperator DiagonalOperator::projector(
    std::size_t n, std::initializer_list<std::size_t> indices) {
  return projector(
      n, std::span<const std::size_t>(indices.begin(), indices.size()));
}

DiagonalOperator DiagonalOperator::zero(std::size_t n) {
  return DiagonalOperator(std::vector<double>(n, 0.0));
}

DiagonalOperator DiagonalOperator::entrywise_product(
    const DiagonalOperator& other) const {
  if (dimension() != other.dimension())
    throw DomainError(ErrorCode::DimensionMismatch,
                      "operator product requires equal dimensions");
  std::vector<double> ls(dimension());
  for (std::size_t i = 0; i < ls.size(); ++i)
    ls[i] = lambdas_[i] * other.lambdas_[i];
  return DiagonalOperator(std::move(ls));
}

bool DiagonalOperator::is_projector_spectrum() const {
  for (double l : lambdas_)
    if (l != 0.0 && l != 1.0) return false;
  return true;
}

std::uint32_t DiagonalOperator::support_mask() const {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < lambdas_.size(); ++i)
    if (lambdas_[i] != 0.0) m |= 1u << i;
  return m;
}

DiagonalOperator DiagonalProjector::to_operator() const {
  std::vector<double> ls(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (1u << i)) ls[i] = 1.0;
  return DiagonalOperator(std::move(ls));
}

std::vector<std::size_t> DiagonalProjector::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (mask & (1u << i)) out.push_back(i);
  return out;
}

ExplicitLattice ExplicitLattice::from_one_sets(
    std::size_t n, const std::vector<std::vector<std::size_t>>& one_sets) {
  ExplicitLattice l;
  l.n = n;
  l.ones.assign(std::size_t{1} << n, false);
  for (const auto& set : one_sets) {
    std::uint32_t mask = 0;
    for (std::size_t i : set) {
      if (i >= n)
        throw DomainError(ErrorCode::InvalidArgument,
                          "lattice subset index out of range");
      mask |= 1u << i;
    }
    l.ones[mask] = true;
  }
  return l;
}

std::vector<std::vector<std::size_t>> ExplicitLattice::one_sets() const {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask < ones.size(); ++mask)
    if (ones[mask]) out.push_back(DiagonalProjector{n, mask}.indices());
  return out;
}

bool ExplicitLattice::is_product_closed() const {
  std::uint32_t m = static_cast<std::uint32_t>(ones.size());
  for (std::uint32_t a = 0; a < m; ++a)
    for (std::uint32_t b = a; b < m; ++b)
      if (ones[a & b] != (ones[a] && ones[b])) return false;
  return true;
}

ProductRuleFunction ProductRuleFunction::const1(std::size_t n) {
  return ProductRuleFunction(Const1{n});
}

ProductRuleFunction ProductRuleFunction::const0(std::size_t n) {
  return ProductRuleFunction(Const0{n});
}

ProductRuleFunction ProductRuleFunction::case2(std::size_t n,
                                               std::size_t index, double alpha,
                                               bool sign_carrying) {
  if (index >= n)
    throw DomainError(ErrorCode::InvalidArgument,
                      "case-2 index out of range");
  if (!(alpha >= 0.0))
    throw DomainError(ErrorCode::InvalidArgument,
                      "case-2 exponent must be nonnegative");
  return ProductRuleFunction(Case2{n, index, alpha, sign_carrying});
}

ProductRuleFunction ProductRuleFunction::case3(
    std::size_t n, std::vector<std::size_t> indices,
    std::vector<double> alphas, std::vector<bool> sign_carrying) {
  if (indices.size() < 2)
    throw DomainError(ErrorCode::InvalidArgument,
                      "case-3 needs at least two indices");
  if (alphas.size() != indices.size())
    throw DomainError(ErrorCode::InvalidArgument,
                      "case-3 needs one exponent per index");
  if (sign_carrying.empty()) sign_carrying.assign(indices.size(), false);
  if (sign_carrying.size() != indices.size())
    throw DomainError(ErrorCode::InvalidArgument,
                      "case-3 needs one sign mode per index");
  std::vector<std::size_t> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError(ErrorCode::InvalidArgument,
                      "case-3 indices must be distinct");
  for (std::size_t i : indices)
    if (i >= n)
      throw DomainError(ErrorCode::InvalidArgument,
                        "case-3 index out of range");
  for (double a : alphas)
    if (!(a > 0.0))
      throw DomainError(ErrorCode::InvalidArgument,
                        "case-3 exponents must be positive");
  return ProductRuleFunction(
      Case3{n, std::move(indices), std::move(alphas), std::move(sign_carrying)});
}

ProductRuleFunction ProductRuleFunction::lattice(ExplicitLattice l) {
  if (l.ones.size() != (std::size_t{1} << l.n))
    throw DomainError(ErrorCode::DimensionMismatch,
                      "lattice assignment must cover all 2^n subsets");
  if (l.n <= 2)
    throw DomainError(ErrorCode::InvalidArgument,
                      "the commuting set lives in dimension N > 2");
  return ProductRuleFunction(std::move(l));
}

std::size_t ProductRuleFunction::dimension() const {
  return std::visit([](const auto& f) -> std::size_t { return f.n; }, form_);
}

std::string ProductRuleFunction::describe() const {
  std::ostringstream out;
  if (std::holds_alternative<Const1>(form_)) {
    out << "const1(n=" << dimension() << ")";
  } else if (std::holds_alternative<Const0>(form_)) {
    out << "const0(n=" << dimension() << ")";
  } else if (const auto* c2 = std::get_if<Case2>(&form_)) {
    out << "case2(n=" << c2->n << ", index=" << c2->index
        << ", alpha=" << c2->alpha
        << (c2->sign_carrying ? ", signed" : ", unsigned") << ")";
  } else if (const auto* c3 = std::get_if<Case3>(&form_)) {
    out << "case3(n=" << c3->n << ", indices=" << index_list(c3->indices)
        << ")";
  } else {
    const auto& l = std::get<ExplicitLattice>(form_);
    out << "lattice(n=" << l.n << ", ones=" << l.one_sets().size() << ")";
  }
  return out.str();
}

namespace {

double signed_power(double lambda, double alpha, bool sign_carrying) {
  if (lambda == 0.0) return 0.0;  // continuity boundary, also f(0) = 0
  double magnitude = std::pow(std::abs(lambda), alpha);
  return sign_carrying && lambda < 0.0 ? -magnitude : magnitude;
}

}  // namespace

double evaluate(const ProductRuleFunction& f, const DiagonalOperator& h) {
  if (f.dimension() != h.dimension())
    throw DomainError(ErrorCode::DimensionMismatch,
                      "operator dimension does not match the function");
  using F = ProductRuleFunction;
  const auto& form = f.form();
  if (std::holds_alternative<F::Const1>(form)) return 1.0;
  if (std::holds_alternative<F::Const0>(form)) return 0.0;
  if (const auto* c2 = std::get_if<F::Case2>(&form))
    return signed_power(h.lambda(c2->index), c2->alpha, c2->sign_carrying);
  if (const auto* c3 = std::get_if<F::Case3>(&form)) {
    double acc = 1.0;
    for (std::size_t k = 0; k < c3->indices.size(); ++k) {
      acc *= signed_power(h.lambda(c3->indices[k]), c3->alphas[k],
                          c3->sign_carrying[k]);
      if (acc == 0.0) return 0.0;
    }
    return acc;
  }
  const auto& l = std::get<ExplicitLattice>(form);
  if (!h.is_projector_spectrum())
    throw DomainError(ErrorCode::InvalidArgument,
                      "a lattice assignment is defined on projectors only");
  return l.ones[h.support_mask()] ? 1.0 : 0.0;
}

bool check_product_rule(const ProductRuleFunction& f, const DiagonalOperator& a,
                        const DiagonalOperator& b, double tol) {
  double fa = evaluate(f, a);
  double fb = evaluate(f, b);
  double fab = evaluate(f, a.entrywise_product(b));
  return std::abs(fa * fb - fab) <= tol * std::max(1.0, std::abs(fab));
}

const char* case_kind_name(CaseKind k) {
  switch (k) {
    case CaseKind::Case1AllOne: return "case1";
    case CaseKind::Case2SomeOne: return "case2";
    case CaseKind::Case3AllZero: return "case3";
  }
  return "?";
}

CaseReport classify_on_projectors(const ProductRuleFunction& f,
                                  std::size_t n) {
  if (f.dimension() != n)
    throw DomainError(ErrorCode::DimensionMismatch,
                      "classification dimension does not match the function");
  CaseReport report;
  for (std::size_t i = 0; i < n; ++i)
    if (evaluate(f, DiagonalOperator::projector(n, {i})) == 1.0)
      report.one_singletons.push_back(i);

  if (report.one_singletons.size() == n) {
    report.kind = CaseKind::Case1AllOne;
  } else if (!report.one_singletons.empty()) {
    report.kind = CaseKind::Case2SomeOne;
    for (std::size_t i : report.one_singletons)
      report.minimal_ones.push_back(DiagonalProjector{n, 1u << i});
  } else {
    report.kind = CaseKind::Case3AllZero;
    // minimal-rank projectors with value 1: keep masks whose proper subsets
    // all evaluate to 0
    std::size_t total = std::size_t{1} << n;
    std::vector<bool> one(total, false);
    for (std::uint32_t mask = 0; mask < total; ++mask)
      one[mask] =
          evaluate(f, DiagonalProjector{n, mask}.to_operator()) == 1.0;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
      if (!one[mask]) continue;
      bool minimal = true;
      for (std::uint32_t sub = (mask - 1) & mask; sub && minimal;
           sub = (sub - 1) & mask)
        if (one[sub]) minimal = false;
      if (minimal && mask != 0) report.minimal_ones.push_back(
          DiagonalProjector{n, mask});
    }
  }
  return report;
}

std::vector<ExplicitLattice> enumerate_lattice_assignments(std::size_t n) {
  if (n < kMinLatticeDim || n > kMaxLatticeDim)
    throw DomainError(ErrorCode::InvalidArgument,
                      "lattice enumeration supports 3 <= n <= 5");
  std::size_t total = std::size_t{1} << n;
  std::vector<int> value(total, -1);
  std::vector<ExplicitLattice> out;

  // Masks are assigned in increasing numeric order; every submask precedes
  // its supersets, so A&B is already assigned when the pair (A, B) is
  // checked and inconsistent branches die immediately.
  auto consistent = [&](std::uint32_t mask, int v) {
    for (std::uint32_t b = 0; b < mask; ++b)
      if (value[mask & b] != v * value[b]) return false;
    return true;
  };

  auto dfs = [&](auto&& self, std::uint32_t mask) -> void {
    if (mask == total) {
      ExplicitLattice l;
      l.n = n;
      l.ones.assign(total, false);
      for (std::uint32_t i = 0; i < total; ++i) l.ones[i] = value[i] == 1;
      out.push_back(std::move(l));
      return;
    }
    for (int v = 0; v <= 1; ++v) {
      if (!consistent(mask, v)) continue;
      value[mask] = v;
      self(self, mask + 1);
      value[mask] = -1;
    }
  };
  dfs(dfs, 0);
  return out;
}

bool uniqueness_theorem_check(std::size_t n) {
  auto assignments = enumerate_lattice_assignments(n);
  std::size_t mixed_count = 0;
  for (const auto& l : assignments) {
    std::vector<std::size_t> one_singletons;
    for (std::size_t i = 0; i < n; ++i)
      if (l.ones[std::size_t{1} << i]) one_singletons.push_back(i);
    if (one_singletons.empty() || one_singletons.size() == n) continue;

    ++mixed_count;
    if (one_singletons.size() != 1) return false;
    std::uint32_t g = 1u << one_singletons.front();
    for (std::uint32_t mask = 0; mask < l.ones.size(); ++mask)
      if (l.ones[mask] != ((mask & g) != 0)) return false;  // principal filter
  }
  return mixed_count == n;
}

namespace {

void push_step(std::vector<TraceStep>& steps, std::string identity, double lhs,
               double rhs) {
  bool holds = std::abs(lhs - rhs) <= kProdTol * std::max(1.0, std::abs(rhs));
  steps.push_back(TraceStep{std::move(identity), lhs, rhs, holds});
}

std::string num(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

std::vector<TraceStep> case_derivation_trace(const ProductRuleFunction& f) {
  using F = ProductRuleFunction;
  const std::size_t n = f.dimension();
  std::vector<TraceStep> steps;

  if (std::holds_alternative<F::Const1>(f.form())) {
    const double sample_lambdas[] = {3.0, -1.5, 0.25};
    for (double lj : sample_lambdas) {
      // K = P_0 + lambda_j P_1
      std::vector<double> ls(n, 0.0);
      ls[0] = 1.0;
      ls[1] = lj;
      DiagonalOperator k(ls);
      DiagonalOperator p0 = DiagonalOperator::projector(n, {0});
      DiagonalOperator p1 = DiagonalOperator::projector(n, {1});
      push_step(steps, "f(K) = f(K) f(P0), K = P0 + " + num(lj) + " P1",
                evaluate(f, k), evaluate(f, k) * evaluate(f, p0));
      push_step(steps, "f(K) f(P0) = f(K P0)",
                evaluate(f, k) * evaluate(f, p0),
                evaluate(f, k.entrywise_product(p0)));
      push_step(steps, "f(K) = f(" + num(lj) + " P1)", evaluate(f, k),
                evaluate(f, k.entrywise_product(p1)));
    }
    DiagonalOperator p0 = DiagonalOperator::projector(n, {0});
    DiagonalOperator p1 = DiagonalOperator::projector(n, {1});
    push_step(steps, "f(0) = f(P0 P1) = f(P0) f(P1)",
              evaluate(f, DiagonalOperator::zero(n)),
              evaluate(f, p0) * evaluate(f, p1));
    std::vector<double> hs(n);
    for (std::size_t i = 0; i < n; ++i) hs[i] = 0.5 * double(i + 1);
    DiagonalOperator h(hs);
    push_step(steps, "f(H) = f(H) f(P0) = f(H P0) = f(lambda_0 P0) = 1",
              evaluate(f, h), evaluate(f, h.entrywise_product(p0)));
    return steps;
  }

  if (const auto* c2 = std::get_if<F::Case2>(&f.form())) {
    DiagonalOperator pi = DiagonalOperator::projector(n, {c2->index});
    const double sample_lambdas[] = {2.0, -1.5, 0.5};
    for (double li : sample_lambdas) {
      std::vector<double> hs(n);
      for (std::size_t k = 0; k < n; ++k) hs[k] = 0.75 + 0.5 * double(k);
      hs[c2->index] = li;
      DiagonalOperator h(hs);
      push_step(steps,
                "f(H) = f(H) f(Pi), lambda_i = " + num(li),
                evaluate(f, h), evaluate(f, h) * evaluate(f, pi));
      push_step(steps, "f(H) f(Pi) = f(H Pi) = f(lambda_i Pi)",
                evaluate(f, h) * evaluate(f, pi),
                evaluate(f, h.entrywise_product(pi)));
    }
    const std::pair<double, double> pairs[] = {{1.0, 1.0}, {2.0, 0.5},
                                               {-1.5, 2.0}};
    for (auto [la, lb] : pairs) {
      std::vector<double> a(n, 0.0), b(n, 0.0);
      a[c2->index] = la;
      b[c2->index] = lb;
      DiagonalOperator ha(a), hb(b);
      push_step(steps,
                "f(" + num(la) + " Pi) f(" + num(lb) + " Pi) = f(" +
                    num(la * lb) + " Pi)",
                evaluate(f, ha) * evaluate(f, hb),
                evaluate(f, ha.entrywise_product(hb)));
    }
    return steps;
  }

  throw DomainError(ErrorCode::InvalidArgument,
                    "derivation traces cover the constant-one and case-2 "
                    "families");
}

TrialReport random_product_rule_trials(const ProductRuleFunction& f,
                                       std::size_t trials, std::uint64_t seed,
                                       double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::size_t n = f.dimension();
  TrialReport report{trials, 0, seed};
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = dist(rng);
    for (auto& v : b) v = dist(rng);
    if (!check_product_rule(f, DiagonalOperator(a), DiagonalOperator(b), tol))
      ++report.failures;
  }
  return report;
}

}  // namespace hardylab::prodrule
