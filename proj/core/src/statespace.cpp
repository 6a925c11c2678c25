#include "hardylab/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "json.hpp"

namespace hardylab::statespace {

namespace {

bool label_before(const ModeLabel& a, const ModeLabel& b) {
  // gamma sorts last, everything else lexicographically
  if (is_gamma(a) != is_gamma(b)) return is_gamma(b);
  return a.name < b.name;
}

}  // namespace

ModeLabel tensor(const ModeLabel& a, const ModeLabel& b) {
  if (is_gamma(a) || is_gamma(b))
    throw DomainError(ErrorCode::InvalidArgument,
                      "gamma is a joint label and has no tensor factors");
  return ModeLabel{a.name + b.name};
}

Basis::Basis(std::vector<ModeLabel> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end(), label_before);
  if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
    throw DomainError(ErrorCode::InvalidArgument,
                      "basis labels must be pairwise distinct");
}

Basis Basis::product(const Basis& plus, const Basis& minus, bool with_gamma) {
  std::vector<ModeLabel> out;
  out.reserve(plus.size() * minus.size() + (with_gamma ? 1 : 0));
  for (const auto& p : plus.labels())
    for (const auto& m : minus.labels()) out.push_back(tensor(p, m));
  if (with_gamma) out.push_back(kGamma);
  return Basis(std::move(out));
}

bool Basis::contains(const ModeLabel& l) const {
  return std::find(labels_.begin(), labels_.end(), l) != labels_.end();
}

std::size_t Basis::index_of(const ModeLabel& l) const {
  auto it = std::find(labels_.begin(), labels_.end(), l);
  if (it == labels_.end())
    throw DomainError(ErrorCode::BasisMismatch,
                      "label '" + l.name + "' is not in the basis");
  return static_cast<std::size_t>(it - labels_.begin());
}

Basis Basis::with_gamma() const {
  if (contains(kGamma)) return *this;
  auto ls = labels_;
  ls.push_back(kGamma);
  return Basis(std::move(ls));
}

StateVector::StateVector(Basis basis, std::vector<Complex> amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (basis_.size() != amplitudes_.size())
    throw DomainError(ErrorCode::DimensionMismatch,
                      "amplitude count does not match basis size");
  for (const auto& a : amplitudes_)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw DomainError(ErrorCode::InvalidArgument,
                        "amplitudes must be finite");
}

StateVector StateVector::basis_state(const Basis& b, const ModeLabel& l) {
  std::vector<Complex> a(b.size(), Complex{0.0, 0.0});
  a[b.index_of(l)] = Complex{1.0, 0.0};
  return StateVector(b, std::move(a));
}

StateVector StateVector::from_terms(
    const Basis& b, std::span<const std::pair<ModeLabel, Complex>> terms) {
  std::vector<Complex> a(b.size(), Complex{0.0, 0.0});
  for (const auto& [label, value] : terms) a[b.index_of(label)] += value;
  return StateVector(b, std::move(a));
}

StateVector StateVector::from_terms(
    const Basis& b,
    std::initializer_list<std::pair<ModeLabel, Complex>> terms) {
  return from_terms(
      b, std::span<const std::pair<ModeLabel, Complex>>(terms.begin(),
                                                        terms.size()));
}

Complex StateVector::amplitude(const ModeLabel& l) const {
  return amplitudes_[basis_.index_of(l)];
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

bool StateVector::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
  double n = norm();
  if (n == 0.0)
    throw DomainError(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  return scaled(Complex{1.0 / n, 0.0});
}

StateVector StateVector::scaled(Complex factor) const {
  auto a = amplitudes_;
  for (auto& v : a) v *= factor;
  return StateVector(basis_, std::move(a));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (!(a.basis() == b.basis()))
    throw DomainError(ErrorCode::BasisMismatch,
                      "inner product requires identical bases");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.amplitudes().size(); ++i)
    s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  return s;
}

LinearMap::LinearMap(Basis domain, Basis codomain, std::vector<Complex> matrix)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      matrix_(std::move(matrix)) {}

LinearMap::LinearMap(Basis domain, Basis codomain,
                     std::span<const MapEntry> entries)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      matrix_(domain_.size() * codomain_.size(), Complex{0.0, 0.0}) {
  for (const auto& e : entries) {
    std::size_t r = codomain_.index_of(e.to);
    std::size_t c = domain_.index_of(e.from);
    matrix_[r * domain_.size() + c] += e.value;
  }
}

LinearMap::LinearMap(Basis domain, Basis codomain,
                     std::initializer_list<MapEntry> entries)
    : LinearMap(std::move(domain), std::move(codomain),
                std::span<const MapEntry>(entries.begin(), entries.size())) {}

LinearMap LinearMap::identity(const Basis& b) {
  std::vector<Complex> m(b.size() * b.size(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < b.size(); ++i)
    m[i * b.size() + i] = Complex{1.0, 0.0};
  return LinearMap(b, b, std::move(m));
}

LinearMap LinearMap::tensor(const LinearMap& plus, const LinearMap& minus) {
  Basis domain = Basis::product(plus.domain(), minus.domain());
  Basis codomain = Basis::product(plus.codomain(), minus.codomain());
  std::vector<Complex> m(domain.size() * codomain.size(), Complex{0.0, 0.0});
  for (std::size_t rp = 0; rp < plus.codomain().size(); ++rp)
    for (std::size_t cp = 0; cp < plus.domain().size(); ++cp) {
      Complex vp = plus.matrix_[rp * plus.domain().size() + cp];
      if (vp == Complex{0.0, 0.0}) continue;
      for (std::size_t rm = 0; rm < minus.codomain().size(); ++rm)
        for (std::size_t cm = 0; cm < minus.domain().size(); ++cm) {
          Complex vm = minus.matrix_[rm * minus.domain().size() + cm];
          if (vm == Complex{0.0, 0.0}) continue;
          std::size_t r = codomain.index_of(statespace::tensor(
              plus.codomain().label(rp), minus.codomain().label(rm)));
          std::size_t c = domain.index_of(statespace::tensor(
              plus.domain().label(cp), minus.domain().label(cm)));
          m[r * domain.size() + c] = vp * vm;
        }
    }
  return LinearMap(std::move(domain), std::move(codomain), std::move(m));
}

LinearMap LinearMap::extended_with_gamma() const {
  Basis domain = domain_.with_gamma();
  Basis codomain = codomain_.with_gamma();
  std::vector<Complex> m(domain.size() * codomain.size(), Complex{0.0, 0.0});
  for (std::size_t r = 0; r < codomain_.size(); ++r)
    for (std::size_t c = 0; c < domain_.size(); ++c)
      m[codomain.index_of(codomain_.label(r)) * domain.size() +
        domain.index_of(domain_.label(c))] = matrix_[r * domain_.size() + c];
  m[codomain.index_of(kGamma) * domain.size() + domain.index_of(kGamma)] =
      Complex{1.0, 0.0};
  return LinearMap(std::move(domain), std::move(codomain), std::move(m));
}

LinearMap LinearMap::adjoint() const {
  std::vector<Complex> m(matrix_.size(), Complex{0.0, 0.0});
  for (std::size_t r = 0; r < codomain_.size(); ++r)
    for (std::size_t c = 0; c < domain_.size(); ++c)
      m[c * codomain_.size() + r] = std::conj(matrix_[r * domain_.size() + c]);
  return LinearMap(codomain_, domain_, std::move(m));
}

Complex LinearMap::entry(const ModeLabel& to, const ModeLabel& from) const {
  return matrix_[codomain_.index_of(to) * domain_.size() +
                 domain_.index_of(from)];
}

bool LinearMap::is_isometry(double tol) const {
  // M^dagger M = identity on the domain
  for (std::size_t c1 = 0; c1 < domain_.size(); ++c1)
    for (std::size_t c2 = 0; c2 < domain_.size(); ++c2) {
      Complex s{0.0, 0.0};
      for (std::size_t r = 0; r < codomain_.size(); ++r)
        s += std::conj(matrix_[r * domain_.size() + c1]) *
             matrix_[r * domain_.size() + c2];
      Complex expected = c1 == c2 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      if (std::abs(s - expected) > tol) return false;
    }
  return true;
}

StateVector apply(const LinearMap& m, const StateVector& v) {
  if (!(v.basis() == m.domain()))
    throw DomainError(ErrorCode::BasisMismatch,
                      "state basis does not match the map domain");
  std::vector<Complex> out(m.codomain().size(), Complex{0.0, 0.0});
  for (std::size_t r = 0; r < m.codomain().size(); ++r) {
    Complex s{0.0, 0.0};
    for (std::size_t c = 0; c < m.domain().size(); ++c)
      s += m.matrix_[r * m.domain().size() + c] * v.amplitudes()[c];
    out[r] = s;
  }
  return StateVector(m.codomain(), std::move(out));
}

LinearMap compose(const LinearMap& second, const LinearMap& first) {
  if (!(first.codomain() == second.domain()))
    throw DomainError(ErrorCode::BasisMismatch,
                      "composition requires matching intermediate bases");
  std::size_t n = first.domain().size();
  std::size_t k = first.codomain().size();
  std::size_t m = second.codomain().size();
  std::vector<Complex> out(n * m, Complex{0.0, 0.0});
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex s{0.0, 0.0};
      for (std::size_t j = 0; j < k; ++j)
        s += second.matrix_[r * k + j] * first.matrix_[j * n + c];
      out[r * n + c] = s;
    }
  return LinearMap(first.domain(), second.codomain(), std::move(out));
}

Projector::Projector(Basis b, std::vector<bool> mask)
    : basis_(std::move(b)), diagonal_(true), mask_(std::move(mask)) {}

Projector::Projector(Basis b, std::vector<Complex> matrix)
    : basis_(std::move(b)), diagonal_(false), matrix_(std::move(matrix)) {}

Projector Projector::onto_labels(const Basis& b,
                                 std::span<const ModeLabel> labels) {
  std::vector<bool> mask(b.size(), false);
  for (const auto& l : labels) mask[b.index_of(l)] = true;
  return Projector(b, std::move(mask));
}

Projector Projector::onto_labels(const Basis& b,
                                 std::initializer_list<ModeLabel> labels) {
  return onto_labels(
      b, std::span<const ModeLabel>(labels.begin(), labels.size()));
}

Projector Projector::from_matrix(const Basis& b, std::vector<Complex> matrix) {
  std::size_t n = b.size();
  if (matrix.size() != n * n)
    throw DomainError(ErrorCode::DimensionMismatch,
                      "projector matrix must be square over the basis");
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (std::abs(matrix[r * n + c] - std::conj(matrix[c * n + r])) >
          kStateTol)
        throw DomainError(ErrorCode::InvalidArgument,
                          "projector matrix must be Hermitian");
      Complex s{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j)
        s += matrix[r * n + j] * matrix[j * n + c];
      if (std::abs(s - matrix[r * n + c]) > kStateTol)
        throw DomainError(ErrorCode::InvalidArgument,
                          "projector matrix must be idempotent");
    }
  return Projector(b, std::move(matrix));
}

Projector Projector::identity(const Basis& b) {
  return Projector(b, std::vector<bool>(b.size(), true));
}

Projector Projector::zero(const Basis& b) {
  return Projector(b, std::vector<bool>(b.size(), false));
}

const std::vector<bool>& Projector::mask() const {
  if (!diagonal_)
    throw DomainError(ErrorCode::InvalidArgument,
                      "matrix-form projector has no label mask");
  return mask_;
}

std::size_t Projector::rank() const {
  if (diagonal_) {
    std::size_t r = 0;
    for (bool m : mask_) r += m ? 1 : 0;
    return r;
  }
  double tr = 0.0;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    tr += matrix_[i * basis_.size() + i].real();
  return static_cast<std::size_t>(std::lround(tr));
}

Projector Projector::complemented() const {
  if (diagonal_) {
    auto m = mask_;
    m.flip();
    return Projector(basis_, std::move(m));
  }
  auto m = matrix_;
  std::size_t n = basis_.size();
  for (auto& v : m) v = -v;
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] += Complex{1.0, 0.0};
  return Projector(basis_, std::move(m));
}

Projector Projector::intersected(const Projector& other) const {
  if (!(basis_ == other.basis_))
    throw DomainError(ErrorCode::BasisMismatch,
                      "projector product requires identical bases");
  if (!diagonal_ || !other.diagonal_)
    throw DomainError(ErrorCode::InvalidArgument,
                      "projector product is defined for diagonal projectors");
  std::vector<bool> m(basis_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = mask_[i] && other.mask_[i];
  return Projector(basis_, std::move(m));
}

std::vector<Complex> Projector::matrix() const {
  if (!diagonal_) return matrix_;
  std::size_t n = basis_.size();
  std::vector<Complex> m(n * n, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i)
    if (mask_[i]) m[i * n + i] = Complex{1.0, 0.0};
  return m;
}

ProjectionResult project(const Projector& p, const StateVector& v) {
  if (!(v.basis() == p.basis()))
    throw DomainError(ErrorCode::BasisMismatch,
                      "projector basis does not match the state basis");
  double total = v.norm_squared();
  if (total == 0.0)
    throw DomainError(ErrorCode::ZeroVector, "cannot project a zero vector");
  std::vector<Complex> out(v.amplitudes().size(), Complex{0.0, 0.0});
  if (p.is_diagonal()) {
    for (std::size_t i = 0; i < out.size(); ++i)
      if (p.mask()[i]) out[i] = v.amplitudes()[i];
  } else {
    std::size_t n = p.basis().size();
    const auto& m = p.matrix_;
    for (std::size_t r = 0; r < n; ++r) {
      Complex s{0.0, 0.0};
      for (std::size_t c = 0; c < n; ++c) s += m[r * n + c] * v.amplitudes()[c];
      out[r] = s;
    }
  }
  StateVector projected(v.basis(), std::move(out));
  double prob = projected.norm_squared() / total;
  prob = std::min(std::max(prob, 0.0), 1.0);
  return ProjectionResult{std::move(projected), prob};
}

std::string to_json(const StateVector& v) {
  nlohmann::json j;
  auto labels = nlohmann::json::array();
  auto re = nlohmann::json::array();
  auto im = nlohmann::json::array();
  for (std::size_t i = 0; i < v.basis().size(); ++i) {
    labels.push_back(v.basis().label(i).name);
    re.push_back(v.amplitudes()[i].real());
    im.push_back(v.amplitudes()[i].imag());
  }
  j["basis"] = std::move(labels);
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j.dump();
}

StateVector state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(ErrorCode::InvalidArgument,
                      std::string("invalid state JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("basis") || !j.contains("re") ||
      !j.contains("im"))
    throw DomainError(ErrorCode::InvalidArgument,
                      "state JSON must contain basis, re and im arrays");
  auto labels = j.at("basis");
  auto re = j.at("re");
  auto im = j.at("im");
  if (labels.size() != re.size() || labels.size() != im.size())
    throw DomainError(ErrorCode::DimensionMismatch,
                      "basis, re and im must have equal lengths");
  std::vector<std::pair<ModeLabel, Complex>> terms;
  terms.reserve(labels.size());
  std::vector<ModeLabel> basis_labels;
  basis_labels.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ModeLabel l{labels[i].get<std::string>()};
    basis_labels.push_back(l);
    terms.emplace_back(l, Complex{re[i].get<double>(), im[i].get<double>()});
  }
  Basis b(std::move(basis_labels));
  return StateVector::from_terms(b, terms);
}

}  // namespace hardylab::statespace
