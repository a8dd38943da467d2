#include "qgcb/canonical.hpp"

#include <fstream>
#include <sstream>

#include "qgcb/errors.hpp"
#include "qgcb/serialize.hpp"

namespace qgcb {

std::string to_string(CbMethod m) {
  switch (m) {
    case CbMethod::Rank1: return "rank1";
    case CbMethod::A2ClosedForm: return "a2";
    case CbMethod::Engine: return "engine";
  }
  return "?";
}

CbMethod parse_cb_method(const std::string& s) {
  if (s == "rank1") return CbMethod::Rank1;
  if (s == "a2") return CbMethod::A2ClosedForm;
  if (s == "engine") return CbMethod::Engine;
  throw ParseError("unknown canonical basis method: " + s);
}

namespace {

bool is_a2(const RootDatum& d) {
  return d.rank() == 2 && d.a(0, 1) == -1 && d.a(1, 0) == -1 && d.d(0) == d.d(1);
}

void add_expansion(AFormExpansion& into, const AFormExpansion& from, const LaurentPoly& scale) {
  for (const auto& [m, c] : from) {
    auto& slot = into[m];
    slot += scale * c;
    if (slot.is_zero()) into.erase(m);
  }
}

}  // namespace

CanonicalElement apply_divided_power(const FAlgebra& f, int i, int a, const CanonicalElement& b) {
  CanonicalElement out;
  FElement x = b.element;
  for (int k = 0; k < a; ++k) x = f.left_mult(i, x);
  out.element = RatFunc(LaurentPoly(1), quantum_factorial(a, f.datum().d(i))) * x;
  for (const auto& [m, c] : b.expansion) {
    auto [m2, binom] = m.prepend(i, a, f.datum().d(i));
    auto& slot = out.expansion[m2];
    slot += binom * c;
    if (slot.is_zero()) out.expansion.erase(m2);
  }
  out.leading = b.leading.prepend(i, a, f.datum().d(i)).first;
  return out;
}

CanonicalBasisProvider::CanonicalBasisProvider(std::shared_ptr<const FAlgebra> f, std::optional<CbMethod> method)
    : f_(std::move(f)), method_(method.value_or(default_method(f_->datum()))) {
  if (!supports(method_, f_->datum()))
    throw DomainError("canonical basis method '" + to_string(method_) + "' does not support datum " + f_->datum().name());
  if (method_ == CbMethod::A2ClosedForm) certifier_ = std::make_unique<CanonicalBasisProvider>(f_, CbMethod::Engine);
}

bool CanonicalBasisProvider::supports(CbMethod m, const RootDatum& d) {
  switch (m) {
    case CbMethod::Rank1: return d.rank() == 1;
    case CbMethod::A2ClosedForm: return is_a2(d);
    case CbMethod::Engine: return d.is_symmetric() || d.is_finite_type();
  }
  return false;
}

CbMethod CanonicalBasisProvider::default_method(const RootDatum& d) {
  if (d.rank() == 1) return CbMethod::Rank1;
  if (is_a2(d)) return CbMethod::A2ClosedForm;
  return CbMethod::Engine;
}

void CanonicalBasisProvider::set_cache_dir(std::optional<std::filesystem::path> dir) {
  cache_dir_ = std::move(dir);
  if (certifier_) certifier_->set_cache_dir(cache_dir_);
}

std::filesystem::path CanonicalBasisProvider::cache_file(const NuWeight& nu) const {
  std::ostringstream key;
  key << "cb_" << to_string(method_) << "_d";
  for (std::size_t i = 0; i < f_->rank(); ++i) key << f_->datum().d(i) << ".";
  key << "_a";
  for (std::size_t i = 0; i < f_->rank(); ++i)
    for (std::size_t j = 0; j < f_->rank(); ++j) key << f_->datum().a(i, j) << ".";
  key << "_nu";
  for (int m : nu.mult) key << m << ".";
  key << "json";
  return *cache_dir_ / key.str();
}

std::shared_ptr<const std::vector<CanonicalElement>> CanonicalBasisProvider::basis(const NuWeight& nu) const {
  if (nu.rank() != f_->rank()) throw DomainError("nu rank mismatch");
  {
    std::lock_guard lock(mutex_);
    if (auto it = bases_.find(nu); it != bases_.end()) return it->second;
  }
  std::optional<std::vector<CanonicalElement>> loaded;
  if (cache_dir_) {
    auto path = cache_file(nu);
    if (std::filesystem::exists(path)) {
      std::ifstream in(path);
      std::stringstream buf;
      buf << in.rdbuf();
      loaded = io::canonical_basis_from_json(*f_, nlohmann::json::parse(buf.str()));
    }
  }
  auto built = std::make_shared<const std::vector<CanonicalElement>>(loaded ? std::move(*loaded) : compute(nu));
  if (cache_dir_ && !loaded) {
    std::filesystem::create_directories(*cache_dir_);
    io::write_file_atomic(cache_file(nu), io::canonical_basis_to_json(nu, *built).dump(1));
  }
  std::lock_guard lock(mutex_);
  return bases_.emplace(nu, built).first->second;
}

std::vector<CanonicalElement> CanonicalBasisProvider::compute(const NuWeight& nu) const {
  switch (method_) {
    case CbMethod::Rank1: return rank1(nu);
    case CbMethod::A2ClosedForm: {
      auto closed = a2_closed_form(nu);
      auto reference = certifier_->basis(nu);
      bool same = closed.size() == reference->size();
      for (const auto& b : closed) {
        bool found = false;
        for (const auto& r : *reference) found = found || r.element == b.element;
        same = same && found;
      }
      if (!same) throw InvariantViolation("A2 closed form disagrees with the engine at nu = " + nu.to_string());
      return closed;
    }
    case CbMethod::Engine: return engine(nu);
  }
  return {};
}

std::vector<CanonicalElement> CanonicalBasisProvider::rank1(const NuWeight& nu) const {
  const int n = nu.mult[0];
  CanonicalElement b;
  if (n > 0) b.leading.factors.push_back({0, n});
  b.expansion[b.leading] = LaurentPoly(1);
  b.element = f_->divided_monomial(b.leading);
  b.eps = {n};
  return {b};
}

std::vector<CanonicalElement> CanonicalBasisProvider::a2_closed_form(const NuWeight& nu) const {
  std::vector<CanonicalElement> out;
  for (int outer = 0; outer < 2; ++outer) {
    const int inner = 1 - outer;
    const int outer_total = nu.mult[outer];
    const int b = nu.mult[inner];
    for (int a = 0; a <= outer_total; ++a) {
      const int c = outer_total - a;
      if (b < a + c) continue;
      DividedMonomial m;
      if (a > 0) m.factors.push_back({outer, a});
      if (b > 0) m.factors.push_back({inner, b});
      if (c > 0) {
        if (!m.factors.empty() && m.factors.back().first == outer)
          throw InvariantViolation("A2 closed form: adjacent equal letters");
        m.factors.push_back({outer, c});
      }
      CanonicalElement e;
      e.leading = m;
      e.expansion[m] = LaurentPoly(1);
      e.element = f_->divided_monomial(m);
      bool dup = false;
      for (const auto& o : out) dup = dup || o.element == e.element;
      if (!dup) out.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<CanonicalElement> CanonicalBasisProvider::engine(const NuWeight& nu) const {
  const std::size_t n = f_->rank();
  if (nu.is_zero()) {
    CanonicalElement one;
    one.element = f_->one();
    one.expansion[DividedMonomial{}] = LaurentPoly(1);
    one.eps.assign(n, 0);
    return {one};
  }
  struct Found {
    CanonicalElement b;
    int a;
  };
  std::vector<std::vector<Found>> strata(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& stratum = strata[i];
    for (int a = nu.mult[i]; a >= 1; --a) {
      NuWeight mu = nu;
      mu.mult[i] -= a;
      auto lower = basis(mu);
      for (const auto& b0 : *lower) {
        if (b0.eps.at(i) != 0) continue;
        CanonicalElement m = apply_divided_power(*f_, static_cast<int>(i), a, b0);
        // Remove the nonnegative-degree part of (m, b') for every b' with
        // epsilon_i(b') > a, largest degree first.
        for (int guard = 0;; ++guard) {
          if (guard > 100000) throw InvariantViolation("canonical basis engine: reduction does not terminate");
          int best_degree = -1;
          std::size_t best = 0;
          Rational best_coeff;
          for (std::size_t k = 0; k < stratum.size(); ++k) {
            if (stratum[k].a <= a) continue;
            auto series = f_->inner_product(m.element, stratum[k].b.element).expand_at_infinity(0);
            if (series.empty()) continue;
            auto top = std::prev(series.end());
            if (top->first > best_degree) {
              best_degree = top->first;
              best = k;
              best_coeff = top->second;
            }
          }
          if (best_degree < 0) break;
          if (best_coeff.get_den() != 1)
            throw InvariantViolation("canonical basis engine: non-integral pairing at nu = " + nu.to_string());
          LaurentPoly step = LaurentPoly::monomial(best_coeff.get_num(), best_degree);
          if (best_degree > 0) step += LaurentPoly::monomial(best_coeff.get_num(), -best_degree);
          m.element = m.element - RatFunc(step) * stratum[best].b.element;
          add_expansion(m.expansion, stratum[best].b.expansion, -step);
        }
        stratum.push_back({std::move(m), a});
      }
    }
  }
  std::vector<CanonicalElement> out;
  for (std::size_t i = 0; i < n; ++i)
    for (auto& found : strata[i]) {
      bool merged = false;
      for (auto& e : out)
        if (e.element == found.b.element) {
          e.eps[i] = found.a;
          merged = true;
          break;
        }
      if (!merged) {
        found.b.eps.assign(n, 0);
        found.b.eps[i] = found.a;
        out.push_back(std::move(found.b));
      }
    }
  if (out.size() != f_->dim(nu))
    throw InvariantViolation("canonical basis engine: found " + std::to_string(out.size()) + " elements, dim f_nu = " +
                             std::to_string(f_->dim(nu)) + " at nu = " + nu.to_string());
  return out;
}

std::shared_ptr<const Matrix<RatFunc>> CanonicalBasisProvider::matrix(const NuWeight& nu) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = matrices_.find(nu); it != matrices_.end()) return it->second;
  }
  auto b = basis(nu);
  auto m = std::make_shared<Matrix<RatFunc>>(f_->dim(nu), b->size());
  for (std::size_t k = 0; k < b->size(); ++k) m->set_column(k, (*b)[k].element.coords);
  std::lock_guard lock(mutex_);
  return matrices_.emplace(nu, m).first->second;
}

std::vector<RatFunc> CanonicalBasisProvider::coordinates(const FElement& x) const {
  auto m = matrix(x.nu);
  Matrix<RatFunc> rhs(x.coords.size(), 1);
  rhs.set_column(0, x.coords);
  return solve_unique(*m, rhs, "canonical basis coordinates").column(0);
}

CbCertificate CanonicalBasisProvider::certify(const NuWeight& nu, int series_depth) const {
  CbCertificate cert;
  cert.nu = nu;
  auto b = basis(nu);
  cert.size = b->size();
  cert.expected_dim = f_->dim(nu);
  if (cert.size != cert.expected_dim)
    cert.failures.push_back("size " + std::to_string(cert.size) + " differs from dim " + std::to_string(cert.expected_dim));
  if (f_->datum().is_finite_type()) {
    auto kostant = f_->datum().positive_root_partitions(nu);
    if (static_cast<long long>(cert.expected_dim) != kostant)
      cert.failures.push_back("dim f_nu differs from the positive-root partition count");
  }
  if (rank(*matrix(nu)) != cert.size) cert.failures.push_back("elements are linearly dependent");
  for (std::size_t k = 0; k < b->size(); ++k) {
    const auto& e = (*b)[k];
    if (f_->bar(e.element) != e.element) cert.failures.push_back(e.label() + " is not bar-invariant");
    if (f_->from_expansion(nu, e.expansion) != e.element)
      cert.failures.push_back(e.label() + " differs from its divided-monomial expansion");
    for (std::size_t l = k; l < b->size(); ++l) {
      auto series = f_->inner_product(e.element, (*b)[l].element).expand_at_infinity(-series_depth);
      for (const auto& [deg, c] : series) {
        bool bad = c.get_den() != 1;
        if (deg > 0) bad = true;
        if (deg == 0) bad = bad || c != Rational(k == l ? 1 : 0);
        if (bad) {
          cert.failures.push_back("(" + e.label() + ", " + (*b)[l].label() + ") fails almost orthonormality at degree " +
                                  std::to_string(deg));
          break;
        }
      }
      if (k == l && !series.count(0)) cert.failures.push_back("(" + e.label() + ", " + e.label() + ") has no constant term");
    }
  }
  return cert;
}

}  // namespace qgcb
