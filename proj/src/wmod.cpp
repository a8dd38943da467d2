#include "qgcb/wmod.hpp"

#include <algorithm>

#include "qgcb/errors.hpp"

namespace qgcb {

std::string to_string(ModuleKind k) {
  switch (k) {
    case ModuleKind::Trivial: return "trivial";
    case ModuleKind::Verma: return "verma";
    case ModuleKind::Highest: return "highest";
    case ModuleKind::Lowest: return "lowest";
    case ModuleKind::Tensor: return "tensor";
  }
  return "?";
}

void prune(Vec& v) { std::erase_if(v, [](const auto& kv) { return kv.second.is_zero(); }); }

void add_scaled(Vec& into, const Vec& v, const RatFunc& c) {
  if (c.is_zero()) return;
  for (const auto& [k, x] : v) {
    auto& slot = into[k];
    slot += c * x;
    if (slot.is_zero()) into.erase(k);
  }
}

void add_scaled(Vec& into, const SparseVector& v, const RatFunc& c) {
  if (c.is_zero()) return;
  for (const auto& [k, x] : v) {
    auto& slot = into[k];
    slot += c * RatFunc(x);
    if (slot.is_zero()) into.erase(k);
  }
}

Vec bar_coefficients(const Vec& v) {
  Vec out;
  for (const auto& [k, c] : v) out.emplace(k, c.bar());
  return out;
}

bool is_laurent(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const auto& kv) { return kv.second.is_laurent(); });
}

SparseVector to_sparse(const Vec& v) {
  SparseVector out;
  for (const auto& [k, c] : v) {
    auto p = c.to_laurent();
    if (!p) throw InvariantViolation("coefficient " + c.to_string() + " is not in A");
    if (!p->is_zero()) out.emplace(k, *p);
  }
  return out;
}

Vec to_vec(const SparseVector& v) {
  Vec out;
  for (const auto& [k, c] : v) out.emplace(k, RatFunc(c));
  return out;
}

namespace {

const std::vector<std::size_t> kEmptyGrade;

std::vector<int> negated(const std::vector<int>& v) {
  std::vector<int> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = -v[k];
  return out;
}

/// Coordinates (over B_nu) of vectors given as columns, asserted to lie in A.
SparseVector column_to_sparse(const std::vector<RatFunc>& col, const std::vector<std::size_t>& index_of,
                              const std::string& what) {
  SparseVector out;
  for (std::size_t k = 0; k < col.size(); ++k) {
    if (col[k].is_zero()) continue;
    auto p = col[k].to_laurent();
    if (!p) throw InvariantViolation(what + ": coefficient " + col[k].to_string() + " is not in A");
    out.emplace(index_of.at(k), *p);
  }
  return out;
}

/// Generator actions of M(lambda) on canonical-basis coordinates.
class VermaActions {
 public:
  VermaActions(const CanonicalBasisProvider& cb, Weight lambda) : cb_(cb), f_(cb.algebra()), lambda_(std::move(lambda)) {}

  const Matrix<RatFunc>& cb_inverse(const NuWeight& nu) {
    auto it = inv_.find(nu);
    if (it == inv_.end()) it = inv_.emplace(nu, inverse(*cb_.matrix(nu), "canonical basis at " + nu.to_string())).first;
    return it->second;
  }

  /// E_i on the word w acting on the highest weight vector 1:
  /// E_i(theta_j w') = theta_j E_i(w') + delta_ij [<i, lambda - |w'|>]_i w'.
  const WordComb& e_word(int i, const Word& w) {
    auto key = std::make_pair(i, w);
    if (auto it = eword_.find(key); it != eword_.end()) return it->second;
    WordComb out;
    if (!w.empty()) {
      Word tail(w.begin() + 1, w.end());
      for (const auto& [u, c] : e_word(i, tail)) {
        Word v{w.front()};
        v.insert(v.end(), u.begin(), u.end());
        out[v] += c;
      }
      if (w.front() == i) {
        int pairing = lambda_.coords[i];
        for (int j : tail) pairing -= f_.datum().a(i, j);
        out[tail] += signed_quantum_integer(pairing, f_.datum().d(i));
      }
      std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    }
    return eword_.emplace(key, std::move(out)).first->second;
  }

  /// dim f_{nu-i} x dim f_nu, canonical-basis coordinates.
  Matrix<RatFunc> e_matrix(int i, const NuWeight& nu) {
    NuWeight lower = nu - NuWeight::simple(f_.rank(), i);
    auto space = f_.space(nu);
    std::vector<FElement> images;
    for (const auto& w : space->basis) {
      auto key = std::make_pair(i, w);
      auto it = eimage_.find(key);
      if (it == eimage_.end()) it = eimage_.emplace(key, f_.project(lower, e_word(i, w))).first;
      images.push_back(it->second);
    }
    auto basis = cb_.basis(nu);
    Matrix<RatFunc> m(f_.dim(lower), basis->size());
    for (std::size_t k = 0; k < basis->size(); ++k) {
      FElement img = f_.zero(lower);
      for (std::size_t a = 0; a < space->dim(); ++a)
        if (!(*basis)[k].element.coords[a].is_zero()) img = img + (*basis)[k].element.coords[a] * images[a];
      m.set_column(k, cb_inverse(lower) * img.coords);
    }
    return m;
  }

  /// dim f_{nu+i} x dim f_nu: left multiplication by theta_i.
  Matrix<RatFunc> f_matrix(int i, const NuWeight& nu) {
    NuWeight upper = nu + NuWeight::simple(f_.rank(), i);
    auto basis = cb_.basis(nu);
    Matrix<RatFunc> m(f_.dim(upper), basis->size());
    for (std::size_t k = 0; k < basis->size(); ++k)
      m.set_column(k, cb_inverse(upper) * f_.left_mult(i, (*basis)[k].element).coords);
    return m;
  }

 private:
  const CanonicalBasisProvider& cb_;
  const FAlgebra& f_;
  Weight lambda_;
  std::map<NuWeight, Matrix<RatFunc>> inv_;
  std::map<std::pair<int, Word>, WordComb> eword_;
  std::map<std::pair<int, Word>, FElement> eimage_;
};

std::vector<NuWeight> nus_up_to(std::size_t rank, int depth) {
  std::vector<NuWeight> out;
  for (int h = 0; h <= depth; ++h)
    for (auto& nu : nu_weights_of_height(rank, h)) out.push_back(nu);
  return out;
}

std::vector<int> content_of(const NuWeight& nu, int sign) {
  std::vector<int> c(nu.mult.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = sign * nu.mult[k];
  return c;
}

}  // namespace

const std::vector<std::size_t>& Module::grade(const std::vector<int>& content) const {
  auto it = grades_.find(content);
  return it == grades_.end() ? kEmptyGrade : it->second;
}

std::vector<std::vector<int>> Module::grades() const {
  std::vector<std::vector<int>> out;
  for (const auto& [g, v] : grades_) out.push_back(g);
  return out;
}

std::optional<std::size_t> Module::find_pair(std::size_t l, std::size_t r) const {
  auto it = pairs_.find({l, r});
  if (it == pairs_.end()) return std::nullopt;
  return it->second;
}

void Module::index_grades() {
  grades_.clear();
  for (std::size_t k = 0; k < basis_.size(); ++k) grades_[basis_[k].content].push_back(k);
}

std::optional<Vec> Module::try_apply_e(std::size_t i, const Vec& v) const {
  Vec out;
  for (const auto& [k, c] : v) {
    const auto& a = e_.at(i).at(k);
    if (!a) return std::nullopt;
    add_scaled(out, *a, c);
  }
  return out;
}

std::optional<Vec> Module::try_apply_f(std::size_t i, const Vec& v) const {
  Vec out;
  for (const auto& [k, c] : v) {
    const auto& a = f_.at(i).at(k);
    if (!a) return std::nullopt;
    add_scaled(out, *a, c);
  }
  return out;
}

Vec Module::apply_e(std::size_t i, const Vec& v) const {
  auto r = try_apply_e(i, v);
  if (!r) throw TruncationError("E_" + std::to_string(i) + " leaves the depth-" + std::to_string(depth_bound_) +
                                " truncation of " + name_);
  return *r;
}

Vec Module::apply_f(std::size_t i, const Vec& v) const {
  auto r = try_apply_f(i, v);
  if (!r) throw TruncationError("F_" + std::to_string(i) + " leaves the depth-" + std::to_string(depth_bound_) +
                                " truncation of " + name_);
  return *r;
}

Vec Module::apply_k(std::size_t i, const Vec& v) const {
  Vec out;
  for (const auto& [k, c] : v) out.emplace(k, c * RatFunc(LaurentPoly::q(datum().k_exponent(i, basis_[k].weight))));
  return out;
}

std::optional<Vec> Module::try_apply_f_word(const Word& w, Vec v) const {
  for (auto it = w.rbegin(); it != w.rend() && !v.empty(); ++it) {
    auto next = try_apply_f(*it, v);
    if (!next) return std::nullopt;
    v = std::move(*next);
  }
  return v;
}

std::optional<Vec> Module::try_apply_e_word(const Word& w, Vec v) const {
  for (auto it = w.rbegin(); it != w.rend() && !v.empty(); ++it) {
    auto next = try_apply_e(*it, v);
    if (!next) return std::nullopt;
    v = std::move(*next);
  }
  return v;
}

Vec Module::apply_minus(const FElement& u, const Vec& v) const {
  auto space = provider_->algebra().space(u.nu);
  Vec out;
  for (std::size_t a = 0; a < space->dim(); ++a) {
    if (u.coords[a].is_zero()) continue;
    auto r = try_apply_f_word(space->basis[a], v);
    if (!r) throw TruncationError("u^- leaves the truncation of " + name_);
    add_scaled(out, *r, u.coords[a]);
  }
  return out;
}

Vec Module::apply_plus(const FElement& u, const Vec& v) const {
  auto space = provider_->algebra().space(u.nu);
  Vec out;
  for (std::size_t a = 0; a < space->dim(); ++a) {
    if (u.coords[a].is_zero()) continue;
    auto r = try_apply_e_word(space->basis[a], v);
    if (!r) throw TruncationError("u^+ leaves the truncation of " + name_);
    add_scaled(out, *r, u.coords[a]);
  }
  return out;
}

std::size_t Module::extremal_vector() const {
  if (kind_ == ModuleKind::Tensor) throw DomainError("extremal_vector: not defined for tensor products");
  return 0;
}

ModulePtr trivial_module(std::shared_ptr<const CanonicalBasisProvider> cb, int depth_bound) {
  auto m = std::make_shared<Module>();
  const std::size_t n = cb->algebra().rank();
  m->kind_ = ModuleKind::Trivial;
  m->provider_ = std::move(cb);
  m->depth_bound_ = depth_bound;
  m->lambda_ = Weight{std::vector<int>(n, 0)};
  m->name_ = "1";
  BasisVector v;
  v.content.assign(n, 0);
  v.weight = m->lambda_;
  v.label = "1";
  v.nu = NuWeight::zero(n);
  m->basis_.push_back(v);
  m->e_.assign(n, {SparseVector{}});
  m->f_.assign(n, {SparseVector{}});
  m->index_grades();
  return m;
}

ModulePtr verma_module(std::shared_ptr<const CanonicalBasisProvider> cb, const Weight& lambda, int depth_bound) {
  if (depth_bound < 0) throw DomainError("depth bound must be >= 0");
  const auto& f = cb->algebra();
  const std::size_t n = f.rank();
  if (lambda.rank() != n) throw DomainError("weight rank mismatch");
  auto m = std::make_shared<Module>();
  m->kind_ = ModuleKind::Verma;
  m->provider_ = cb;
  m->depth_bound_ = depth_bound;
  m->lambda_ = lambda;
  m->name_ = "M" + lambda.to_string();
  m->bounded_below_ = false;
  VermaActions act(*cb, lambda);
  auto nus = nus_up_to(n, depth_bound);
  std::map<NuWeight, std::vector<std::size_t>> index_of;
  for (const auto& nu : nus) {
    auto basis = cb->basis(nu);
    for (std::size_t k = 0; k < basis->size(); ++k) {
      BasisVector v;
      v.content = content_of(nu, -1);
      v.weight = lambda - f.datum().to_weight(nu);
      v.depth = nu.height();
      v.label = (*basis)[k].label();
      v.nu = nu;
      v.cb_index = k;
      index_of[nu].push_back(m->basis_.size());
      m->basis_.push_back(std::move(v));
    }
  }
  m->e_.assign(n, std::vector<std::optional<SparseVector>>(m->size()));
  m->f_.assign(n, std::vector<std::optional<SparseVector>>(m->size()));
  for (const auto& nu : nus) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& here = index_of[nu];
      if (nu.mult[i] > 0) {
        auto e = act.e_matrix(static_cast<int>(i), nu);
        const auto& there = index_of[nu - NuWeight::simple(n, i)];
        for (std::size_t k = 0; k < here.size(); ++k)
          m->e_[i][here[k]] = column_to_sparse(e.column(k), there, "Verma E action");
      } else {
        for (auto idx : here) m->e_[i][idx] = SparseVector{};
      }
      if (nu.height() < depth_bound) {
        auto fm = act.f_matrix(static_cast<int>(i), nu);
        const auto& there = index_of[nu + NuWeight::simple(n, i)];
        for (std::size_t k = 0; k < here.size(); ++k)
          m->f_[i][here[k]] = column_to_sparse(fm.column(k), there, "Verma F action");
      }
    }
  }
  m->index_grades();
  return m;
}

ModulePtr simple_quotient(std::shared_ptr<const CanonicalBasisProvider> cb, const Weight& lambda, int depth_bound) {
  if (depth_bound < 0) throw DomainError("depth bound must be >= 0");
  if (!lambda.is_dominant()) throw DomainError("simple_quotient: weight " + lambda.to_string() + " is not dominant");
  const auto& f = cb->algebra();
  const std::size_t n = f.rank();
  if (lambda.rank() != n) throw DomainError("weight rank mismatch");
  VermaActions act(*cb, lambda);
  // One level beyond the bound so that F on the deepest vectors is known.
  auto nus = nus_up_to(n, depth_bound + 1);

  struct Level {
    Matrix<RatFunc> functionals;          // independent Shapovalov rows
    std::vector<std::size_t> survivors;   // canonical-basis indices with nonzero image
    Matrix<RatFunc> projection;           // M_nu -> L_nu in survivor coordinates
  };
  std::map<NuWeight, Level> levels;
  std::map<std::pair<NuWeight, std::size_t>, Matrix<RatFunc>> e_mats;
  for (const auto& nu : nus) {
    const std::size_t dim = f.dim(nu);
    Level lv;
    if (nu.is_zero()) {
      lv.functionals = Matrix<RatFunc>::identity(1);
    } else {
      std::vector<std::vector<RatFunc>> rows;
      for (std::size_t i = 0; i < n; ++i) {
        if (nu.mult[i] == 0) continue;
        const auto& below = levels.at(nu - NuWeight::simple(n, i));
        if (below.functionals.rows() == 0) continue;
        auto& e = e_mats.emplace(std::make_pair(nu, i), act.e_matrix(static_cast<int>(i), nu)).first->second;
        auto composed = below.functionals * e;
        for (std::size_t r = 0; r < composed.rows(); ++r) {
          std::vector<RatFunc> row(dim);
          for (std::size_t c = 0; c < dim; ++c) row[c] = composed(r, c);
          rows.push_back(std::move(row));
        }
      }
      Matrix<RatFunc> all(rows.size(), dim);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < dim; ++c) all(r, c) = rows[r][c];
      auto ech = row_reduce(all);
      lv.functionals = Matrix<RatFunc>(ech.rank(), dim);
      for (std::size_t r = 0; r < ech.rank(); ++r)
        for (std::size_t c = 0; c < dim; ++c) lv.functionals(r, c) = ech.reduced(r, c);
    }
    const std::size_t r = lv.functionals.rows();
    for (std::size_t c = 0; c < dim; ++c) {
      bool nonzero = false;
      for (std::size_t k = 0; k < r && !nonzero; ++k) nonzero = !lv.functionals(k, c).is_zero();
      if (nonzero) lv.survivors.push_back(c);
    }
    Matrix<RatFunc> q(r, lv.survivors.size());
    for (std::size_t k = 0; k < r; ++k)
      for (std::size_t c = 0; c < lv.survivors.size(); ++c) q(k, c) = lv.functionals(k, lv.survivors[c]);
    if (lv.survivors.size() != r || rank(q) != r)
      throw InvariantViolation("simple quotient at nu = " + nu.to_string() +
                               ": nonzero images of the canonical basis are not a basis");
    lv.projection = r ? inverse(q, "simple quotient projection") * lv.functionals : Matrix<RatFunc>(0, dim);
    levels.emplace(nu, std::move(lv));
  }

  auto m = std::make_shared<Module>();
  m->kind_ = ModuleKind::Highest;
  m->provider_ = cb;
  m->depth_bound_ = depth_bound;
  m->lambda_ = lambda;
  m->name_ = "L" + lambda.to_string();
  m->bounded_below_ = false;
  std::map<NuWeight, std::vector<std::size_t>> index_of;
  for (const auto& nu : nus) {
    if (nu.height() > depth_bound) continue;
    auto basis = cb->basis(nu);
    for (auto k : levels.at(nu).survivors) {
      BasisVector v;
      v.content = content_of(nu, -1);
      v.weight = lambda - f.datum().to_weight(nu);
      v.depth = nu.height();
      v.label = (*basis)[k].label();
      v.nu = nu;
      v.cb_index = k;
      index_of[nu].push_back(m->basis_.size());
      m->basis_.push_back(std::move(v));
    }
  }
  m->e_.assign(n, std::vector<std::optional<SparseVector>>(m->size()));
  m->f_.assign(n, std::vector<std::optional<SparseVector>>(m->size()));
  for (const auto& nu : nus) {
    if (nu.height() > depth_bound) continue;
    const auto& lv = levels.at(nu);
    const auto& here = index_of[nu];
    for (std::size_t i = 0; i < n; ++i) {
      if (nu.mult[i] > 0 && !here.empty()) {
        NuWeight lower = nu - NuWeight::simple(n, i);
        auto key = std::make_pair(nu, i);
        auto it = e_mats.find(key);
        if (it == e_mats.end()) it = e_mats.emplace(key, act.e_matrix(static_cast<int>(i), nu)).first;
        auto img = levels.at(lower).projection * it->second;
        for (std::size_t k = 0; k < here.size(); ++k)
          m->e_[i][here[k]] = column_to_sparse(img.column(lv.survivors[k]), index_of[lower], "L(lambda) E action");
      } else {
        for (auto idx : here) m->e_[i][idx] = SparseVector{};
      }
      if (here.empty()) continue;
      NuWeight upper = nu + NuWeight::simple(n, i);
      const auto& up = levels.at(upper);
      if (up.survivors.empty()) {
        for (auto idx : here) m->f_[i][idx] = SparseVector{};
        continue;
      }
      auto img = up.projection * act.f_matrix(static_cast<int>(i), nu);
      for (std::size_t k = 0; k < here.size(); ++k) {
        auto col = img.column(lv.survivors[k]);
        if (upper.height() > depth_bound) {
          bool zero = std::all_of(col.begin(), col.end(), [](const RatFunc& c) { return c.is_zero(); });
          if (zero) m->f_[i][here[k]] = SparseVector{};
          continue;
        }
        m->f_[i][here[k]] = column_to_sparse(col, index_of[upper], "L(lambda) F action");
      }
    }
  }
  m->index_grades();
  return m;
}

ModulePtr omega_twist(const ModulePtr& src) {
  if (src->kind() == ModuleKind::Tensor) throw DomainError("omega_twist: defined for leaf modules only");
  if (src->kind() == ModuleKind::Verma) throw DomainError("omega_twist: lowest-weight Verma modules are not modelled");
  if (src->kind() == ModuleKind::Trivial) return src;
  auto m = std::make_shared<Module>(*src);
  switch (src->kind()) {
    case ModuleKind::Highest: m->kind_ = ModuleKind::Lowest; break;
    case ModuleKind::Lowest: m->kind_ = ModuleKind::Highest; break;
    default: break;
  }
  const bool twisted = m->kind_ == ModuleKind::Lowest;
  m->name_ = twisted ? "w" + src->name() : src->name().substr(1);
  m->bounded_above_ = src->bounded_below();
  m->bounded_below_ = src->bounded_above();
  for (auto& v : m->basis_) {
    v.content = negated(v.content);
    v.weight = -v.weight;
    if (src->kind() == ModuleKind::Highest) v.label = "w(" + v.label + ")";
    if (src->kind() == ModuleKind::Lowest && v.label.size() > 3) v.label = v.label.substr(2, v.label.size() - 3);
  }
  std::swap(m->e_, m->f_);
  m->index_grades();
  return m;
}

bool is_admissible(const Module& x, const Module& y) { return x.bounded_below() || y.bounded_above(); }

ModulePtr tensor_product(const ModulePtr& x, const ModulePtr& y, std::optional<int> depth_bound) {
  if (!(x->datum() == y->datum())) throw DomainError("tensor_product: factors over different data");
  if (!is_admissible(*x, *y))
    throw DomainError("tensor_product: " + x->name() + " (x) " + y->name() +
                      " is not admissible: the left factor must be a lowest-weight type or the right factor a "
                      "highest-weight type; no quasi-R-matrix acts on the opposite order");
  const int bound = depth_bound.value_or(std::min(x->depth_bound(), y->depth_bound()));
  if (bound > x->depth_bound() || bound > y->depth_bound())
    throw DomainError("tensor_product: depth bound exceeds a factor's truncation");
  const auto& d = x->datum();
  const std::size_t n = d.rank();
  auto m = std::make_shared<Module>();
  m->kind_ = ModuleKind::Tensor;
  m->provider_ = x->provider_ptr();
  m->depth_bound_ = bound;
  m->lambda_ = d.zero_weight();
  m->name_ = "(" + x->name() + " (x) " + y->name() + ")";
  m->bounded_above_ = x->bounded_above() && y->bounded_above();
  m->bounded_below_ = x->bounded_below() && y->bounded_below();
  m->left_ = x;
  m->right_ = y;
  for (std::size_t a = 0; a < x->size(); ++a) {
    const auto& va = x->vec(a);
    for (std::size_t b = 0; b < y->size(); ++b) {
      const auto& vb = y->vec(b);
      if (va.depth + vb.depth > bound) continue;
      BasisVector v;
      v.content.resize(n);
      for (std::size_t k = 0; k < n; ++k) v.content[k] = va.content[k] + vb.content[k];
      v.weight = va.weight + vb.weight;
      v.depth = va.depth + vb.depth;
      v.label = va.label + " (x) " + vb.label;
      v.left = a;
      v.right = b;
      m->pairs_.emplace(std::make_pair(a, b), m->basis_.size());
      m->basis_.push_back(std::move(v));
    }
  }
  m->e_.assign(n, std::vector<std::optional<SparseVector>>(m->size()));
  m->f_.assign(n, std::vector<std::optional<SparseVector>>(m->size()));
  for (std::size_t i = 0; i < n; ++i) {
    const int di = d.d(i);
    for (std::size_t k = 0; k < m->size(); ++k) {
      const auto& v = m->basis_[k];
      // E_i (x) 1 + K~_i (x) E_i
      {
        const auto& ex = x->e_action(i, v.left);
        const auto& ey = y->e_action(i, v.right);
        std::optional<SparseVector> out;
        if (ex && ey) {
          out = SparseVector{};
          const LaurentPoly kx = LaurentPoly::q(di * x->vec(v.left).weight.coords[i]);
          auto put = [&](std::size_t a, std::size_t b, const LaurentPoly& c) {
            auto idx = m->find_pair(a, b);
            if (!idx) return false;
            auto& slot = (*out)[*idx];
            slot += c;
            if (slot.is_zero()) out->erase(*idx);
            return true;
          };
          bool inside = true;
          for (const auto& [a, c] : *ex) inside = inside && put(a, v.right, c);
          for (const auto& [b, c] : *ey) inside = inside && put(v.left, b, kx * c);
          if (!inside) out.reset();
        }
        m->e_[i][k] = std::move(out);
      }
      // F_i (x) K~_-i + 1 (x) F_i
      {
        const auto& fx = x->f_action(i, v.left);
        const auto& fy = y->f_action(i, v.right);
        std::optional<SparseVector> out;
        if (fx && fy) {
          out = SparseVector{};
          const LaurentPoly ky = LaurentPoly::q(-di * y->vec(v.right).weight.coords[i]);
          auto put = [&](std::size_t a, std::size_t b, const LaurentPoly& c) {
            auto idx = m->find_pair(a, b);
            if (!idx) return false;
            auto& slot = (*out)[*idx];
            slot += c;
            if (slot.is_zero()) out->erase(*idx);
            return true;
          };
          bool inside = true;
          for (const auto& [a, c] : *fx) inside = inside && put(a, v.right, ky * c);
          for (const auto& [b, c] : *fy) inside = inside && put(v.left, b, c);
          if (!inside) out.reset();
        }
        m->f_[i][k] = std::move(out);
      }
    }
  }
  m->index_grades();
  return m;
}

Vec Idempotent::project(const Module& m, const Vec& v) const {
  Vec out;
  for (const auto& [k, c] : v)
    if (m.vec(k).weight == lambda) out.emplace(k, c);
  return out;
}

Vec Idempotent::apply_minus(const Module& m, const FElement& u, const Vec& v) const {
  return m.apply_minus(u, project(m, v));
}

namespace {

std::optional<Vec> apply_power(const Module& m, bool e, std::size_t i, int times, Vec v) {
  for (int t = 0; t < times && !v.empty(); ++t) {
    auto r = e ? m.try_apply_e(i, v) : m.try_apply_f(i, v);
    if (!r) return std::nullopt;
    v = std::move(*r);
  }
  return v;
}

}  // namespace

RelationsReport check_relations(const Module& m) {
  RelationsReport rep;
  const auto& d = m.datum();
  const std::size_t n = d.rank();
  for (std::size_t k = 0; k < m.size(); ++k) {
    const Vec v{{k, RatFunc(1)}};
    const auto& bv = m.vec(k);
    for (std::size_t i = 0; i < n; ++i) {
      // Weight and content shifts.
      for (bool e : {true, false}) {
        auto r = e ? m.try_apply_e(i, v) : m.try_apply_f(i, v);
        if (!r) continue;
        for (const auto& [j, c] : *r) {
          Weight expect = e ? bv.weight + d.simple_root(i) : bv.weight - d.simple_root(i);
          auto content = bv.content;
          content[i] += e ? 1 : -1;
          if (m.vec(j).weight != expect || m.vec(j).content != content)
            rep.failures.push_back(std::string(e ? "E" : "F") + std::to_string(i) + " does not shift the weight of " + bv.label);
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        // [E_i, F_j] = delta_ij (K~_i - K~_-i)/(q_i - q_i^-1)
        auto fv = m.try_apply_f(j, v);
        auto ev = m.try_apply_e(i, v);
        std::optional<Vec> efv, fev;
        if (fv) efv = m.try_apply_e(i, *fv);
        if (ev) fev = m.try_apply_f(j, *ev);
        if (!efv || !fev) {
          ++rep.skipped;
        } else {
          Vec comm = *efv;
          add_scaled(comm, *fev, RatFunc(-1));
          if (i == j) add_scaled(comm, v, -RatFunc(signed_quantum_integer(bv.weight.coords[i], d.d(i))));
          ++rep.checked;
          if (!comm.empty())
            rep.failures.push_back("[E" + std::to_string(i) + ",F" + std::to_string(j) + "] fails on " + bv.label);
        }
        if (i == j) continue;
        // Serre: sum_k (-1)^k [N choose k]_i X_i^{N-k} X_j X_i^k = 0, N = 1 - a_ij.
        const int top = 1 - d.a(i, j);
        for (bool e : {true, false}) {
          Vec total;
          bool known = true;
          for (int t = 0; t <= top && known; ++t) {
            auto a = apply_power(m, e, i, t, v);
            if (!a) { known = false; break; }
            auto b = e ? m.try_apply_e(j, *a) : m.try_apply_f(j, *a);
            if (!b) { known = false; break; }
            auto c = apply_power(m, e, i, top - t, *b);
            if (!c) { known = false; break; }
            RatFunc coef(quantum_binomial(top, t, d.d(i)));
            add_scaled(total, *c, t % 2 ? -coef : coef);
          }
          if (!known) {
            ++rep.skipped;
            continue;
          }
          ++rep.checked;
          if (!total.empty())
            rep.failures.push_back(std::string(e ? "E" : "F") + "-Serre(" + std::to_string(i) + "," + std::to_string(j) +
                                   ") fails on " + bv.label);
        }
      }
      // Local nilpotency along i-strings.
      for (bool e : {true, false}) {
        if (!e && m.kind() == ModuleKind::Verma) continue;
        auto r = apply_power(m, e, i, static_cast<int>(m.size()) + 1, v);
        if (!r) {
          ++rep.skipped;
          continue;
        }
        ++rep.checked;
        if (!r->empty())
          rep.failures.push_back(std::string(e ? "E" : "F") + std::to_string(i) + " is not locally nilpotent on " + bv.label);
      }
    }
  }
  return rep;
}

Vec tensor_with_extremal(const Module& t, const Vec& left_vector) {
  if (t.kind() != ModuleKind::Tensor) throw DomainError("tensor_with_extremal: not a tensor product");
  const std::size_t eta = t.right()->extremal_vector();
  Vec out;
  for (const auto& [k, c] : left_vector) {
    auto idx = t.find_pair(k, eta);
    if (!idx) throw TruncationError("tensor_with_extremal: vector outside the truncation");
    out.emplace(*idx, c);
  }
  return out;
}

Vec extremal_with_tensor(const Module& t, const Vec& right_vector) {
  if (t.kind() != ModuleKind::Tensor) throw DomainError("extremal_with_tensor: not a tensor product");
  const std::size_t eta = t.left()->extremal_vector();
  Vec out;
  for (const auto& [k, c] : right_vector) {
    auto idx = t.find_pair(eta, k);
    if (!idx) throw TruncationError("extremal_with_tensor: vector outside the truncation");
    out.emplace(*idx, c);
  }
  return out;
}

Vec pi_b_apply(const Module& t, const Vec& b_in_left, const FElement& u) {
  if (t.kind() != ModuleKind::Tensor) throw DomainError("pi_b_apply: not a tensor product");
  auto rk = t.right()->kind();
  if (rk != ModuleKind::Highest && rk != ModuleKind::Verma)
    throw DomainError("pi_b_apply: the right factor must be L(lambda) or M(lambda)");
  return t.apply_minus(u, tensor_with_extremal(t, b_in_left));
}

}  // namespace qgcb
