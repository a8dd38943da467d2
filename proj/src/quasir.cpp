#include "qgcb/quasir.hpp"

#include <algorithm>

#include "qgcb/errors.hpp"

namespace qgcb {

ThetaExpansion::ThetaExpansion(std::shared_ptr<const FAlgebra> f) : f_(std::move(f)) {}

namespace {

RatFunc theta_scalar(const RootDatum& d, std::size_t i, const NuWeight& lower) {
  const int di = d.d(i);
  LaurentPoly qi = LaurentPoly::q(di) - LaurentPoly::q(-di);
  return RatFunc(-qi * LaurentPoly::q(-d.dot(lower, i)));
}

void append_rows(std::vector<std::vector<RatFunc>>& rows, const Matrix<RatFunc>& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<RatFunc> row(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] = m(r, c);
    rows.push_back(std::move(row));
  }
}

Matrix<RatFunc> from_rows(const std::vector<std::vector<RatFunc>>& rows, std::size_t cols) {
  Matrix<RatFunc> m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  return m;
}

Matrix<RatFunc> scaled(Matrix<RatFunc> m, const RatFunc& s) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!m(r, c).is_zero()) m(r, c) *= s;
  return m;
}

}  // namespace

const Matrix<RatFunc>& ThetaExpansion::level(const NuWeight& nu) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = levels_.find(nu); it != levels_.end()) return *it->second;
  }
  const auto& d = f_->datum();
  const std::size_t dim = f_->dim(nu);
  Matrix<RatFunc> c;
  if (nu.is_zero()) {
    c = Matrix<RatFunc>::identity(1);
  } else {
    std::vector<std::vector<RatFunc>> lhs, rhs;
    for (std::size_t i = 0; i < f_->rank(); ++i) {
      if (nu.mult[i] == 0) continue;
      NuWeight lower = nu - NuWeight::simple(f_->rank(), i);
      const auto& below = level(lower);
      append_rows(lhs, f_->r_matrix(static_cast<int>(i), nu, true, true));
      append_rows(rhs, scaled(below * f_->left_mult_matrix(static_cast<int>(i), lower).transpose(), theta_scalar(d, i, lower)));
    }
    c = solve_unique(from_rows(lhs, dim), from_rows(rhs, dim), "Theta at nu = " + nu.to_string());
  }
  auto stored = std::make_shared<const Matrix<RatFunc>>(std::move(c));
  std::lock_guard lock(mutex_);
  return *levels_.emplace(nu, stored).first->second;
}

std::vector<std::string> ThetaExpansion::companion_residual(const NuWeight& nu) const {
  std::vector<std::string> out;
  if (nu.is_zero()) return out;
  const auto& d = f_->datum();
  const auto& c = level(nu);
  for (std::size_t i = 0; i < f_->rank(); ++i) {
    if (nu.mult[i] == 0) continue;
    NuWeight lower = nu - NuWeight::simple(f_->rank(), i);
    auto lhs = f_->r_matrix(static_cast<int>(i), nu, false, true) * c;
    auto rhs = scaled(level(lower) * f_->right_mult_matrix(static_cast<int>(i), lower).transpose(), theta_scalar(d, i, lower));
    if (!(lhs == rhs)) out.push_back("companion equation fails at nu = " + nu.to_string() + ", i = " + std::to_string(i));
  }
  return out;
}

ThetaCbExpansion theta_cb_expansion(const ThetaExpansion& th, const CanonicalBasisProvider& cb, const NuWeight& nu) {
  ThetaCbExpansion out;
  out.nu = nu;
  for (const auto& b : *cb.basis(nu)) out.labels.push_back(b.label());
  auto inv = inverse(*cb.matrix(nu), "canonical basis at " + nu.to_string());
  out.coefficients = inv * th.level(nu) * inv.transpose();
  for (std::size_t r = 0; r < out.coefficients.rows(); ++r)
    for (std::size_t c = 0; c < out.coefficients.cols(); ++c)
      out.integral = out.integral && out.coefficients(r, c).is_laurent();
  return out;
}

int theta_height_cutoff(const Module& t, std::size_t k) {
  if (t.kind() != ModuleKind::Tensor) throw DomainError("Theta acts on tensor products only");
  const auto& v = t.vec(k);
  int cut = t.depth_bound();
  if (t.right()->bounded_above()) cut = std::min(cut, t.right()->vec(v.right).depth);
  if (t.left()->bounded_below()) cut = std::min(cut, t.left()->vec(v.left).depth);
  if (!t.right()->bounded_above() && !t.left()->bounded_below())
    throw DomainError("Theta does not act on " + t.name() + ": condition (star) fails");
  return cut;
}

namespace {

/// Theta on the standard vector k, with heights restricted to [lo, hi].
Vec theta_on_basis(const ThetaExpansion& th, const Module& t, std::size_t k, int lo, int hi) {
  const auto& f = th.algebra();
  const auto& v = t.vec(k);
  const auto& x = *t.left();
  const auto& y = *t.right();
  Vec out;
  for (int h = lo; h <= hi; ++h) {
    for (const auto& nu : nu_weights_of_height(f.rank(), h)) {
      auto space = f.space(nu);
      const auto& c = th.level(nu);
      std::vector<std::optional<Vec>> fx(space->dim()), ey(space->dim());
      bool fx_zero = true, ey_zero = true, fx_unknown = false, ey_unknown = false;
      for (std::size_t a = 0; a < space->dim(); ++a) {
        fx[a] = x.try_apply_f_word(space->basis[a], Vec{{v.left, RatFunc(1)}});
        ey[a] = y.try_apply_e_word(space->basis[a], Vec{{v.right, RatFunc(1)}});
        if (!fx[a]) fx_unknown = true;
        else if (!fx[a]->empty()) fx_zero = false;
        if (!ey[a]) ey_unknown = true;
        else if (!ey[a]->empty()) ey_zero = false;
      }
      if ((fx_zero && !fx_unknown) || (ey_zero && !ey_unknown)) continue;
      if (fx_unknown || ey_unknown)
        throw TruncationError("Theta_" + nu.to_string() + " on " + v.label + " leaves the truncation of " + t.name());
      for (std::size_t a = 0; a < space->dim(); ++a) {
        if (fx[a]->empty()) continue;
        for (std::size_t b = 0; b < space->dim(); ++b) {
          if (c(a, b).is_zero() || ey[b]->empty()) continue;
          for (const auto& [xi, xc] : *fx[a])
            for (const auto& [yi, yc] : *ey[b]) {
              auto idx = t.find_pair(xi, yi);
              if (!idx) throw TruncationError("Theta on " + v.label + " leaves the truncation of " + t.name());
              auto& slot = out[*idx];
              slot += c(a, b) * xc * yc;
              if (slot.is_zero()) out.erase(*idx);
            }
        }
      }
    }
  }
  return out;
}

}  // namespace

Vec theta_apply(const ThetaExpansion& th, const Module& t, const Vec& v) {
  Vec out;
  for (const auto& [k, c] : v) add_scaled(out, theta_on_basis(th, t, k, 0, theta_height_cutoff(t, k)), c);
  return out;
}

StarCertificate certify_star(const ThetaExpansion& th, const Module& t) {
  StarCertificate cert;
  if (t.kind() != ModuleKind::Tensor) {
    cert.reason = "not a tensor product";
    return cert;
  }
  cert.admissible = is_admissible(*t.left(), *t.right());
  if (!cert.admissible) {
    cert.reason = "left factor is not of lowest-weight type and right factor is not of highest-weight type";
    return cert;
  }
  cert.reason = t.left()->bounded_below() ? "left factor is of lowest-weight type" : "right factor is of highest-weight type";
  for (std::size_t k = 0; k < t.size(); ++k) {
    int cut = theta_height_cutoff(t, k);
    try {
      auto beyond = theta_on_basis(th, t, k, cut + 1, cut + 1);
      ++cert.checked;
      if (!beyond.empty()) cert.violations.push_back("Theta beyond the cutoff acts on " + t.vec(k).label);
    } catch (const TruncationError&) {
      ++cert.unknown;
    }
  }
  return cert;
}

PsiEngine::PsiEngine(std::shared_ptr<const ThetaExpansion> th) : th_(std::move(th)) {}

const Vec& PsiEngine::psi_basis(const ModulePtr& m, std::size_t k) const {
  std::lock_guard lock(mutex_);
  auto& entry = cache_[m.get()];
  if (!entry.first) entry.first = m;
  if (auto it = entry.second.find(k); it != entry.second.end()) return it->second;
  Vec result;
  if (m->kind() != ModuleKind::Tensor) {
    result = Vec{{k, RatFunc(1)}};
  } else {
    const auto& v = m->vec(k);
    const Vec& px = psi_basis(m->left(), v.left);
    const Vec& py = psi_basis(m->right(), v.right);
    Vec pre;
    for (const auto& [a, ca] : px)
      for (const auto& [b, cb] : py) {
        auto idx = m->find_pair(a, b);
        if (!idx) throw TruncationError("Psi on " + v.label + " leaves the truncation of " + m->name());
        pre.emplace(*idx, ca * cb);
      }
    result = theta_apply(*th_, *m, pre);
  }
  return cache_[m.get()].second.emplace(k, std::move(result)).first->second;
}

Vec PsiEngine::psi_apply(const ModulePtr& m, const Vec& v) const {
  Vec out;
  for (const auto& [k, c] : v) add_scaled(out, psi_basis(m, k), c.bar());
  return out;
}

DistinguishedBasis identity_basis(const Module& m) {
  DistinguishedBasis out(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) out[k] = Vec{{k, RatFunc(1)}};
  return out;
}

namespace {

GenerationSide resolve_side(const Module& t, GenerationSide side) {
  if (t.kind() != ModuleKind::Tensor) throw DomainError("psi_via_generation: not a tensor product");
  const bool right_ok = t.right()->kind() == ModuleKind::Highest;
  const bool left_ok = t.left()->kind() == ModuleKind::Lowest;
  if (side == GenerationSide::Auto) {
    if (right_ok) return GenerationSide::RightHighest;
    if (left_ok) return GenerationSide::LeftLowest;
    throw DomainError("psi_via_generation: needs M (x) L(lambda) or wL(lambda) (x) M");
  }
  if (side == GenerationSide::RightHighest && !right_ok) throw DomainError("psi_via_generation: right factor is not L(lambda)");
  if (side == GenerationSide::LeftLowest && !left_ok) throw DomainError("psi_via_generation: left factor is not wL(lambda)");
  return side;
}

}  // namespace

GenerationBlock generation_block(const Module& t, const std::vector<int>& content, const DistinguishedBasis& other,
                                 GenerationSide side) {
  side = resolve_side(t, side);
  GenerationBlock blk;
  blk.indices = t.grade(content);
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t k = 0; k < blk.indices.size(); ++k) pos[blk.indices[k]] = k;
  const auto& cb = t.provider();
  for (auto k : blk.indices) {
    const auto& v = t.vec(k);
    Vec s;
    if (side == GenerationSide::RightHighest) {
      const auto& leaf = t.right()->vec(v.right);
      const auto& u = (*cb.basis(leaf.nu))[leaf.cb_index].element;
      s = t.apply_minus(u, tensor_with_extremal(t, other.at(v.left)));
    } else {
      const auto& leaf = t.left()->vec(v.left);
      const auto& u = (*cb.basis(leaf.nu))[leaf.cb_index].element;
      s = t.apply_plus(u, extremal_with_tensor(t, other.at(v.right)));
    }
    blk.vectors.push_back(std::move(s));
  }
  blk.matrix = Matrix<RatFunc>(blk.indices.size(), blk.indices.size());
  for (std::size_t c = 0; c < blk.vectors.size(); ++c)
    for (const auto& [k, x] : blk.vectors[c]) {
      auto it = pos.find(k);
      if (it == pos.end()) throw InvariantViolation("spanning vector leaves its grade block");
      blk.matrix(it->second, c) = x;
    }
  RatFunc det = determinant(blk.matrix);
  auto as_poly = det.to_laurent();
  if (!as_poly || !as_poly->is_unit())
    throw InvariantViolation("spanning set deficient in block " + t.name() + ": determinant " + det.to_string() +
                             " is not a unit of A");
  blk.determinant = *as_poly;
  return blk;
}

Vec psi_via_generation(const Module& t, const Vec& v, const DistinguishedBasis& other, GenerationSide side) {
  std::map<std::vector<int>, Vec> by_grade;
  for (const auto& [k, c] : v) by_grade[t.vec(k).content].emplace(k, c);
  Vec out;
  for (const auto& [content, part] : by_grade) {
    auto blk = generation_block(t, content, other, side);
    Matrix<RatFunc> rhs(blk.indices.size(), 1);
    for (std::size_t r = 0; r < blk.indices.size(); ++r)
      if (auto it = part.find(blk.indices[r]); it != part.end()) rhs(r, 0) = it->second;
    auto coeffs = solve_unique(blk.matrix, rhs, "psi_via_generation");
    for (std::size_t c = 0; c < blk.vectors.size(); ++c) add_scaled(out, blk.vectors[c], coeffs(c, 0).bar());
  }
  return out;
}

LatticeReport check_lattice_preservation(const PsiEngine& psi, const ModulePtr& t) {
  LatticeReport rep;
  for (std::size_t k = 0; k < t->size(); ++k) {
    auto theta = theta_apply(psi.theta(), *t, Vec{{k, RatFunc(1)}});
    const auto& ps = psi.psi_basis(t, k);
    ++rep.checked;
    for (const auto& [j, c] : theta)
      if (!c.is_laurent())
        rep.violations.push_back("Theta(" + t->vec(k).label + ") has coefficient " + c.to_string() + " on " + t->vec(j).label);
    for (const auto& [j, c] : ps)
      if (!c.is_laurent())
        rep.violations.push_back("Psi(" + t->vec(k).label + ") has coefficient " + c.to_string() + " on " + t->vec(j).label);
  }
  return rep;
}

namespace {

/// Deltabar(E_i) = E_i (x) 1 + K~_-i (x) E_i and Deltabar(F_i) = F_i (x) K~_i + 1 (x) F_i on a standard vector.
std::optional<Vec> delta_bar(const Module& t, std::size_t k, std::size_t i, bool e) {
  const auto& v = t.vec(k);
  const auto& x = *t.left();
  const auto& y = *t.right();
  const int di = t.datum().d(i);
  const auto& ax = e ? x.e_action(i, v.left) : x.f_action(i, v.left);
  const auto& ay = e ? y.e_action(i, v.right) : y.f_action(i, v.right);
  if (!ax || !ay) return std::nullopt;
  Vec out;
  const LaurentPoly kx = LaurentPoly::q(-di * x.vec(v.left).weight.coords[i]);
  const LaurentPoly ky = LaurentPoly::q(di * y.vec(v.right).weight.coords[i]);
  for (const auto& [a, c] : *ax) {
    auto idx = t.find_pair(a, v.right);
    if (!idx) return std::nullopt;
    add_scaled(out, Vec{{*idx, RatFunc(e ? c : ky * c)}}, RatFunc(1));
  }
  for (const auto& [b, c] : *ay) {
    auto idx = t.find_pair(v.left, b);
    if (!idx) return std::nullopt;
    add_scaled(out, Vec{{*idx, RatFunc(e ? kx * c : c)}}, RatFunc(1));
  }
  return out;
}

}  // namespace

IntertwiningReport intertwining_residual(const ThetaExpansion& th, const Module& t) {
  IntertwiningReport rep;
  for (std::size_t k = 0; k < t.size(); ++k)
    for (std::size_t i = 0; i < t.datum().rank(); ++i)
      for (bool e : {true, false}) {
        try {
          auto theta_v = theta_apply(th, t, Vec{{k, RatFunc(1)}});
          auto lhs = e ? t.try_apply_e(i, theta_v) : t.try_apply_f(i, theta_v);
          auto moved = delta_bar(t, k, i, e);
          if (!lhs || !moved) {
            ++rep.skipped;
            continue;
          }
          auto rhs = theta_apply(th, t, *moved);
          add_scaled(*lhs, rhs, RatFunc(-1));
          ++rep.checked;
          if (!lhs->empty())
            rep.failures.push_back(std::string(e ? "E" : "F") + std::to_string(i) + " does not intertwine Theta on " +
                                   t.vec(k).label);
        } catch (const TruncationError&) {
          ++rep.skipped;
        }
      }
  return rep;
}

}  // namespace qgcb
