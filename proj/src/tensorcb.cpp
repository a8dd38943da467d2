#include "qgcb/tensorcb.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "qgcb/errors.hpp"

namespace qgcb {

void CheckResult::fail(std::string why) {
  if (!observational) passed = false;
  counterexamples.push_back(std::move(why));
}

std::string MultiWeight::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < lambdas.size(); ++k) s += (k ? ", " : "") + lambdas[k].to_string();
  return s + "; " + std::to_string(r) + ")";
}

DiamondBasis leaf_basis(const ModulePtr& m) {
  DiamondBasis d;
  d.module = m;
  d.elements.resize(m->size());
  for (std::size_t k = 0; k < m->size(); ++k) d.elements[k] = SparseVector{{k, LaurentPoly(1)}};
  return d;
}

std::vector<std::size_t> leaf_tuple(const Module& m, std::size_t k) {
  if (m.kind() != ModuleKind::Tensor) return {k};
  auto out = leaf_tuple(*m.left(), m.vec(k).left);
  auto rest = leaf_tuple(*m.right(), m.vec(k).right);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

TensorCarrier tensor_based(const DiamondBasis& m, const DiamondBasis& mp, std::optional<int> depth_bound) {
  TensorCarrier t;
  t.module = tensor_product(m.module, mp.module, depth_bound);
  t.left = std::make_shared<const DiamondBasis>(m);
  t.right = std::make_shared<const DiamondBasis>(mp);
  t.candidates.resize(t.module->size());
  for (std::size_t k = 0; k < t.module->size(); ++k) {
    const auto& v = t.module->vec(k);
    Vec s;
    for (const auto& [a, ca] : m.elements[v.left])
      for (const auto& [b, cb] : mp.elements[v.right]) {
        auto idx = t.module->find_pair(a, b);
        if (!idx) throw TruncationError("candidate " + v.label + " leaves the truncation of " + t.module->name());
        s.emplace(*idx, RatFunc(ca * cb));
      }
    t.candidates[k] = std::move(s);
  }
  return t;
}

namespace {

PsiMatrix build_psi(const Module& t, const DistinguishedBasis& cand, const std::function<Vec(std::size_t)>& image) {
  PsiMatrix out;
  for (const auto& content : t.grades()) {
    PsiBlock blk;
    blk.content = content;
    blk.indices = t.grade(content);
    const std::size_t n = blk.indices.size();
    std::map<std::size_t, std::size_t> slot;
    for (std::size_t s = 0; s < n; ++s) slot[blk.indices[s]] = s;
    Matrix<RatFunc> sm(n, n), ym(n, n);
    auto fill = [&](Matrix<RatFunc>& m, std::size_t col, const Vec& v) {
      for (const auto& [k, c] : v) {
        auto it = slot.find(k);
        if (it == slot.end()) throw InvariantViolation("Psi leaves the grade block of " + t.vec(blk.indices[col]).label);
        m(it->second, col) = c;
      }
    };
    for (std::size_t c = 0; c < n; ++c) {
      fill(sm, c, cand[blk.indices[c]]);
      fill(ym, c, image(blk.indices[c]));
    }
    auto rho = solve_unique(sm, ym, "Psi matrix of " + t.name());
    blk.rho = Matrix<LaurentPoly>(n, n);
    blk.below.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (rho(i, j).is_zero()) continue;
        auto p = rho(i, j).to_laurent();
        if (!p)
          throw InvariantViolation("Psi matrix entry " + rho(i, j).to_string() + " at (" + t.vec(blk.indices[i]).label +
                                   ", " + t.vec(blk.indices[j]).label + ") is not in A");
        blk.rho(i, j) = *p;
        if (i != j) blk.below[i][j] = true;
      }
    for (std::size_t i = 0; i < n; ++i)
      if (!blk.rho(i, i).is_one())
        throw InvariantViolation("Psi matrix diagonal at " + t.vec(blk.indices[i]).label + " is " + blk.rho(i, i).to_string());
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t i = 0; i < n; ++i)
        if (blk.below[i][m])
          for (std::size_t j = 0; j < n; ++j)
            if (blk.below[m][j]) blk.below[i][j] = true;
    std::vector<std::size_t> downset(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (blk.below[i][i]) throw InvariantViolation("cycle in the Psi order through " + t.vec(blk.indices[i]).label);
      for (std::size_t j = 0; j < n; ++j) downset[j] += blk.below[i][j];
    }
    blk.linear_order.resize(n);
    std::iota(blk.linear_order.begin(), blk.linear_order.end(), 0);
    std::stable_sort(blk.linear_order.begin(), blk.linear_order.end(),
                     [&](std::size_t a, std::size_t b) { return downset[a] < downset[b]; });
    for (std::size_t s = 0; s < n; ++s) out.where[blk.indices[s]] = {out.blocks.size(), s};
    out.blocks.push_back(std::move(blk));
  }
  return out;
}

}  // namespace

PsiMatrix psi_matrix(const ThetaExpansion& th, const TensorCarrier& t) {
  // the candidates are products of Psi-fixed vectors, so Psi acts on them by Theta
  return build_psi(*t.module, t.candidates, [&](std::size_t k) { return theta_apply(th, *t.module, t.candidates[k]); });
}

PsiMatrix standard_psi_matrix(const PsiEngine& psi, const ModulePtr& t) {
  return build_psi(*t, identity_basis(*t), [&](std::size_t k) { return psi.psi_basis(t, k); });
}

DiamondBasis diamond_basis(const ThetaExpansion& th, const TensorCarrier& t) {
  DiamondBasis d;
  d.module = t.module;
  d.left = t.left;
  d.right = t.right;
  d.order = psi_matrix(th, t);
  d.elements.resize(t.module->size());
  d.corrections.resize(t.module->size());
  for (const auto& blk : d.order.blocks) {
    const std::size_t n = blk.indices.size();
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<LaurentPoly> pi(n);
      pi[k] = LaurentPoly(1);
      for (auto it = blk.linear_order.rbegin(); it != blk.linear_order.rend(); ++it) {
        const std::size_t i = *it;
        if (!blk.below[i][k]) continue;
        LaurentPoly gamma;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i && !pi[j].is_zero() && !blk.rho(i, j).is_zero()) gamma += blk.rho(i, j) * pi[j].bar();
        try {
          pi[i] = bar_split(gamma);
        } catch (const InvariantViolation& ex) {
          throw InvariantViolation("triangular recursion at " + t.module->vec(blk.indices[k]).label + " below " +
                                   t.module->vec(blk.indices[i]).label + ": " + ex.what());
        }
      }
      Vec element;
      SparseVector corr;
      for (std::size_t i = 0; i < n; ++i) {
        if (pi[i].is_zero()) continue;
        corr.emplace(blk.indices[i], pi[i]);
        add_scaled(element, t.candidates[blk.indices[i]], RatFunc(pi[i]));
      }
      d.elements[blk.indices[k]] = to_sparse(element);
      d.corrections[blk.indices[k]] = std::move(corr);
    }
  }
  return d;
}

std::vector<DiamondBasis> multi_leaves(const std::shared_ptr<const CanonicalBasisProvider>& cb, const MultiWeight& w,
                                       int depth_bound) {
  if (w.r > w.lambdas.size())
    throw DomainError("r = " + std::to_string(w.r) + " exceeds the number of factors " + std::to_string(w.lambdas.size()));
  if (depth_bound < 0) throw DomainError("depth bound must be >= 0");
  std::vector<DiamondBasis> out;
  for (std::size_t k = 0; k < w.lambdas.size(); ++k) {
    auto m = simple_quotient(cb, w.lambdas[k], depth_bound);
    out.push_back(leaf_basis(k < w.r ? omega_twist(m) : m));
  }
  return out;
}

DiamondBasis multi_diamond(const std::shared_ptr<const CanonicalBasisProvider>& cb, const ThetaExpansion& th,
                           const MultiWeight& w, int depth_bound) {
  auto leaves = multi_leaves(cb, w, depth_bound);
  const std::size_t l = leaves.size();
  if (l == 0) return leaf_basis(trivial_module(cb, depth_bound));
  // highest part bracketed to the left, then lowest factors prepended
  DiamondBasis cur;
  std::size_t next_lowest;
  if (w.r < l) {
    cur = leaves[w.r];
    for (std::size_t k = w.r + 1; k < l; ++k) cur = diamond_basis(th, tensor_based(cur, leaves[k], depth_bound));
    next_lowest = w.r;
  } else {
    cur = leaves[l - 1];
    next_lowest = l - 1;
  }
  for (std::size_t k = next_lowest; k-- > 0;) cur = diamond_basis(th, tensor_based(leaves[k], cur, depth_bound));
  return cur;
}

DiamondBasis bracketed_diamond(const ThetaExpansion& th, const std::vector<DiamondBasis>& factors, bool left_assoc,
                               std::optional<int> depth_bound) {
  if (factors.empty()) throw DomainError("bracketed_diamond needs at least one factor");
  if (left_assoc) {
    DiamondBasis cur = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) cur = diamond_basis(th, tensor_based(cur, factors[k], depth_bound));
    return cur;
  }
  DiamondBasis cur = factors.back();
  for (std::size_t k = factors.size() - 1; k-- > 0;) cur = diamond_basis(th, tensor_based(factors[k], cur, depth_bound));
  return cur;
}

CheckResult check_bar_invariance(const PsiEngine& psi, const DiamondBasis& d) {
  CheckResult res;
  res.name = "bar";
  for (std::size_t k = 0; k < d.size(); ++k) {
    Vec v = to_vec(d.elements[k]);
    Vec diff = psi.psi_apply(d.module, v);
    add_scaled(diff, v, RatFunc(-1));
    ++res.checked;
    if (!diff.empty()) res.fail("Psi does not fix the element indexed by " + d.label(k));
  }
  return res;
}

CheckResult check_lattice(const DiamondBasis& d) {
  CheckResult res;
  res.name = "lattice";
  for (std::size_t k = 0; k < d.size(); ++k) {
    ++res.checked;
    bool seen_self = false;
    for (const auto& [j, c] : d.elements[k]) {
      if (!c.in_nonpositive_part()) res.fail(d.label(k) + ": coefficient " + c.to_string() + " outside Z[q^-1]");
      if (j == k) {
        seen_self = true;
        if (c.coeff(0) != 1) res.fail(d.label(k) + ": not congruent to its index mod q^-1");
      } else if (c.coeff(0) != 0) {
        res.fail(d.label(k) + ": constant term on " + d.label(j));
      }
    }
    if (!seen_self) res.fail(d.label(k) + ": index missing from its own element");
  }
  return res;
}

CheckResult check_triangular(const PsiEngine& psi, const DiamondBasis& d) {
  CheckResult res;
  res.name = "triangular";
  if (d.module->kind() != ModuleKind::Tensor) {
    for (std::size_t k = 0; k < d.size(); ++k) {
      ++res.checked;
      if (!(d.elements[k] == SparseVector{{k, LaurentPoly(1)}})) res.fail(d.label(k) + ": leaf element is not standard");
    }
    return res;
  }
  auto order = standard_psi_matrix(psi, d.module);
  for (std::size_t k = 0; k < d.size(); ++k) {
    ++res.checked;
    const auto [bk, sk] = order.where.at(k);
    const auto& blk = order.blocks[bk];
    for (const auto& [j, c] : d.elements[k]) {
      if (j == k) {
        if (!c.is_one()) res.fail(d.label(k) + ": diagonal coefficient " + c.to_string());
        continue;
      }
      if (!c.in_strictly_negative_part()) res.fail(d.label(k) + ": correction " + c.to_string() + " on " + d.label(j));
      const auto [bj, sj] = order.where.at(j);
      if (bj != bk || !blk.below[sj][sk]) res.fail(d.label(k) + ": correction on " + d.label(j) + " which is not below it");
    }
  }
  return res;
}

CheckResult check_reduction(const DiamondBasis& d) {
  CheckResult res;
  res.name = "reduction";
  for (const auto& content : d.module->grades()) {
    const auto& idx = d.module->grade(content);
    const std::size_t n = idx.size();
    std::map<std::size_t, std::size_t> slot;
    for (std::size_t s = 0; s < n; ++s) slot[idx[s]] = s;
    Matrix<RatFunc> m(n, n);
    ++res.checked;
    for (std::size_t c = 0; c < n; ++c)
      for (const auto& [j, x] : d.elements[idx[c]]) {
        auto it = slot.find(j);
        if (it == slot.end()) {
          res.fail(d.label(idx[c]) + ": element leaves its grade block");
          continue;
        }
        m(it->second, c) = RatFunc(x);
        // reduction mod q^-1: Z[q^-1] -> Z, constant term
        Integer expected = it->second == c ? 1 : 0;
        if (!x.in_nonpositive_part() || x.coeff(0) != expected)
          res.fail(d.label(idx[c]) + ": entry on " + d.label(j) + " does not reduce to the identity");
      }
    RatFunc det = determinant(m);
    if (!(det == RatFunc(1))) res.fail("change of basis has determinant " + det.to_string());
  }
  return res;
}

SparseVector brute_force_diamond(const PsiEngine& psi, const ModulePtr& t, std::size_t k, int max_degree) {
  const auto& block = t->grade(t->vec(k).content);
  const std::size_t n = block.size();
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t s = 0; s < n; ++s) slot[block[s]] = s;
  const std::size_t self = slot.at(k);
  // p(i, j): coefficient of e_i in Psi(e_j)
  std::vector<std::vector<LaurentPoly>> p(n, std::vector<LaurentPoly>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [i, c] : psi.psi_basis(t, block[j])) {
      auto pc = c.to_laurent();
      if (!pc) throw InvariantViolation("Psi(" + t->vec(block[j]).label + ") has a coefficient outside A");
      p[slot.at(i)][j] = *pc;
    }
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < n; ++i)
    if (i != self) others.push_back(i);
  std::vector<long> var_base(n, -1);
  for (std::size_t o = 0; o < others.size(); ++o) var_base[others[o]] = static_cast<long>(o);

  for (int deg = 1; deg <= max_degree; ++deg) {
    const std::size_t unknowns = others.size() * deg;
    auto var = [&](std::size_t i, int t_) { return static_cast<std::size_t>(var_base[i]) * deg + (t_ - 1); };
    // rows indexed by (i, exponent); last column holds the constant
    std::map<std::pair<std::size_t, int>, std::map<std::size_t, Rational>> rows;
    auto add = [&](std::size_t i, int e, std::size_t col, const Rational& c) {
      auto& r = rows[{i, e}];
      r[col] += c;
    };
    for (std::size_t i = 0; i < n; ++i) {
      // sum_j p(i,j) bar(x_j) - x_i = 0, with x_self = 1 and x_j = sum_t z_{j,t} q^-t
      for (std::size_t j = 0; j < n; ++j) {
        if (p[i][j].is_zero()) continue;
        for (const auto& [e, c] : p[i][j].terms()) {
          if (j == self) {
            add(i, e, unknowns, -Rational(c));  // moved to the right-hand side
          } else {
            for (int t_ = 1; t_ <= deg; ++t_) add(i, e + t_, var(j, t_), Rational(c));
          }
        }
      }
      if (i == self) {
        add(i, 0, unknowns, Rational(1));
      } else {
        for (int t_ = 1; t_ <= deg; ++t_) add(i, -t_, var(i, t_), Rational(-1));
      }
    }
    Matrix<Rational> a(rows.size(), unknowns), b(rows.size(), 1);
    std::size_t r = 0;
    for (const auto& [key, row] : rows) {
      for (const auto& [col, c] : row) {
        if (col == unknowns) b(r, 0) = c;
        else a(r, col) = c;
      }
      ++r;
    }
    if (unknowns == 0) {
      bool consistent = true;
      for (std::size_t q = 0; q < b.rows(); ++q) consistent = consistent && is_zero(b(q, 0));
      if (!consistent) throw InvariantViolation("no Psi-fixed lift of " + t->vec(k).label);
      return SparseVector{{k, LaurentPoly(1)}};
    }
    auto sol = try_solve_unique(a, b, "lattice oracle at " + t->vec(k).label);
    if (!sol) continue;
    SparseVector out{{k, LaurentPoly(1)}};
    for (auto i : others) {
      std::vector<LaurentPoly::Term> terms;
      for (int t_ = 1; t_ <= deg; ++t_) {
        const Rational& z = (*sol)(var(i, t_), 0);
        if (is_zero(z)) continue;
        if (z.get_den() != 1)
          throw InvariantViolation("lattice oracle at " + t->vec(k).label + ": non-integral coefficient " + z.get_str());
        terms.emplace_back(-t_, z.get_num());
      }
      auto c = LaurentPoly::from_terms(std::move(terms));
      if (!c.is_zero()) out.emplace(block[i], c);
    }
    return out;
  }
  throw InvariantViolation("lattice oracle at " + t->vec(k).label + ": no solution up to degree " + std::to_string(max_degree));
}

CheckResult check_oracle(const PsiEngine& psi, const DiamondBasis& d) {
  CheckResult res;
  res.name = "oracle";
  for (std::size_t k = 0; k < d.size(); ++k) {
    ++res.checked;
    if (d.module->kind() != ModuleKind::Tensor) continue;
    auto expected = brute_force_diamond(psi, d.module, k);
    if (!(expected == d.elements[k])) res.fail(d.label(k) + ": recursion and lattice solver disagree");
  }
  return res;
}

namespace {

std::map<std::vector<std::size_t>, std::map<std::vector<std::size_t>, LaurentPoly>> flatten(const DiamondBasis& d) {
  std::map<std::vector<std::size_t>, std::map<std::vector<std::size_t>, LaurentPoly>> out;
  for (std::size_t k = 0; k < d.size(); ++k) {
    auto& slot = out[leaf_tuple(*d.module, k)];
    for (const auto& [j, c] : d.elements[k]) slot.emplace(leaf_tuple(*d.module, j), c);
  }
  return out;
}

}  // namespace

CheckResult compare_bracketings(const DiamondBasis& a, const DiamondBasis& b) {
  CheckResult res;
  res.name = "assoc";
  auto fa = flatten(a), fb = flatten(b);
  if (fa.size() != fb.size()) res.fail("bracketings have different index sets");
  std::size_t k = 0;
  for (const auto& [idx, v] : fa) {
    ++res.checked;
    auto it = fb.find(idx);
    if (it == fb.end()) {
      res.fail("index " + std::to_string(k) + " missing from the other bracketing");
    } else if (it->second != v) {
      std::string label;
      for (std::size_t j = 0; j < a.size(); ++j)
        if (leaf_tuple(*a.module, j) == idx) label = a.label(j);
      res.fail("bracketings disagree at " + label);
    }
    ++k;
  }
  return res;
}

CheckResult associativity_check(const ThetaExpansion& th, const DiamondBasis& x, const DiamondBasis& y,
                                const DiamondBasis& z, std::optional<int> depth_bound) {
  return compare_bracketings(bracketed_diamond(th, {x, y, z}, true, depth_bound),
                             bracketed_diamond(th, {x, y, z}, false, depth_bound));
}

CheckResult check_generation(const PsiEngine& psi, const DiamondBasis& d) {
  CheckResult res;
  res.name = "generation";
  if (d.module->kind() != ModuleKind::Tensor) return res;
  GenerationSide side;
  const DiamondBasis* other;
  if (d.module->right()->kind() == ModuleKind::Highest) {
    side = GenerationSide::RightHighest;
    other = d.left.get();
  } else if (d.module->left()->kind() == ModuleKind::Lowest) {
    side = GenerationSide::LeftLowest;
    other = d.right.get();
  } else {
    res.fail("no extremal leaf factor in " + d.module->name());
    return res;
  }
  if (!other) throw DomainError("check_generation: factor bases are not recorded");
  DistinguishedBasis basis;
  for (const auto& e : other->elements) basis.push_back(to_vec(e));
  for (std::size_t k = 0; k < d.size(); ++k) {
    ++res.checked;
    Vec diff = psi_via_generation(*d.module, Vec{{k, RatFunc(1)}}, basis, side);
    add_scaled(diff, psi.psi_basis(d.module, k), RatFunc(-1));
    if (!diff.empty()) res.fail(d.label(k) + ": generation and Theta disagree");
  }
  return res;
}

ChiReport chi_embedding(const std::shared_ptr<const CanonicalBasisProvider>& cb, const ThetaExpansion& th,
                        const std::vector<Weight>& lambdas, int depth_bound) {
  ChiReport rep;
  rep.check.name = "chi";
  if (lambdas.empty()) throw DomainError("chi_embedding needs at least one weight");
  Weight sum = lambdas.front();
  for (std::size_t k = 1; k < lambdas.size(); ++k) sum = sum + lambdas[k];
  auto l = simple_quotient(cb, sum, depth_bound);
  auto t = multi_diamond(cb, th, MultiWeight{lambdas, 0}, depth_bound);
  std::optional<std::size_t> top;
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t.module->vec(k).depth == 0) top = k;
  if (!top) throw InvariantViolation("tensor product has no highest vector");
  std::map<std::pair<NuWeight, std::size_t>, std::size_t> in_l;
  for (std::size_t k = 0; k < l->size(); ++k) in_l[{l->vec(k).nu, l->vec(k).cb_index}] = k;
  const auto& f = cb->algebra();
  for (int h = 0; h <= depth_bound; ++h)
    for (const auto& nu : nu_weights_of_height(f.rank(), h)) {
      auto basis = cb->basis(nu);
      for (std::size_t c = 0; c < basis->size(); ++c) {
        ++rep.check.checked;
        const auto& b = (*basis)[c];
        Vec img = t.module->apply_minus(b.element, Vec{{*top, RatFunc(1)}});
        auto it = in_l.find({nu, c});
        if (it == in_l.end()) {
          if (!img.empty()) rep.check.fail(b.label() + " vanishes on the highest vector of L(sum) but not on the tensor");
          continue;
        }
        const auto& label = l->vec(it->second).label;
        if (!is_laurent(img)) {
          rep.check.fail(label + ": image is not in the A-form");
          rep.images.emplace_back(label, std::nullopt);
          continue;
        }
        auto sparse = to_sparse(img);
        std::optional<std::size_t> match;
        for (std::size_t k = 0; k < t.size() && !match; ++k)
          if (t.elements[k] == sparse) match = k;
        if (!match) rep.check.fail(label + ": image is not a diamond element");
        rep.images.emplace_back(label, match);
      }
    }
  return rep;
}

CheckResult positivity_scan(const DiamondBasis& d, const RootDatum& datum, std::size_t r) {
  CheckResult res;
  res.name = "positivity";
  res.observational = !(datum.is_symmetric() && r == 0);
  for (std::size_t k = 0; k < d.size(); ++k) {
    ++res.checked;
    for (const auto& [j, c] : d.elements[k])
      if (j != k && !c.has_nonnegative_coeffs())
        res.fail(d.label(k) + ": negative coefficient in " + c.to_string() + " on " + d.label(j));
  }
  return res;
}

}  // namespace qgcb
