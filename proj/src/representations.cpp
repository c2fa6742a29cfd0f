#include "gpdt/representations.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace gpdt {

double invariance_defect(const FiniteGroupoid& g, const InvariantMeasure& mu) {
  if (mu.weights.size() != g.unit_count())
    throw Error("measure has wrong number of units");
  double d = 0;
  for (std::size_t a = 0; a < g.arrow_count(); ++a) {
    int ai = static_cast<int>(a);
    double wr = mu.weights[g.unit_ordinal(g.range(ai))];
    double ws = mu.weights[g.unit_ordinal(g.source(ai))];
    d = std::max(d, std::abs(wr - ws));
  }
  return d;
}

std::vector<InvariantMeasure> invariant_measures(const GroupoidPtr& g) {
  // testing f = delta_g in r*mu = s*mu forces mu(r(g)) = mu(s(g)), so the
  // extreme points are exactly the per-orbit uniform measures
  OrbitDecomposition dec = orbits(*g);
  std::vector<InvariantMeasure> out;
  for (const auto& orbit : dec.orbits) {
    InvariantMeasure mu;
    mu.weights.assign(g->unit_count(), 0.0);
    for (int u : orbit)
      mu.weights[g->unit_ordinal(u)] = 1.0 / static_cast<double>(orbit.size());
    out.push_back(std::move(mu));
  }
  return out;
}

InvariantMeasure uniform_measure(const FiniteGroupoid& g) {
  InvariantMeasure mu;
  mu.weights.assign(g.unit_count(), 1.0 / static_cast<double>(g.unit_count()));
  return mu;
}

MatrixRepresentation regular_rep(const GroupoidPtr& g, int unit) {
  if (!g->is_unit(unit)) throw Error("regular_rep: arrow is not a unit");
  std::vector<int> basis = g->source_fiber(unit);  // canonical order
  std::vector<std::string> labels;
  for (int a : basis) labels.push_back(g->label(a));
  GroupoidPtr gp = g;
  auto realize = [gp, basis](const AlgebraElement& f) {
    if (f.groupoid() != gp) throw Error("realize: element on another groupoid");
    const FiniteGroupoid& G = *gp;
    const std::size_t m = basis.size();
    Matrix out(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        int gh = G.compose(basis[i], G.inverse(basis[j]));
        if (gh >= 0) out(i, j) = f.coeff(gh);
      }
    return out;
  };
  return MatrixRepresentation(RepKind::regular,
                              "regular@" + g->label(unit), std::move(labels),
                              std::move(realize));
}

MatrixRepresentation trivial_rep(const GroupoidPtr& g, const InvariantMeasure& mu) {
  double defect = invariance_defect(*g, mu);
  if (defect > 1e-12) {
    for (std::size_t a = 0; a < g->arrow_count(); ++a) {
      int ai = static_cast<int>(a);
      double wr = mu.weights[g->unit_ordinal(g->range(ai))];
      double ws = mu.weights[g->unit_ordinal(g->source(ai))];
      if (std::abs(wr - ws) > 1e-12)
        throw Error("trivial_rep: measure is not invariant (violated by arrow " +
                    g->label(ai) + ")");
    }
  }
  std::vector<int> sup_units;
  std::vector<double> w;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < g->units().size(); ++k) {
    if (mu.weights[k] > 0.0) {
      sup_units.push_back(g->units()[k]);
      w.push_back(mu.weights[k]);
      labels.push_back(g->label(g->units()[k]));
    }
  }
  std::vector<int> pos(g->arrow_count(), -1);
  for (std::size_t k = 0; k < sup_units.size(); ++k) pos[sup_units[k]] = static_cast<int>(k);
  GroupoidPtr gp = g;
  auto realize = [gp, sup_units, w, pos](const AlgebraElement& f) {
    if (f.groupoid() != gp) throw Error("realize: element on another groupoid");
    const FiniteGroupoid& G = *gp;
    const std::size_t m = sup_units.size();
    Matrix out(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      for (int a : G.range_fiber(sup_units[i])) {
        int j = pos[G.source(a)];
        if (j < 0) continue;  // outside the support (invariance keeps mass there)
        out(i, j) += f.coeff(a);
      }
    }
    // conjugate by diag(sqrt(mu)) so adjoints become conjugate transposes
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        out(i, j) *= std::sqrt(w[i]) / std::sqrt(w[j]);
    return out;
  };
  return MatrixRepresentation(RepKind::trivial, "trivial", std::move(labels),
                              std::move(realize));
}

MatrixRepresentation gns_rep(const GroupoidPtr& g, const KernelFunction& phi,
                             const InvariantMeasure& mu, const Tolerances& tol) {
  KernelCheck pc = check_positive_type(phi, tol);
  if (!pc.ok) throw Error("gns_rep: kernel is not positive type (" + pc.reason + ")");
  if (invariance_defect(*g, mu) > 1e-12)
    throw Error("gns_rep: measure is not invariant");

  // Gram matrix of the delta basis: <delta_a, delta_b> = mu(r(a)) phi(a^{-1} b)
  // when r(a) = r(b), else 0
  const std::size_t n = g->arrow_count();
  Matrix gram(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    int ai = static_cast<int>(a);
    double wa = mu.weights[g->unit_ordinal(g->range(ai))];
    if (wa == 0.0) continue;
    for (int b : g->range_fiber(g->range(ai))) {
      int ab = g->compose(g->inverse(ai), b);
      gram(a, b) = wa * phi.value(ab);
    }
  }
  EighResult eg = eigh(gram);
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < n; ++k)
    if (eg.eigenvalues[k] > tol.tau_psd) kept.push_back(k);
  if (kept.empty()) throw Error("gns_rep: Gram matrix vanishes");

  // W columns w_i = v_i / sqrt(lambda_i) are <,>_phi-orthonormal
  Matrix w(n, kept.size());
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < kept.size(); ++c) {
    double s = 1.0 / std::sqrt(eg.eigenvalues[kept[c]]);
    for (std::size_t i = 0; i < n; ++i) w(i, c) = eg.vectors(i, kept[c]) * s;
    labels.push_back("q" + std::to_string(c));
  }
  // K w_i = sqrt(lambda_i) v_i
  Matrix kw(n, kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c) {
    double s = std::sqrt(eg.eigenvalues[kept[c]]);
    for (std::size_t i = 0; i < n; ++i) kw(i, c) = eg.vectors(i, kept[c]) * s;
  }
  GroupoidPtr gp = g;
  auto realize = [gp, w, kw](const AlgebraElement& f) {
    if (f.groupoid() != gp) throw Error("realize: element on another groupoid");
    const FiniteGroupoid& G = *gp;
    const std::size_t nn = G.arrow_count();
    // convolution matrix on the delta basis: C[a][h] = f(a h^{-1}) when
    // s(a) = s(h)
    Matrix cw(nn, w.cols());
    for (std::size_t a = 0; a < nn; ++a) {
      int ai = static_cast<int>(a);
      for (int h : G.source_fiber(G.source(ai))) {
        int ah = G.compose(ai, G.inverse(h));
        if (ah < 0) continue;
        cplx c = f.coeff(ah);
        if (c == cplx(0.0)) continue;
        for (std::size_t col = 0; col < w.cols(); ++col)
          cw(a, col) += c * w(h, col);
      }
    }
    return kw.adjoint() * cw;
  };
  return MatrixRepresentation(RepKind::gns, "gns", std::move(labels),
                              std::move(realize));
}

MatrixRepresentation direct_sum(std::vector<MatrixRepresentation> parts) {
  if (parts.empty()) throw Error("direct_sum: no parts");
  std::vector<std::string> labels;
  std::string desc = "direct_sum(";
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (p) desc += ",";
    desc += parts[p].description();
    for (const std::string& l : parts[p].basis_labels())
      labels.push_back(std::to_string(p) + ":" + l);
  }
  desc += ")";
  auto shared = std::make_shared<std::vector<MatrixRepresentation>>(std::move(parts));
  auto realize = [shared](const AlgebraElement& f) {
    std::size_t dim = 0;
    for (const auto& r : *shared) dim += r.dimension();
    Matrix out(dim, dim);
    std::size_t off = 0;
    for (const auto& r : *shared) {
      Matrix blk = r.realize(f);
      for (std::size_t i = 0; i < blk.rows(); ++i)
        for (std::size_t j = 0; j < blk.cols(); ++j)
          out(off + i, off + j) = blk(i, j);
      off += r.dimension();
    }
    return out;
  };
  return MatrixRepresentation(RepKind::direct_sum, std::move(desc),
                              std::move(labels), std::move(realize));
}

Matrix constant_vectors(const MatrixRepresentation& rep,
                        const std::vector<AlgebraElement>& family,
                        const Tolerances& tol) {
  if (family.empty()) throw Error("constant_vectors: empty family");
  const GroupoidPtr& g = family.front().groupoid();
  std::vector<int> support;
  for (const AlgebraElement& f : family)
    for (int a : f.support()) support.push_back(a);
  if (!generates(*g, support))
    throw Error("constant_vectors: family supports do not generate the groupoid");

  Matrix delta = rep.realize(family_laplacian(family));
  EighResult eg = eigh(delta);
  std::size_t k = 0;
  while (k < eg.eigenvalues.size() && eg.eigenvalues[k] < tol.tau_zero) ++k;
  Matrix basis(rep.dimension(), k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < rep.dimension(); ++i)
      basis(i, c) = eg.vectors(i, c);

  // each basis vector must satisfy realize(f) xi = realize(Psi(f)) xi
  for (const AlgebraElement& f : family) {
    Matrix d = rep.realize(f) - rep.realize(psi(f));
    Matrix moved = d * basis;
    if (moved.max_abs() > 1e-8)
      throw Error("constant_vectors: nullspace vector moved by the family");
  }
  return basis;
}

double reduced_norm(const AlgebraElement& f) {
  const GroupoidPtr& g = f.groupoid();
  const auto& units = g->units();
  std::vector<double> norms(units.size(), 0.0);
  const std::size_t threads = std::min(thread_budget(), units.size());
  if (threads <= 1) {
    for (std::size_t k = 0; k < units.size(); ++k)
      norms[k] = operator_norm(regular_rep(g, units[k]).realize(f));
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        for (;;) {
          std::size_t k = next.fetch_add(1);
          if (k >= units.size()) return;
          norms[k] = operator_norm(regular_rep(g, units[k]).realize(f));
        }
      });
    for (auto& th : pool) th.join();
  }
  double best = 0;
  for (double v : norms) best = std::max(best, v);
  return best;
}

AlgebraElement conditional_expectation(const AlgebraElement& f) {
  const FiniteGroupoid& g = *f.groupoid();
  AlgebraElement out(f.groupoid());
  for (int u : g.units()) out.set(u, f.coeff(u));
  return out;
}

InvariantMeasure measure_from_vector(const GroupoidPtr& g,
                                     const MatrixRepresentation& rep,
                                     const cvec& xi) {
  InvariantMeasure mu;
  mu.weights.resize(g->unit_count());
  for (std::size_t k = 0; k < g->units().size(); ++k) {
    AlgebraElement dx = AlgebraElement::delta(g, g->units()[k]);
    cvec img = rep.realize(dx).apply(xi);
    mu.weights[k] = dot(xi, img).real();
  }
  return mu;
}

}  // namespace gpdt
