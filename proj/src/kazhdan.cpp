#include "gpdt/kazhdan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gpdt {

BisectionFamily BisectionFamily::from_elements(GroupoidPtr g,
                                               std::vector<AlgebraElement> members) {
  if (members.empty()) throw Error("bisection family: empty");
  std::vector<int> support;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const AlgebraElement& f = members[i];
    if (f.groupoid() != g)
      throw Error("bisection family: member on another groupoid");
    if (!is_bisection_supported(f))
      throw Error("bisection family: member " + std::to_string(i) +
                  " is not supported on a bisection");
    for (int a : f.support()) {
      cplx v = f.coeff(a);
      if (std::abs(v.imag()) > 0 || v.real() < 0.0 || v.real() > 1.0)
        throw Error("bisection family: member " + std::to_string(i) +
                    " takes values outside [0,1]");
      support.push_back(a);
    }
    if (i_norm(f) > 1.0 + 1e-12)
      throw Error("bisection family: member " + std::to_string(i) +
                  " has I-norm above 1");
  }
  if (!generates(*g, support))
    throw Error("bisection family: supports do not generate the groupoid");
  BisectionFamily fam;
  fam.groupoid = std::move(g);
  fam.members = std::move(members);
  return fam;
}

LaplacianElement laplacian(const BisectionFamily& family) {
  LaplacianElement out{family_laplacian(family.members), family.size()};
  return out;
}

BisectionFamily canonical_family(const GroupoidPtr& g,
                                 const std::vector<int>& generators) {
  std::vector<int> arrows;
  for (int a : generators) {
    arrows.push_back(a);
    arrows.push_back(g->inverse(a));
  }
  std::sort(arrows.begin(), arrows.end());
  arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
  std::vector<AlgebraElement> members;
  for (int a : arrows)
    if (!g->is_unit(a)) members.push_back(AlgebraElement::delta(g, a));
  members.push_back(AlgebraElement::unit_indicator(g));
  return BisectionFamily::from_elements(g, std::move(members));
}

namespace {

// gap of realize(Delta) in one representation; nullopt marks vacuous
struct RepGap {
  double gap = 0.0;
  bool vacuous = false;
  Matrix delta_matrix;
  Matrix constants;  // orthonormal columns spanning the nullspace
};

RepGap representation_gap(const MatrixRepresentation& rep,
                          const AlgebraElement& delta, const Tolerances& tol,
                          std::uint64_t seed) {
  RepGap out;
  out.delta_matrix = rep.realize(delta);
  const std::size_t dim = out.delta_matrix.rows();
  if (dim <= 256 || rep.kind() != RepKind::regular) {
    EighResult eg = eigh(out.delta_matrix);
    SpectralReport rep2 = spectral_report(eg.eigenvalues, tol.tau_zero);
    out.vacuous = rep2.kernel_dim == dim;
    out.gap = rep2.gap;
    out.constants = Matrix(dim, rep2.kernel_dim);
    for (std::size_t c = 0; c < rep2.kernel_dim; ++c)
      for (std::size_t i = 0; i < dim; ++i)
        out.constants(i, c) = eg.vectors(i, c);
    return out;
  }
  if (rep.kind() != RepKind::regular)
    throw Error("kazhdan_constant: representation too large for the dense path");
  // regular representation: the nullspace is the span of the all-ones vector
  out.constants = Matrix(dim, 1);
  for (std::size_t i = 0; i < dim; ++i)
    out.constants(i, 0) = 1.0 / std::sqrt(static_cast<double>(dim));
  cvec ones(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  IterOptions iopts;
  iopts.seed = seed;
  out.gap = smallest_nonzero_eig(out.delta_matrix, {ones}, iopts);
  out.vacuous = false;
  return out;
}

}  // namespace

std::vector<MatrixRepresentation> default_representations(const GroupoidPtr& g) {
  std::vector<MatrixRepresentation> reps;
  for (int u : g->units()) reps.push_back(regular_rep(g, u));
  for (const InvariantMeasure& mu : invariant_measures(g))
    reps.push_back(trivial_rep(g, mu));
  return reps;
}

KazhdanCertificate kazhdan_constant(const GroupoidPtr& g,
                                    const BisectionFamily& family,
                                    const std::vector<MatrixRepresentation>& reps,
                                    const Tolerances& tol, std::uint64_t seed) {
  if (family.groupoid != g) throw Error("kazhdan_constant: family mismatch");
  if (reps.empty()) throw Error("kazhdan_constant: no representations given");
  LaplacianElement delta = laplacian(family);

  KazhdanCertificate cert;
  cert.family_size = family.size();
  cert.rep_family = reps.size() == 1 ? reps.front().description() : "list";
  double lambda1 = std::numeric_limits<double>::infinity();
  std::vector<RepGap> gaps;
  for (const MatrixRepresentation& rep : reps) {
    RepGap rg = representation_gap(rep, delta.element, tol, seed);
    cert.per_rep.push_back({rep.description(), rg.gap, rg.vacuous});
    if (!rg.vacuous) lambda1 = std::min(lambda1, rg.gap);
    gaps.push_back(std::move(rg));
  }
  if (!std::isfinite(lambda1)) {
    cert.vacuous = true;
    cert.lambda1 = std::numeric_limits<double>::infinity();
    cert.constant = std::numeric_limits<double>::infinity();
    cert.sound = true;  // nothing to certify: no non-constant vectors exist
    return cert;
  }
  cert.lambda1 = lambda1;
  cert.constant = std::sqrt(lambda1 / static_cast<double>(family.size()));

  // soundness draws: random unit vectors orthogonal to the constants
  Rng rng(seed);
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const MatrixRepresentation& rep = reps[r];
    const std::size_t dim = rep.dimension();
    if (gaps[r].vacuous) continue;
    std::vector<Matrix> movers;
    for (const AlgebraElement& f : family.members)
      movers.push_back(rep.realize(f) - rep.realize(psi(f)));
    for (int draw = 0; draw < 50; ++draw) {
      cvec xi(dim);
      for (cplx& z : xi) z = cplx(rng.uniform_pm1(), rng.uniform_pm1());
      // project out the constants
      const Matrix& con = gaps[r].constants;
      for (std::size_t c = 0; c < con.cols(); ++c) {
        cplx ip = 0.0;
        for (std::size_t i = 0; i < dim; ++i) ip += std::conj(con(i, c)) * xi[i];
        for (std::size_t i = 0; i < dim; ++i) xi[i] -= ip * con(i, c);
      }
      double nrm = norm(xi);
      if (nrm < 1e-9) continue;
      scale(xi, 1.0 / nrm);
      double moved = 0.0;
      for (const Matrix& mv : movers) moved = std::max(moved, norm(mv.apply(xi)));
      min_margin = std::min(min_margin, moved - cert.constant);
    }
  }
  cert.min_margin = min_margin;
  cert.sound = min_margin >= -1e-7;
  return cert;
}

namespace {

std::vector<double> cluster(std::vector<double> values, double radius) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    double sum = 0;
    while (j < values.size() && values[j] - values[i] <= radius) sum += values[j++];
    out.push_back(sum / static_cast<double>(j - i));
    i = j;
  }
  return out;
}

// nodes in Leja order starting from the largest magnitude
std::vector<double> leja(std::vector<double> nodes) {
  std::vector<double> out;
  std::vector<char> used(nodes.size(), 0);
  std::size_t pick = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (std::abs(nodes[i]) > std::abs(nodes[pick])) pick = i;
  out.push_back(nodes[pick]);
  used[pick] = 1;
  while (out.size() < nodes.size()) {
    bool found = false;
    double best = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (used[i]) continue;
      double v = 0.0;
      for (double x : out) v += std::log(std::max(std::abs(nodes[i] - x), 1e-300));
      if (!found || v > best) {
        found = true;
        best = v;
        arg = i;
      }
    }
    out.push_back(nodes[arg]);
    used[arg] = 1;
  }
  return out;
}

AlgebraElement projection_on_orbit(const GroupoidPtr& g,
                                   const AlgebraElement& delta,
                                   const Tolerances& tol) {
  // distinct eigenvalues of Delta across every regular representation
  std::vector<double> evs;
  for (int u : g->units()) {
    Matrix m = regular_rep(g, u).realize(delta);
    EighResult eg = eigh(m);
    evs.insert(evs.end(), eg.eigenvalues.begin(), eg.eigenvalues.end());
  }
  std::vector<double> distinct = cluster(std::move(evs), tol.eig_cluster);
  std::vector<double> nonzero;
  double gap = std::numeric_limits<double>::infinity();
  for (double v : distinct)
    if (v >= tol.tau_zero) {
      nonzero.push_back(v);
      gap = std::min(gap, v);
    }
  if (nonzero.empty()) {
    // Delta vanishes (trivial orbit groupoid); p is the unit indicator
    return AlgebraElement::unit_indicator(g);
  }
  if (gap < 10.0 * tol.tau_zero) {
    std::ostringstream os;
    os << "kazhdan_projection: spectral gap " << gap << " is below "
       << 10.0 * tol.tau_zero << "; the family does not certify (T) at this scale";
    throw Error(os.str());
  }

  // Newton form of the polynomial with q(0) = 1, q(lambda) = 0, nodes in
  // Leja order, evaluated by convolution Horner
  std::vector<double> nodes = nonzero;
  nodes.push_back(0.0);
  nodes = leja(std::move(nodes));
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    values[i] = std::abs(nodes[i]) < tol.tau_zero ? 1.0 : 0.0;
  std::vector<double> coef = values;
  for (std::size_t k = 1; k < nodes.size(); ++k)
    for (std::size_t i = nodes.size() - 1; i >= k; --i)
      coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - k]);

  AlgebraElement e = AlgebraElement::unit_indicator(g);
  AlgebraElement p = coef.back() * e;
  for (std::size_t k = nodes.size() - 1; k-- > 0;) {
    AlgebraElement shifted = delta - nodes[k] * e;
    p = convolve(shifted, p);
    p += coef[k] * e;
  }
  return p;
}

}  // namespace

AlgebraElement kazhdan_projection(const GroupoidPtr& g,
                                  const BisectionFamily& family,
                                  const Tolerances& tol) {
  if (family.groupoid != g) throw Error("kazhdan_projection: family mismatch");
  AlgebraElement delta = laplacian(family).element;

  // convolution respects orbits, so work blockwise
  OrbitDecomposition dec = orbits(*g);
  AlgebraElement p(g);
  for (const auto& orbit : dec.orbits) {
    Restriction sub = restrict_to_units(g, orbit);
    AlgebraElement delta_sub(sub.groupoid);
    for (std::size_t a = 0; a < sub.arrow_in_parent.size(); ++a)
      delta_sub.set(static_cast<int>(a), delta.coeff(sub.arrow_in_parent[a]));
    AlgebraElement p_sub = projection_on_orbit(sub.groupoid, delta_sub, tol);
    for (std::size_t a = 0; a < sub.arrow_in_parent.size(); ++a)
      p.set(sub.arrow_in_parent[a], p_sub.coeff(static_cast<int>(a)));
  }

  // postconditions: p = p* = p p within 1e-7, and p realizes the projection
  // onto constants in every regular representation
  if (sup_difference(p, adjoint(p)) > 1e-7)
    throw Error("kazhdan_projection: output is not self-adjoint");
  if (sup_difference(p, convolve(p, p)) > 1e-7)
    throw Error("kazhdan_projection: output is not idempotent");
  for (int u : g->units()) {
    Matrix m = regular_rep(g, u).realize(p);
    const std::size_t d = m.rows();
    double dev = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        dev = std::max(dev,
                       std::abs(m(i, j) - cplx(1.0 / static_cast<double>(d))));
    if (dev > 1e-7)
      throw Error("kazhdan_projection: realize(p) is not the constants projection at unit " +
                  g->label(u));
  }
  return p;
}

ExpectationReport expectation_law_check(const GroupoidPtr& g,
                                        const AlgebraElement& p) {
  ExpectationReport rep;
  AlgebraElement e = conditional_expectation(p);
  for (int u : g->units()) {
    ExpectationRow row;
    row.unit = g->label(u);
    row.expectation = e.coeff(u).real();
    row.reciprocal_fiber = 1.0 / static_cast<double>(g->source_fiber(u).size());
    rep.rows.push_back(row);
    rep.max_deviation = std::max(
        rep.max_deviation, std::abs(row.expectation - row.reciprocal_fiber));
    rep.max_deviation =
        std::max(rep.max_deviation, std::abs(e.coeff(u).imag()));
  }
  rep.pass = rep.max_deviation <= 1e-7;
  return rep;
}

double exactness_witness(const HlsTruncation& hls, std::size_t m,
                         const Tolerances& tol) {
  const std::size_t depth = hls.fiber_sizes.size();
  if (m > depth)
    throw Error("exactness_witness: cutoff exceeds the truncation depth");
  std::vector<int> gens;
  for (const auto& fg : hls.fiber_generators)
    gens.insert(gens.end(), fg.begin(), fg.end());
  BisectionFamily family = canonical_family(hls.groupoid, gens);
  AlgebraElement p = kazhdan_projection(hls.groupoid, family, tol);

  double witness = 0.0;
  for (std::size_t fn = m; fn < depth; ++fn) {
    Matrix blk = regular_rep(hls.groupoid, hls.fiber_units[fn]).realize(p);
    Matrix blk2 = blk * blk;
    double idem = (blk2 - blk).max_abs();
    double selfadj = (blk.adjoint() - blk).max_abs();
    if (idem <= 1e-7 && selfadj <= 1e-7) {
      // a verified projection has operator norm exactly 1 unless it vanishes
      witness = std::max(witness, blk.max_abs() > 1e-7 ? 1.0 : 0.0);
    } else {
      witness = std::max(witness, operator_norm(blk));
    }
  }
  return witness;
}

std::vector<FiberGapRow> hls_gap_profile(const HlsChain& chain, std::size_t depth,
                                         std::size_t cap, std::uint64_t seed) {
  if (depth < 1) throw Error("hls_gap_profile: depth must be >= 1");
  if (chain.levels.size() < depth)
    throw Error("hls_gap_profile: chain provides fewer levels than depth");
  std::vector<FiberGapRow> rows;
  for (std::size_t fn = 0; fn < depth; ++fn) {
    CayleyFiber fiber = build_cayley_fiber(chain.parent, chain.levels[fn], cap);
    FiberGapRow row;
    row.fiber = fn + 1;
    row.size = fiber.order;
    if (fiber.order <= 1) {
      row.gap = std::numeric_limits<double>::infinity();
      rows.push_back(row);
      continue;
    }
    const std::size_t n = fiber.order;
    // Delta = sum over generators s of (2 - u_s - u_s^*), with u_s the
    // left-multiplication permutation
    auto apply = [&fiber, n](const cvec& in, cvec& out) {
      out.assign(n, 0.0);
      const double k = 2.0 * static_cast<double>(fiber.generator_left_mult.size());
      for (std::size_t i = 0; i < n; ++i) out[i] = k * in[i];
      for (const auto& perm : fiber.generator_left_mult)
        for (std::size_t i = 0; i < n; ++i) {
          out[perm[i]] -= in[i];
          out[i] -= in[perm[i]];
        }
    };
    cvec ones(n, 1.0 / std::sqrt(static_cast<double>(n)));
    IterOptions opts;
    opts.seed = seed;
    row.gap = smallest_nonzero_eig(apply, n, {ones}, opts);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gpdt
