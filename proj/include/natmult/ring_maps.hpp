#pragma once

// Quotient-ring presentations, finite ring maps between them, linear group
// actions and their invariant rings, and the trace.

#include <map>
#include <memory>
#include <optional>
#include <unordered_map>

#include "natmult/artinian.hpp"

namespace natmult {

/// Krull dimension of S/(monomial ideal): the largest set of variables that
/// supports no generator.
inline int monomial_krull_dimension(const std::vector<Monomial>& gens, std::size_t nvars) {
  std::vector<std::uint32_t> supports;
  for (const auto& m : gens) {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < nvars; ++i)
      if (m[i]) s |= 1u << i;
    supports.push_back(s);
  }
  int best = -1;
  for (std::uint32_t set = 0; set < (1u << nvars); ++set) {
    bool free = true;
    for (auto s : supports)
      if ((s & ~set) == 0) {
        free = false;
        break;
      }
    if (free) best = std::max(best, std::popcount(set));
  }
  return best;
}

/// R = ambient / relations, local at the ideal of the variables.
template <class Field>
struct RingPresentation {
  using Poly = Polynomial<Field>;

  RingPtr<Field> ambient;
  Ideal<Field> relations;
  int dimension = 0;

  static RingPresentation make(RingPtr<Field> ambient, std::vector<Poly> relations = {},
                               std::optional<int> dimension = std::nullopt) {
    RingPresentation R{ambient, Ideal<Field>(ambient, std::move(relations)), 0};
    for (const auto& g : R.relations.generators())
      if (!ambient->field().is_zero(g.constant_coeff()))
        fail(ErrorCode::not_local, "relation " + g.to_string() + " is not in the ideal of the variables");
    int d = monomial_krull_dimension(R.relations.leading_monomials(), ambient->nvars());
    if (d < 0) fail(ErrorCode::not_local, "presentation is the zero ring");
    if (dimension && *dimension != d)
      fail(ErrorCode::invalid_argument,
           "declared dimension " + std::to_string(*dimension) + " differs from computed " + std::to_string(d));
    R.dimension = d;
    return R;
  }

  bool is_regular() const { return relations.is_zero(); }
  std::size_t nvars() const { return ambient->nvars(); }

  Ideal<Field> maximal_ideal() const {
    std::vector<Poly> vars;
    for (std::size_t i = 0; i < ambient->nvars(); ++i) vars.push_back(Poly::variable(ambient, i));
    return Ideal<Field>(ambient, std::move(vars));
  }

  /// The ideal of R given by `gens`, as an ideal of the ambient ring containing the relations.
  Ideal<Field> lift(const Ideal<Field>& I) const {
    require_same_ring(I.ring(), *ambient);
    return ideal_sum(I, relations);
  }
};

template <class Field>
using Matrix = std::vector<std::vector<typename Field::value_type>>;

template <class Field>
std::size_t matrix_rank(const Field& k, Matrix<Field> a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && k.is_zero(a[piv][c])) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    auto inv = k.inv(a[rank][c]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (k.is_zero(a[r][c])) continue;
      auto f = k.mul(a[r][c], inv);
      for (std::size_t j = c; j < cols; ++j) a[r][j] = k.sub(a[r][j], k.mul(f, a[rank][j]));
    }
    ++rank;
  }
  return rank;
}

/// Finite group acting linearly on the variables of a polynomial ring:
/// the element g sends x_i to sum_j g[i][j] x_j.
template <class Field>
class GroupAction {
 public:
  using Poly = Polynomial<Field>;
  using Mat = Matrix<Field>;

  GroupAction(RingPtr<Field> ring, std::vector<Mat> generators, std::size_t max_order = 4096)
      : ring_(std::move(ring)), generators_(std::move(generators)) {
    const auto& k = ring_->field();
    const std::size_t n = ring_->nvars();
    for (auto& g : generators_) {
      if (g.size() != n) fail(ErrorCode::invalid_argument, "group matrix has wrong size");
      for (const auto& row : g)
        if (row.size() != n) fail(ErrorCode::invalid_argument, "group matrix has wrong size");
      if (matrix_rank(k, g) != n) fail(ErrorCode::invalid_argument, "group matrix is not invertible");
    }
    Mat id(n, std::vector<typename Field::value_type>(n, k.zero()));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = k.one();
    elements_.push_back(id);
    for (std::size_t at = 0; at < elements_.size(); ++at)
      for (const auto& g : generators_) {
        Mat h = multiply(elements_[at], g);
        if (std::find(elements_.begin(), elements_.end(), h) == elements_.end()) {
          if (elements_.size() >= max_order)
            fail(ErrorCode::resource_exhausted, "group exceeds " + std::to_string(max_order) + " elements");
          elements_.push_back(std::move(h));
        }
      }
    const auto p = k.characteristic();
    if (p != 0 && elements_.size() % p == 0)
      fail(ErrorCode::invalid_argument,
           "group order " + std::to_string(elements_.size()) + " is divisible by the characteristic");
    for (const auto& g : elements_) images_.push_back(variable_images(g));
  }

  const RingPtr<Field>& ring_ptr() const { return ring_; }
  const std::vector<Mat>& generators() const { return generators_; }
  const std::vector<Mat>& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }

  Poly apply(std::size_t element, const Poly& f) const {
    return substitute(f, std::span<const Poly>(images_[element]), ring_);
  }

  bool is_invariant(const Poly& f) const {
    for (std::size_t e = 0; e < elements_.size(); ++e)
      if (!(apply(e, f) == f)) return false;
    return true;
  }

  /// Sum over the group.
  Poly trace(const Poly& f) const {
    Poly acc(ring_);
    for (std::size_t e = 0; e < elements_.size(); ++e) acc += apply(e, f);
    return acc;
  }

  /// Averaged trace, a projection onto the invariants.
  Poly reynolds(const Poly& f) const {
    const auto& k = ring_->field();
    return trace(f).scale(k.inv(k.from_int(static_cast<long long>(elements_.size()))));
  }

  /// No element other than the identity fixes a hyperplane.
  bool is_small() const {
    const auto& k = ring_->field();
    for (std::size_t e = 1; e < elements_.size(); ++e) {
      Mat d = elements_[e];
      for (std::size_t i = 0; i < d.size(); ++i) d[i][i] = k.sub(d[i][i], k.one());
      if (matrix_rank(k, d) < 2) return false;
    }
    return true;
  }

 private:
  Mat multiply(const Mat& a, const Mat& b) const {
    const auto& k = ring_->field();
    const std::size_t n = a.size();
    Mat c(n, std::vector<typename Field::value_type>(n, k.zero()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (k.is_zero(a[i][l])) continue;
        for (std::size_t j = 0; j < n; ++j) c[i][j] = k.add(c[i][j], k.mul(a[i][l], b[l][j]));
      }
    return c;
  }

  std::vector<Poly> variable_images(const Mat& g) const {
    std::vector<Poly> out;
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::vector<typename Poly::Term> terms;
      for (std::size_t j = 0; j < g.size(); ++j)
        if (!ring_->field().is_zero(g[i][j])) terms.push_back({ring_->variable(j), g[i][j]});
      out.push_back(Poly::from_terms(ring_, std::move(terms)));
    }
    return out;
  }

  RingPtr<Field> ring_;
  std::vector<Mat> generators_;
  std::vector<Mat> elements_;
  std::vector<std::vector<Poly>> images_;
};

template <class Field>
bool is_etale_in_codim_one(const GroupAction<Field>& G) {
  return G.is_small();
}

/// Local ring map R -> S sending the i-th ambient variable of R to images[i].
template <class Field>
struct FiniteMap {
  using Poly = Polynomial<Field>;

  RingPresentation<Field> source;
  RingPresentation<Field> target;
  std::vector<Poly> images;
  std::optional<std::uint64_t> rank;  // declared [S:R]
  std::uint64_t residue_degree = 1;
  std::shared_ptr<const GroupAction<Field>> action;
  bool module_finite = false;  // S / m_R S has finite length

  static FiniteMap make(RingPresentation<Field> source, RingPresentation<Field> target, std::vector<Poly> images,
                        std::optional<std::uint64_t> rank = std::nullopt, std::uint64_t residue_degree = 1,
                        std::shared_ptr<const GroupAction<Field>> action = nullptr) {
    if (images.size() != source.nvars())
      fail(ErrorCode::incompatible_ring, "map needs one image per source variable");
    for (const auto& g : images) {
      require_same_ring(g.ring(), *target.ambient);
      if (!target.ambient->field().is_zero(g.constant_coeff()))
        fail(ErrorCode::not_local, "image " + g.to_string() + " has a nonzero constant term");
    }
    if (rank && *rank == 0) fail(ErrorCode::invalid_argument, "rank must be positive");
    if (residue_degree == 0) fail(ErrorCode::invalid_argument, "residue degree must be positive");
    FiniteMap m{std::move(source), std::move(target), std::move(images), rank, residue_degree, std::move(action), false};
    for (const auto& rel : m.source.relations.generators())
      if (!m.target.relations.contains(m.apply(rel)))
        fail(ErrorCode::invalid_argument, "source relation " + rel.to_string() + " does not map to zero");
    m.module_finite = is_m_primary(m.extend(m.source.maximal_ideal()));
    return m;
  }

  Poly apply(const Poly& f) const {
    require_same_ring(f.ring(), *source.ambient);
    return substitute(f, std::span<const Poly>(images), target.ambient);
  }

  /// Ideal of S generated by the images of I, together with S's relations.
  Ideal<Field> extend(const Ideal<Field>& I) const {
    std::vector<Poly> gens;
    for (const auto& g : I.generators()) gens.push_back(apply(g));
    for (const auto& g : target.relations.generators()) gens.push_back(g);
    return Ideal<Field>(target.ambient, std::move(gens));
  }

  std::optional<std::uint64_t> resolved_rank() const {
    if (rank) return rank;
    if (action) return action->order();
    return std::nullopt;
  }
};

template <class Field>
Polynomial<Field> derivative(const Polynomial<Field>& f, std::size_t i) {
  const auto& R = f.ring_ptr();
  std::vector<typename Polynomial<Field>::Term> out;
  for (const auto& t : f.terms()) {
    unsigned e = t.mono[i];
    if (e == 0) continue;
    auto c = R->field().mul(t.coeff, R->field().from_int(static_cast<long long>(e)));
    if (!R->field().is_zero(c)) out.push_back({t.mono / R->variable(i), c});
  }
  return Polynomial<Field>::from_terms(R, std::move(out));
}

/// Determinant by cofactor expansion along the first row.
template <class Field>
Polynomial<Field> determinant(const std::vector<std::vector<Polynomial<Field>>>& M, const RingPtr<Field>& ring) {
  const std::size_t n = M.size();
  if (n == 0) return Polynomial<Field>::constant(ring, 1);
  if (n == 1) return M[0][0];
  Polynomial<Field> acc(ring);
  for (std::size_t j = 0; j < n; ++j) {
    if (M[0][j].is_zero()) continue;
    std::vector<std::vector<Polynomial<Field>>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Polynomial<Field>> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(M[r][c]);
      minor.push_back(std::move(row));
    }
    auto term = M[0][j] * determinant(minor, ring);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

/// Etale-in-codimension-one verdict when it can be decided: group-backed
/// maps use the pseudo-reflection test; maps between polynomial rings of
/// equal dimension use purity of the branch locus, which is cut out by the
/// Jacobian determinant. Other maps give nullopt.
template <class Field>
std::optional<bool> decide_etale_in_codim_one(const FiniteMap<Field>& map) {
  if (map.action) return is_etale_in_codim_one(*map.action);
  if (!map.source.is_regular() || !map.target.is_regular() || map.source.nvars() != map.target.nvars())
    return std::nullopt;
  const std::size_t n = map.target.nvars();
  std::vector<std::vector<Polynomial<Field>>> J(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) J[i].push_back(derivative(map.images[i], j));
  auto det = determinant(J, map.target.ambient);
  return !det.is_zero() && !map.target.ambient->field().is_zero(det.constant_coeff());
}

namespace detail {

/// Ring with the target variables first (eliminated) and the source variables after.
template <class Field>
struct GraphRing {
  RingPtr<Field> ring;
  std::vector<std::size_t> from_target, from_source;
};

template <class Field>
GraphRing<Field> graph_ring(const FiniteMap<Field>& map) {
  const auto& T = *map.target.ambient;
  const auto& S = *map.source.ambient;
  std::vector<std::string> names;
  for (const auto& n : T.names()) names.push_back("_" + n);
  for (const auto& n : S.names()) names.push_back(n);
  if (names.size() > kMaxVariables)
    fail(ErrorCode::resource_exhausted, "source and target together exceed " + std::to_string(kMaxVariables) + " variables");
  GraphRing<Field> g;
  g.ring = PolyRing<Field>::make(T.field(), names, MonomialOrder::elimination(T.nvars()));
  for (std::size_t i = 0; i < T.nvars(); ++i) g.from_target.push_back(i);
  for (std::size_t i = 0; i < S.nvars(); ++i) g.from_source.push_back(T.nvars() + i);
  return g;
}

/// Generators of the graph ideal (source_i - image_i) plus the target relations.
template <class Field>
std::vector<Polynomial<Field>> graph_generators(const FiniteMap<Field>& map, const GraphRing<Field>& g) {
  using Poly = Polynomial<Field>;
  std::vector<Poly> gens;
  for (std::size_t i = 0; i < map.images.size(); ++i)
    gens.push_back(Poly::variable(g.ring, g.from_source[i]) - map.images[i].remap(g.ring, g.from_target));
  for (const auto& r : map.target.relations.generators()) gens.push_back(r.remap(g.ring, g.from_target));
  return gens;
}

template <class Field>
Ideal<Field> eliminate_into_source(const FiniteMap<Field>& map, const GraphRing<Field>& g,
                                   std::vector<Polynomial<Field>> gens) {
  using Poly = Polynomial<Field>;
  auto gb = buchberger(std::move(gens));
  const std::size_t k = map.target.nvars();
  std::vector<std::size_t> back(g.ring->nvars(), kMaxVariables + 1);
  for (std::size_t i = 0; i < map.source.nvars(); ++i) back[k + i] = i;
  std::vector<Poly> out;
  for (const auto& f : gb) {
    bool free = true;
    for (std::size_t v = 0; v < k && free; ++v)
      if (f.uses_variable(v)) free = false;
    if (free) out.push_back(f.remap(map.source.ambient, back));
  }
  for (const auto& r : map.source.relations.generators()) out.push_back(r);
  return Ideal<Field>(map.source.ambient, std::move(out));
}

}  // namespace detail

/// Presents k[images] ⊆ target as a quotient of k[names] by elimination.
template <class Field>
RingPresentation<Field> kernel_presentation(const std::vector<Polynomial<Field>>& images,
                                            const std::vector<std::string>& names,
                                            const RingPresentation<Field>& target,
                                            MonomialOrder order = MonomialOrder::grevlex()) {
  if (images.size() != names.size()) fail(ErrorCode::incompatible_ring, "one name per image required");
  for (const auto& g : images)
    if (!target.ambient->field().is_zero(g.constant_coeff()))
      fail(ErrorCode::not_local, "image " + g.to_string() + " has a nonzero constant term");
  auto src_ring = PolyRing<Field>::make(target.ambient->field(), names, std::move(order));
  auto free = RingPresentation<Field>::make(src_ring);
  // Relations are computed against a free source, then attached.
  FiniteMap<Field> probe{free, target, images, std::nullopt, 1, nullptr, false};
  auto g = detail::graph_ring(probe);
  auto kernel = detail::eliminate_into_source(probe, g, detail::graph_generators(probe, g));
  return RingPresentation<Field>::make(src_ring, kernel.groebner_basis());
}

template <class Field>
RingPresentation<Field> kernel_presentation(const std::vector<Polynomial<Field>>& images,
                                            const std::vector<std::string>& names) {
  if (images.empty()) fail(ErrorCode::invalid_argument, "no images given");
  return kernel_presentation(images, names, RingPresentation<Field>::make(images.front().ring_ptr()));
}

/// φ^{-1}(J) as an ideal of the source ambient ring (containing its relations).
template <class Field>
Ideal<Field> contract_ideal(const FiniteMap<Field>& map, const Ideal<Field>& J) {
  require_same_ring(J.ring(), *map.target.ambient);
  auto g = detail::graph_ring(map);
  auto gens = detail::graph_generators(map, g);
  for (const auto& f : J.generators()) gens.push_back(f.remap(g.ring, g.from_target));
  auto C = detail::eliminate_into_source(map, g, std::move(gens));
  Ideal<Field> Jfull = map.target.lift(J);
  for (const auto& f : C.generators())
    if (!Jfull.contains(map.apply(f)))
      fail(ErrorCode::invalid_argument, "contraction check failed for " + f.to_string());
  return Ideal<Field>::from_reduced_basis(map.source.ambient, C.groebner_basis());
}

template <class Field>
Ideal<Field> extend_ideal(const FiniteMap<Field>& map, const Ideal<Field>& I) {
  require_same_ring(I.ring(), *map.source.ambient);
  return map.extend(I);
}

/// dim_k of the image of the source in target/J, which is the colength of
/// the contraction. Only source monomials whose image can avoid m^N ⊆ J
/// (N the truncation bound of J) contribute.
template <class Field>
std::uint64_t image_span_colength(const FiniteMap<Field>& map, const Ideal<Field>& J) {
  using Poly = Polynomial<Field>;
  Ideal<Field> Jfull = map.target.lift(J);
  const unsigned N = truncation_bound(Jfull);
  const std::size_t n = map.source.nvars();
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = map.images[i].is_zero() ? static_cast<int>(N) : map.images[i].low_degree();
    if (order[i] <= 0) fail(ErrorCode::not_local, "image with a constant term");
  }
  std::vector<Poly> reduced_images;
  for (const auto& f : map.images) reduced_images.push_back(Jfull.normal_form(f));

  SparseEchelon<Field> ech(map.target.ambient->field());
  std::unordered_map<Monomial, std::size_t, MonomialHash> column;
  auto to_row = [&](const Poly& f) {
    typename SparseEchelon<Field>::Row row;
    for (const auto& t : f.terms()) {
      auto [it, fresh] = column.try_emplace(t.mono, column.size());
      row.push_back({it->second, t.coeff});
    }
    return ech.normalize(std::move(row));
  };

  // Depth-first over exponent vectors with weighted order < N; each image is
  // NF(previous image * image of one variable).
  std::vector<unsigned> e(n, 0);
  std::function<void(std::size_t, int, const Poly&)> walk = [&](std::size_t from, int ord, const Poly& img) {
    if (img.is_zero()) return;
    ech.insert(to_row(img));
    for (std::size_t i = from; i < n; ++i) {
      if (ord + order[i] >= static_cast<int>(N)) continue;
      walk(i, ord + order[i], Jfull.normal_form(img * reduced_images[i]));
    }
  };
  walk(0, 0, Poly::constant(map.target.ambient, 1));
  return ech.rank();
}

/// Subalgebra membership: expresses invariant polynomials of the target in
/// the source variables via an elimination normal form.
template <class Field>
class SubalgebraPullback {
 public:
  using Poly = Polynomial<Field>;

  explicit SubalgebraPullback(const FiniteMap<Field>& map) : map_(map), g_(detail::graph_ring(map)) {
    auto gens = detail::graph_generators(map, g_);
    basis_ = Ideal<Field>::from_reduced_basis(g_.ring, buchberger(std::move(gens)));
    back_.assign(g_.ring->nvars(), kMaxVariables + 1);
    for (std::size_t i = 0; i < map.source.nvars(); ++i) back_[map.target.nvars() + i] = i;
  }

  /// Source polynomial mapping to f, or nullopt if f is outside the subalgebra.
  std::optional<Poly> pull(const Poly& f) const {
    Poly r = basis_.normal_form(f.remap(g_.ring, g_.from_target));
    for (std::size_t v = 0; v < map_.target.nvars(); ++v)
      if (r.uses_variable(v)) return std::nullopt;
    return r.remap(map_.source.ambient, back_);
  }

 private:
  const FiniteMap<Field>& map_;
  detail::GraphRing<Field> g_;
  Ideal<Field> basis_;
  std::vector<std::size_t> back_;
};

template <class Field>
struct InvariantRing {
  std::vector<Polynomial<Field>> invariants;  // fundamental invariants
  RingPresentation<Field> presentation;
  FiniteMap<Field> map;
  std::shared_ptr<const GroupAction<Field>> action;
};

inline std::vector<std::string> default_source_names(std::size_t count, const std::vector<std::string>& avoid) {
  std::vector<std::string> out;
  for (char c = 'a'; c <= 'z' && out.size() < count; ++c) {
    std::string s(1, c);
    if (std::find(avoid.begin(), avoid.end(), s) == avoid.end()) out.push_back(s);
  }
  for (std::size_t i = 0; out.size() < count; ++i) out.push_back("r" + std::to_string(i));
  return out;
}

/// Fundamental invariants by Reynolds averaging of monomials degree by
/// degree, up to max(|G|, first module-finite degree) or the cap (default 4|G|).
template <class Field>
InvariantRing<Field> invariant_ring(std::shared_ptr<const GroupAction<Field>> G,
                                    std::optional<unsigned> degree_cap = std::nullopt,
                                    std::vector<std::string> names = {}) {
  using Poly = Polynomial<Field>;
  const auto& T = G->ring_ptr();
  const std::size_t n = T->nvars();
  const unsigned cap = degree_cap.value_or(static_cast<unsigned>(4 * G->order()));
  std::vector<Poly> invariants;
  std::vector<int> inv_degree;
  bool finite = false;
  unsigned d = 1;
  for (; d <= cap; ++d) {
    if (finite && d > G->order()) break;
    // Degree-d part of the subalgebra generated so far: products of earlier invariants.
    std::vector<Poly> products;
    std::function<void(std::size_t, int, const Poly&)> build = [&](std::size_t from, int left, const Poly& acc) {
      if (left == 0) {
        products.push_back(acc);
        return;
      }
      for (std::size_t i = from; i < invariants.size(); ++i)
        if (inv_degree[i] <= left) build(i, left - inv_degree[i], acc * invariants[i]);
    };
    build(0, static_cast<int>(d), Poly::constant(T, 1));
    SparseEchelon<Field> ech(T->field());
    std::map<std::vector<unsigned>, std::size_t> column;
    auto to_row = [&](const Poly& f) {
      typename SparseEchelon<Field>::Row row;
      for (const auto& t : f.terms()) {
        auto ex = t.mono.exponents();
        auto [it, fresh] = column.try_emplace(std::vector<unsigned>(ex.begin(), ex.end()), column.size());
        row.push_back({it->second, t.coeff});
      }
      return ech.normalize(std::move(row));
    };
    for (const auto& p : products) ech.insert(to_row(p));
    for (const auto& e : monomials_of_degree(n, d)) {
      Poly avg = G->reynolds(Poly::monomial(T, T->monomial(e)));
      if (avg.is_zero()) continue;
      if (ech.insert(to_row(avg))) {
        invariants.push_back(avg.monic());
        inv_degree.push_back(static_cast<int>(d));
      }
    }
    if (!finite && !invariants.empty()) finite = is_m_primary(Ideal<Field>(T, invariants));
  }
  if (!finite)
    fail(ErrorCode::resource_exhausted,
         "invariants up to degree " + std::to_string(cap) + " do not make the target module-finite");
  // Lex-descending leading monomials give the familiar listing (x^2, xy, y^2).
  std::vector<std::size_t> idx(invariants.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return compare_monomials(invariants[a].leading_monomial(), invariants[b].leading_monomial(),
                             MonomialOrder::lex()) > 0;
  });
  std::vector<Poly> sorted;
  for (auto i : idx) sorted.push_back(invariants[i]);
  if (names.empty()) names = default_source_names(sorted.size(), T->names());
  auto target = RingPresentation<Field>::make(T);
  auto source = kernel_presentation(sorted, names, target);
  auto map = FiniteMap<Field>::make(source, target, sorted, G->order(), 1, G);
  return InvariantRing<Field>{sorted, source, map, G};
}

template <class Field>
InvariantRing<Field> invariant_ring(std::shared_ptr<GroupAction<Field>> G,
                                    std::optional<unsigned> degree_cap = std::nullopt,
                                    std::vector<std::string> names = {}) {
  return invariant_ring(std::shared_ptr<const GroupAction<Field>>(std::move(G)), degree_cap, std::move(names));
}

template <class Field>
Polynomial<Field> trace(const GroupAction<Field>& G, const Polynomial<Field>& f) {
  return G.trace(f);
}

/// Source ideal generated by Tr(J). S is generated as an R-module by the
/// monomials of degree < H, H the truncation bound of m_R S, so J is the
/// R-span of g*m over generators g of J and such monomials m, and Tr is
/// R-linear.
template <class Field>
Ideal<Field> trace_ideal(const GroupAction<Field>& G, const FiniteMap<Field>& map, const Ideal<Field>& J) {
  using Poly = Polynomial<Field>;
  if (!map.target.is_regular()) fail(ErrorCode::unsupported_ring, "trace ideal needs a polynomial target");
  require_same_ring(J.ring(), *map.target.ambient);
  require_same_ring(*G.ring_ptr(), *map.target.ambient);
  const auto& T = map.target.ambient;
  const unsigned H = truncation_bound(map.extend(map.source.maximal_ideal()));

  SubalgebraPullback<Field> pull(map);
  std::vector<Poly> out;
  for (const auto& g : J.generators())
    for (unsigned d = 0; d < H; ++d)
      for (const auto& e : monomials_of_degree(T->nvars(), d)) {
        Poly t = G.trace(g * Poly::monomial(T, T->monomial(e)));
        if (t.is_zero()) continue;
        auto r = pull.pull(t);
        if (!r) fail(ErrorCode::invalid_argument, "trace " + t.to_string() + " is not in the image of the source");
        out.push_back(*r);
      }
  for (const auto& r : map.source.relations.generators()) out.push_back(r);
  Ideal<Field> I(map.source.ambient, detail::dedupe(std::move(out)));
  return Ideal<Field>::from_reduced_basis(map.source.ambient, I.groebner_basis());
}

struct RankEstimate {
  std::vector<std::tuple<unsigned, std::uint64_t, std::uint64_t>> rows;  // n, target length, source length
  mpq_class estimate;
};

/// ℓ(S / I^n S) / ℓ(R / I^n) at the largest n, with the full table.
template <class Field>
RankEstimate rank_estimate(const FiniteMap<Field>& map, const Ideal<Field>& probe, const std::vector<unsigned>& indices) {
  if (indices.empty()) fail(ErrorCode::invalid_argument, "no indices");
  RankEstimate r;
  for (unsigned n : indices) {
    auto In = ideal_power(probe, n);
    auto src = colength(map.source.lift(In)).value;
    auto tgt = colength(map.extend(In)).value;
    r.rows.emplace_back(n, tgt, src);
  }
  auto [n, tgt, src] = r.rows.back();
  r.estimate = mpq_class(mpz_class(std::to_string(tgt)), mpz_class(std::to_string(src)));
  r.estimate.canonicalize();
  return r;
}

}  // namespace natmult
