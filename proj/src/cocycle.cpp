#include "qenv/cocycle.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qenv/error.hpp"
#include "text_util.hpp"

namespace qenv {

std::size_t pair_index(std::size_t n, Elem g, Elem h) {
  if (g > h) std::swap(g, h);
  if (h >= n) throw std::out_of_range("pair_index: element out of range");
  const std::size_t a = g;
  return a * n - (a ? a * (a - 1) / 2 : 0) + (h - g);
}

namespace {

Rational mod_one(Rational q) {
  q.canonicalize();
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  q -= fl;
  q.canonicalize();
  return q;
}

// Columns that survive normalization, as old index -> new index (-1: dropped).
std::vector<std::int64_t> column_map(std::size_t n, bool normalized) {
  std::vector<std::int64_t> map(pair_count(n), -1);
  std::int64_t next = 0;
  for (Elem g = 0; g < n; ++g)
    for (Elem h = g; h < n; ++h)
      if (!normalized || g != 0) map[pair_index(n, g, h)] = next++;
  return map;
}

// Same row lattice, fewer rows: drop zeros and rows equal up to sign.
SparseIntMatrix distinct_rows(const SparseIntMatrix& m) {
  std::vector<SparseIntMatrix::Row> rows;
  rows.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    if (row.empty()) continue;
    if (row.front().value < 0)
      for (auto& e : row) e.value = -e.value;
    rows.push_back(std::move(row));
  }
  auto less = [](const SparseIntMatrix::Row& a, const SparseIntMatrix::Row& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) {
      return x.col != y.col ? x.col < y.col : x.value < y.value;
    });
  };
  auto same = [](const SparseIntMatrix::Row& a, const SparseIntMatrix::Row& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const auto& x, const auto& y) { return x.col == y.col && x.value == y.value; });
  };
  std::sort(rows.begin(), rows.end(), less);
  rows.erase(std::unique(rows.begin(), rows.end(), same), rows.end());
  SparseIntMatrix out(rows.size(), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.set_row(r, std::move(rows[r]));
  return out;
}

void check_order(const FiniteGroup& g, const OracleOptions& options) {
  if (g.order() > options.max_order)
    throw ResourceError("oracle: group order " + std::to_string(g.order()) + " exceeds the cap " +
                        std::to_string(options.max_order));
}

}  // namespace

void SymmetricCochain::set(Elem g, Elem h, const Rational& q) { values_.at(pair_index(n_, g, h)) = mod_one(q); }

Integer SymmetricCochain::denominator() const {
  Integer d = 1;
  for (const auto& v : values_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den_mpz_t());
  return d;
}

CocycleSystem symmetric_cocycle_system(const FiniteGroup& g, bool normalized) {
  const std::size_t n = g.order();
  const auto cmap = column_map(n, normalized);
  const std::size_t cols = normalized ? pair_count(n) - n : pair_count(n);
  CocycleSystem sys{SparseIntMatrix(n * n * n, cols), SparseIntMatrix(0, 0), conjugacy_classes(g)};

  std::map<std::uint32_t, int> acc;
  auto term = [&](Elem a, Elem b, int sign) {
    const auto c = cmap[pair_index(n, a, b)];
    if (c >= 0) acc[std::uint32_t(c)] += sign;
  };
  std::size_t r = 0;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      for (Elem z = 0; z < n; ++z, ++r) {
        acc.clear();
        term(y, z, 1);
        term(g.mul_unchecked(x, y), z, -1);
        term(x, g.mul_unchecked(y, z), 1);
        term(x, y, -1);
        SparseIntMatrix::Row row;
        for (auto [c, v] : acc)
          if (v) row.push_back({c, Integer(v)});
        sys.m.set_row(r, std::move(row));
      }

  // delta f(x, y) = f(x) + f(y) - f(xy), one column per class.
  const std::size_t classes = sys.classes.class_count();
  const std::size_t first_class = normalized ? 1 : 0;  // the identity is class 0
  sys.b = SparseIntMatrix(cols, classes - first_class);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x; y < n; ++y) {
      const auto c = cmap[pair_index(n, x, y)];
      if (c < 0) continue;
      std::map<std::uint32_t, int> f;
      f[sys.classes.class_of[x]] += 1;
      f[sys.classes.class_of[y]] += 1;
      f[sys.classes.class_of[g.mul_unchecked(x, y)]] -= 1;
      SparseIntMatrix::Row row;
      for (auto [k, v] : f)
        if (v && k >= first_class) row.push_back({std::uint32_t(k - first_class), Integer(v)});
      sys.b.set_row(std::size_t(c), std::move(row));
    }
  return sys;
}

OracleResult symmetric_h2_with_cocycle(const FiniteGroup& g, const OracleOptions& options) {
  check_order(g, options);
  const std::size_t n = g.order();
  const CocycleSystem sys = symmetric_cocycle_system(g, options.normalized);
  if (!(sys.m * sys.b).is_zero()) throw std::logic_error("oracle: M*B is not zero");

  const SmithResult sm = smith_normal_form(distinct_rows(sys.m), Transforms::column, options.limits);
  const SmithResult sb = smith_normal_form(sys.b, Transforms::none, options.limits);
  if (sb.rank != sm.nullity)
    throw std::logic_error("oracle: class-function coboundaries do not fill the kernel");

  OracleResult out;
  out.class_count = sys.classes.class_count();
  out.h2.invariant_factors = sm.torsion();
  if (out.h2.trivial()) return out;

  // x = V e_i / d_i for the largest factor d_i generates a cyclic summand of maximal order.
  const std::size_t i = sm.rank - 1;
  const Integer& d = sm.invariant_factors[i];
  const auto cmap = column_map(n, options.normalized);
  SymmetricCochain alpha(n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x; y < n; ++y) {
      const auto c = cmap[pair_index(n, x, y)];
      if (c < 0) continue;
      const Integer v = sm.V->get(std::size_t(c), i);
      if (v != 0) alpha.set(x, y, Rational(v, d));
    }
  if (!verify_cocycle(g, alpha).is_cocycle) throw std::logic_error("oracle: extracted cochain is not a cocycle");
  if (solve_class_coboundary(g, alpha)) throw std::logic_error("oracle: extracted cocycle is a coboundary");
  out.cocycle = std::move(alpha);
  return out;
}

CohomologyGroup symmetric_h2(const FiniteGroup& g, const OracleOptions& options) {
  check_order(g, options);
  const CocycleSystem sys = symmetric_cocycle_system(g, options.normalized);
  return {qz_solution_group(distinct_rows(sys.m), sys.b, options.limits)};
}

std::optional<SymmetricCochain> extract_nontrivial_cocycle(const FiniteGroup& g, const OracleOptions& options) {
  return symmetric_h2_with_cocycle(g, options).cocycle;
}

CocycleCheck verify_cocycle(const FiniteGroup& g, const SymmetricCochain& alpha) {
  const std::size_t n = g.order();
  if (alpha.group_order() != n)
    throw std::invalid_argument("verify_cocycle: cochain is defined on a group of order " +
                                std::to_string(alpha.group_order()) + ", not " + std::to_string(n));
  // Integer numerators over a common denominator keep the check exact.
  const Integer den = alpha.denominator();
  std::vector<Integer> num(alpha.values().size());
  for (std::size_t i = 0; i < num.size(); ++i) num[i] = alpha.values()[i].get_num() * (den / alpha.values()[i].get_den());
  auto a = [&](Elem x, Elem y) -> const Integer& { return num[pair_index(n, x, y)]; };
  Integer s;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      for (Elem z = 0; z < n; ++z) {
        s = a(y, z) - a(g.mul_unchecked(x, y), z) + a(x, g.mul_unchecked(y, z)) - a(x, y);
        if (!mpz_divisible_p(s.get_mpz_t(), den.get_mpz_t())) return {false, {x, y, z}};
      }
  return {};
}

std::optional<std::vector<Rational>> solve_class_coboundary(const FiniteGroup& g, const SymmetricCochain& alpha) {
  const std::size_t n = g.order();
  if (alpha.group_order() != n) throw std::invalid_argument("solve_class_coboundary: group order mismatch");
  const CocycleSystem sys = symmetric_cocycle_system(g, false);
  // U B V = D. alpha = B f (mod 1) has a rational solution f exactly when
  // (U alpha)_i is integral for every row i past the rank of B.
  const SmithResult sb = smith_normal_form(sys.b, Transforms::both);
  const auto& vals = alpha.values();
  std::vector<Rational> ua(sys.b.rows());
  for (std::size_t r = 0; r < ua.size(); ++r) {
    for (const auto& e : sb.U->row(r)) ua[r] += Rational(e.value) * vals[e.col];
    ua[r].canonicalize();
  }
  for (std::size_t r = sb.rank; r < ua.size(); ++r)
    if (ua[r].get_den() != 1) return std::nullopt;
  std::vector<Rational> y(sys.b.cols());
  for (std::size_t i = 0; i < sb.rank; ++i) {
    y[i] = ua[i] / Rational(sb.invariant_factors[i]);
    y[i].canonicalize();
  }
  std::vector<Rational> f(sys.b.cols());
  for (std::size_t r = 0; r < f.size(); ++r) {
    for (const auto& e : sb.V->row(r)) f[r] += Rational(e.value) * y[e.col];
    f[r] = mod_one(f[r]);
  }
  // Guard: delta f must reproduce alpha modulo 1.
  for (Elem x = 0; x < n; ++x)
    for (Elem z = x; z < n; ++z) {
      const auto& cls = sys.classes.class_of;
      Rational diff = f[cls[x]] + f[cls[z]] - f[cls[g.mul_unchecked(x, z)]] - alpha.get(x, z);
      if (mod_one(diff) != 0) throw std::logic_error("solve_class_coboundary: solution does not check");
    }
  return f;
}

std::string write_cochain(const SymmetricCochain& alpha) {
  std::ostringstream out;
  const auto n = alpha.group_order();
  for (Elem g = 0; g < n; ++g)
    for (Elem h = g; h < n; ++h) {
      const auto& v = alpha.get(g, h);
      if (v != 0) out << g + 1 << ' ' << h + 1 << ' ' << v.get_num() << '/' << v.get_den() << '\n';
    }
  return out.str();
}

SymmetricCochain read_cochain(std::string_view text, std::size_t group_order) {
  SymmetricCochain alpha(group_order);
  std::vector<bool> seen(pair_count(group_order), false);
  detail::TokenReader in(text, "cochain");
  while (!in.at_end()) {
    const auto g = in.next_size("element"), h = in.next_size("element");
    if (g < 1 || h < 1 || g > group_order || h > group_order)
      throw ParseError("cochain: element outside 1.." + std::to_string(group_order));
    const auto tok = std::string(in.next_token("value"));
    Rational q;
    if (q.set_str(tok, 10) != 0 || q.get_den() == 0) throw ParseError("cochain: bad value '" + tok + "'");
    q.canonicalize();
    const auto idx = pair_index(group_order, Elem(g - 1), Elem(h - 1));
    if (seen[idx]) throw ParseError("cochain: pair " + std::to_string(g) + " " + std::to_string(h) + " given twice");
    seen[idx] = true;
    alpha.set(Elem(g - 1), Elem(h - 1), q);
  }
  return alpha;
}

}  // namespace qenv
