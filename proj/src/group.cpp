#include "qenv/group.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "qenv/error.hpp"
#include "text_util.hpp"

namespace qenv {

namespace {

constexpr std::size_t kExhaustiveAssociativityLimit = 256;

std::string at(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

void check_latin_and_identity(std::size_t n, const std::vector<Elem>& t) {
  std::vector<std::uint8_t> seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t j = 0; j < n; ++j) {
      Elem v = t[i * n + j];
      if (v >= n) throw ValidationError("entry out of range at " + at(i, j));
      if (seen[v]++)
        throw ValidationError("Latin square violated: row " + std::to_string(i + 1) +
                              " repeats element " + std::to_string(v + 1));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[t[i * n + j]]++)
        throw ValidationError("Latin square violated: column " + std::to_string(j + 1) +
                              " repeats element " + std::to_string(t[i * n + j] + 1));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (t[j] != j) throw ValidationError("identity violated: element 1 * element " +
                                         std::to_string(j + 1) + " != itself");
    if (t[j * n] != j) throw ValidationError("identity violated: element " +
                                             std::to_string(j + 1) + " * element 1 != itself");
  }
}

void check_associative(std::size_t n, const std::vector<Elem>& t) {
  auto fail = [](std::size_t i, std::size_t j, std::size_t k) {
    throw ValidationError("associativity violated for elements (" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
  };
  if (n <= kExhaustiveAssociativityLimit) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t ij = t[i * n + j];
        for (std::size_t k = 0; k < n; ++k)
          if (t[ij * n + k] != t[i * n + t[j * n + k]]) fail(i, j, k);
      }
    return;
  }
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t s = 0; s < 10 * n * n; ++s) {
    std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
    if (t[t[i * n + j] * n + k] != t[i * n + t[j * n + k]]) fail(i, j, k);
  }
}

}  // namespace

FiniteGroup::FiniteGroup(std::size_t order, std::vector<Elem> table)
    : order_(order), table_(std::move(table)), inverse_(order) {
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = 0; j < order_; ++j)
      if (table_[i * order_ + j] == 0) {
        inverse_[i] = Elem(j);
        break;
      }
}

FiniteGroup FiniteGroup::from_table(std::size_t order, std::vector<Elem> table) {
  if (order == 0) throw ValidationError("group order must be positive");
  if (table.size() != order * order)
    throw ValidationError("table has " + std::to_string(table.size()) + " entries, expected " +
                          std::to_string(order * order));
  check_latin_and_identity(order, table);
  check_associative(order, table);
  return FiniteGroup(order, std::move(table));
}

Elem FiniteGroup::mul(Elem a, Elem b) const {
  if (a >= order_ || b >= order_) throw std::out_of_range("element index out of range");
  return mul_unchecked(a, b);
}

Elem FiniteGroup::inv(Elem a) const {
  if (a >= order_) throw std::out_of_range("element index out of range");
  return inverse_[a];
}

bool FiniteGroup::is_abelian() const {
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = i + 1; j < order_; ++j)
      if (table_[i * order_ + j] != table_[j * order_ + i]) return false;
  return true;
}

std::size_t FiniteGroup::element_order(Elem a) const {
  std::size_t k = 1;
  for (Elem x = a; x != identity(); x = mul_unchecked(x, a)) ++k;
  return k;
}

bool ElementSet::contains(Elem e) const {
  return std::binary_search(members.begin(), members.end(), e);
}

FiniteGroup load_multiplication_table(std::string_view text) {
  detail::TokenReader in(text, "mtab");
  const std::size_t n = in.next_size("group order");
  if (n == 0) throw ParseError("mtab: group order must be positive");
  std::vector<Elem> table(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    const std::size_t v = in.next_size("table entry");
    if (v < 1 || v > n)
      throw ParseError("mtab: entry " + std::to_string(v) + " at " + at(i / n, i % n) +
                       " outside 1.." + std::to_string(n));
    table[i] = Elem(v - 1);
  }
  in.expect_end();
  return FiniteGroup::from_table(n, std::move(table));
}

std::string write_multiplication_table(const FiniteGroup& group) {
  std::ostringstream out;
  const std::size_t n = group.order();
  out << n << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << group.table()[i * n + j] + 1;
    }
    out << '\n';
  }
  return out.str();
}

FiniteGroup from_permutations(std::size_t degree, const std::vector<Permutation>& generators,
                              const PermutationOptions& options) {
  if (degree == 0) throw ValidationError("permutation degree must be positive");
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const auto& p = generators[g];
    std::vector<std::uint8_t> hit(degree);
    bool ok = p.size() == degree;
    for (std::size_t i = 0; ok && i < degree; ++i) ok = p[i] < degree && !hit[p[i]]++;
    if (!ok) throw ValidationError("generator " + std::to_string(g + 1) + " is not a permutation of 1.." +
                                   std::to_string(degree));
  }

  struct VecHash {
    std::size_t operator()(const Permutation& p) const {
      std::size_t h = 0xcbf29ce484222325ULL;
      for (auto v : p) h = (h ^ v) * 0x100000001b3ULL;
      return h;
    }
  };
  std::vector<Permutation> elements;
  std::unordered_map<Permutation, Elem, VecHash> index;
  Permutation id(degree);
  for (std::size_t i = 0; i < degree; ++i) id[i] = std::uint32_t(i);
  elements.push_back(id);
  index.emplace(id, 0);

  // x*s applies x first, then s: (x*s)(i) = s(x(i)).
  auto compose = [degree](const Permutation& x, const Permutation& s) {
    Permutation r(degree);
    for (std::size_t i = 0; i < degree; ++i) r[i] = s[x[i]];
    return r;
  };
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& s : generators) {
      Permutation y = compose(elements[head], s);
      if (index.count(y)) continue;
      if (elements.size() >= options.max_order)
        throw ResourceError("permutation group order exceeds cap " + std::to_string(options.max_order));
      index.emplace(y, Elem(elements.size()));
      elements.push_back(std::move(y));
    }
  }

  const std::size_t n = elements.size();
  std::vector<Elem> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i * n + j] = index.at(compose(elements[i], elements[j]));
  return FiniteGroup::from_table(n, std::move(table));
}

FiniteGroup load_permutation_file(std::string_view text, const PermutationOptions& options) {
  detail::TokenReader in(text, "perm");
  const std::size_t d = in.next_size("degree");
  const std::size_t m = in.next_size("generator count");
  if (d == 0) throw ParseError("perm: degree must be positive");
  std::vector<Permutation> gens(m, Permutation(d));
  for (auto& g : gens)
    for (auto& v : g) {
      const std::size_t x = in.next_size("image");
      if (x < 1 || x > d) throw ParseError("perm: image " + std::to_string(x) + " outside 1.." + std::to_string(d));
      v = std::uint32_t(x - 1);
    }
  in.expect_end();
  return from_permutations(d, gens, options);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

FiniteGroup load_group_file(const std::string& path) {
  const std::string text = read_text_file(path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".perm") == 0)
    return load_permutation_file(text);
  return load_multiplication_table(text);
}

ConjugacyPartition conjugacy_classes(const FiniteGroup& group) {
  const std::size_t n = group.order();
  constexpr std::uint32_t unset = ~0u;
  ConjugacyPartition part;
  part.class_of.assign(n, unset);
  for (Elem h = 0; h < n; ++h) {
    if (part.class_of[h] != unset) continue;
    const auto c = std::uint32_t(part.representatives.size());
    part.representatives.push_back(h);
    for (Elem g = 0; g < n; ++g) part.class_of[group.conjugate(g, h)] = c;
  }
  return part;
}

ElementSet subgroup_closure(const FiniteGroup& group, std::span<const Elem> seeds) {
  const std::size_t n = group.order();
  std::vector<std::uint8_t> in(n);
  std::vector<Elem> members{FiniteGroup::identity()};
  in[0] = 1;
  std::vector<Elem> gens;
  for (Elem s : seeds) {
    if (s >= n) throw std::out_of_range("seed index out of range");
    if (!in[s]) gens.push_back(s);
  }
  // For finite groups closure under multiplication by the seeds suffices.
  std::deque<Elem> work{FiniteGroup::identity()};
  while (!work.empty()) {
    Elem x = work.front();
    work.pop_front();
    for (Elem s : gens) {
      Elem y = group.mul_unchecked(x, s);
      if (!in[y]) {
        in[y] = 1;
        members.push_back(y);
        work.push_back(y);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return ElementSet{std::move(members), n};
}

ElementSet derived_subgroup(const FiniteGroup& group) {
  const std::size_t n = group.order();
  std::vector<std::uint8_t> hit(n);
  std::vector<Elem> commutators;
  for (Elem g = 0; g < n; ++g)
    for (Elem h = 0; h < n; ++h) {
      Elem c = group.commutator(g, h);
      if (!hit[c]++) commutators.push_back(c);
    }
  return subgroup_closure(group, commutators);
}

bool is_normal(const FiniteGroup& group, const ElementSet& subgroup) {
  for (Elem g = 0; g < group.order(); ++g)
    for (Elem s : subgroup.members)
      if (!subgroup.contains(group.conjugate(g, s))) return false;
  return true;
}

std::map<std::size_t, std::size_t> element_order_histogram(const FiniteGroup& group) {
  std::map<std::size_t, std::size_t> h;
  for (Elem g = 0; g < group.order(); ++g) ++h[group.element_order(g)];
  return h;
}

}  // namespace qenv
