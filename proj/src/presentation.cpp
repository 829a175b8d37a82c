#include "qenv/presentation.hpp"

#include <sstream>
#include <stdexcept>

#include "qenv/error.hpp"
#include "text_util.hpp"

namespace qenv {

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const auto& l : w) {
    if (!out.empty() && out.back().gen == l.gen && out.back().exp == -l.exp) out.pop_back();
    else out.push_back(l);
  }
  return out;
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l.exp = -l.exp;
  return out;
}

bool Presentation::add_relator(const Word& w) {
  ++raw_count_;
  for (const auto& l : w)
    if (l.gen >= generator_count_ || (l.exp != 1 && l.exp != -1))
      throw std::invalid_argument("relator letter out of range");
  Word r = free_reduce(w);
  if (r.empty() || !seen_.insert(r).second) return false;
  relators_.push_back(std::move(r));
  return true;
}

Presentation envelope_presentation(const FiniteGroup& group) {
  const auto n = std::uint32_t(group.order());
  Presentation p(n);
  for (Elem i = 0; i < n; ++i)
    for (Elem j = 0; j < n; ++j) {
      const Elem k = group.conjugate(i, j);
      p.add_relator({{i, 1}, {j, 1}, {i, -1}, {k, -1}});
    }
  return p;
}

SparseIntMatrix abelianized_relation_matrix(const Presentation& p) {
  SparseIntMatrix m(p.relators().size(), p.generator_count());
  for (std::size_t r = 0; r < p.relators().size(); ++r) {
    SparseIntMatrix::Row row;
    for (const auto& l : p.relators()[r]) row.push_back({l.gen, Integer(l.exp)});
    m.set_row(r, std::move(row));
  }
  return m;
}

std::string write_presentation(const Presentation& p) {
  std::ostringstream out;
  out << p.generator_count() << '\n';
  for (const auto& w : p.relators()) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out << ' ';
      out << (w[i].exp > 0 ? "" : "-") << w[i].gen + 1;
    }
    out << '\n';
  }
  return out.str();
}

Presentation read_presentation(std::string_view text) {
  // Line-oriented: the relator boundaries are the line breaks.
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line = text.substr(pos, end - pos);
    pos = end + 1;
    return true;
  };
  std::string_view line;
  bool have_header = false;
  std::size_t gens = 0;
  while (!have_header && next_line(line)) {
    detail::TokenReader in(line, "fpres");
    if (in.at_end()) continue;
    gens = in.next_size("generator count");
    in.expect_end();
    have_header = true;
  }
  if (!have_header) throw ParseError("fpres: missing generator count");
  Presentation p(gens);
  while (next_line(line)) {
    detail::TokenReader in(line, "fpres");
    Word w;
    while (!in.at_end()) {
      const auto v = in.next_int("generator");
      const auto g = v < 0 ? -v : v;
      if (v == 0 || std::size_t(g) > gens)
        throw ParseError("fpres: generator " + std::to_string(v) + " outside 1.." + std::to_string(gens));
      w.push_back({std::uint32_t(g - 1), v > 0 ? 1 : -1});
    }
    if (!w.empty()) p.add_relator(w);
  }
  return p;
}

}  // namespace qenv
