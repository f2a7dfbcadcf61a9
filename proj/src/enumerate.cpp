#include "potentia/potentialist.hpp"

#include <algorithm>

namespace potentia {

namespace {

class Enumerator {
 public:
  Enumerator(const Signature& sig, const EnumerationOptions& opts) : sig_(sig), opts_(opts) {
    for (int k = 0, made = 0; made < std::max(opts.max_quantifier_depth, 0); ++k) {
      std::string name = k < 3 ? std::string(1, "xyz"[k]) : "x" + std::to_string(k);
      if (std::find(opts.free_vars.begin(), opts.free_vars.end(), name) != opts.free_vars.end()) continue;
      bound_.push_back(name);
      ++made;
    }
    memo_.resize(bound_.size() + 1);
  }

  const std::vector<FOFormula>& get(std::size_t size, std::size_t depth) {
    auto& row = memo_[depth];
    if (row.size() <= size) row.resize(size + 1);
    if (!row[size]) row[size] = std::make_unique<std::vector<FOFormula>>(build(size, depth));
    return *row[size];
  }

 private:
  std::vector<Term> terms(std::size_t depth) const {
    std::vector<Term> out;
    for (const auto& v : opts_.free_vars) out.push_back(Term::variable(v));
    for (std::size_t i = 0; i < depth; ++i) out.push_back(Term::variable(bound_[i]));
    for (const auto& p : opts_.parameters) out.push_back(Term::parameter(p));
    return out;
  }

  std::vector<FOFormula> build(std::size_t size, std::size_t depth) {
    std::vector<FOFormula> out;
    if (size == 0) return out;
    if (size == 1) {
      out.push_back(FOFormula::top());
      out.push_back(FOFormula::bot());
      const auto ts = terms(depth);
      for (const auto& r : sig_.relations()) {
        std::vector<std::size_t> pick(static_cast<std::size_t>(r.arity), 0);
        if (ts.empty()) break;
        while (true) {
          std::vector<Term> args;
          for (auto k : pick) args.push_back(ts[k]);
          out.push_back(FOFormula::atom(r.name, std::move(args)));
          std::size_t pos = 0;
          while (pos < pick.size() && ++pick[pos] == ts.size()) pick[pos++] = 0;
          if (pos == pick.size()) break;
        }
      }
      for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = i + 1; j < ts.size(); ++j) out.push_back(FOFormula::eq(ts[i], ts[j]));
      }
      return out;
    }
    for (const auto& f : get(size - 1, depth)) {
      out.push_back(FOFormula::make_not(f));
      if (opts_.modal) {
        out.push_back(FOFormula::diamond(f));
        out.push_back(FOFormula::box(f));
      }
    }
    if (depth < bound_.size()) {
      for (const auto& f : get(size - 1, depth + 1)) {
        out.push_back(FOFormula::exists(bound_[depth], f));
        out.push_back(FOFormula::forall(bound_[depth], f));
      }
    }
    for (std::size_t left = 1; left + 1 < size; ++left) {
      const std::size_t right = size - 1 - left;
      const auto& as = get(left, depth);
      const auto& bs = get(right, depth);
      for (std::size_t i = 0; i < as.size(); ++i) {
        for (std::size_t j = 0; j < bs.size(); ++j) {
          out.push_back(FOFormula::make_implies(as[i], bs[j]));
          if (left > right || (left == right && j < i)) continue;
          out.push_back(FOFormula::make_and(as[i], bs[j]));
          out.push_back(FOFormula::make_or(as[i], bs[j]));
          out.push_back(FOFormula::make_iff(as[i], bs[j]));
        }
      }
    }
    return out;
  }

  const Signature& sig_;
  const EnumerationOptions& opts_;
  std::vector<std::string> bound_;
  std::vector<std::vector<std::unique_ptr<std::vector<FOFormula>>>> memo_;
};

}  // namespace

std::vector<FOFormula> enumerate_formulas(const Signature& sig, const EnumerationOptions& opts) {
  Enumerator e(sig, opts);
  std::vector<FOFormula> out;
  for (std::size_t s = 1; s <= opts.max_size; ++s) {
    const auto& level = e.get(s, 0);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<FOFormula> sentence_pool(const Signature& sig, std::size_t max_size, int max_quantifier_depth,
                                     const std::vector<FOFormula>& extras, bool modal) {
  EnumerationOptions opts;
  opts.max_size = max_size;
  opts.max_quantifier_depth = max_quantifier_depth;
  opts.modal = modal;
  auto out = enumerate_formulas(sig, opts);
  out.insert(out.end(), extras.begin(), extras.end());
  return out;
}

}  // namespace potentia
