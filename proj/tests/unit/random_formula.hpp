#pragma once

#include <random>
#include <string>

#include "negtax/logic.hpp"

namespace negtax::test {

/// Random well-formed AST over every node kind, for round-trip properties.
class FormulaGen {
 public:
  explicit FormulaGen(std::uint64_t seed) : rng_(seed) {}

  logic::Formula formula(int depth) {
    using logic::Formula;
    if (depth <= 0) return leaf();
    switch (pick(9)) {
      case 0: return leaf();
      case 1: return Formula::negation(formula(depth - 1));
      case 2: return Formula::quant(pick(2) ? logic::Quantifier::Forall : logic::Quantifier::Exists, var(),
                                    formula(depth - 1), type());
      case 3: return Formula::conj(formula(depth - 1), formula(depth - 1));
      case 4: return Formula::disj(formula(depth - 1), formula(depth - 1));
      case 5: return Formula::implies(formula(depth - 1), formula(depth - 1));
      case 6: return Formula::lambda(var(), type(), formula(depth - 1));
      case 7: return Formula::app(formula(depth - 1), term(depth - 1));
      default: {
        std::vector<Formula> args;
        for (int i = 0, n = pick(3); i < n; ++i) args.push_back(term(depth - 1));
        return Formula::pred(pred(), std::move(args));
      }
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  logic::Formula leaf() {
    using logic::Formula;
    switch (pick(3)) {
      case 0: return Formula::var(var());
      case 1: return Formula::pred("=", {Formula::var(var()), Formula::var(var())});
      default: return Formula::pred(pred(), {Formula::var(var())});
    }
  }

  logic::Formula term(int depth) {
    if (depth <= 0 || pick(3)) return logic::Formula::var(var());
    return formula(depth - 1);
  }

  std::string var() {
    static const char* names[] = {"x", "y", "z", "tom_hanks", "e1", "x'", "movie"};
    return names[pick(7)];
  }
  std::string pred() {
    static const char* names[] = {"P", "Movie", "Stars", "HasRings", "Orbits", "R2", "Négation"};
    return names[pick(7)];
  }
  std::string type() {
    static const char* types[] = {"", "", "e", "t", "<e,t>", "e→t", "(e→t)→t", "<e,<e,t>>"};
    return types[pick(8)];
  }

  std::mt19937_64 rng_;
};

}  // namespace negtax::test
