#pragma once

#include <random>

#include "infcalc/lambda_expr.hpp"

namespace infcalc::testgen {

struct ExprShape {
  int max_terms = 3;
  long coeff_max = 5;
  long denom_max = 4;
  int power_lo = -2;
  int power_hi = 3;
  bool logs = false;         // (ln λ)^p with p in {0, 1}
  bool exponentials = true;  // 2^λ, 3^λ, (1/2)^λ
  bool towers = false;       // λ^λ
};

inline mpq_class random_rational(std::mt19937_64& rng, long max, long denom_max) {
  std::uniform_int_distribution<long> num(-max, max);
  std::uniform_int_distribution<long> den(1, denom_max);
  long n = 0;
  while (n == 0) n = num(rng);
  mpq_class q(n, den(rng));
  q.canonicalize();
  return q;
}

inline ScaleKey random_key(std::mt19937_64& rng, const ExprShape& shape) {
  std::uniform_int_distribution<int> power(shape.power_lo, shape.power_hi);
  std::uniform_int_distribution<int> roll(0, 9);
  ScaleKey key = ScaleKey::power(power(rng));
  if (shape.exponentials && roll(rng) < 2) {
    static const mpq_class bases[] = {2, 3, mpq_class(1, 2)};
    key = key + ScaleKey::exponential(bases[std::uniform_int_distribution<int>(0, 2)(rng)]);
  }
  if (shape.towers && roll(rng) == 0) key = key + ScaleKey::lambda_to_lambda();
  if (shape.logs && roll(rng) < 4) key = key + ScaleKey::log_power(1);
  return key;
}

/// Exact (marker-free) expression with up to shape.max_terms monomials.
inline LambdaExpr random_exact(std::mt19937_64& rng, const ExprShape& shape = {}) {
  std::uniform_int_distribution<int> count(1, shape.max_terms);
  LambdaExpr out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    out += LambdaExpr::monomial(Scalar(random_rational(rng, shape.coeff_max, shape.denom_max)), random_key(rng, shape));
  }
  return out;
}

}  // namespace infcalc::testgen
