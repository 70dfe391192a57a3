#pragma once

#include <string>

#include "infcalc/lambda_expr.hpp"
#include "infcalc/scalar.hpp"

namespace infcalc {

// Canonical text forms. Every string produced here parses back (through the
// CLI grammar) to the value it was rendered from.

std::string render(const Scalar& s);
/// The bare scale, e.g. "lam^(-1/2)*2^lam"; "1" for the constant scale.
std::string render(const ScaleKey& key);
std::string render(const LambdaExpr& x);
std::string render(const StandardPart& s);

}  // namespace infcalc
