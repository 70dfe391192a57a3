#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "infcalc/lambda_expr.hpp"
#include "infcalc/summation.hpp"

namespace infcalc {

/// Symbolic cardinality descriptor. Sets carry no elements.
struct SetExpr {
  enum class Kind {
    NatSegment,  // {1, ..., U}
    Integers,    // ℤ without 0, paired with ℕ_{2λ}
    Rationals,   // numerator/denominator pairs from ℕ × ℕ
    Strings,     // strings of length U over `alphabet` symbols
    Evens,
    Odds,
    Squares,     // {n² : n ∈ ℕ}, contained in ℕ_{λ²}
    Stratum,     // binary strings of length λ with k ones
    Union,       // disjoint
    Product,
  };

  Kind kind = Kind::NatSegment;
  LambdaExpr size;             // NatSegment upper limit, Strings length
  unsigned long alphabet = 2;  // Strings
  BinomIndex stratum;          // Stratum
  std::vector<SetExpr> parts;  // Union, Product

  static SetExpr naturals();
  static SetExpr segment(const LambdaExpr& upper);
  static SetExpr integers();
  static SetExpr rationals();
  static SetExpr strings(unsigned long alphabet, const LambdaExpr& length = LambdaExpr::lambda());
  static SetExpr evens();
  static SetExpr odds();
  static SetExpr squares();
  static SetExpr stratum_of(const BinomIndex& k);
  /// Throws Error(Domain) when two parts are the same atom.
  static SetExpr disjoint_union(std::vector<SetExpr> parts);
  static SetExpr product(std::vector<SetExpr> parts);

  std::string to_string() const;
};

LambdaExpr card(const SetExpr& s);

LambdaExpr stratum_card(const BinomIndex& k);

/// Σ_{k=0}^{λ} C(λ, k) (alphabet − 1)^{λ−k}, i.e. alphabet^λ.
LambdaExpr strata_total(unsigned long alphabet = 2);

enum class MappingScheme { Identity, InterleaveIntegers, ZigzagRationals, Double, Square };

std::string to_string(MappingScheme m);

/// Codomain elements not reached after enumerating `steps` naturals:
///   interleave 1,−1,2,−2,...   window [−U, U] \ {0}
///   zigzag, n-th natural to the n-th diagonal of the U×U square
///   n ↦ 2n                     window [1, 2U]
///   n ↦ n²                     window [1, U²]
LambdaExpr mapping_gap(MappingScheme m, const LambdaExpr& steps);

/// Same count by explicit enumeration at a finite number of steps.
std::uint64_t mapping_gap_brute(MappingScheme m, std::uint64_t steps);

/// Number of binary strings of length n with k ones, for every k, by
/// enumerating all 2^n strings. n ≤ 30.
std::vector<std::uint64_t> enumerate_strata(unsigned n);

struct DiagonalInfo {
  LambdaExpr digits;     // list_len · string_len
  LambdaExpr specified;  // list_len
};

DiagonalInfo diag_info_count(const LambdaExpr& list_len, const LambdaExpr& string_len);

}  // namespace infcalc
