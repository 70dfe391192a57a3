#include "infcalc/sets.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "infcalc/error.hpp"
#include "infcalc/render.hpp"

namespace infcalc {

namespace {

const LambdaExpr& lam() {
  static const LambdaExpr l = LambdaExpr::lambda();
  return l;
}

bool same_atom(const SetExpr& a, const SetExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case SetExpr::Kind::NatSegment:
      return a.size == b.size;
    case SetExpr::Kind::Strings:
      return a.alphabet == b.alphabet && a.size == b.size;
    case SetExpr::Kind::Stratum:
      return a.stratum.kind == b.stratum.kind && a.stratum.k == b.stratum.k;
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Product:
      return false;
    default:
      return true;
  }
}

std::string stratum_label(const BinomIndex& k) {
  switch (k.kind) {
    case BinomIndex::Kind::Finite:
      return std::to_string(k.k);
    case BinomIndex::Kind::HalfLambda:
      return "lam/2";
    case BinomIndex::Kind::LambdaMinus:
      return "lam-" + std::to_string(k.k);
  }
  return "?";
}

}  // namespace

SetExpr SetExpr::naturals() { return segment(lam()); }

SetExpr SetExpr::segment(const LambdaExpr& upper) {
  SetExpr s;
  s.kind = Kind::NatSegment;
  s.size = upper;
  return s;
}

SetExpr SetExpr::integers() {
  SetExpr s;
  s.kind = Kind::Integers;
  return s;
}

SetExpr SetExpr::rationals() {
  SetExpr s;
  s.kind = Kind::Rationals;
  return s;
}

SetExpr SetExpr::strings(unsigned long alphabet, const LambdaExpr& length) {
  if (alphabet < 1) throw Error(ErrorCode::Domain, "alphabet must have at least one symbol");
  SetExpr s;
  s.kind = Kind::Strings;
  s.alphabet = alphabet;
  s.size = length;
  return s;
}

SetExpr SetExpr::evens() {
  SetExpr s;
  s.kind = Kind::Evens;
  return s;
}

SetExpr SetExpr::odds() {
  SetExpr s;
  s.kind = Kind::Odds;
  return s;
}

SetExpr SetExpr::squares() {
  SetExpr s;
  s.kind = Kind::Squares;
  return s;
}

SetExpr SetExpr::stratum_of(const BinomIndex& k) {
  SetExpr s;
  s.kind = Kind::Stratum;
  s.stratum = k;
  return s;
}

SetExpr SetExpr::disjoint_union(std::vector<SetExpr> parts) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      if (same_atom(parts[i], parts[j])) {
        throw Error(ErrorCode::Domain, "union parts are not disjoint: " + parts[i].to_string());
      }
    }
  }
  SetExpr s;
  s.kind = Kind::Union;
  s.parts = std::move(parts);
  return s;
}

SetExpr SetExpr::product(std::vector<SetExpr> parts) {
  SetExpr s;
  s.kind = Kind::Product;
  s.parts = std::move(parts);
  return s;
}

std::string SetExpr::to_string() const {
  switch (kind) {
    case Kind::NatSegment:
      return "N_{" + render(size) + "}";
    case Kind::Integers:
      return "Z";
    case Kind::Rationals:
      return "Q";
    case Kind::Strings:
      return "B_" + std::to_string(alphabet) + "(" + render(size) + ")";
    case Kind::Evens:
      return "evens";
    case Kind::Odds:
      return "odds";
    case Kind::Squares:
      return "squares";
    case Kind::Stratum:
      return "stratum(" + stratum_label(stratum) + ")";
    case Kind::Union:
    case Kind::Product: {
      std::string out = "(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += kind == Kind::Union ? " + " : " x ";
        out += parts[i].to_string();
      }
      return out + ")";
    }
  }
  return "?";
}

LambdaExpr card(const SetExpr& s) {
  switch (s.kind) {
    case SetExpr::Kind::NatSegment:
      return s.size;
    case SetExpr::Kind::Integers:
      return LambdaExpr(2) * lam();
    case SetExpr::Kind::Rationals:
      return lam() * lam();
    case SetExpr::Kind::Strings:
      return pow(LambdaExpr(static_cast<long>(s.alphabet)), s.size);
    case SetExpr::Kind::Evens:
    case SetExpr::Kind::Odds:
      return LambdaExpr(mpq_class(1, 2)) * lam();
    case SetExpr::Kind::Squares:
      return lam();
    case SetExpr::Kind::Stratum:
      return stratum_card(s.stratum);
    case SetExpr::Kind::Union: {
      LambdaExpr total;
      for (const auto& p : s.parts) total += card(p);
      return total;
    }
    case SetExpr::Kind::Product: {
      LambdaExpr total(1);
      for (const auto& p : s.parts) total *= card(p);
      return total;
    }
  }
  return LambdaExpr();
}

LambdaExpr stratum_card(const BinomIndex& k) { return binom_lambda(k); }

LambdaExpr strata_total(unsigned long alphabet) {
  if (alphabet < 1) throw Error(ErrorCode::Domain, "alphabet must have at least one symbol");
  // binomial theorem: Σ C(λ,k) 1^k (alphabet − 1)^{λ−k}
  return pow(LambdaExpr(1) + LambdaExpr(static_cast<long>(alphabet - 1)), lam());
}

std::string to_string(MappingScheme m) {
  switch (m) {
    case MappingScheme::Identity:
      return "identity";
    case MappingScheme::InterleaveIntegers:
      return "interleave";
    case MappingScheme::ZigzagRationals:
      return "zigzag";
    case MappingScheme::Double:
      return "double";
    case MappingScheme::Square:
      return "square";
  }
  return "?";
}

LambdaExpr mapping_gap(MappingScheme m, const LambdaExpr& steps) {
  switch (m) {
    case MappingScheme::Identity:
      return LambdaExpr();
    case MappingScheme::InterleaveIntegers:
    case MappingScheme::Double:
      return steps;
    case MappingScheme::ZigzagRationals:
      // 2U − 1 diagonals, U of them reached
      return steps - LambdaExpr(1);
    case MappingScheme::Square:
      return steps * steps - steps;
  }
  return LambdaExpr();
}

std::uint64_t mapping_gap_brute(MappingScheme m, std::uint64_t steps) {
  if (steps == 0) return 0;
  switch (m) {
    case MappingScheme::Identity: {
      std::vector<bool> hit(steps + 1, false);
      for (std::uint64_t n = 1; n <= steps; ++n) hit[n] = true;
      return static_cast<std::uint64_t>(std::count(hit.begin() + 1, hit.end(), false));
    }
    case MappingScheme::InterleaveIntegers: {
      // index i ↔ integer i − steps for i in [0, 2·steps], skipping 0
      std::vector<bool> hit(2 * steps + 1, false);
      for (std::uint64_t n = 1; n <= steps; ++n) {
        const std::int64_t z = (n % 2 == 1) ? static_cast<std::int64_t>((n + 1) / 2) : -static_cast<std::int64_t>(n / 2);
        hit[static_cast<std::uint64_t>(z + static_cast<std::int64_t>(steps))] = true;
      }
      std::uint64_t missing = 0;
      for (std::uint64_t i = 0; i <= 2 * steps; ++i) {
        if (i != steps && !hit[i]) ++missing;
      }
      return missing;
    }
    case MappingScheme::ZigzagRationals: {
      std::set<std::uint64_t> diagonals;
      for (std::uint64_t a = 1; a <= steps; ++a) {
        for (std::uint64_t b = 1; b <= steps; ++b) diagonals.insert(a + b);
      }
      std::uint64_t reached = 0;
      std::uint64_t n = 0;
      for (auto it = diagonals.begin(); it != diagonals.end() && n < steps; ++it, ++n) ++reached;
      return diagonals.size() - reached;
    }
    case MappingScheme::Double: {
      std::vector<bool> hit(2 * steps + 1, false);
      for (std::uint64_t n = 1; n <= steps; ++n) hit[2 * n] = true;
      return static_cast<std::uint64_t>(std::count(hit.begin() + 1, hit.end(), false));
    }
    case MappingScheme::Square: {
      std::vector<bool> hit(steps * steps + 1, false);
      for (std::uint64_t n = 1; n <= steps; ++n) hit[n * n] = true;
      return static_cast<std::uint64_t>(std::count(hit.begin() + 1, hit.end(), false));
    }
  }
  return 0;
}

std::vector<std::uint64_t> enumerate_strata(unsigned n) {
  if (n > 30) throw Error(ErrorCode::OverflowGuard, "string enumeration is limited to length 30");
  std::vector<std::uint64_t> counts(n + 1, 0);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < total; ++s) ++counts[static_cast<unsigned>(std::popcount(s))];
  return counts;
}

DiagonalInfo diag_info_count(const LambdaExpr& list_len, const LambdaExpr& string_len) {
  return {list_len * string_len, list_len};
}

}  // namespace infcalc
